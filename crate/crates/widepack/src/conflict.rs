//! Horizontal-visibility conflict graphs over packings, greedy families of
//! short internally disjoint s–t paths, and minimum vertex s–t separators.
//!
//! Two placed rectangles see each other when some horizontal segment joins
//! the interior of the right side of the left one to the interior of the left
//! side of the right one without meeting any other rectangle. The virtual
//! rectangles S and T occupy one-unit-wide strips immediately left and right
//! of the box.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{BBox, PlacedRect, Rect};
use crate::model::Packing;

/// A conflict-graph vertex: the left strip, a packed item, or the right strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    S,
    Item(u32),
    T,
}

impl std::fmt::Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Vertex::S => write!(f, "S"),
            Vertex::T => write!(f, "T"),
            Vertex::Item(id) => write!(f, "r{id}"),
        }
    }
}

/// A visibility witness: the horizontal segment `[x_lo, x_hi]` at height
/// `y_doubled / 2` (doubled to keep half-integer levels integral). A touching
/// pair has `x_lo == x_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub x_lo: i64,
    pub x_hi: i64,
    pub y_doubled: i64,
}

/// The conflict graph of a packing inside a box.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    pub bbox: BBox,
    /// Placed rectangle per vertex, including the virtual strips.
    pub rects: BTreeMap<Vertex, PlacedRect>,
    /// Normalized (u < v) edges with one stored witness each.
    pub edges: BTreeMap<(Vertex, Vertex), Witness>,
}

fn norm(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u <= v { (u, v) } else { (v, u) }
}

impl ConflictGraph {
    pub fn vertices(&self) -> Vec<Vertex> {
        self.rects.keys().copied().collect()
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.contains_key(&norm(u, v))
    }

    pub fn neighbors(&self, u: Vertex) -> Vec<Vertex> {
        self.rects
            .keys()
            .copied()
            .filter(|&v| v != u && self.adjacent(u, v))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// DOT-compatible dump with witness levels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph conflict {\n");
        for v in self.rects.keys() {
            let _ = writeln!(out, "  \"{v}\";");
        }
        for ((u, v), w) in &self.edges {
            let _ = writeln!(
                out,
                "  \"{u}\" -- \"{v}\" [label=\"y={}\"];",
                format_half(w.y_doubled)
            );
        }
        out.push_str("}\n");
        out
    }
}

fn format_half(doubled: i64) -> String {
    if doubled % 2 == 0 {
        format!("{}", doubled / 2)
    } else {
        format!("{doubled}/2")
    }
}

/// Visibility test. Returns a witness segment iff `a` and `b` see each other
/// past every rectangle in `others`. Corner-only contact yields none; an
/// edge-touching pair yields a single-point witness.
pub fn sees(a: &PlacedRect, b: &PlacedRect, others: &[PlacedRect]) -> Option<Witness> {
    let (l, r) = if a.x1() <= b.x {
        (a, b)
    } else if b.x1() <= a.x {
        (b, a)
    } else {
        return None;
    };
    let lo = l.y.max(r.y);
    let hi = l.y1().min(r.y1());
    let (x_lo, x_hi) = (l.x1(), r.x);
    // Half-integer levels strictly inside the common open y-interval; every
    // blocker has integer bounds, so these candidates are exhaustive.
    let mut dy = 2 * lo + 1;
    while dy < 2 * hi {
        let blocked = others.iter().any(|o| {
            o.x <= x_hi && o.x1() >= x_lo && 2 * o.y < dy && dy < 2 * o.y1()
        });
        if !blocked {
            return Some(Witness { x_lo, x_hi, y_doubled: dy });
        }
        dy += 2;
    }
    None
}

/// The virtual left/right strip rectangles for a box.
pub fn virtual_strips(bbox: BBox) -> (PlacedRect, PlacedRect) {
    let strip = Rect::new(1, bbox.h);
    (strip.at(-1, 0), strip.at(bbox.w, 0))
}

/// Builds the conflict graph of a valid packing: vertices are the items plus
/// S and T, edges are the visibility pairs (S–T never adjacent by
/// definition).
pub fn build_conflict_graph(pk: &Packing, bbox: BBox) -> ConflictGraph {
    let (s_rect, t_rect) = virtual_strips(bbox);
    let mut rects: BTreeMap<Vertex, PlacedRect> = BTreeMap::new();
    rects.insert(Vertex::S, s_rect);
    rects.insert(Vertex::T, t_rect);
    for p in &pk.placements {
        rects.insert(Vertex::Item(p.id), p.at);
    }
    let verts: Vec<Vertex> = rects.keys().copied().collect();
    let mut edges = BTreeMap::new();
    for (i, &u) in verts.iter().enumerate() {
        for &v in &verts[i + 1..] {
            if (u, v) == (Vertex::S, Vertex::T) {
                continue;
            }
            let others: Vec<PlacedRect> = verts
                .iter()
                .filter(|&&w| w != u && w != v)
                .map(|w| rects[w])
                .collect();
            if let Some(w) = sees(&rects[&u], &rects[&v], &others) {
                edges.insert(norm(u, v), w);
            }
        }
    }
    ConflictGraph { bbox, rects, edges }
}

/// Shortest S–T path (fewest edges) through `allowed` internal vertices;
/// deterministic by vertex order.
fn shortest_st_path(g: &ConflictGraph, allowed: &BTreeSet<Vertex>) -> Option<Vec<Vertex>> {
    let mut prev: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut queue = VecDeque::from([Vertex::S]);
    let mut seen = BTreeSet::from([Vertex::S]);
    while let Some(u) = queue.pop_front() {
        for v in g.neighbors(u) {
            if seen.contains(&v) {
                continue;
            }
            if v != Vertex::T && !allowed.contains(&v) {
                continue;
            }
            prev.insert(v, u);
            if v == Vertex::T {
                let mut path = vec![Vertex::T];
                let mut cur = Vertex::T;
                while cur != Vertex::S {
                    cur = prev[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            seen.insert(v);
            queue.push_back(v);
        }
    }
    None
}

/// Greedily extracts an inclusion-maximal family of internally disjoint S–T
/// paths, shortest first, each with at most `max_internal` internal vertices.
/// Paths are returned in extraction order (not yet bottom-to-top).
pub fn short_disjoint_path_family(g: &ConflictGraph, max_internal: usize) -> Vec<Vec<Vertex>> {
    assert!(max_internal >= 1, "max_internal must be at least 1");
    let mut allowed: BTreeSet<Vertex> = g
        .vertices()
        .into_iter()
        .filter(|v| matches!(v, Vertex::Item(_)))
        .collect();
    let mut family = Vec::new();
    while let Some(path) = shortest_st_path(g, &allowed) {
        let internal = path.len() - 2;
        if internal > max_internal {
            break;
        }
        for v in &path[1..path.len() - 1] {
            allowed.remove(v);
        }
        family.push(path);
    }
    family
}

// ---------------------------------------------------------------------------
// Minimum vertex separators (indexed graphs)
// ---------------------------------------------------------------------------

const INF: i64 = i64::MAX / 4;

/// Minimum-cardinality set of vertices (excluding `s`, `t`) meeting every
/// s–t path in the undirected simple graph on `0..n`. Errors if `s` and `t`
/// are adjacent.
pub fn min_vertex_separator(
    n: usize,
    edges: &[(usize, usize)],
    s: usize,
    t: usize,
) -> Result<Vec<usize>> {
    if edges.iter().any(|&(u, v)| (u, v) == (s, t) || (v, u) == (s, t)) {
        return Err(Error::Separator(format!("{s} and {t} are adjacent")));
    }
    // Vertex splitting: node v becomes v_in = 2v, v_out = 2v+1; internal
    // vertices get a unit in->out arc, s and t an infinite one.
    let m = 2 * n;
    let mut cap = vec![vec![0i64; m]; m];
    for v in 0..n {
        cap[2 * v][2 * v + 1] = if v == s || v == t { INF } else { 1 };
    }
    for &(u, v) in edges {
        cap[2 * u + 1][2 * v] = INF;
        cap[2 * v + 1][2 * u] = INF;
    }
    let (src, dst) = (2 * s + 1, 2 * t);
    loop {
        // BFS augmenting path on the residual network.
        let mut prev = vec![usize::MAX; m];
        prev[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for v in 0..m {
                if prev[v] == usize::MAX && cap[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[dst] == usize::MAX {
            break;
        }
        let mut bottleneck = INF;
        let mut v = dst;
        while v != src {
            bottleneck = bottleneck.min(cap[prev[v]][v]);
            v = prev[v];
        }
        let mut v = dst;
        while v != src {
            cap[prev[v]][v] -= bottleneck;
            cap[v][prev[v]] += bottleneck;
            v = prev[v];
        }
    }
    // Min cut: vertices whose unit arc crosses the residual reachability
    // frontier.
    let mut reach = vec![false; m];
    reach[src] = true;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for v in 0..m {
            if !reach[v] && cap[u][v] > 0 {
                reach[v] = true;
                queue.push_back(v);
            }
        }
    }
    let cut = (0..n)
        .filter(|&v| v != s && v != t && reach[2 * v] && !reach[2 * v + 1])
        .collect();
    Ok(cut)
}

/// Separator search specialized to a conflict (sub)graph over the given
/// vertex set; returns item vertices.
pub fn min_separator_in(
    g: &ConflictGraph,
    verts: &BTreeSet<Vertex>,
) -> Result<Vec<Vertex>> {
    let mut order: Vec<Vertex> = verts.iter().copied().collect();
    if !order.contains(&Vertex::S) {
        order.push(Vertex::S);
    }
    if !order.contains(&Vertex::T) {
        order.push(Vertex::T);
    }
    order.sort();
    let index: BTreeMap<Vertex, usize> =
        order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    for (i, &u) in order.iter().enumerate() {
        for &v in &order[i + 1..] {
            if g.adjacent(u, v) {
                edges.push((index[&u], index[&v]));
            }
        }
    }
    let cut = min_vertex_separator(order.len(), &edges, index[&Vertex::S], index[&Vertex::T])?;
    Ok(cut.into_iter().map(|i| order[i]).collect())
}

// ---------------------------------------------------------------------------
// Planarity smoke test (small graphs)
// ---------------------------------------------------------------------------

/// Planarity check for graphs with few vertices: searches for a subdivision
/// of K5 or K3,3 (pairwise internally disjoint paths between branch
/// vertices). Intended for smoke tests only.
pub fn is_planar_small(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![vec![false; n]; n];
    let mut e = 0;
    for &(u, v) in edges {
        if !adj[u][v] && u != v {
            adj[u][v] = true;
            adj[v][u] = true;
            e += 1;
        }
    }
    if n >= 3 && e > 3 * n - 6 {
        return false;
    }
    let verts: Vec<usize> = (0..n).collect();
    // K5 subdivisions.
    for branch in subsets(&verts, 5) {
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
            .map(|(i, j)| (branch[i], branch[j]))
            .collect();
        if connect_disjoint(&adj, &branch, &pairs) {
            return false;
        }
    }
    // K3,3 subdivisions.
    for six in subsets(&verts, 6) {
        for side in subsets(&[0, 1, 2, 3, 4, 5], 3) {
            if !side.contains(&0) {
                continue;
            }
            let left: Vec<usize> = side.iter().map(|&i| six[i]).collect();
            let right: Vec<usize> = (0..6)
                .filter(|i| !side.contains(i))
                .map(|i| six[i])
                .collect();
            let pairs: Vec<(usize, usize)> = left
                .iter()
                .flat_map(|&a| right.iter().map(move |&b| (a, b)))
                .collect();
            if connect_disjoint(&adj, &six, &pairs) {
                return false;
            }
        }
    }
    true
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], start: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, i + 1, k, cur, out);
            cur.pop();
        }
    }
    rec(items, 0, k, &mut cur, &mut out);
    out
}

/// Tries to realize every endpoint pair as a path whose internal vertices
/// avoid the branch set and each other.
fn connect_disjoint(adj: &[Vec<bool>], branch: &[usize], pairs: &[(usize, usize)]) -> bool {
    let n = adj.len();
    let mut used = vec![false; n];
    for &b in branch {
        used[b] = true;
    }
    fn paths_from(
        adj: &[Vec<bool>],
        used: &mut Vec<bool>,
        pairs: &[(usize, usize)],
        idx: usize,
        cur: usize,
        goal: usize,
        first: bool,
    ) -> bool {
        if cur == goal && !first {
            return solve(adj, used, pairs, idx + 1);
        }
        for next in 0..adj.len() {
            if !adj[cur][next] {
                continue;
            }
            if next == goal {
                if solve(adj, used, pairs, idx + 1) {
                    return true;
                }
                continue;
            }
            if used[next] {
                continue;
            }
            used[next] = true;
            if paths_from(adj, used, pairs, idx, next, goal, false) {
                used[next] = false;
                return true;
            }
            used[next] = false;
        }
        false
    }
    fn solve(adj: &[Vec<bool>], used: &mut Vec<bool>, pairs: &[(usize, usize)], idx: usize) -> bool {
        if idx == pairs.len() {
            return true;
        }
        let (a, b) = pairs[idx];
        paths_from(adj, used, pairs, idx, a, b, true)
    }
    solve(adj, &mut used, pairs, 0)
}
