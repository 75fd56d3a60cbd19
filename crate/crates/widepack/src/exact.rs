//! Exact feasibility (with placement witness) for packing a multiset of
//! rectangles into an arbitrary grid region. Branches over distinct shapes and
//! flush placements — positions where the rectangle fits in the region and can
//! shift neither one unit left nor one unit down — and recurses on the carved
//! region. Infeasible (region, multiset) states are memoized.

use std::collections::HashMap;

use crate::error::Result;
use crate::geometry::{PlacedRect, Rect, Region};
use crate::model::{Item, Packing, Placement};

/// Default node budget for a single query.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// A feasibility query: pack all of `rects` into `region`.
#[derive(Debug, Clone)]
pub struct ExactQuery {
    pub rects: Vec<Rect>,
    pub region: Region,
    pub node_budget: u64,
}

impl ExactQuery {
    pub fn new(rects: Vec<Rect>, region: Region) -> Self {
        ExactQuery { rects, region, node_budget: DEFAULT_NODE_BUDGET }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.node_budget = budget;
        self
    }
}

/// Three-valued query outcome; budget exhaustion is distinct from
/// infeasibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PackOutcome {
    /// All rects fit; placements index into the query's rect list.
    Packed(Vec<PlacedRect>),
    Infeasible,
    BudgetExceeded,
}

impl PackOutcome {
    pub fn is_packed(&self) -> bool {
        matches!(self, PackOutcome::Packed(_))
    }
}

/// Search statistics.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactStats {
    pub nodes: u64,
}

struct Search {
    budget: u64,
    nodes: u64,
    /// Infeasible (region cells, sorted shape multiset) states.
    dead: HashMap<(Vec<(i64, i64)>, Vec<Rect>), ()>,
    exceeded: bool,
}

impl Search {
    /// All flush placements of `r` in `region`: the rectangle's cells lie in
    /// the region, and shifting one unit left or down leaves it.
    fn flush_placements(region: &Region, r: &Rect) -> Vec<PlacedRect> {
        let bbox = region.bbox();
        let mut out = Vec::new();
        for x in 0..=(bbox.w - r.w).max(-1) {
            for y in 0..=(bbox.h - r.h).max(-1) {
                let p = r.at(x, y);
                if !region.contains_rect(&p) {
                    continue;
                }
                let left_blocked = x == 0 || !region.contains_rect(&r.at(x - 1, y));
                let down_blocked = y == 0 || !region.contains_rect(&r.at(x, y - 1));
                if left_blocked && down_blocked {
                    out.push(p);
                }
            }
        }
        out
    }

    fn run(&mut self, region: &Region, remaining: &mut Vec<Rect>, placed: &mut Vec<(Rect, PlacedRect)>) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exceeded = true;
            return None;
        }
        if remaining.is_empty() {
            return Some(true);
        }
        let mut key_shapes = remaining.clone();
        key_shapes.sort();
        let key = (region.cells().iter().copied().collect::<Vec<_>>(), key_shapes);
        if self.dead.contains_key(&key) {
            return Some(false);
        }
        if remaining.iter().map(|r| r.area()).sum::<i64>() > region.area() as i64 {
            self.dead.insert(key, ());
            return Some(false);
        }
        let mut shapes: Vec<Rect> = remaining.clone();
        shapes.sort();
        shapes.dedup();
        for shape in shapes {
            let idx = remaining.iter().position(|r| *r == shape).expect("shape present");
            let rect = remaining.swap_remove(idx);
            for p in Self::flush_placements(region, &rect) {
                let carved = region.carve(&p).expect("flush placement fits");
                placed.push((rect, p));
                match self.run(&carved, remaining, placed) {
                    Some(true) => return Some(true),
                    Some(false) => {
                        placed.pop();
                    }
                    None => {
                        placed.pop();
                        remaining.push(rect);
                        return None;
                    }
                }
            }
            remaining.push(rect);
        }
        self.dead.insert(key, ());
        Some(false)
    }
}

/// Decides whether the query's rects pack into its region, returning a
/// placement witness (one placement per input rect, in input order) when they
/// do.
pub fn exact_pack(q: &ExactQuery) -> (PackOutcome, ExactStats) {
    let mut search = Search {
        budget: q.node_budget,
        nodes: 0,
        dead: HashMap::new(),
        exceeded: false,
    };
    let mut remaining = q.rects.clone();
    let mut placed = Vec::new();
    let verdict = search.run(&q.region, &mut remaining, &mut placed);
    let stats = ExactStats { nodes: search.nodes };
    match verdict {
        Some(true) => {
            // Match witness placements back to the input order.
            let mut pool = placed;
            let mut out = Vec::with_capacity(q.rects.len());
            for r in &q.rects {
                let i = pool
                    .iter()
                    .position(|(shape, _)| shape == r)
                    .expect("witness covers every rect");
                out.push(pool.swap_remove(i).1);
            }
            (PackOutcome::Packed(out), stats)
        }
        Some(false) => (PackOutcome::Infeasible, stats),
        None => (PackOutcome::BudgetExceeded, stats),
    }
}

/// Convenience wrapper for colored items: packs the items' rectangles and
/// returns a `Packing` carrying their ids.
pub fn exact_pack_items(items: &[Item], region: &Region, budget: u64) -> (Option<Packing>, bool) {
    let q = ExactQuery::new(items.iter().map(|it| it.rect).collect(), region.clone())
        .with_budget(budget);
    let (outcome, _) = exact_pack(&q);
    match outcome {
        PackOutcome::Packed(slots) => {
            let placements = items
                .iter()
                .zip(slots)
                .map(|(it, at)| Placement { id: it.id, at })
                .collect();
            (Some(Packing { placements }), false)
        }
        PackOutcome::Infeasible => (None, false),
        PackOutcome::BudgetExceeded => (None, true),
    }
}

/// Region-relative validity: placements cover only region cells and are
/// pairwise disjoint.
pub fn valid_in_region(region: &Region, placements: &[PlacedRect]) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    for p in placements {
        for cell in p.cells() {
            if !region.contains_cell(cell.0, cell.1) || !seen.insert(cell) {
                return false;
            }
        }
    }
    true
}

/// Pushes every placement left/down to a fixed point (others held fixed).
/// Used to check that feasible packings admit an all-flush form.
pub fn push_fixpoint(region: &Region, placements: &[PlacedRect]) -> Vec<PlacedRect> {
    let mut ps = placements.to_vec();
    loop {
        let mut moved = false;
        for i in 0..ps.len() {
            loop {
                let mut candidate = ps[i];
                candidate.y -= 1;
                let mut others: Vec<PlacedRect> = ps.clone();
                others[i] = candidate;
                if candidate.y >= 0 && valid_in_region(region, &others) {
                    ps[i] = candidate;
                    moved = true;
                    continue;
                }
                let mut candidate = ps[i];
                candidate.x -= 1;
                let mut others: Vec<PlacedRect> = ps.clone();
                others[i] = candidate;
                if candidate.x >= 0 && valid_in_region(region, &others) {
                    ps[i] = candidate;
                    moved = true;
                    continue;
                }
                break;
            }
        }
        if !moved {
            return ps;
        }
    }
}

/// True when every placement is flush in the region left over by the others.
pub fn all_flush(region: &Region, placements: &[PlacedRect]) -> Result<bool> {
    for (i, p) in placements.iter().enumerate() {
        let mut rest = region.clone();
        for (j, q) in placements.iter().enumerate() {
            if j != i {
                rest = rest.carve(q)?;
            }
        }
        let left_ok = p.x == 0 || !rest.contains_rect(&p.rect.at(p.x - 1, p.y));
        let down_ok = p.y == 0 || !rest.contains_rect(&p.rect.at(p.x, p.y - 1));
        if !(left_ok && down_ok) {
            return Ok(false);
        }
    }
    Ok(true)
}
