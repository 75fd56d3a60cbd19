//! Structural transformation of packings: path polylines (bottom, top,
//! middle), shift and scale-and-round repacking, and the transform that turns
//! any packing of sufficiently wide rectangles into a structured packing —
//! one sliced by low-complexity polylines into regions that are either light
//! (few rectangles) or roundable (their rounded forms pack into the region).
//!
//! All polylines and regions produced here live on the doubled grid (every
//! coordinate multiplied by two), so that middle polylines — which pass
//! through rectangle centers — have integer breakpoints.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::Rational64;
use serde::Serialize;

use crate::conflict::{build_conflict_graph, min_separator_in, short_disjoint_path_family, ConflictGraph, Vertex, Witness};
use crate::error::{Error, Result};
use crate::exact::{exact_pack, valid_in_region, ExactQuery};
use crate::geometry::{container_between, polyline_below, BBox, PlacedRect, Polyline, Rect, Region, ShiftDir};
use crate::model::{round_rect, Packing, Placement, RoundingParams};

/// The three polylines of an s–t path, on the doubled grid.
#[derive(Debug, Clone)]
pub struct PathPolylines {
    pub bottom: Polyline,
    pub top: Polyline,
    pub middle: Polyline,
    /// Internal item ids along the path, left to right.
    pub path_ids: Vec<u32>,
}

/// Builds the three polylines of a path from its rectangles (original grid)
/// and the witness segments between consecutive pairs (`witnesses[i]` joins
/// rect `i-1` to rect `i`, with the virtual strips at the ends).
pub fn path_polylines_from(
    rects: &[PlacedRect],
    ids: &[u32],
    witnesses: &[Witness],
    bbox: BBox,
) -> Result<PathPolylines> {
    let m = rects.len();
    if witnesses.len() != m + 1 {
        return Err(Error::Precondition(format!(
            "path with {m} rectangles needs {} witnesses, got {}",
            m + 1,
            witnesses.len()
        )));
    }
    let span = 2 * bbox.w;
    // Bottom/top chains walk left to right: witness level, down (or up) to
    // the rectangle's side, along it, and back to the next witness level.
    // A touching pair contributes no witness level: the chain passes
    // directly between the two sides.
    let side_chain = |top_side: bool| -> Result<Polyline> {
        let mut pts: Vec<(i64, i64)> = Vec::new();
        let sides: Vec<(i64, i64, i64)> = rects
            .iter()
            .map(|r| {
                let d = r.doubled();
                (d.x, d.x1(), if top_side { d.y1() } else { d.y })
            })
            .collect();
        // Entry level at the left edge of rect i: the witness level, except
        // for touching pairs where the chain passes directly between sides.
        pts.push((0, if touching(&witnesses[0]) && m > 0 { sides[0].2 } else { witnesses[0].y_doubled }));
        for i in 0..m {
            let (xl, xr, b) = sides[i];
            if !touching(&witnesses[i]) {
                pts.push((xl, witnesses[i].y_doubled));
            }
            pts.push((xl, b));
            pts.push((xr, b));
            if !touching(&witnesses[i + 1]) {
                pts.push((xr, witnesses[i + 1].y_doubled));
            }
        }
        let end_level = if m == 0 {
            witnesses[0].y_doubled
        } else if touching(&witnesses[m]) {
            sides[m - 1].2
        } else {
            witnesses[m].y_doubled
        };
        pts.push((span, end_level));
        Polyline::new(pts, span)
    };

    let middle = {
        let mut pts: Vec<(i64, i64)> = Vec::new();
        pts.push((0, witnesses[0].y_doubled));
        for (i, r) in rects.iter().enumerate() {
            let d = r.doubled();
            let xc = d.x + d.w() / 2;
            let yc = d.y + d.h() / 2;
            pts.push((xc, witnesses[i].y_doubled));
            pts.push((xc, yc));
            pts.push((xc, witnesses[i + 1].y_doubled));
        }
        pts.push((span, witnesses[m].y_doubled));
        Polyline::new(pts, span)?
    };

    let out = PathPolylines {
        bottom: side_chain(false)?,
        top: side_chain(true)?,
        middle,
        path_ids: ids.to_vec(),
    };
    let cap = 4 * m + 1;
    for (name, p) in [("bottom", &out.bottom), ("top", &out.top), ("middle", &out.middle)] {
        if p.complexity() > cap {
            return Err(Error::Geometry(format!(
                "{name} polyline complexity {} exceeds {cap} for a {m}-rectangle path",
                p.complexity()
            )));
        }
    }
    Ok(out)
}

fn touching(w: &Witness) -> bool {
    w.x_lo == w.x_hi
}

/// Polylines of a path taken from a conflict graph (witnesses looked up on
/// the path's edges).
pub fn path_polylines(path: &[Vertex], g: &ConflictGraph) -> Result<PathPolylines> {
    if path.len() < 2 || path[0] != Vertex::S || *path.last().unwrap() != Vertex::T {
        return Err(Error::Precondition("not an S–T path".into()));
    }
    let mut rects = Vec::new();
    let mut ids = Vec::new();
    for v in &path[1..path.len() - 1] {
        match v {
            Vertex::Item(id) => {
                ids.push(*id);
                rects.push(g.rects[v]);
            }
            _ => return Err(Error::Precondition("interior vertex is not an item".into())),
        }
    }
    let mut witnesses = Vec::new();
    for pair in path.windows(2) {
        let key = if pair[0] <= pair[1] { (pair[0], pair[1]) } else { (pair[1], pair[0]) };
        let w = g
            .edges
            .get(&key)
            .ok_or_else(|| Error::Precondition(format!("missing witness for {}–{}", pair[0], pair[1])))?;
        witnesses.push(*w);
    }
    path_polylines_from(&rects, &ids, &witnesses, g.bbox)
}

/// A maximal family of short internally disjoint S–T paths, ordered bottom
/// to top by their middle polylines; the order is verified, not assumed.
pub fn ordered_path_family(
    g: &ConflictGraph,
    max_internal: usize,
) -> Result<Vec<(Vec<Vertex>, PathPolylines)>> {
    let raw = short_disjoint_path_family(g, max_internal);
    let mut fam: Vec<(Vec<Vertex>, PathPolylines)> = raw
        .into_iter()
        .map(|p| {
            let polys = path_polylines(&p, g)?;
            Ok((p, polys))
        })
        .collect::<Result<_>>()?;
    let mid_x = g.bbox.w; // center of the doubled span
    fam.sort_by_key(|(path, polys)| {
        let y = polys.middle.y_range_at(mid_x).0;
        let tie = path[1..path.len() - 1]
            .iter()
            .map(|v| g.rects[v].y)
            .min()
            .unwrap_or(0);
        (y, tie)
    });
    for i in 0..fam.len() {
        for j in i + 1..fam.len() {
            if !polyline_below(&fam[i].1.middle, &fam[j].1.middle) {
                return Err(Error::PathOrdering(format!(
                    "middle polylines of paths {i} and {j} are not ordered"
                )));
            }
        }
    }
    Ok(fam)
}

/// Shift repacking: given a packing inside `zone`, a conflict (sub)graph over
/// it and an S–T separator, keeps the S-side in place, shifts the T-side left
/// by `ell`, drops the separator, and validates the result inside the
/// negatively shifted zone. Grid units must be consistent (callers on the
/// doubled grid pass doubled `ell`).
pub fn repack_shift(
    pk: &Packing,
    zone: &Region,
    ell: i64,
    separator: &BTreeSet<u32>,
    g: &ConflictGraph,
) -> Result<Packing> {
    // Reachability from S avoiding separator vertices.
    let mut reach: BTreeSet<Vertex> = BTreeSet::from([Vertex::S]);
    let mut queue = VecDeque::from([Vertex::S]);
    while let Some(u) = queue.pop_front() {
        for v in g.neighbors(u) {
            if let Vertex::Item(id) = v {
                if separator.contains(&id) {
                    continue;
                }
            }
            if reach.insert(v) {
                queue.push_back(v);
            }
        }
    }
    if reach.contains(&Vertex::T) {
        return Err(Error::Separator("T reachable from S avoiding the separator".into()));
    }
    let shifted_zone = zone.shift_zone(ell, ShiftDir::Negative)?;
    let mut placements = Vec::new();
    for p in &pk.placements {
        if separator.contains(&p.id) {
            continue;
        }
        let at = if reach.contains(&Vertex::Item(p.id)) {
            p.at
        } else {
            p.at.rect.at(p.at.x - ell, p.at.y)
        };
        placements.push(Placement { id: p.id, at });
    }
    let slots: Vec<PlacedRect> = placements.iter().map(|p| p.at).collect();
    if !valid_in_region(&shifted_zone, &slots) {
        return Err(Error::Precondition(
            "shifted packing invalid in the negatively shifted zone".into(),
        ));
    }
    Ok(Packing { placements })
}

/// Scale-and-round repacking: re-places every rectangle at `x = floor(λ·x)`
/// with `λ = 1 + ell/n1`, replaces widths by their rounded forms, and
/// validates inside the positively shifted zone.
pub fn repack_round(
    pk: &Packing,
    zone: &Region,
    params: &RoundingParams,
    n1: i64,
) -> Result<Packing> {
    if !params.ell.is_integer() {
        return Err(Error::Precondition("rounding shift requires an integer ell".into()));
    }
    let ell = params.ell.to_integer();
    let lambda = Rational64::from_integer(1) + params.ell / Rational64::from_integer(n1);
    let mut placements = Vec::new();
    for p in &pk.placements {
        let x_new = (lambda * Rational64::from_integer(p.at.x)).floor().to_integer();
        let rounded = round_rect(&p.at.rect, params);
        placements.push(Placement { id: p.id, at: rounded.at(x_new, p.at.y) });
    }
    let shifted_zone = zone.shift_zone(ell, ShiftDir::Positive)?;
    let slots: Vec<PlacedRect> = placements.iter().map(|p| p.at).collect();
    if !valid_in_region(&shifted_zone, &slots) {
        return Err(Error::Precondition(
            "rounded packing invalid in the positively shifted zone".into(),
        ));
    }
    Ok(Packing { placements })
}

/// A packing together with the separating polylines (doubled grid, bottom to
/// top) and the region index of every item.
#[derive(Debug, Clone)]
pub struct StructuredPacking {
    pub packing: Packing,
    pub polylines: Vec<Polyline>,
    pub region_of: BTreeMap<u32, usize>,
    pub epsilon: Rational64,
    pub ell: i64,
    pub bbox: BBox,
}

#[derive(Serialize)]
struct StructuredJson {
    epsilon: String,
    ell: i64,
    #[serde(rename = "box")]
    bbox: (i64, i64),
    packing: serde_json::Value,
    polylines_doubled: Vec<Vec<(i64, i64)>>,
    region_of: BTreeMap<u32, usize>,
}

impl StructuredPacking {
    pub fn region_count(&self) -> usize {
        self.polylines.len() + 1
    }

    /// The doubled-grid region between separating polylines `i-1` and `i`
    /// (box sides at the ends).
    pub fn region(&self, i: usize) -> Result<Region> {
        let d = self.bbox.doubled();
        let low = if i == 0 {
            Polyline::horizontal(0, d.w)
        } else {
            self.polylines[i - 1].clone()
        };
        let high = if i == self.polylines.len() {
            Polyline::horizontal(d.h, d.w)
        } else {
            self.polylines[i].clone()
        };
        container_between(&low, &high, d)
    }

    pub fn to_json(&self) -> String {
        let doc = StructuredJson {
            epsilon: format!("{}/{}", self.epsilon.numer(), self.epsilon.denom()),
            ell: self.ell,
            bbox: (self.bbox.w, self.bbox.h),
            packing: serde_json::from_str(&self.packing.to_json()).expect("packing json"),
            polylines_doubled: self.polylines.iter().map(|p| p.points().to_vec()).collect(),
            region_of: self.region_of.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("structured packing serialization")
    }
}

/// Which side of a non-crossing polyline a doubled placement lies on.
fn above_polyline(poly: &Polyline, q: &PlacedRect) -> Result<bool> {
    if poly.crosses(q) {
        return Err(Error::Geometry(format!(
            "polyline crosses rectangle at ({}, {})",
            q.x, q.y
        )));
    }
    let xm = q.x + 1;
    let (lo, hi) = poly.y_range_at(xm);
    if q.y >= hi {
        Ok(true)
    } else if q.y1() <= lo {
        Ok(false)
    } else {
        Err(Error::Geometry(format!(
            "cannot classify rectangle at ({}, {}) against polyline",
            q.x, q.y
        )))
    }
}

/// The structural transform: extracts a maximal family of short disjoint S–T
/// paths, slices the box with bottom or middle polylines (light regions keep
/// everything; heavy regions lose a small separator), and returns the
/// surviving packing with its separating polylines. Shift and round
/// repackings are performed on every heavy region as runtime evidence.
/// Guarantees `|result| ≥ (1 − 3ε)·|input|`.
pub fn structural_transform(
    pk: &Packing,
    bbox: BBox,
    epsilon: Rational64,
    ell: i64,
) -> Result<StructuredPacking> {
    if epsilon <= Rational64::from_integer(0) || epsilon > Rational64::from_integer(1) {
        return Err(Error::Precondition(format!("epsilon {epsilon} outside (0,1]")));
    }
    for p in &pk.placements {
        if p.at.w() < 2 * ell {
            return Err(Error::Precondition(format!(
                "item {} has width {} < 2ell = {}",
                p.id,
                p.at.w(),
                2 * ell
            )));
        }
    }
    let g = build_conflict_graph(pk, bbox);
    let max_internal = (Rational64::from_integer(1) / epsilon).floor().to_integer().max(1) as usize;
    let fam = ordered_path_family(&g, max_internal)?;
    let m = fam.len();
    let d = bbox.doubled();

    // Middle polylines stay clear of every off-path rectangle even after
    // widening by ell on both sides.
    for (path, polys) in &fam {
        for p in &pk.placements {
            if path.contains(&Vertex::Item(p.id)) {
                continue;
            }
            let dx = (2 * (p.at.x - ell)).max(0);
            let dx1 = (2 * (p.at.x1() + ell)).min(d.w);
            let widened = Rect::new(dx1 - dx, 2 * p.at.h()).at(dx, 2 * p.at.y);
            if polys.middle.crosses(&widened) {
                return Err(Error::Geometry(format!(
                    "middle polyline crosses the widened zone of item {}",
                    p.id
                )));
            }
        }
    }

    // Zone boundaries: top polyline of path i below, bottom polyline of path
    // i+1 above (box sides at the ends).
    let zone_low = |i: usize| -> Polyline {
        if i == 0 { Polyline::horizontal(0, d.w) } else { fam[i - 1].1.top.clone() }
    };
    let zone_high = |i: usize| -> Polyline {
        if i == m { Polyline::horizontal(d.h, d.w) } else { fam[i].1.bottom.clone() }
    };

    // Classify every off-path item into its zone by counting how many path
    // tops lie below it.
    let path_members: BTreeSet<u32> = fam
        .iter()
        .flat_map(|(_, polys)| polys.path_ids.iter().copied())
        .collect();
    let mut v_sets: Vec<Vec<u32>> = vec![Vec::new(); m + 1];
    for p in &pk.placements {
        if path_members.contains(&p.id) {
            continue;
        }
        let q = p.at.doubled();
        let mut idx = 0;
        for (j, (_, polys)) in fam.iter().enumerate() {
            if above_polyline(&polys.top, &q)? {
                idx = j + 1;
            }
        }
        if idx < m && above_polyline(&fam[idx].1.bottom, &q)? {
            return Err(Error::Geometry(format!(
                "item {} is above the next path's bottom polyline but below its top",
                p.id
            )));
        }
        v_sets[idx].push(p.id);
    }

    let inv2 = Rational64::from_integer(1) / (epsilon * epsilon);
    let light = |count: usize| Rational64::from_integer(count as i64) <= inv2;

    // Separating polylines (between zone i-1 and zone i, for each path).
    let mut polylines = Vec::with_capacity(m);
    for i in 0..m {
        let below_light = light(v_sets[i].len());
        let above_light = light(v_sets[i + 1].len());
        // Path i separates zone i (below it) from zone i+1 (above it); the
        // bottom polyline is safe only when both neighbors are light.
        let poly = if below_light && above_light {
            fam[i].1.bottom.clone()
        } else {
            fam[i].1.middle.clone()
        };
        polylines.push(poly);
    }

    let place_of: BTreeMap<u32, PlacedRect> =
        pk.placements.iter().map(|p| (p.id, p.at)).collect();
    let params = RoundingParams { ell: Rational64::from_integer(2 * ell), c: 2 * RoundingParams::new(ell, bbox.w).c };

    let mut kept: Vec<(u32, usize)> = Vec::new();
    for i in 0..=m {
        let vi = &v_sets[i];
        let prev_light = i == 0 || light(v_sets[i - 1].len());
        if light(vi.len()) {
            for &id in vi {
                kept.push((id, i));
            }
            if prev_light && i > 0 {
                for &id in &fam[i - 1].1.path_ids {
                    kept.push((id, i));
                }
            }
        } else {
            // Heavy zone: drop a minimum separator, then certify the shift
            // and round repackings inside the zone.
            let verts: BTreeSet<Vertex> = vi.iter().map(|&id| Vertex::Item(id)).collect();
            let sep = min_separator_in(&g, &verts)?;
            let sep_ids: BTreeSet<u32> = sep
                .iter()
                .filter_map(|v| match v {
                    Vertex::Item(id) => Some(*id),
                    _ => None,
                })
                .collect();
            let bound = epsilon * Rational64::from_integer(vi.len() as i64);
            if Rational64::from_integer(sep_ids.len() as i64) > bound {
                return Err(Error::Separator(format!(
                    "separator of size {} exceeds eps*|V_{i}| = {bound}",
                    sep_ids.len()
                )));
            }
            let zone = container_between(&zone_low(i), &zone_high(i), d)?;
            let zone_pk = Packing {
                placements: vi
                    .iter()
                    .map(|&id| Placement { id, at: place_of[&id].doubled() })
                    .collect(),
            };
            let mut sub = verts.clone();
            sub.insert(Vertex::S);
            sub.insert(Vertex::T);
            let gi = induced(&g, &sub);
            let shifted = repack_shift(&zone_pk, &zone, 2 * ell, &sep_ids, &gi)?;
            let zone_left = zone.shift_zone(2 * ell, ShiftDir::Negative)?;
            repack_round(&shifted, &zone_left, &params, d.w)?;
            for &id in vi {
                if !sep_ids.contains(&id) {
                    kept.push((id, i));
                }
            }
        }
    }

    let needed = (Rational64::from_integer(1) - Rational64::from_integer(3) * epsilon)
        * Rational64::from_integer(pk.len() as i64);
    if Rational64::from_integer(kept.len() as i64) < needed {
        return Err(Error::Precondition(format!(
            "structured packing kept {} items, below (1-3eps)k = {needed}",
            kept.len()
        )));
    }

    let placements = kept
        .iter()
        .map(|&(id, _)| Placement { id, at: place_of[&id] })
        .collect();
    Ok(StructuredPacking {
        packing: Packing { placements },
        polylines,
        region_of: kept.into_iter().collect(),
        epsilon,
        ell,
        bbox,
    })
}

/// Induced subgraph on a vertex set (edges and witnesses restricted).
pub fn induced(g: &ConflictGraph, verts: &BTreeSet<Vertex>) -> ConflictGraph {
    ConflictGraph {
        bbox: g.bbox,
        rects: g
            .rects
            .iter()
            .filter(|(v, _)| verts.contains(v))
            .map(|(&v, &r)| (v, r))
            .collect(),
        edges: g
            .edges
            .iter()
            .filter(|((u, v), _)| verts.contains(u) && verts.contains(v))
            .map(|(&e, &w)| (e, w))
            .collect(),
    }
}

/// Verification outcome for a structured packing.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Checks every structured-packing invariant: widths, polyline complexity,
/// ordering, non-crossing, and the light-or-roundable condition per region
/// (the roundable side decided by the exact packer, an independent route).
pub fn verify_structured(sp: &StructuredPacking) -> VerifyReport {
    let mut failures = Vec::new();
    let eps = sp.epsilon;
    for p in &sp.packing.placements {
        if p.at.w() < 2 * sp.ell {
            failures.push(format!("item {} width {} < 2ell", p.id, p.at.w()));
        }
    }
    let cap = Rational64::from_integer(4) / eps + Rational64::from_integer(1);
    for (i, poly) in sp.polylines.iter().enumerate() {
        if Rational64::from_integer(poly.complexity() as i64) > cap {
            failures.push(format!(
                "polyline {i} complexity {} exceeds 4/eps+1 = {cap}",
                poly.complexity()
            ));
        }
    }
    for i in 0..sp.polylines.len() {
        for j in i + 1..sp.polylines.len() {
            if !polyline_below(&sp.polylines[i], &sp.polylines[j]) {
                failures.push(format!("polylines {i} and {j} are not ordered"));
            }
        }
    }
    for p in &sp.packing.placements {
        let q = p.at.doubled();
        for (i, poly) in sp.polylines.iter().enumerate() {
            if poly.crosses(&q) {
                failures.push(format!("polyline {i} crosses item {}", p.id));
            }
        }
    }
    let light_cap = Rational64::from_integer(2) / (eps * eps);
    let params = RoundingParams::new(sp.ell, sp.bbox.w);
    for i in 0..sp.region_count() {
        let region = match sp.region(i) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("region {i}: {e}"));
                continue;
            }
        };
        let members: Vec<&Placement> = sp
            .packing
            .placements
            .iter()
            .filter(|p| region.contains_rect(&p.at.doubled()))
            .collect();
        if Rational64::from_integer(members.len() as i64) <= light_cap {
            continue;
        }
        let rounded: Vec<Rect> = members
            .iter()
            .map(|p| round_rect(&p.at.rect, &params).doubled())
            .collect();
        let q = ExactQuery::new(rounded, region);
        if !exact_pack(&q).0.is_packed() {
            failures.push(format!(
                "region {i}: {} items exceed the light bound and their rounded forms do not pack",
                members.len()
            ));
        }
    }
    // Every item must fall in some region entirely.
    for p in &sp.packing.placements {
        let q = p.at.doubled();
        let mut covered = false;
        for i in 0..sp.region_count() {
            if let Ok(region) = sp.region(i) {
                if region.contains_rect(&q) {
                    covered = true;
                    break;
                }
            }
        }
        if !covered {
            failures.push(format!("item {} is not contained in any region", p.id));
        }
    }
    VerifyReport { pass: failures.is_empty(), failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_rect_path_polylines() {
        // R = [2,6]x[2,4] in an 8x6 box, witnesses at y=3 on both sides.
        let r = Rect::new(4, 2).at(2, 2);
        let witnesses = [
            Witness { x_lo: 0, x_hi: 2, y_doubled: 6 },
            Witness { x_lo: 6, x_hi: 8, y_doubled: 6 },
        ];
        let pp = path_polylines_from(&[r], &[7], &witnesses, BBox::new(8, 6)).unwrap();
        assert_eq!(
            pp.bottom.points(),
            &[(0, 6), (4, 6), (4, 4), (12, 4), (12, 6), (16, 6)]
        );
        assert_eq!(
            pp.top.points(),
            &[(0, 6), (4, 6), (4, 8), (12, 8), (12, 6), (16, 6)]
        );
        // Middle passes through the doubled center (8, 6) on a flat line.
        assert_eq!(pp.middle.points(), &[(0, 6), (16, 6)]);
        assert_eq!(pp.middle.y_range_at(8), (6, 6));
    }

    #[test]
    fn five_rect_figure_polylines() {
        // The five-rectangle path in a 60x20 box; all expected chains are
        // doubled coordinates.
        let rects = [
            Rect::new(6, 8).at(5, 6),
            Rect::new(10, 12).at(20, 6),
            Rect::new(8, 10).at(30, 2),
            Rect::new(8, 7).at(38, 9),
            Rect::new(8, 8).at(46, 6),
        ];
        let ids = [1, 2, 3, 4, 5];
        let witnesses = [
            Witness { x_lo: 0, x_hi: 5, y_doubled: 20 },
            Witness { x_lo: 11, x_hi: 20, y_doubled: 20 },
            Witness { x_lo: 30, x_hi: 30, y_doubled: 14 },
            Witness { x_lo: 38, x_hi: 38, y_doubled: 20 },
            Witness { x_lo: 46, x_hi: 46, y_doubled: 22 },
            Witness { x_lo: 54, x_hi: 60, y_doubled: 20 },
        ];
        let pp = path_polylines_from(&rects, &ids, &witnesses, BBox::new(60, 20)).unwrap();
        assert_eq!(
            pp.bottom.points(),
            &[
                (0, 20), (10, 20), (10, 12), (22, 12), (22, 20), (40, 20), (40, 12),
                (60, 12), (60, 4), (76, 4), (76, 18), (92, 18), (92, 12), (108, 12),
                (108, 20), (120, 20)
            ]
        );
        assert_eq!(
            pp.top.points(),
            &[
                (0, 20), (10, 20), (10, 28), (22, 28), (22, 20), (40, 20), (40, 36),
                (60, 36), (60, 24), (76, 24), (76, 32), (92, 32), (92, 28), (108, 28),
                (108, 20), (120, 20)
            ]
        );
        assert_eq!(
            pp.middle.points(),
            &[
                (0, 20), (50, 20), (50, 24), (50, 14), (68, 14), (68, 20), (84, 20),
                (84, 25), (84, 22), (100, 22), (100, 20), (120, 20)
            ]
        );
        for p in [&pp.bottom, &pp.top, &pp.middle] {
            assert!(p.complexity() <= 4 * 5 + 1);
        }
    }

    fn pk(rects: &[(u32, i64, i64, i64, i64)]) -> Packing {
        Packing {
            placements: rects
                .iter()
                .map(|&(id, w, h, x, y)| Placement { id, at: Rect::new(w, h).at(x, y) })
                .collect(),
        }
    }

    #[test]
    fn repack_shift_trivial_cases() {
        let bbox = BBox::new(8, 4);
        let packing = pk(&[(0, 4, 2, 2, 0)]);
        let g = build_conflict_graph(&packing, bbox);
        let zone = Region::full(bbox);
        // The only rect is its own separator.
        let out = repack_shift(&packing, &zone, 2, &BTreeSet::from([0]), &g).unwrap();
        assert!(out.is_empty());
        // Without a separator, T stays reachable.
        assert!(repack_shift(&packing, &zone, 2, &BTreeSet::new(), &g).is_err());
    }

    #[test]
    fn repack_shift_two_corridors() {
        let bbox = BBox::new(8, 4);
        let packing = pk(&[(0, 4, 2, 0, 0), (1, 4, 2, 4, 0), (2, 4, 2, 0, 2), (3, 4, 2, 4, 2)]);
        let g = build_conflict_graph(&packing, bbox);
        let zone = Region::full(bbox);
        let out = repack_shift(&packing, &zone, 2, &BTreeSet::from([0, 2]), &g).unwrap();
        assert_eq!(out.len(), 2);
        let shifted_zone = zone.shift_zone(2, ShiftDir::Negative).unwrap();
        let slots: Vec<PlacedRect> = out.placements.iter().map(|p| p.at).collect();
        assert!(valid_in_region(&shifted_zone, &slots));
    }

    #[test]
    fn repack_round_examples() {
        let zone = Region::full(BBox::new(16, 4));
        assert!(repack_round(&Packing::default(), &zone, &RoundingParams::new(4, 16), 16)
            .unwrap()
            .is_empty());

        // One rect at x=4, w=8 in a zone occupying [0, 12] of a 16-wide box:
        // lambda = 5/4, so it lands at x = 5 with its width unchanged.
        let zone = Region::new(
            (0..12).flat_map(|x| (0..4).map(move |y| (x, y))).collect(),
            BBox::new(16, 4),
        );
        let packing = pk(&[(0, 8, 2, 4, 0)]);
        let out = repack_round(&packing, &zone, &RoundingParams::new(4, 16), 16).unwrap();
        assert_eq!(out.placements[0].at.x, 5);
        assert_eq!(out.placements[0].at.w(), 8);

        // Two abutting rects, N1=24, ell=4: x = 0 and 8 -> 0 and 9.
        let zone = Region::new(
            (0..20).flat_map(|x| (0..4).map(move |y| (x, y))).collect(),
            BBox::new(24, 4),
        );
        let packing = pk(&[(0, 8, 2, 0, 0), (1, 8, 2, 8, 0)]);
        let out = repack_round(&packing, &zone, &RoundingParams::new(4, 24), 24).unwrap();
        assert_eq!(out.placements[0].at.x, 0);
        assert_eq!(out.placements[1].at.x, 9);
    }

    #[test]
    fn transform_small_light() {
        let bbox = BBox::new(8, 4);
        let packing = pk(&[(0, 4, 2, 0, 0), (1, 4, 2, 4, 2)]);
        let sp = structural_transform(&packing, bbox, Rational64::from_integer(1), 1).unwrap();
        assert_eq!(sp.packing.len(), 2);
        let report = verify_structured(&sp);
        assert!(report.pass, "failures: {:?}", report.failures);
    }

    #[test]
    fn transform_empty() {
        let sp = structural_transform(
            &Packing::default(),
            BBox::new(4, 4),
            Rational64::new(1, 2),
            1,
        )
        .unwrap();
        assert!(sp.packing.is_empty());
        assert!(verify_structured(&sp).pass);
    }

    #[test]
    fn verify_passes_heavy_packable() {
        // Four full-width rows with eps=1: over the light bound of 2, but
        // the rounded forms (granularity 1, unchanged) pack back exactly.
        let bbox = BBox::new(4, 4);
        let placements = (0..4)
            .map(|i| Placement { id: i, at: Rect::new(4, 1).at(0, i as i64) })
            .collect();
        let sp = StructuredPacking {
            packing: Packing { placements },
            polylines: vec![],
            region_of: BTreeMap::new(),
            epsilon: Rational64::from_integer(1),
            ell: 1,
            bbox,
        };
        let report = verify_structured(&sp);
        assert!(report.pass, "failures: {:?}", report.failures);
    }

    #[test]
    fn verify_rejects_heavy_unpackable() {
        // Box 18x4, ell=6 (granularity 2): three 13x1 items round to 14x1.
        // The separating polyline steps down past the items' right edge, so
        // their region has only two rows of full width; three rounded items
        // need three.
        let bbox = BBox::new(18, 4);
        let placements = (0..3)
            .map(|i| Placement { id: i, at: Rect::new(13, 1).at(0, i as i64) })
            .collect();
        let step = Polyline::new(vec![(0, 6), (26, 6), (26, 4), (36, 4)], 36).unwrap();
        let sp = StructuredPacking {
            packing: Packing { placements },
            polylines: vec![step],
            region_of: BTreeMap::new(),
            epsilon: Rational64::from_integer(1),
            ell: 6,
            bbox,
        };
        let report = verify_structured(&sp);
        assert!(!report.pass);
        assert!(report.failures.iter().any(|f| f.contains("region 0")), "{:?}", report.failures);
    }

    #[test]
    fn transform_drops_at_most_3eps() {
        let bbox = BBox::new(12, 8);
        let mut placements = Vec::new();
        let mut id = 0;
        for row in 0..4 {
            for col in 0..3 {
                placements.push(Placement {
                    id,
                    at: Rect::new(4, 2).at(4 * col, 2 * row),
                });
                id += 1;
            }
        }
        let packing = Packing { placements };
        let eps = Rational64::new(1, 2);
        let sp = structural_transform(&packing, bbox, eps, 1).unwrap();
        let needed = (Rational64::from_integer(1) - Rational64::from_integer(3) * eps)
            * Rational64::from_integer(packing.len() as i64);
        assert!(Rational64::from_integer(sp.packing.len() as i64) >= needed);
        let report = verify_structured(&sp);
        assert!(report.pass, "failures: {:?}", report.failures);
    }

    #[test]
    fn structured_json_dump() {
        let bbox = BBox::new(8, 4);
        let packing = pk(&[(0, 4, 2, 0, 0)]);
        let sp = structural_transform(&packing, bbox, Rational64::from_integer(1), 1).unwrap();
        let text = sp.to_json();
        assert!(text.contains("\"epsilon\""));
        assert!(text.contains("\"polylines_doubled\""));
    }
}
