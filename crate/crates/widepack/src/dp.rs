//! Dynamic program over (polyline, color set) states for wide instances:
//! every item has width at least `N1/alpha`. States live on the doubled grid;
//! transitions fill the region between two polylines with either a small set
//! of original items (S1) or up to `k` width-reduced rounded items (S2),
//! decided by the exact packer.
//!
//! The polyline space is enumerated under a budget. Results stay honest under
//! truncation: a returned packing is always valid, and the "no packing of
//! size k" verdict is only produced when it is definitive — either the
//! enumeration was complete, or the S1 cap `2/eps^2` is at least `k`, in
//! which case the whole-box state already performs an exhaustive search.

use std::collections::HashMap;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::exact::{exact_pack, ExactQuery, PackOutcome};
use crate::geometry::{container_between, overlaps, polyline_below, BBox, PlacedRect, Polyline, Rect, Region};
use crate::model::{reduce_k, round_rect, validate_packing, Instance, Packing, Placement, RoundingParams};

/// Solver parameters for one DP run.
#[derive(Debug, Clone)]
pub struct DpConfig {
    /// Internal accuracy; the guarantee threshold is `(1 - 3*epsilon) * k`.
    pub epsilon: Rational64,
    /// Width parameter: every item must have width at least `N1/alpha`.
    pub alpha: Rational64,
    pub k: usize,
    /// Cap on enumerated polylines (the box's bottom and top sides are
    /// always included).
    pub polyline_budget: usize,
    /// Cap on evaluated (predecessor, polyline, color subset) transitions
    /// beyond the always-evaluated bottom-side transitions.
    pub pair_budget: usize,
    /// Node budget per exact-packing feasibility query.
    pub exact_node_budget: u64,
    /// Cap on candidate subsets examined per region.
    pub subset_budget: usize,
}

impl DpConfig {
    pub fn new(epsilon: Rational64, alpha: Rational64, k: usize) -> Self {
        DpConfig {
            epsilon,
            alpha,
            k,
            polyline_budget: 64,
            pair_budget: 20_000,
            exact_node_budget: 1_000_000,
            subset_budget: 100_000,
        }
    }
}

/// DP verdict. `Inconclusive` is a budget outcome, never a claim about the
/// instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DpOutcome {
    /// A valid packing of size at least `(1 - 3*epsilon) * k`.
    Packing(Packing),
    /// Definitive: no `k` items with distinct colors pack into the box.
    NoPacking,
    Inconclusive(String),
}

/// Run counters and budget flags.
#[derive(Debug, Clone, Default)]
pub struct DpStats {
    pub polyline_count: usize,
    pub polylines_truncated: bool,
    pub pair_budget_hit: bool,
    pub exact_budget_hit: bool,
    pub subset_budget_hit: bool,
    pub states: usize,
    pub subsets_tried: usize,
    /// Whether a negative answer would be a definitive verdict.
    pub definitive: bool,
}

/// Feasibility results shared across DP runs on the same instance (they are
/// coloring-independent: keyed by region cells and rectangle multiset only).
#[derive(Default)]
pub struct DpShared {
    feas: HashMap<Vec<(i64, i64)>, HashMap<Vec<Rect>, Option<Vec<PlacedRect>>>>,
}

impl DpShared {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Enumeration result; `truncated` means the budget cut the stream short.
#[derive(Debug, Clone)]
pub struct PolylineSet {
    pub polylines: Vec<Polyline>,
    pub truncated: bool,
}

/// Enumerates canonical x-monotone polylines across the box (integer
/// breakpoints, at most `max_complexity` segments), in deterministic order:
/// the bottom side, the top side, then the rest by increasing complexity.
/// Stops after `budget` polylines.
pub fn enumerate_polylines_capped(bbox: BBox, max_complexity: usize, budget: usize) -> PolylineSet {
    assert!(max_complexity >= 1);
    let (w, h) = (bbox.w, bbox.h);
    let mut out = vec![Polyline::horizontal(0, w), Polyline::horizontal(h, w)];
    let budget = budget.max(2);
    let mut truncated = false;

    // Remaining single-segment polylines.
    for y in 1..h {
        if out.len() >= budget {
            truncated = true;
            break;
        }
        out.push(Polyline::horizontal(y, w));
    }

    // Multi-segment polylines by exact complexity, depth first. Moves:
    // horizontal runs (any positive length) and vertical runs (consecutive
    // verticals must alternate direction).
    #[allow(clippy::too_many_arguments)]
    fn rec(
        w: i64,
        h: i64,
        target: usize,
        pts: &mut Vec<(i64, i64)>,
        segs: usize,
        last: Last,
        out: &mut Vec<Polyline>,
        budget: usize,
        truncated: &mut bool,
    ) {
        if *truncated {
            return;
        }
        let (x, y) = *pts.last().unwrap();
        if x == w && segs == target {
            if out.len() >= budget {
                *truncated = true;
                return;
            }
            out.push(Polyline::new(pts.clone(), w).expect("generated polyline is canonical"));
            return;
        }
        if segs >= target {
            return;
        }
        // Horizontal extension.
        if last != Last::Horizontal {
            for x2 in x + 1..=w {
                pts.push((x2, y));
                rec(w, h, target, pts, segs + 1, Last::Horizontal, out, budget, truncated);
                pts.pop();
            }
        }
        // Vertical extension (alternating direction).
        for y2 in 0..=h {
            if y2 == y {
                continue;
            }
            let dir = if y2 > y { Last::Up } else { Last::Down };
            if dir == last {
                continue;
            }
            pts.push((x, y2));
            rec(w, h, target, pts, segs + 1, dir, out, budget, truncated);
            pts.pop();
        }
    }

    #[derive(Clone, Copy, PartialEq, Eq)]
    enum Last {
        None,
        Horizontal,
        Up,
        Down,
    }

    for target in 2..=max_complexity {
        if truncated {
            break;
        }
        for y0 in 0..=h {
            if truncated {
                break;
            }
            let mut pts = vec![(0i64, y0)];
            rec(w, h, target, &mut pts, 0, Last::None, &mut out, budget, &mut truncated);
        }
    }
    PolylineSet { polylines: out, truncated }
}

/// Like `enumerate_polylines_capped`, but truncation is an error naming the
/// count reached.
pub fn enumerate_polylines(bbox: BBox, max_complexity: usize, budget: usize) -> Result<Vec<Polyline>> {
    let set = enumerate_polylines_capped(bbox, max_complexity, budget);
    if set.truncated {
        return Err(Error::Budget(format!(
            "polyline enumeration stopped at {} of budget {budget}",
            set.polylines.len()
        )));
    }
    Ok(set.polylines)
}

/// One selectable item inside a region: the rectangle handed to the packer
/// and the (possibly narrower) rectangle actually placed in the output.
#[derive(Debug, Clone, Copy)]
struct Cand {
    id: u32,
    color: u32,
    pack_rect: Rect,
    out_rect: Rect,
}

struct Ctx<'a> {
    shared: &'a mut DpShared,
    stats: DpStats,
    cfg: &'a DpConfig,
}

impl Ctx<'_> {
    fn feasible(&mut self, region: &Region, rects: &[Rect]) -> Option<Vec<PlacedRect>> {
        let cells: Vec<(i64, i64)> = region.cells().iter().copied().collect();
        let per_region = self.shared.feas.entry(cells).or_default();
        let key: Vec<Rect> = rects.to_vec();
        if let Some(hit) = per_region.get(&key) {
            return hit.clone();
        }
        let q = ExactQuery::new(key.clone(), region.clone()).with_budget(self.cfg.exact_node_budget);
        let (outcome, _) = exact_pack(&q);
        match outcome {
            PackOutcome::Packed(slots) => {
                per_region.insert(key, Some(slots.clone()));
                Some(slots)
            }
            PackOutcome::Infeasible => {
                per_region.insert(key, None);
                None
            }
            PackOutcome::BudgetExceeded => {
                self.stats.exact_budget_hit = true;
                None
            }
        }
    }

    /// Largest distinctly-colored packable subset of `cands` (colors within
    /// `mask`), at most `max_take` members. Returns doubled placements.
    fn best_subset(
        &mut self,
        region: &Region,
        cands: &[Cand],
        mask: u32,
        max_take: usize,
    ) -> Vec<Placement> {
        let pool: Vec<&Cand> = cands
            .iter()
            .filter(|c| c.color >= 1 && mask & (1 << (c.color - 1)) != 0)
            .collect();
        let mut colors_seen = 0u32;
        let mut distinct = 0usize;
        for c in &pool {
            let bit = 1 << (c.color - 1);
            if colors_seen & bit == 0 {
                colors_seen |= bit;
                distinct += 1;
            }
        }
        let cap = max_take.min(distinct);
        for size in (1..=cap).rev() {
            if let Some(placements) = self.find_subset(region, &pool, size, 0, 0, &mut Vec::new()) {
                return placements;
            }
        }
        Vec::new()
    }

    fn find_subset(
        &mut self,
        region: &Region,
        pool: &[&Cand],
        size: usize,
        start: usize,
        used_colors: u32,
        chosen: &mut Vec<usize>,
    ) -> Option<Vec<Placement>> {
        if chosen.len() == size {
            self.stats.subsets_tried += 1;
            if self.stats.subsets_tried > self.cfg.subset_budget {
                self.stats.subset_budget_hit = true;
                return None;
            }
            let mut rects: Vec<Rect> = chosen.iter().map(|&i| pool[i].pack_rect).collect();
            rects.sort();
            let slots = self.feasible(region, &rects)?;
            // Slots are in sorted-rect order; match each chosen candidate to
            // a slot of its shape.
            let mut open: Vec<(Rect, PlacedRect)> = rects.into_iter().zip(slots).collect();
            let mut placements = Vec::with_capacity(size);
            for &i in chosen.iter() {
                let c = pool[i];
                let j = open
                    .iter()
                    .position(|(r, _)| *r == c.pack_rect)
                    .expect("slot for every rect");
                let (_, slot) = open.swap_remove(j);
                placements.push(Placement { id: c.id, at: c.out_rect.at(slot.x, slot.y) });
            }
            return Some(placements);
        }
        if self.stats.subset_budget_hit {
            return None;
        }
        let need = size - chosen.len();
        if start + need > pool.len() {
            return None;
        }
        for i in start..pool.len() {
            let bit = 1 << (pool[i].color - 1);
            if used_colors & bit != 0 {
                continue;
            }
            chosen.push(i);
            if let Some(found) =
                self.find_subset(region, pool, size, i + 1, used_colors | bit, chosen)
            {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }
}

/// Best packing of a single region from allowed colors: S1 (few original
/// items) versus S2 (up to `k` reduced rounded items, translated back to
/// their original rectangles). Ties prefer S1.
fn solve_region(
    ctx: &mut Ctx<'_>,
    region: &Region,
    s1_cands: &[Cand],
    s2_cands: &[Cand],
    mask: u32,
    s1_cap: usize,
    k: usize,
) -> Vec<Placement> {
    if region.is_empty() || mask == 0 {
        return Vec::new();
    }
    let s1 = ctx.best_subset(region, s1_cands, mask, s1_cap);
    let s2 = ctx.best_subset(region, s2_cands, mask, k);
    if s2.len() > s1.len() {
        s2
    } else {
        s1
    }
}

/// Runs the DP. Items must all be colored (colors in `1..=k`), wide, and of
/// width at least `N1/alpha`.
pub fn dp_solve(
    inst: &Instance,
    cfg: &DpConfig,
    shared: &mut DpShared,
) -> Result<(DpOutcome, DpStats)> {
    let n1 = inst.bbox.w;
    let min_width = Rational64::from_integer(n1) / cfg.alpha;
    for it in &inst.items {
        if it.color.is_none() {
            return Err(Error::Coloring(format!("item {} uncolored", it.id)));
        }
        if !it.rect.is_wide() {
            return Err(Error::Precondition(format!("item {} is not wide", it.id)));
        }
        if Rational64::from_integer(it.rect.w) < min_width {
            return Err(Error::Precondition(format!(
                "item {} width {} below N1/alpha = {min_width}",
                it.id, it.rect.w
            )));
        }
    }
    if cfg.k > 32 {
        return Err(Error::Precondition("k > 32 unsupported by the color-mask DP".into()));
    }
    let k = cfg.k;
    let eps = cfg.epsilon;
    if eps <= Rational64::from_integer(0) || eps > Rational64::from_integer(1) {
        return Err(Error::Precondition(format!("epsilon {eps} outside (0,1]")));
    }

    let ell = Rational64::from_integer(n1) / (Rational64::from_integer(2) * cfg.alpha);
    let params = RoundingParams::from_ratio(ell, n1);
    let reduced = reduce_k(&inst.items, k)?;

    let s1_cands: Vec<Cand> = inst
        .items
        .iter()
        .map(|it| Cand {
            id: it.id,
            color: it.color.unwrap(),
            pack_rect: it.rect.doubled(),
            out_rect: it.rect.doubled(),
        })
        .collect();
    let s2_cands: Vec<Cand> = reduced
        .iter()
        .map(|it| Cand {
            id: it.id,
            color: it.color.unwrap(),
            pack_rect: round_rect(&it.rect, &params).doubled(),
            out_rect: it.rect.doubled(),
        })
        .collect();

    let s1_cap_exact = Rational64::from_integer(2) / (eps * eps);
    let s1_cap = s1_cap_exact.floor().to_integer().min(64) as usize;
    let max_complexity = (Rational64::from_integer(4) / eps + Rational64::from_integer(1))
        .floor()
        .to_integer()
        .max(1) as usize;

    let d = inst.bbox.doubled();
    let set = enumerate_polylines_capped(d, max_complexity, cfg.polyline_budget);
    let polys = set.polylines;
    let mut ctx = Ctx { shared, stats: DpStats::default(), cfg };
    ctx.stats.polyline_count = polys.len();
    ctx.stats.polylines_truncated = set.truncated;

    // Partial order and a topological order (bottom side first).
    let np = polys.len();
    let mut below = vec![vec![false; np]; np];
    for i in 0..np {
        for j in 0..np {
            if i != j {
                below[i][j] = polyline_below(&polys[i], &polys[j]);
            }
        }
    }
    let mut order: Vec<usize> = (0..np).collect();
    order.sort_by_key(|&i| {
        let s: i64 = polys[i].points().iter().map(|p| p.1).sum();
        (below.iter().filter(|row| row[i]).count(), s)
    });
    let bottom = 0usize; // index of the bottom side in `polys`
    let top = 1usize; // index of the top side

    let full_mask: u32 = if k == 32 { u32::MAX } else { (1 << k) - 1 };
    let masks = (full_mask as usize) + 1;
    let mut dp: Vec<Vec<Option<Vec<Placement>>>> = vec![vec![None; masks]; np];
    for m in 0..masks {
        dp[bottom][m] = Some(Vec::new());
    }

    // Regions between polyline pairs, built lazily.
    let mut regions: HashMap<(usize, usize), Option<Region>> = HashMap::new();
    let mut region_of = |lo: usize, hi: usize, polys: &[Polyline], below: &[Vec<bool>]| -> Option<Region> {
        if !below[lo][hi] {
            return None;
        }
        regions
            .entry((lo, hi))
            .or_insert_with(|| container_between(&polys[lo], &polys[hi], d).ok())
            .clone()
    };

    let mut pairs_used = 0usize;
    for &p in &order {
        if p == bottom {
            continue;
        }
        ctx.stats.states += masks;
        // Always-evaluated base transition from the bottom side.
        if let Some(region) = region_of(bottom, p, &polys, &below) {
            for mask in 0..masks as u32 {
                let best = solve_region(&mut ctx, &region, &s1_cands, &s2_cands, mask, s1_cap, k);
                dp[p][mask as usize] = Some(best);
            }
        } else {
            for mask in 0..masks {
                dp[p][mask] = Some(Vec::new());
            }
        }
        // Richer transitions through intermediate polylines, budgeted.
        for &q in &order {
            if q == bottom || q == p || !below[q][p] {
                continue;
            }
            if dp[q][0].is_none() {
                continue; // not yet evaluated (incomparable ordering quirk)
            }
            let region = match region_of(q, p, &polys, &below) {
                Some(r) => r,
                None => continue,
            };
            for mask in 0..masks as u32 {
                // Enumerate submasks of `mask` for the new region.
                let mut sub = mask;
                loop {
                    if pairs_used >= cfg.pair_budget {
                        ctx.stats.pair_budget_hit = true;
                        break;
                    }
                    pairs_used += 1;
                    let rest = mask & !sub;
                    if let Some(prev) = dp[q][rest as usize].clone() {
                        let add = solve_region(&mut ctx, &region, &s1_cands, &s2_cands, sub, s1_cap, k);
                        let mut joined = prev;
                        let mut ok = true;
                        'check: for a in &joined {
                            for b in &add {
                                if overlaps(&a.at, &b.at) {
                                    ok = false;
                                    break 'check;
                                }
                            }
                        }
                        if ok {
                            joined.extend(add);
                            let cur = dp[p][mask as usize].as_ref().map_or(0, |v| v.len());
                            if joined.len() > cur {
                                dp[p][mask as usize] = Some(joined);
                            }
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & mask;
                }
                if ctx.stats.pair_budget_hit {
                    break;
                }
            }
            if ctx.stats.pair_budget_hit {
                break;
            }
        }
    }

    let mut stats = ctx.stats;
    stats.definitive = {
        let exhaustive_s1 = s1_cap >= k && !stats.exact_budget_hit && !stats.subset_budget_hit;
        let complete = !stats.polylines_truncated
            && !stats.pair_budget_hit
            && !stats.exact_budget_hit
            && !stats.subset_budget_hit;
        exhaustive_s1 || complete
    };

    let answer = dp[top][full_mask as usize].clone().unwrap_or_default();
    let threshold = (Rational64::from_integer(1) - Rational64::from_integer(3) * eps)
        * Rational64::from_integer(k as i64);
    if Rational64::from_integer(answer.len() as i64) >= threshold {
        // Halve doubled coordinates (dimensions are even, so flooring both
        // coordinates preserves validity).
        let placements: Vec<Placement> = answer
            .iter()
            .map(|p| {
                let r = Rect::new(p.at.w() / 2, p.at.h() / 2);
                Placement { id: p.id, at: r.at(p.at.x.div_euclid(2), p.at.y.div_euclid(2)) }
            })
            .collect();
        let pk = Packing { placements };
        let report = validate_packing(inst, &pk);
        if !report.pass {
            return Err(Error::Precondition(format!(
                "internal: dp produced an invalid packing: {}",
                report.violation.unwrap_or_default()
            )));
        }
        return Ok((DpOutcome::Packing(pk), stats));
    }
    if stats.definitive {
        Ok((DpOutcome::NoPacking, stats))
    } else {
        Ok((
            DpOutcome::Inconclusive(format!(
                "budgets exhausted (polylines truncated: {}, pairs: {}, exact: {}, subsets: {})",
                stats.polylines_truncated,
                stats.pair_budget_hit,
                stats.exact_budget_hit,
                stats.subset_budget_hit
            )),
            stats,
        ))
    }
}
