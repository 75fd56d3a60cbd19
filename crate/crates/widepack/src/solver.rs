//! Top-level solver: thin-item reduction, exact small-k base case, the
//! epsilon rescaling chain, and iteration over a coloring family feeding the
//! DP. Produces a three-valued report: a packing of size at least
//! `(1 - eps) * k`, a definitive no-packing verdict, or an honest
//! budget-inconclusive outcome.

use std::collections::HashSet;

use num_rational::Rational64;

use crate::colorcode::{ColoringFamily, ColoringMode};
use crate::dp::{dp_solve, DpConfig, DpOutcome, DpShared};
use crate::error::{Error, Result};
use crate::exact::{exact_pack, ExactQuery, PackOutcome, DEFAULT_NODE_BUDGET};
use crate::geometry::{Rect, Region};
use crate::model::{aspect_ratio, ceil_mul, validate_packing, Instance, Item, Packing, Placement};

/// Final verdict of a solve run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Packing,
    NoPackingOfSizeK,
    InconclusiveBudget,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Packing => "packing",
            Verdict::NoPackingOfSizeK => "no-packing-of-size-k",
            Verdict::InconclusiveBudget => "inconclusive-budget",
        }
    }
}

/// Which branch produced the result and under which budgets.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    pub branch: String,
    pub coloring_index: Option<usize>,
    pub colorings_total: usize,
    pub epsilon: Option<Rational64>,
    pub epsilon_inner: Option<Rational64>,
    /// Residual per-subset miss probability for randomized colorings.
    pub residual_failure: Option<f64>,
    pub notes: Vec<String>,
}

/// Solve outcome: verdict, optional packing, and the guarantee threshold the
/// packing was checked against.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub verdict: Verdict,
    pub packing: Option<Packing>,
    pub guarantee: usize,
    pub trace: Trace,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        let v = serde_json::json!({
            "verdict": self.verdict.as_str(),
            "guarantee": self.guarantee,
            "packing": self.packing.as_ref().map(|pk| {
                serde_json::from_str::<serde_json::Value>(&pk.to_json()).unwrap()
            }),
            "trace": {
                "branch": self.trace.branch,
                "coloring_index": self.trace.coloring_index,
                "colorings_total": self.trace.colorings_total,
                "epsilon": self.trace.epsilon.map(|e| format!("{}/{}", e.numer(), e.denom())),
                "epsilon_inner": self.trace.epsilon_inner.map(|e| format!("{}/{}", e.numer(), e.denom())),
                "residual_failure": self.trace.residual_failure,
                "notes": self.trace.notes,
            },
        });
        serde_json::to_string_pretty(&v).expect("report serializes")
    }
}

/// Tunables for a solve run.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub coloring_mode: ColoringMode,
    pub coloring_failure_bound: f64,
    /// Cap on the exhaustive coloring family size.
    pub coloring_budget: usize,
    pub exact_node_budget: u64,
    pub polyline_budget: usize,
    pub pair_budget: usize,
    pub subset_budget: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            coloring_mode: ColoringMode::Exhaustive,
            coloring_failure_bound: 0.01,
            coloring_budget: 1_000_000,
            exact_node_budget: DEFAULT_NODE_BUDGET,
            polyline_budget: 64,
            pair_budget: 20_000,
            subset_budget: 100_000,
        }
    }
}

/// Exact base case: finds a packing of exactly `inst.k` items if one exists,
/// by trying every k-subset (duplicate shape multisets skipped).
pub fn solve_small_k(inst: &Instance, node_budget: u64) -> Result<Option<Packing>> {
    let region = Region::full(inst.bbox);
    let k = inst.k;
    let mut seen: HashSet<Vec<Rect>> = HashSet::new();
    let mut subset: Vec<usize> = Vec::with_capacity(k);

    fn rec(
        inst: &Instance,
        region: &Region,
        k: usize,
        start: usize,
        subset: &mut Vec<usize>,
        seen: &mut HashSet<Vec<Rect>>,
        budget: u64,
    ) -> Result<Option<Packing>> {
        if subset.len() == k {
            let mut shapes: Vec<Rect> = subset.iter().map(|&i| inst.items[i].rect).collect();
            shapes.sort();
            if !seen.insert(shapes.clone()) {
                return Ok(None);
            }
            let rects: Vec<Rect> = subset.iter().map(|&i| inst.items[i].rect).collect();
            let q = ExactQuery::new(rects, region.clone()).with_budget(budget);
            return match exact_pack(&q).0 {
                PackOutcome::Packed(slots) => {
                    let placements = subset
                        .iter()
                        .zip(slots)
                        .map(|(&i, at)| Placement { id: inst.items[i].id, at })
                        .collect();
                    Ok(Some(Packing { placements }))
                }
                PackOutcome::Infeasible => Ok(None),
                PackOutcome::BudgetExceeded => {
                    Err(Error::Budget(format!("exact node budget {budget} in small-k search")))
                }
            };
        }
        let n = inst.items.len();
        let need = k - subset.len();
        for i in start..=n.saturating_sub(need) {
            subset.push(i);
            if let Some(pk) = rec(inst, region, k, i + 1, subset, seen, budget)? {
                return Ok(Some(pk));
            }
            subset.pop();
        }
        Ok(None)
    }

    rec(inst, &region, k, 0, &mut subset, &mut seen, node_budget)
}

fn stack_vertically(items: &[Item], n2: i64) -> Result<Packing> {
    let mut y = 0i64;
    let mut placements = Vec::with_capacity(items.len());
    for it in items {
        placements.push(Placement { id: it.id, at: it.rect.at(0, y) });
        y += it.rect.h;
    }
    if y > n2 {
        return Err(Error::Precondition(format!(
            "stacking invariant violated: cumulative height {y} exceeds box height {n2}"
        )));
    }
    Ok(Packing { placements })
}

/// Relabels a coloring by order of first appearance, so two colorings with
/// the same induced item partition normalize identically.
fn partition_key(coloring: &[u32]) -> Vec<u32> {
    let mut map: Vec<u32> = Vec::new();
    coloring
        .iter()
        .map(|&c| {
            if let Some(p) = map.iter().position(|&m| m == c) {
                p as u32
            } else {
                map.push(c);
                (map.len() - 1) as u32
            }
        })
        .collect()
}

/// Thin-item reduction: stacks thin items when there are `k` of them,
/// otherwise runs the DP on the remaining items over a coloring family and
/// reassembles. Guarantees `(1 - 2*eps_b) * k` on success.
pub fn reduce_and_solve(inst: &Instance, eps_b: Rational64, opts: &SolveOptions) -> Result<SolveReport> {
    if !inst.all_wide() {
        return Err(Error::Precondition("all items must be wide".into()));
    }
    let k = inst.k;
    let n1 = inst.bbox.w;
    let n2 = inst.bbox.h;
    let delta = aspect_ratio(&inst.bbox);
    let kq = Rational64::from_integer(k as i64);
    let one = Rational64::from_integer(1);
    let two = Rational64::from_integer(2);
    let guarantee = ceil_mul(one - two * eps_b, k).max(0) as usize;

    let mut trace = Trace { epsilon: Some(eps_b), ..Trace::default() };

    let thin_thr = Rational64::from_integer(n1) / (delta * kq * kq);
    let (mut thin, rest): (Vec<Item>, Vec<Item>) = inst
        .items
        .iter()
        .partition(|it| Rational64::from_integer(it.rect.w) <= thin_thr);
    thin.sort_by_key(|it| (it.rect.h, it.id));

    if thin.len() >= k {
        let pk = stack_vertically(&thin[..k], n2)?;
        let report = validate_packing(inst, &pk);
        if !report.pass {
            return Err(Error::Precondition(format!(
                "internal: thin stacking invalid: {}",
                report.violation.unwrap_or_default()
            )));
        }
        trace.branch = "stacking".into();
        return Ok(SolveReport { verdict: Verdict::Packing, packing: Some(pk), guarantee, trace });
    }

    let k_prime = k - thin.len();
    let eps_a = eps_b / Rational64::from_integer(3);
    trace.epsilon_inner = Some(eps_a);
    let alpha = delta * kq * kq;
    let height_thr = Rational64::from_integer(n1) / (delta * kq);

    let family = match opts.coloring_mode {
        ColoringMode::Exhaustive => {
            ColoringFamily::exhaustive(rest.len(), k_prime, opts.coloring_budget)?
        }
        ColoringMode::Randomized { seed } => {
            ColoringFamily::randomized(rest.len(), k_prime, seed, opts.coloring_failure_bound)?
        }
    };
    trace.colorings_total = family.len();
    if let ColoringMode::Randomized { .. } = opts.coloring_mode {
        trace.residual_failure = Some(family.failure_bound);
    }

    let mut shared = DpShared::new();
    let mut seen_partitions: HashSet<Vec<u32>> = HashSet::new();
    let mut all_no = true;
    let mut any_inconclusive = false;
    let mut best: Option<(usize, Packing, String)> = None;

    for idx in 0..family.len() {
        if !seen_partitions.insert(partition_key(&family.colorings[idx])) {
            continue;
        }
        let colored = family.apply(idx, &rest);
        let dp_inst = Instance::new(inst.bbox, colored, k_prime)?;
        let mut cfg = DpConfig::new(eps_a, alpha, k_prime);
        cfg.polyline_budget = opts.polyline_budget;
        cfg.pair_budget = opts.pair_budget;
        cfg.exact_node_budget = opts.exact_node_budget;
        cfg.subset_budget = opts.subset_budget;
        let (outcome, _) = dp_solve(&dp_inst, &cfg, &mut shared)?;
        match outcome {
            DpOutcome::Packing(s_prime) => {
                all_no = false;
                let (pk, branch) = assemble(inst, &s_prime, &thin, height_thr, n2)?;
                let report = validate_packing(inst, &pk);
                if !report.pass {
                    return Err(Error::Precondition(format!(
                        "internal: assembled packing invalid: {}",
                        report.violation.unwrap_or_default()
                    )));
                }
                if pk.len() >= guarantee {
                    trace.branch = branch;
                    trace.coloring_index = Some(idx);
                    return Ok(SolveReport {
                        verdict: Verdict::Packing,
                        packing: Some(pk),
                        guarantee,
                        trace,
                    });
                }
                if best.as_ref().map_or(true, |(s, _, _)| pk.len() > *s) {
                    best = Some((pk.len(), pk, branch));
                }
            }
            DpOutcome::NoPacking => {}
            DpOutcome::Inconclusive(why) => {
                all_no = false;
                any_inconclusive = true;
                if trace.notes.len() < 4 {
                    trace.notes.push(format!("coloring {idx}: {why}"));
                }
            }
        }
    }

    if all_no {
        trace.branch = "dp".into();
        trace.notes.push(format!(
            "all {} colorings excluded a packing of {k_prime} remaining items",
            seen_partitions.len()
        ));
        return Ok(SolveReport { verdict: Verdict::NoPackingOfSizeK, packing: None, guarantee, trace });
    }
    trace.branch = "dp".into();
    if any_inconclusive {
        trace.notes.push("some colorings exhausted budgets".into());
    }
    if let Some((size, pk, branch)) = best {
        trace.branch = branch;
        trace.notes.push(format!("best packing found has size {size} < guarantee {guarantee}"));
        return Ok(SolveReport {
            verdict: Verdict::InconclusiveBudget,
            packing: Some(pk),
            guarantee,
            trace,
        });
    }
    Ok(SolveReport { verdict: Verdict::InconclusiveBudget, packing: None, guarantee, trace })
}

/// Combines a DP packing with the thin items: either everything stacks
/// vertically (all DP heights small), or one tall rectangle is swapped out
/// and the thin items fill its footprint.
fn assemble(
    inst: &Instance,
    s_prime: &Packing,
    thin: &[Item],
    height_thr: Rational64,
    n2: i64,
) -> Result<(Packing, String)> {
    let all_small = s_prime
        .placements
        .iter()
        .all(|p| Rational64::from_integer(p.at.h()) <= height_thr);
    if all_small {
        let mut items: Vec<Item> = s_prime
            .placements
            .iter()
            .map(|p| *inst.item(p.id).expect("dp item in instance"))
            .collect();
        items.extend_from_slice(thin);
        let pk = stack_vertically(&items, n2)?;
        return Ok((pk, "dp+stacking".into()));
    }
    // Removal swap: drop the tallest DP rectangle and lay the thin items
    // side by side inside its freed footprint.
    let tall = s_prime
        .placements
        .iter()
        .max_by_key(|p| p.at.h())
        .expect("nonempty: some height exceeds the threshold");
    let mut placements: Vec<Placement> = s_prime
        .placements
        .iter()
        .filter(|p| p.id != tall.id)
        .cloned()
        .collect();
    let mut x = tall.at.x;
    for it in thin {
        if x + it.rect.w > tall.at.x1() || it.rect.h > tall.at.h() {
            return Err(Error::Precondition(
                "removal-swap invariant violated: thin row exceeds freed footprint".into(),
            ));
        }
        placements.push(Placement { id: it.id, at: it.rect.at(x, tall.at.y) });
        x += it.rect.w;
    }
    Ok((Packing { placements }, "dp+removal-swap".into()))
}

/// Full solver: exact base case for `k <= 1/eps`, otherwise the thin-item
/// reduction around the DP with the rescaling `eps_b = eps/2`,
/// `eps_a = eps/6`.
pub fn pas_solve(inst: &Instance, eps: Rational64, opts: &SolveOptions) -> Result<SolveReport> {
    let one = Rational64::from_integer(1);
    if eps <= Rational64::from_integer(0) || eps >= one {
        return Err(Error::Precondition(format!("epsilon {eps} outside (0,1)")));
    }
    if !inst.all_wide() {
        return Err(Error::Precondition("all items must be wide".into()));
    }
    let k = inst.k;
    let guarantee = ceil_mul(one - eps, k).max(0) as usize;

    if Rational64::from_integer(k as i64) <= eps.recip() {
        let mut trace = Trace { branch: "base-case".into(), epsilon: Some(eps), ..Trace::default() };
        return match solve_small_k(inst, opts.exact_node_budget) {
            Ok(Some(pk)) => Ok(SolveReport {
                verdict: Verdict::Packing,
                packing: Some(pk),
                // The base case is exact: it found all k items.
                guarantee: k,
                trace,
            }),
            Ok(None) => Ok(SolveReport {
                verdict: Verdict::NoPackingOfSizeK,
                packing: None,
                guarantee,
                trace,
            }),
            Err(Error::Budget(why)) => {
                trace.notes.push(why);
                Ok(SolveReport {
                    verdict: Verdict::InconclusiveBudget,
                    packing: None,
                    guarantee,
                    trace,
                })
            }
            Err(e) => Err(e),
        };
    }

    let eps_b = eps / Rational64::from_integer(2);
    let mut report = reduce_and_solve(inst, eps_b, opts)?;
    // (1 - 2*eps_b) = (1 - eps): same threshold, reported against the
    // requested epsilon.
    report.guarantee = guarantee;
    report.trace.epsilon = Some(eps);
    if let Some(pk) = &report.packing {
        if report.verdict == Verdict::Packing {
            assert!(pk.len() >= guarantee);
        }
    }
    Ok(report)
}
