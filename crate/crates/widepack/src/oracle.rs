//! Brute-force ground truth, independent of the main solver: feasibility by
//! naive placement enumeration, and the maximum packable subset size with a
//! witness. Shares only the geometry primitives with the rest of the crate.

use crate::error::{Error, Result};
use crate::geometry::{PlacedRect, Rect, Region};
use crate::model::{Instance, Packing, Placement};

/// Result of an exhaustive optimum search.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub opt: usize,
    pub witness: Packing,
    pub nodes: u64,
}

struct Naive<'a> {
    region: &'a Region,
    budget: u64,
    nodes: u64,
}

impl<'a> Naive<'a> {
    /// Places `rects[i..]` in order; placements are tried in lexicographic
    /// (x, y) order with only overlap pruning. Runs of identical shapes are
    /// forced into non-decreasing positions to skip permutations.
    fn place(&mut self, rects: &[Rect], i: usize, placed: &mut Vec<PlacedRect>) -> Result<bool> {
        if i == rects.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget(format!("oracle node budget {}", self.budget)));
        }
        let r = rects[i];
        let bbox = self.region.bbox();
        let floor = if i > 0 && rects[i - 1] == r {
            let prev = placed[i - 1];
            (prev.x, prev.y)
        } else {
            (0, 0)
        };
        for x in 0..=(bbox.w - r.w).max(-1) {
            for y in 0..=(bbox.h - r.h).max(-1) {
                if (x, y) < floor {
                    continue;
                }
                let p = r.at(x, y);
                if !self.region.contains_rect(&p) {
                    continue;
                }
                if placed.iter().any(|q| crate::geometry::overlaps(q, &p)) {
                    continue;
                }
                placed.push(p);
                if self.place(rects, i + 1, placed)? {
                    return Ok(true);
                }
                placed.pop();
            }
        }
        Ok(false)
    }
}

/// Decides by exhaustive placement enumeration whether the rects pack into
/// the region.
pub fn feasible_subset(rects: &[Rect], region: &Region, node_budget: u64) -> Result<bool> {
    let mut sorted = rects.to_vec();
    sorted.sort();
    let mut search = Naive { region, budget: node_budget, nodes: 0 };
    let mut placed = Vec::new();
    search.place(&sorted, 0, &mut placed)
}

/// Like `feasible_subset`, returning the witness placements (in the order of
/// the sorted rects) when feasible.
fn feasible_witness(
    rects: &[Rect],
    region: &Region,
    node_budget: u64,
    nodes: &mut u64,
) -> Result<Option<Vec<(Rect, PlacedRect)>>> {
    let mut sorted = rects.to_vec();
    sorted.sort();
    let mut search = Naive { region, budget: node_budget, nodes: 0 };
    let mut placed = Vec::new();
    let ok = search.place(&sorted, 0, &mut placed);
    *nodes += search.nodes;
    Ok(if ok? {
        Some(sorted.into_iter().zip(placed).collect())
    } else {
        None
    })
}

/// Maximum number of the instance's items that pack into its box, with a
/// valid witness. Subsets are scanned by decreasing size, so the first
/// feasible one is optimal.
pub fn opt_pack(inst: &Instance, node_budget: u64) -> Result<OracleResult> {
    let region = Region::full(inst.bbox);
    let n = inst.items.len();
    let mut nodes = 0u64;
    for size in (1..=n).rev() {
        let mut subset = Vec::with_capacity(size);
        if let Some(result) =
            try_subsets(inst, &region, size, 0, &mut subset, node_budget, &mut nodes)?
        {
            return Ok(result);
        }
    }
    Ok(OracleResult { opt: 0, witness: Packing::default(), nodes })
}

fn try_subsets(
    inst: &Instance,
    region: &Region,
    size: usize,
    start: usize,
    subset: &mut Vec<usize>,
    node_budget: u64,
    nodes: &mut u64,
) -> Result<Option<OracleResult>> {
    if subset.len() == size {
        let rects: Vec<Rect> = subset.iter().map(|&i| inst.items[i].rect).collect();
        if let Some(witness) = feasible_witness(&rects, region, node_budget, nodes)? {
            // Map sorted witness slots back to item ids; pop matching shapes.
            let mut pool = witness;
            let mut placements = Vec::with_capacity(size);
            for &i in subset.iter() {
                let item = &inst.items[i];
                let slot = pool
                    .iter()
                    .position(|(shape, _)| *shape == item.rect)
                    .expect("witness covers subset");
                placements.push(Placement { id: item.id, at: pool.swap_remove(slot).1 });
            }
            return Ok(Some(OracleResult {
                opt: size,
                witness: Packing { placements },
                nodes: *nodes,
            }));
        }
        return Ok(None);
    }
    let n = inst.items.len();
    let needed = size - subset.len();
    for i in start..=(n - needed) {
        subset.push(i);
        if let Some(res) = try_subsets(inst, region, size, i + 1, subset, node_budget, nodes)? {
            return Ok(Some(res));
        }
        subset.pop();
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BBox;
    use crate::model::{validate_packing, Item};

    #[test]
    fn single_unit_item() {
        let inst = Instance::new(BBox::new(1, 1), vec![Item::new(0, 1, 1)], 1).unwrap();
        let res = opt_pack(&inst, 1_000_000).unwrap();
        assert_eq!(res.opt, 1);
        assert!(validate_packing(&inst, &res.witness).pass);
    }

    #[test]
    fn two_bars_and_unit_in_square() {
        let inst = Instance::new(
            BBox::new(2, 2),
            vec![Item::new(0, 2, 1), Item::new(1, 2, 1), Item::new(2, 1, 1)],
            2,
        )
        .unwrap();
        let res = opt_pack(&inst, 1_000_000).unwrap();
        assert_eq!(res.opt, 2);
        assert!(validate_packing(&inst, &res.witness).pass);
    }

    #[test]
    fn all_too_wide() {
        let inst = Instance::new(BBox::new(2, 2), vec![Item::new(0, 3, 1)], 1).unwrap();
        let res = opt_pack(&inst, 1_000_000).unwrap();
        assert_eq!(res.opt, 0);
        assert!(res.witness.is_empty());
    }

    #[test]
    fn feasible_subset_examples() {
        let region = Region::full(BBox::new(2, 2));
        assert!(feasible_subset(&[], &region, 100).unwrap());
        assert!(!feasible_subset(&[Rect::new(3, 1)], &region, 100).unwrap());
        assert!(feasible_subset(&[Rect::new(2, 1), Rect::new(2, 1)], &region, 10_000).unwrap());
        assert!(!feasible_subset(&[Rect::new(2, 2), Rect::new(1, 1)], &region, 10_000).unwrap());
    }

    #[test]
    fn budget_is_an_error() {
        let rects = vec![Rect::new(1, 1); 6];
        let region = Region::full(BBox::new(4, 4));
        assert!(feasible_subset(&rects, &region, 2).is_err());
    }
}
