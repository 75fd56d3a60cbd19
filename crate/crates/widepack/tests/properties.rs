//! Randomized property tests for invariants that hold on all inputs, not
//! just the seeded acceptance cases.

use num_rational::Rational64;
use proptest::prelude::*;

use widepack::exact::{all_flush, exact_pack, push_fixpoint, ExactQuery, PackOutcome};
use widepack::model::{ceil_mul, reduce_k, round_rect, Item, RoundingParams};
use widepack::{BBox, Rect, Region, ShiftDir};

proptest! {
    /// Rounded widths are multiples of the grain, never smaller than the
    /// input, and inflate by less than one grain.
    #[test]
    fn rounding_bounds(w in 1i64..200, h in 1i64..50, ell in 1i64..20, margin in 0i64..50) {
        let n1 = 2 * ell + margin;
        let p = RoundingParams::new(ell, n1);
        let r = round_rect(&Rect::new(w, h), &p);
        prop_assert_eq!(r.h, h);
        prop_assert!(r.w >= w);
        prop_assert!(r.w < w + p.c);
        prop_assert_eq!(r.w % p.c, 0);
    }

    /// The integer-scaling step keeps horizontally ordered rectangles
    /// disjoint: if the first ends where the second starts, the scaled
    /// first (with rounded width) still ends at or before the scaled
    /// second. Requires the width floor of the rounding scheme.
    #[test]
    fn scaled_rounding_preserves_order(
        x1 in 0i64..100,
        w1 in 1i64..50,
        gap in 0i64..20,
        ell in 1i64..10,
        slack in 0i64..100,
    ) {
        let w1 = w1.max(2 * ell);
        let x2 = x1 + w1 + gap;
        let n1 = (x2 + ell).max(2 * ell) + slack;
        let p = RoundingParams::new(ell, n1);
        let lambda = Rational64::from_integer(1) + Rational64::new(ell, n1);
        let scale = |x: i64| (lambda * Rational64::from_integer(x)).floor().to_integer();
        let w1r = round_rect(&Rect::new(w1, 1), &p).w;
        prop_assert!(scale(x1) + w1r <= scale(x2));
    }

    /// ceil_mul really is the ceiling of q * k.
    #[test]
    fn ceil_mul_is_ceiling(p in 0i64..50, q in 1i64..50, k in 0usize..100) {
        let r = Rational64::new(p, q);
        let exact = r * Rational64::from_integer(k as i64);
        let c = ceil_mul(r, k);
        prop_assert!(Rational64::from_integer(c) >= exact);
        prop_assert!(Rational64::from_integer(c - 1) < exact);
    }

    /// Shifting a zone both ways equals shifting negatively, then
    /// positively.
    #[test]
    fn shift_zone_composes(
        cells in proptest::collection::btree_set((0i64..6, 0i64..5), 0..20),
        ell in 1i64..3,
    ) {
        let bbox = BBox::new(8, 5);
        let z = Region::new(cells, bbox);
        let both = z.shift_zone(ell, ShiftDir::Both).unwrap();
        let seq = z
            .shift_zone(ell, ShiftDir::Negative)
            .unwrap()
            .shift_zone(ell, ShiftDir::Positive)
            .unwrap();
        prop_assert_eq!(both.cells(), seq.cells());
    }

    /// Every witness of the exact solver is flush: no placed rectangle can
    /// move one unit left or down and stay inside the region.
    #[test]
    fn exact_witnesses_are_flush(
        dims in proptest::collection::vec((1i64..4, 1i64..4), 1..4),
        bw in 2i64..6,
        bh in 2i64..6,
    ) {
        let region = Region::full(BBox::new(bw, bh));
        let rects: Vec<Rect> = dims.iter().map(|&(w, h)| Rect::new(w, h)).collect();
        let q = ExactQuery::new(rects, region.clone()).with_budget(10_000_000);
        if let PackOutcome::Packed(slots) = exact_pack(&q).0 {
            prop_assert!(all_flush(&region, &slots).unwrap());
            let pushed = push_fixpoint(&region, &slots);
            prop_assert_eq!(pushed, slots);
        }
    }

    /// reduce_k returns a subset of the input with at most k copies of any
    /// (width, color) class, keeping the smallest heights of each class.
    #[test]
    fn reduce_k_is_a_small_subset(
        dims in proptest::collection::vec((1i64..6, 1i64..6, 1u32..4), 0..15),
        k in 1usize..4,
    ) {
        let items: Vec<Item> = dims
            .iter()
            .enumerate()
            .map(|(i, &(w, h, c))| Item::new(i as u32, w, h).colored(c))
            .collect();
        let reduced = reduce_k(&items, k).unwrap();
        for it in &reduced {
            prop_assert!(items.iter().any(|o| o.id == it.id && o.rect == it.rect));
        }
        for it in &reduced {
            let class: Vec<&Item> = reduced
                .iter()
                .filter(|o| o.rect.w == it.rect.w && o.color == it.color)
                .collect();
            prop_assert!(class.len() <= k);
            // No discarded item of the class is strictly shorter than a
            // kept one.
            let max_kept = class.iter().map(|o| o.rect.h).max().unwrap();
            for o in &items {
                if o.rect.w == it.rect.w
                    && o.color == it.color
                    && reduced.iter().all(|r| r.id != o.id)
                {
                    prop_assert!(o.rect.h >= max_kept);
                }
            }
        }
    }
}
