//! The inner dynamic program on its own: colored wide items, states indexed
//! by (polyline, color set), regions solved by a few original items or by
//! rounded reduced items.

use num_rational::Rational64;
use widepack::dp::{dp_solve, enumerate_polylines_capped, DpConfig, DpOutcome, DpShared};
use widepack::model::{Instance, Item};
use widepack::BBox;

fn main() {
    // Polyline state space for a 2x2 doubled grid.
    let set = enumerate_polylines_capped(BBox::new(4, 4), 3, 10_000);
    println!(
        "canonical polylines across a 4x4 grid with <= 3 segments: {} (truncated: {})",
        set.polylines.len(),
        set.truncated
    );

    let inst = Instance::new(
        BBox::new(8, 8),
        vec![
            Item::new(0, 8, 2).colored(1),
            Item::new(1, 8, 2).colored(2),
            Item::new(2, 8, 3).colored(3),
            Item::new(3, 8, 2).colored(3),
        ],
        3,
    )
    .unwrap();

    let cfg = DpConfig::new(Rational64::new(1, 6), Rational64::from_integer(8), 3);
    let (outcome, stats) = dp_solve(&inst, &cfg, &mut DpShared::new()).expect("dp runs");
    match outcome {
        DpOutcome::Packing(pk) => {
            println!("packed {} items:", pk.len());
            for p in &pk.placements {
                println!("  item {} at ({}, {})", p.id, p.at.x, p.at.y);
            }
        }
        DpOutcome::NoPacking => println!("definitive: no packing of size 3"),
        DpOutcome::Inconclusive(why) => println!("inconclusive: {why}"),
    }
    println!(
        "polylines: {} (truncated: {}), states: {}, subsets tried: {}, definitive: {}",
        stats.polyline_count,
        stats.polylines_truncated,
        stats.states,
        stats.subsets_tried,
        stats.definitive
    );
}
