//! Exact feasibility with a placement witness, including a non-rectangular
//! region: an L-shape obtained by carving a corner out of a box.

use widepack::exact::{exact_pack, ExactQuery, PackOutcome};
use widepack::{BBox, Rect, Region};

fn show(q: &ExactQuery, label: &str) {
    let (outcome, stats) = exact_pack(q);
    match outcome {
        PackOutcome::Packed(slots) => {
            println!("{label}: packed ({} nodes)", stats.nodes);
            for p in slots {
                println!("  {}x{} at ({}, {})", p.rect.w, p.rect.h, p.x, p.y);
            }
        }
        PackOutcome::Infeasible => println!("{label}: infeasible ({} nodes)", stats.nodes),
        PackOutcome::BudgetExceeded => println!("{label}: budget exceeded"),
    }
}

fn main() {
    let square = Region::full(BBox::new(3, 3));
    show(
        &ExactQuery::new(vec![Rect::new(3, 1), Rect::new(2, 2), Rect::new(1, 2)], square),
        "three rects in a 3x3 box",
    );

    // L-shaped region: 3x3 minus its top-right 2x2 corner.
    let ell = Region::full(BBox::new(3, 3))
        .carve(&Rect::new(2, 2).at(1, 1))
        .expect("corner inside box");
    show(
        &ExactQuery::new(vec![Rect::new(3, 1), Rect::new(1, 2)], ell.clone()),
        "L-shape, feasible pair",
    );
    show(
        &ExactQuery::new(vec![Rect::new(2, 2)], ell),
        "L-shape, square too bulky",
    );
}
