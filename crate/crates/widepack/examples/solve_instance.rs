//! End-to-end solve: build a small wide instance, ask for a packing of size
//! at least (1 - eps) * k, and print the report.

use num_rational::Rational64;
use widepack::model::{Instance, Item};
use widepack::solver::{pas_solve, SolveOptions};
use widepack::BBox;

fn main() {
    let inst = Instance::new(
        BBox::new(8, 8),
        vec![
            Item::new(0, 8, 2),
            Item::new(1, 8, 2),
            Item::new(2, 6, 3),
            Item::new(3, 5, 1),
            Item::new(4, 4, 2),
        ],
        4,
    )
    .expect("valid instance");

    let eps = Rational64::new(1, 2);
    let report = pas_solve(&inst, eps, &SolveOptions::default()).expect("solve succeeds");
    println!("{}", report.to_json());
}
