//! Structural transform of a valid packing: builds the visibility paths,
//! derives separating polylines, and drops at most 3*eps*k items so that
//! every region between polylines is light or roundable. Prints the
//! structured dump and its verification report.

use num_rational::Rational64;
use widepack::model::{Packing, Placement};
use widepack::structure::{structural_transform, verify_structured};
use widepack::{BBox, Rect};

fn main() {
    // A 12x8 box fully tiled by twelve 4x2 bricks.
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
    let pk = Packing { placements };
    let bbox = BBox::new(12, 8);

    let eps = Rational64::new(1, 2);
    let ell = 2; // every width (4) is at least 2*ell
    let sp = structural_transform(&pk, bbox, eps, ell).expect("transform succeeds");

    println!(
        "kept {} of {} items across {} regions",
        sp.packing.len(),
        pk.len(),
        sp.region_count()
    );
    let report = verify_structured(&sp);
    println!("verify pass: {}", report.pass);
    for f in &report.failures {
        println!("  failure: {f}");
    }
    println!("\n{}", sp.to_json());
}
