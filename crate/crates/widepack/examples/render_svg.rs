//! Renders a packing and its structural polylines as SVG files under
//! `out/`.

use num_rational::Rational64;
use widepack::model::{Instance, Item, Packing, Placement};
use widepack::render::{render_packing, render_structured};
use widepack::structure::structural_transform;
use widepack::{BBox, Rect};

fn main() -> std::io::Result<()> {
    let inst = Instance::new(
        BBox::new(12, 8),
        (0..12).map(|i| Item::new(i, 4, 2)).collect(),
        12,
    )
    .unwrap();
    let pk = Packing {
        placements: (0..12)
            .map(|i| Placement {
                id: i,
                at: Rect::new(4, 2).at(4 * (i as i64 % 3), 2 * (i as i64 / 3)),
            })
            .collect(),
    };

    std::fs::create_dir_all("out")?;
    std::fs::write("out/packing.svg", render_packing(&inst, &pk))?;

    let sp = structural_transform(&pk, inst.bbox, Rational64::new(1, 2), 2)
        .expect("transform succeeds");
    std::fs::write("out/structured.svg", render_structured(&sp))?;

    println!("wrote out/packing.svg and out/structured.svg");
    Ok(())
}
