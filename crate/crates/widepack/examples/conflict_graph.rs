//! Horizontal-visibility conflict graph of a packing: vertices are placed
//! items plus virtual left/right strips S and T; edges mean two rectangles
//! see each other along some horizontal line. Prints the edge list with
//! witnesses, a DOT dump, and a minimum S-T vertex separator.

use std::collections::BTreeSet;

use widepack::conflict::{build_conflict_graph, min_separator_in, Vertex};
use widepack::model::{Packing, Placement};
use widepack::{BBox, Rect};

fn main() {
    // Two corridors of two rectangles each, stacked with a gap.
    let pk = Packing {
        placements: vec![
            Placement { id: 0, at: Rect::new(3, 2).at(0, 0) },
            Placement { id: 1, at: Rect::new(3, 2).at(3, 0) },
            Placement { id: 2, at: Rect::new(3, 2).at(0, 4) },
            Placement { id: 3, at: Rect::new(3, 2).at(3, 4) },
        ],
    };
    let bbox = BBox::new(6, 6);
    let g = build_conflict_graph(&pk, bbox);

    println!("edges:");
    for ((a, b), w) in &g.edges {
        println!(
            "  {a} -- {b}   (seen at doubled y = {}, x in [{}, {}])",
            w.y_doubled, w.x_lo, w.x_hi
        );
    }

    let verts: BTreeSet<Vertex> = g.vertices().into_iter().collect();
    let sep = min_separator_in(&g, &verts).expect("S and T not adjacent");
    println!("\nminimum S-T separator: {sep:?}");

    println!("\n{}", g.to_dot());
}
