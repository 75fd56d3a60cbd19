//! Coloring families for color coding: the exhaustive k^n family covers
//! every k-subset with certainty; the randomized family of
//! ceil(e^k * ln(1/failure_bound)) colorings covers each subset with
//! probability at least 1 - failure_bound.

use widepack::colorcode::{is_good_for, randomized_family_size, ColoringFamily};

fn main() {
    let (n, k) = (4usize, 3usize);

    let fam = ColoringFamily::exhaustive(n, k, 1_000_000).expect("small family");
    println!("exhaustive family: {} colorings of {n} items with {k} colors", fam.len());

    // Every k-subset gets some coloring that is injective on it.
    let subsets = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    for subset in &subsets {
        let good = fam
            .colorings
            .iter()
            .position(|c| is_good_for(c, subset))
            .expect("exhaustive family covers every subset");
        println!("  subset {subset:?}: first good coloring at index {good}");
    }

    let t = randomized_family_size(k, 0.01).unwrap();
    println!("\nrandomized family at failure bound 1%: {t} colorings");
    let rand_fam = ColoringFamily::randomized(n, k, 42, 0.01).unwrap();
    let misses: usize = subsets
        .iter()
        .filter(|s| !rand_fam.colorings.iter().any(|c| is_good_for(c, *s)))
        .count();
    println!("subsets missed by seed 42: {misses} of {}", subsets.len());
}
