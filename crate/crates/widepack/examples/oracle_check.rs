//! Cross-checks the solver against the brute-force oracle on seeded random
//! instances: with k set to the oracle optimum, the solver must return a
//! valid packing meeting the (1 - eps) * k guarantee.

use num_rational::Rational64;
use widepack::model::{ceil_mul, generate_instance, validate_packing, GenProfile, Instance};
use widepack::oracle::opt_pack;
use widepack::solver::{pas_solve, SolveOptions};

fn main() {
    let profile = GenProfile::desk(5, 5);
    let eps = Rational64::new(1, 2);
    let opts = SolveOptions::default();

    for seed in 0..10u64 {
        let gen = generate_instance(seed, &profile).expect("generation succeeds");
        let oracle = opt_pack(&gen, 100_000_000).expect("oracle within budget");
        if oracle.opt == 0 {
            println!("seed {seed}: OPT = 0, nothing fits");
            continue;
        }
        let inst = Instance::new(gen.bbox, gen.items.clone(), oracle.opt).unwrap();
        let report = pas_solve(&inst, eps, &opts).expect("solve succeeds");
        let threshold = ceil_mul(Rational64::from_integer(1) - eps, oracle.opt);
        let size = report.packing.as_ref().map_or(0, |p| p.len());
        let valid = report
            .packing
            .as_ref()
            .map_or(false, |p| validate_packing(&inst, p).pass);
        println!(
            "seed {seed}: box {}x{}, {} items, OPT = {}, solver packed {size} (>= {threshold} required), valid = {valid}, branch = {}",
            gen.bbox.w,
            gen.bbox.h,
            gen.items.len(),
            oracle.opt,
            report.trace.branch
        );
        assert!(size >= threshold as usize && valid);
    }
}
