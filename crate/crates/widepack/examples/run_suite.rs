//! Runs a small seeded suite: generate, solve with k = oracle OPT, check
//! validity and the guarantee, and print the aggregate table.

use widepack::model::GenProfile;
use widepack::suite::{run_suite, BudgetProfile, SuiteSpec};

fn main() {
    let spec = SuiteSpec {
        name: "desk-demo".into(),
        profile: GenProfile::desk(5, 5),
        epsilons: vec!["1/2".into(), "1/3".into()],
        seeds: (0..8).collect(),
        budgets: BudgetProfile::default(),
    };
    let report = run_suite(&spec).expect("suite runs");
    print!("{}", report.table());
}
