//! Command-line front end over the library: solving, exact feasibility,
//! oracle runs, validation, structural transforms, instance generation,
//! rendering, and suite execution. All input and output is JSON (SVG for
//! `render`); `-` reads stdin / writes stdout.

use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use widepack::colorcode::ColoringMode;
use widepack::exact::{exact_pack, ExactQuery, PackOutcome, DEFAULT_NODE_BUDGET};
use widepack::model::{generate_instance, parse_ratio, validate_packing, GenProfile};
use widepack::oracle::opt_pack;
use widepack::render::{render_packing, render_structured};
use widepack::solver::{pas_solve, SolveOptions};
use widepack::structure::{structural_transform, verify_structured};
use widepack::suite::{run_suite, SuiteSpec};
use widepack::{Error, Instance, Packing, Rect, Region, Result};

#[derive(Parser)]
#[command(name = "widepack", about = "2D knapsack solver for wide rectangles", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Budgets {
    /// Node budget per exact-packing query.
    #[arg(long = "budget-exact", default_value_t = DEFAULT_NODE_BUDGET)]
    exact: u64,
    /// Node budget for oracle runs.
    #[arg(long = "budget-oracle", default_value_t = 200_000_000)]
    oracle: u64,
    /// Cap on enumerated polylines per DP run.
    #[arg(long = "budget-polylines", default_value_t = 64)]
    polylines: usize,
    /// Cap on DP transitions.
    #[arg(long = "budget-pairs", default_value_t = 20_000)]
    pairs: usize,
    /// Cap on candidate subsets per region.
    #[arg(long = "budget-subsets", default_value_t = 100_000)]
    subsets: usize,
    /// Cap on the exhaustive coloring family size.
    #[arg(long = "budget-colorings", default_value_t = 1_000_000)]
    colorings: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance: packing of size >= (1-eps)k, a no-packing verdict,
    /// or an inconclusive budget report.
    Solve {
        /// Instance JSON path (`-` for stdin).
        instance: String,
        /// Accuracy as an exact rational, e.g. `1/2`.
        #[arg(long, default_value = "1/2")]
        epsilon: String,
        /// `exhaustive` or `randomized`.
        #[arg(long = "coloring-mode", default_value = "exhaustive")]
        coloring_mode: String,
        #[arg(long = "coloring-seed", default_value_t = 0)]
        coloring_seed: u64,
        #[arg(long = "coloring-failure-bound", default_value_t = 0.01)]
        coloring_failure_bound: f64,
        #[command(flatten)]
        budgets: Budgets,
        /// Output path (`-` for stdout).
        #[arg(long, default_value = "-")]
        output: String,
    },
    /// Decide whether a rectangle multiset packs into a box.
    Exact {
        /// Box as `WxH`, e.g. `4x3`.
        #[arg(long = "box")]
        bbox: String,
        /// Comma-separated rectangles, e.g. `2x1,2x1,1x3`.
        #[arg(long)]
        rects: String,
        #[command(flatten)]
        budgets: Budgets,
        #[arg(long, default_value = "-")]
        output: String,
    },
    /// Brute-force optimum packable subset size with a witness.
    Oracle {
        instance: String,
        #[command(flatten)]
        budgets: Budgets,
        #[arg(long, default_value = "-")]
        output: String,
    },
    /// Validate a packing against an instance.
    Verify {
        instance: String,
        packing: String,
        #[arg(long, default_value = "-")]
        output: String,
    },
    /// Structural transform of a valid packing; emits the structured dump
    /// and its verification report.
    Structure {
        instance: String,
        packing: String,
        #[arg(long, default_value = "1/2")]
        epsilon: String,
        /// Half-width threshold (every item must have width >= 2*ell).
        #[arg(long)]
        ell: i64,
        #[arg(long, default_value = "-")]
        output: String,
    },
    /// Generate a seeded instance from a profile.
    Gen {
        #[arg(long)]
        seed: u64,
        /// Profile JSON path; defaults to the desk-scale profile.
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long, default_value = "-")]
        output: String,
    },
    /// Render a packing (optionally with its structural polylines) as SVG.
    Render {
        instance: String,
        packing: String,
        /// With `--ell`, overlays the separating polylines of the
        /// structural transform.
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long)]
        ell: Option<i64>,
        #[arg(long, default_value = "-")]
        output: String,
    },
    /// Run a suite spec: generate, solve, oracle-check every case.
    Suite {
        spec: String,
        /// Also print the plain-text table to stderr.
        #[arg(long)]
        table: bool,
        #[arg(long, default_value = "-")]
        output: String,
    },
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn write_output(path: &str, content: &str) -> Result<()> {
    if path == "-" {
        use std::io::Write;
        let mut out = std::io::stdout();
        // Ignore broken pipes so `widepack ... | head` exits quietly.
        let _ = out.write_all(content.as_bytes());
        if !content.ends_with('\n') {
            let _ = out.write_all(b"\n");
        }
    } else {
        fs::write(path, content)?;
    }
    Ok(())
}

fn parse_dims(text: &str) -> Result<(i64, i64)> {
    let (w, h) = text
        .split_once('x')
        .ok_or_else(|| Error::InvalidInstance(format!("expected WxH, got {text:?}")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| Error::InvalidInstance(format!("bad dimension {s:?}")))
    };
    Ok((parse(w)?, parse(h)?))
}

fn load_instance(path: &str) -> Result<Instance> {
    Instance::from_json(&read_input(path)?)
}

fn load_packing(path: &str, inst: &Instance) -> Result<Packing> {
    Packing::from_json(&read_input(path)?, inst)
}

fn solve_options(
    budgets: &Budgets,
    mode: &str,
    seed: u64,
    failure_bound: f64,
) -> Result<SolveOptions> {
    let coloring_mode = match mode {
        "exhaustive" => ColoringMode::Exhaustive,
        "randomized" => ColoringMode::Randomized { seed },
        other => {
            return Err(Error::Coloring(format!(
                "unknown coloring mode {other:?} (expected exhaustive or randomized)"
            )))
        }
    };
    Ok(SolveOptions {
        coloring_mode,
        coloring_failure_bound: failure_bound,
        coloring_budget: budgets.colorings,
        exact_node_budget: budgets.exact,
        polyline_budget: budgets.polylines,
        pair_budget: budgets.pairs,
        subset_budget: budgets.subsets,
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            instance,
            epsilon,
            coloring_mode,
            coloring_seed,
            coloring_failure_bound,
            budgets,
            output,
        } => {
            let inst = load_instance(&instance)?;
            let eps = parse_ratio(&epsilon)?;
            let opts = solve_options(&budgets, &coloring_mode, coloring_seed, coloring_failure_bound)?;
            let report = pas_solve(&inst, eps, &opts)?;
            write_output(&output, &report.to_json())
        }
        Command::Exact { bbox, rects, budgets, output } => {
            let (w, h) = parse_dims(&bbox)?;
            let rect_list: Vec<Rect> = rects
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse_dims(s).map(|(w, h)| Rect::new(w, h)))
                .collect::<Result<_>>()?;
            let q = ExactQuery::new(rect_list, Region::full(widepack::BBox::new(w, h)))
                .with_budget(budgets.exact);
            let (outcome, stats) = exact_pack(&q);
            let v = match outcome {
                PackOutcome::Packed(slots) => serde_json::json!({
                    "feasible": true,
                    "placements": slots.iter().map(|p| {
                        serde_json::json!({"w": p.rect.w, "h": p.rect.h, "x": p.x, "y": p.y})
                    }).collect::<Vec<_>>(),
                    "nodes": stats.nodes,
                }),
                PackOutcome::Infeasible => {
                    serde_json::json!({"feasible": false, "nodes": stats.nodes})
                }
                PackOutcome::BudgetExceeded => {
                    serde_json::json!({"feasible": null, "budget_exceeded": true, "nodes": stats.nodes})
                }
            };
            write_output(&output, &serde_json::to_string_pretty(&v).expect("serializes"))
        }
        Command::Oracle { instance, budgets, output } => {
            let inst = load_instance(&instance)?;
            let res = opt_pack(&inst, budgets.oracle)?;
            let v = serde_json::json!({
                "opt": res.opt,
                "witness": serde_json::from_str::<serde_json::Value>(&res.witness.to_json()).unwrap(),
                "nodes": res.nodes,
            });
            write_output(&output, &serde_json::to_string_pretty(&v).expect("serializes"))
        }
        Command::Verify { instance, packing, output } => {
            let inst = load_instance(&instance)?;
            let pk = load_packing(&packing, &inst)?;
            let report = validate_packing(&inst, &pk);
            let v = serde_json::json!({"pass": report.pass, "violation": report.violation});
            write_output(&output, &serde_json::to_string_pretty(&v).expect("serializes"))
        }
        Command::Structure { instance, packing, epsilon, ell, output } => {
            let inst = load_instance(&instance)?;
            let pk = load_packing(&packing, &inst)?;
            let report = validate_packing(&inst, &pk);
            if !report.pass {
                return Err(Error::Precondition(format!(
                    "input packing invalid: {}",
                    report.violation.unwrap_or_default()
                )));
            }
            let eps = parse_ratio(&epsilon)?;
            let sp = structural_transform(&pk, inst.bbox, eps, ell)?;
            let check = verify_structured(&sp);
            let mut dump: serde_json::Value = serde_json::from_str(&sp.to_json())?;
            dump["verify"] = serde_json::json!({"pass": check.pass, "failures": check.failures});
            write_output(&output, &serde_json::to_string_pretty(&dump).expect("serializes"))
        }
        Command::Gen { seed, profile, output } => {
            let profile = match profile {
                Some(path) => serde_json::from_str(&fs::read_to_string(path)?)?,
                None => GenProfile::desk(6, 6),
            };
            let inst = generate_instance(seed, &profile)?;
            write_output(&output, &inst.to_json())
        }
        Command::Render { instance, packing, epsilon, ell, output } => {
            let inst = load_instance(&instance)?;
            let pk = load_packing(&packing, &inst)?;
            let svg = match ell {
                Some(ell) => {
                    let eps = parse_ratio(epsilon.as_deref().unwrap_or("1/2"))?;
                    let sp = structural_transform(&pk, inst.bbox, eps, ell)?;
                    render_structured(&sp)
                }
                None => render_packing(&inst, &pk),
            };
            write_output(&output, &svg)
        }
        Command::Suite { spec, table, output } => {
            let spec = SuiteSpec::from_json(&read_input(&spec)?)?;
            let report = run_suite(&spec)?;
            if table {
                eprint!("{}", report.table());
            }
            write_output(&output, &report.to_json())?;
            if !report.pass {
                std::process::exit(1);
            }
            Ok(())
        }
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
