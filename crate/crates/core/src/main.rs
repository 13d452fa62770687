use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use genwait::cli::catalog::{run_catalog, write_catalog, CATALOG_EXACT_CAP};
use genwait::cli::constants::{constant_report, Constant, ConstantParams};
use genwait::cli::report::write_summary;
use genwait::cli::{analyze, exit, parse_spec, AnalyzeOptions, MonteCarloOptions};
use genwait::lattice::DEFAULT_EXACT_CAP;

/// Expected number of random elements needed to generate a permutation group.
///
/// Group specs: S5, A6, C12, D7 (order 14), Q8, E(3,2), GD(1;3,5),
/// perm(4){(1 2),(1 2 3 4)}, and products such as D5*C3 on disjoint points.
///
/// Exit codes: 0 success, 1 a checked inequality failed, 2 usage or parse
/// error, 3 group too large for exact mode.
#[derive(Parser)]
#[command(name = "genwait", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact e(G), generation profile, maximal subgroups and all checks.
    Analyze {
        spec: String,
        #[command(flatten)]
        exact: ExactArgs,
        /// Also run this many Monte Carlo trials.
        #[arg(long)]
        trials: Option<u64>,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Skip the subgroup lattice; only sample (10000 trials unless --trials).
        #[arg(long)]
        montecarlo_only: bool,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimate of e(G).
    Montecarlo {
        spec: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified intervals for the Euler-product constants.
    Constants {
        #[arg(value_enum)]
        which: Constant,
        /// Largest prime in the products (n for e-abelian).
        #[arg(long, default_value_t = 1_000_000)]
        prime_bound: u64,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Terms of the k-series beyond d + 1.
        #[arg(long, default_value_t = 60)]
        k_extra: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze every built-in catalog group.
    Catalog {
        /// Glob on the spec string, e.g. "S*" or "D1?".
        #[arg(long)]
        filter: Option<String>,
        /// Directory for per-group reports and summary.csv.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = CATALOG_EXACT_CAP)]
        exact_cap: usize,
        #[arg(long)]
        k_max: Option<u32>,
        #[arg(long, default_value_t = 1_000_000)]
        prime_bound: u64,
    },
}

#[derive(Args)]
struct ExactArgs {
    /// Largest group order for exact (lattice) mode.
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    exact_cap: usize,
    /// Last k for the maximal-subgroup inequality (default d + 8).
    #[arg(long)]
    k_max: Option<u32>,
    /// Prime bound for the eta interval.
    #[arg(long, default_value_t = 1_000_000)]
    prime_bound: u64,
}

#[derive(Args)]
struct SamplingArgs {
    #[arg(long, env = "GENWAIT_SEED", default_value_t = 1)]
    seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), i32> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| {
            eprintln!("error: writing {}: {e}", path.display());
            exit::USAGE
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, i32> {
    match cli.command {
        Command::Analyze {
            spec,
            exact,
            trials,
            sampling,
            montecarlo_only,
            out,
        } => {
            let trials = trials.or(montecarlo_only.then_some(10_000));
            let options = AnalyzeOptions {
                exact_cap: exact.exact_cap,
                k_max: exact.k_max,
                prime_bound: exact.prime_bound,
                montecarlo: trials.map(|trials| MonteCarloOptions {
                    trials,
                    seed: sampling.seed,
                    workers: sampling.workers,
                }),
                montecarlo_only,
            };
            analyze_and_emit(&spec, &options, out.as_deref())
        }
        Command::Montecarlo {
            spec,
            trials,
            sampling,
            out,
        } => {
            let options = AnalyzeOptions {
                montecarlo: Some(MonteCarloOptions {
                    trials,
                    seed: sampling.seed,
                    workers: sampling.workers,
                }),
                montecarlo_only: true,
                ..AnalyzeOptions::default()
            };
            analyze_and_emit(&spec, &options, out.as_deref())
        }
        Command::Constants {
            which,
            prime_bound,
            d,
            k,
            k_extra,
            out,
        } => {
            let params = ConstantParams {
                prime_bound,
                d,
                k,
                k_extra,
            };
            let report = constant_report(which, params).map_err(|e| {
                eprintln!("error: {e}");
                exit::USAGE
            })?;
            let mut text = serde_json::to_string_pretty(&report).expect("serializes");
            text.push('\n');
            emit(&text, out.as_deref())?;
            Ok(exit::OK)
        }
        Command::Catalog {
            filter,
            out,
            exact_cap,
            k_max,
            prime_bound,
        } => {
            let options = AnalyzeOptions {
                exact_cap,
                k_max,
                prime_bound,
                ..AnalyzeOptions::default()
            };
            let entries = run_catalog(filter.as_deref(), &options).map_err(|e| {
                eprintln!("error: {e}");
                exit::USAGE
            })?;
            let rows = match &out {
                Some(dir) => write_catalog(&entries, dir).map_err(|e| {
                    eprintln!("error: {e}");
                    exit::USAGE
                })?,
                None => genwait::cli::catalog::summary_rows(&entries),
            };
            write_summary(&rows, std::io::stdout()).map_err(|e| {
                eprintln!("error: {e}");
                exit::USAGE
            })?;
            let mut code = exit::OK;
            for e in &entries {
                match &e.result {
                    Ok(a) if !a.passed() => code = code.max(exit::VERDICT_FAILED),
                    Ok(_) => {}
                    Err(err) => {
                        eprintln!("error: {}: {err}", e.spec);
                        code = code.max(if err.is_cap() { exit::CAP_EXCEEDED } else { exit::USAGE });
                    }
                }
            }
            Ok(code)
        }
    }
}

fn analyze_and_emit(spec: &str, options: &AnalyzeOptions, out: Option<&Path>) -> Result<i32, i32> {
    let spec = parse_spec(spec).map_err(|e| {
        eprintln!("error: group spec {e}");
        exit::USAGE
    })?;
    let analysis = analyze(&spec, options).map_err(|e| {
        eprintln!("error: {e}");
        if e.is_cap() {
            exit::CAP_EXCEEDED
        } else {
            exit::USAGE
        }
    })?;
    for w in &analysis.warnings {
        eprintln!("warning: {w}");
    }
    let report = analysis.report();
    emit(&report.to_json(), out)?;
    for v in report.verdicts.iter().filter(|v| !v.passed) {
        eprintln!("FAILED {}: {} vs {}", v.name, v.lhs, v.rhs);
    }
    Ok(if report.passed {
        exit::OK
    } else {
        exit::VERDICT_FAILED
    })
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(c) | Err(c) => c,
    };
    ExitCode::from(code as u8)
}
