use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use slatepath_cli::commands::{
    self, BenchArgs, CheckArgs, CliError, ColgenArgs, SolveArgs,
};

/// Optimal ordered ad slates under generalized second-price pricing, plus a
/// budget-constrained allocation LP driven by column generation.
#[derive(Parser)]
#[command(name = "slatepath", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file and print the optimal slate.
    Solve {
        /// Instance file (JSON).
        file: PathBuf,
        /// Objective: bid, revenue, or hybrid.
        #[arg(long, default_value = "revenue")]
        mode: String,
        /// Solver engine: dp, path, or both (both asserts agreement).
        #[arg(long, default_value = "path")]
        engine: String,
        /// Exclusion mask over ranked ads: a 0/1 bitstring, or `auto` to use
        /// the per-bidder excludable flags.
        #[arg(long)]
        mask: Option<String>,
        /// Permit the empty slate as an answer (path engine only).
        #[arg(long)]
        allow_empty: bool,
        /// Print the network edge list before solving.
        #[arg(long)]
        emit_network: bool,
        /// Machine-readable output (timings omitted).
        #[arg(long)]
        json: bool,
    },
    /// Cross-check the solvers against the enumeration oracle on fixtures
    /// and seeded random instances. Exits 2 on any mismatch.
    Check {
        /// Directory of fixture files to include.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Number of randomized instances.
        #[arg(long, default_value_t = 300)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Time per-query solves on seeded random instances, setup included.
    Bench {
        #[arg(long, default_value_t = 5000)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        positions: usize,
        #[arg(long, default_value_t = 77)]
        max_ads: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Machine-readable output (deterministic: no timings).
        #[arg(long)]
        json: bool,
    },
    /// Solve an allocation problem file by column generation.
    Colgen {
        /// Problem file (JSON with a `queries` array).
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve {
            file,
            mode,
            engine,
            mask,
            allow_empty,
            emit_network,
            json,
        } => {
            let report = commands::run_solve(&SolveArgs {
                file,
                mode,
                engine,
                mask,
                allow_empty,
                emit_network,
            })?;
            if let Some(network) = &report.network {
                print!("{network}");
            }
            if json {
                println!("{}", serde_json::to_string(&report).expect("serializable"));
            } else {
                println!("slate: {:?}", report.slate);
                println!(
                    "prices: [{}]",
                    report
                        .prices
                        .iter()
                        .map(|p| format!("{p:.6}"))
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                println!("value: {:.9}", report.value);
                println!("mode: {}", report.mode);
                match (report.dp_micros, report.path_micros) {
                    (Some(d), Some(p)) => {
                        println!("engine: both (dp {d:.1} us, path {p:.1} us, agree)")
                    }
                    (Some(d), None) => println!("engine: dp ({d:.1} us)"),
                    (None, Some(p)) => println!("engine: path ({p:.1} us)"),
                    (None, None) => {}
                }
            }
            Ok(())
        }
        Command::Check {
            fixtures,
            count,
            seed,
            json,
        } => {
            let (report, notes) = commands::run_check(&CheckArgs {
                fixtures,
                count,
                seed,
            })?;
            if json {
                println!("{}", serde_json::to_string(&report).expect("serializable"));
            } else {
                println!(
                    "checked {} fixtures and {} random instances: {} comparisons, {} mismatches, max rel err {:.3e}",
                    report.fixtures_checked,
                    report.count,
                    report.comparisons,
                    report.mismatches,
                    report.max_rel_err
                );
                for note in &notes {
                    println!("  mismatch: {note}");
                }
            }
            if report.mismatches > 0 {
                return Err(CliError::Mismatch(format!(
                    "{} of {} comparisons disagreed",
                    report.mismatches, report.comparisons
                )));
            }
            Ok(())
        }
        Command::Bench {
            count,
            positions,
            max_ads,
            seed,
            json,
        } => {
            let args = BenchArgs {
                count,
                positions,
                max_ads,
                seed,
            };
            commands::validate_bench_args(&args)?;
            let report = commands::run_bench(&args);
            if json {
                println!("{}", serde_json::to_string(&report).expect("serializable"));
            } else {
                println!(
                    "{} queries, {} positions, 1..={} ads, seed {}",
                    report.count, report.positions, report.max_ads, report.seed
                );
                let t = &report.timing;
                println!(
                    "per-query solve incl. setup: mean {:.2} us, median {:.2} us, p99 {:.2} us, min {:.2} us, max {:.2} us",
                    t.mean_us, t.median_us, t.p99_us, t.min_us, t.max_us
                );
                println!("total {:.1} ms, mean slate length {:.2}", t.total_ms, report.mean_slate_len);
                println!("digest: {}", report.digest);
            }
            Ok(())
        }
        Command::Colgen {
            file,
            max_iters,
            tol,
            json,
        } => {
            let report = commands::run_colgen_cmd(&ColgenArgs {
                file,
                max_iters,
                tolerance: tol,
            })?;
            if json {
                println!("{}", serde_json::to_string(&report).expect("serializable"));
            } else {
                println!("objective: {:.9}", report.objective);
                println!(
                    "converged: {} after {} iterations, {} columns",
                    report.converged, report.iterations, report.columns
                );
                println!("budget duals: {:?}", report.budget_duals);
                println!("inventory duals: {:?}", report.inventory_duals);
                println!("allocations:");
                for a in &report.allocations {
                    println!("  query {} slate {:?} x {:.4}", a.query, a.slate, a.showings);
                }
                println!("iter, objective, new_columns, max_reduced_cost");
                for l in &report.log {
                    println!(
                        "{}, {:.9}, {}, {:.3e}",
                        l.iter, l.objective, l.new_columns, l.max_reduced_cost
                    );
                }
            }
            Ok(())
        }
    }
}
