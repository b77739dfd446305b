//! `tracklqr`: scenario-driven tracking control runs from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tracklqr::models::{scenario_defaults, SCENARIO_NAMES};
use tracklqr_cli::run::run;
use tracklqr_cli::verify::{verify, CONTROL_RTOL, COST_RTOL};

#[derive(Parser)]
#[command(
    name = "tracklqr",
    about = "Trajectory-tracking control workbench: benchmark scenarios, \
             iterative solves, solver cross-checks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a scenario configuration and write its output files
    Run {
        /// Path to a JSON scenario configuration
        #[arg(long)]
        config: PathBuf,
        /// Override the configured iteration count
        #[arg(long)]
        iterations: Option<usize>,
        /// Override the configured output directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the recursion against the batch solver on random problems
    Verify {
        /// RNG seed for problem generation
        #[arg(long)]
        seed: u64,
        /// Number of random problems
        #[arg(long)]
        cases: usize,
    },
    /// List the bundled scenarios
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run {
            config,
            iterations,
            out,
        } => {
            let outcome = run(&config, iterations, out.as_deref())?;
            println!(
                "scenario: {} ({} steps of {} s)",
                outcome.scenario, outcome.n_steps, outcome.dt
            );
            println!("iter  cost");
            for (i, cost) in outcome.costs.iter().enumerate() {
                println!("{:<4}  {cost:.6}", i + 1);
            }
            let c: Vec<String> = outcome.steady.c.iter().map(|v| format!("{v:.4}")).collect();
            println!(
                "steady gain at horizon start (settled: {}): c = [{}]",
                outcome.steady.converged,
                c.join(", ")
            );
            for i in 0..outcome.steady.f.nrows() {
                let row: Vec<String> = outcome
                    .steady
                    .f
                    .row(i)
                    .iter()
                    .map(|v| format!("{v:.4}"))
                    .collect();
                println!("  F[{i}] = [{}]", row.join(", "));
            }
            for file in &outcome.files {
                println!("wrote {}", file.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { seed, cases } => {
            let outcome = verify(seed, cases)?;
            println!(
                "{} cases: worst control deviation {:.3e} (tol {CONTROL_RTOL:.0e}), \
                 worst cost deviation {:.3e} (tol {COST_RTOL:.0e})",
                outcome.cases, outcome.worst_control, outcome.worst_cost
            );
            if outcome.pass {
                println!("PASS: recursion and batch solver agree");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("FAIL: solvers disagree beyond tolerance");
                Ok(ExitCode::FAILURE)
            }
        }
        Command::List => {
            for name in SCENARIO_NAMES {
                let s = scenario_defaults(name).expect("bundled scenario");
                println!(
                    "{:<14} {} ({} states, {} controls, dt {} s, horizon {} s, {} iterations)",
                    s.name, s.summary, s.n, s.m, s.dt, s.duration, s.iterations
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
