//! The `run` subcommand: load a configuration, solve it, write outputs.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use tracklqr::ilqr::solve;
use tracklqr::lqr::{steady_gain, SteadyGain};

use crate::config::{load, resolve, Formats};
use crate::report::{write_costs_csv, write_gains_json, write_trajectory_csv};

/// Everything `main` needs to describe a finished run.
pub struct RunOutcome {
    pub scenario: &'static str,
    pub n_steps: usize,
    pub dt: f64,
    /// True-plant cost after each iteration.
    pub costs: Vec<f64>,
    /// Steady gain of the final iteration's policy.
    pub steady: SteadyGain,
    /// Files actually written, in writing order.
    pub files: Vec<PathBuf>,
}

/// Executes a configuration file. `iterations` and `out_dir` are the
/// command-line overrides.
pub fn run(
    config_path: &Path,
    iterations: Option<usize>,
    out_dir: Option<&Path>,
) -> Result<RunOutcome> {
    let cfg = load(config_path)?;
    let resolved = resolve(&cfg, iterations, out_dir)?;

    let solution = solve(
        &resolved.problem,
        resolved.dynamics.as_ref(),
        &resolved.options,
    )
    .with_context(|| format!("solving scenario '{}'", resolved.scenario.name))?;
    let steady = steady_gain(solution.policies.last().expect("at least one iteration"));

    let Formats {
        trajectory,
        gains,
        costs,
    } = resolved.formats;
    fs::create_dir_all(&resolved.out_dir)
        .with_context(|| format!("cannot create {}", resolved.out_dir.display()))?;
    let mut files = Vec::new();
    if trajectory {
        files.push(write_trajectory_csv(
            &resolved.out_dir,
            &solution.trajectory,
            resolved.problem.dt,
        )?);
    }
    if gains {
        files.push(write_gains_json(&resolved.out_dir, &steady)?);
    }
    if costs {
        files.push(write_costs_csv(&resolved.out_dir, &solution.costs)?);
    }

    Ok(RunOutcome {
        scenario: resolved.scenario.name,
        n_steps: resolved.problem.n_steps,
        dt: resolved.problem.dt,
        costs: solution.costs,
        steady,
        files,
    })
}
