//! Output files written by a run.
//!
//! Three formats, all plain text:
//!
//! - `trajectory.csv`: header `t,x0..x{n-1},u0..u{m-1}`, one row per time
//!   point including the initial state; the final row has no control, its
//!   control cells are left empty.
//! - `gains.json`: the steady gain read off the final iteration's policy,
//!   keys `c` (vector), `F` (row-major matrix), `converged` (flag).
//! - `costs.csv`: header `iter,cost`, one row per iteration, 1-based.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use tracklqr::lqr::SteadyGain;
use tracklqr::problem::Trajectory;

/// Writes the trajectory table and returns the file's path.
pub fn write_trajectory_csv(dir: &Path, traj: &Trajectory, dt: f64) -> Result<PathBuf> {
    let n = traj.x[0].len();
    let m = traj.u.first().map_or(0, |u| u.len());
    let mut out = String::from("t");
    for j in 0..n {
        out.push_str(&format!(",x{j}"));
    }
    for j in 0..m {
        out.push_str(&format!(",u{j}"));
    }
    out.push('\n');
    for (k, x) in traj.x.iter().enumerate() {
        out.push_str(&format!("{}", k as f64 * dt));
        for v in x.iter() {
            out.push_str(&format!(",{v}"));
        }
        if k < traj.u.len() {
            for v in traj.u[k].iter() {
                out.push_str(&format!(",{v}"));
            }
        } else {
            // Final state row: no control was applied from here.
            out.push_str(&",".repeat(m));
        }
        out.push('\n');
    }
    let path = dir.join("trajectory.csv");
    fs::write(&path, out).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

#[derive(Serialize)]
struct GainsOut<'a> {
    c: &'a [f64],
    #[serde(rename = "F")]
    f: Vec<Vec<f64>>,
    converged: bool,
}

/// Writes the steady-gain summary and returns the file's path.
pub fn write_gains_json(dir: &Path, steady: &SteadyGain) -> Result<PathBuf> {
    let f_rows: Vec<Vec<f64>> = (0..steady.f.nrows())
        .map(|i| steady.f.row(i).iter().cloned().collect())
        .collect();
    let doc = GainsOut {
        c: steady.c.as_slice(),
        f: f_rows,
        converged: steady.converged,
    };
    let path = dir.join("gains.json");
    let text = serde_json::to_string_pretty(&doc).context("serialize gains")?;
    fs::write(&path, text + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

/// Writes the per-iteration cost table and returns the file's path.
pub fn write_costs_csv(dir: &Path, costs: &[f64]) -> Result<PathBuf> {
    let mut out = String::from("iter,cost\n");
    for (i, cost) in costs.iter().enumerate() {
        out.push_str(&format!("{},{cost}\n", i + 1));
    }
    let path = dir.join("costs.csv");
    fs::write(&path, out).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}
