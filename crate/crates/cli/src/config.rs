//! Scenario configuration: a strict JSON schema plus its resolution against
//! the bundled scenario defaults.
//!
//! Unknown fields anywhere in the document are rejected, as are conflicting
//! fields (`duration` with `steps`, a desired-value table with inline
//! desired values). Every omitted field falls back to the named scenario's
//! pinned defaults, so `{"system": "rayleigh"}` is a complete configuration.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use tracklqr::dynamics::DiscreteDynamics;
use tracklqr::ilqr::{IlqrOptions, StopMode, UpdateMode};
use tracklqr::lqr::{Regularization, RegularizationMode};
use tracklqr::models::{scenario_defaults, steps_for, Scenario};
use tracklqr::problem::{validate, TrackingProblem, WeightSpec};

/// Top-level scenario configuration, one JSON document per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Bundled scenario name (see `tracklqr list`).
    pub system: String,
    /// Step length in seconds. Scenario default when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Horizon in seconds; exclusive with `steps`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    /// Horizon in steps; exclusive with `duration`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Solver iterations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    /// How each iteration's increments become the next trajectory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub update_mode: Option<UpdateModeCfg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsCfg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub desired: Option<DesiredCfg>,
    /// Initial state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regularization: Option<RegularizationCfg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<OutputsCfg>,
}

/// JSON spelling of the update rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateModeCfg {
    LinearIncrement,
    NonlinearRollout,
}

impl From<UpdateModeCfg> for UpdateMode {
    fn from(value: UpdateModeCfg) -> Self {
        match value {
            UpdateModeCfg::LinearIncrement => UpdateMode::LinearIncrement,
            UpdateModeCfg::NonlinearRollout => UpdateMode::NonlinearRollout,
        }
    }
}

/// Diagonal weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsCfg {
    pub q_diag: Vec<f64>,
    pub r_diag: Vec<f64>,
}

/// Desired values: either constant vectors (`x` and `u` together) or a CSV
/// table (`path`) with one row per step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesiredCfg {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

/// JSON spelling of the regularization trigger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularizationModeCfg {
    Always,
    OnIllCondition,
}

/// Regularization overrides; omitted fields keep the library defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularizationCfg {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<RegularizationModeCfg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_threshold: Option<f64>,
}

/// Output selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsCfg {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<PathBuf>,
    /// Subset of "trajectory", "gains", "costs". All three when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formats: Option<Vec<String>>,
}

/// Which output files a run writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub trajectory: bool,
    pub gains: bool,
    pub costs: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Self {
            trajectory: true,
            gains: true,
            costs: true,
        }
    }
}

/// A configuration resolved against its scenario: everything the solver and
/// the report writers need.
pub struct ResolvedRun {
    pub scenario: Scenario,
    pub problem: TrackingProblem,
    pub dynamics: Box<dyn DiscreteDynamics>,
    pub options: IlqrOptions,
    pub out_dir: PathBuf,
    pub formats: Formats,
}

/// Reads and parses a configuration file, rejecting unknown fields.
pub fn load(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let cfg: ScenarioConfig = serde_json::from_str(&text)
        .with_context(|| format!("invalid config {}", path.display()))?;
    Ok(cfg)
}

/// Resolves a configuration against the bundled scenario defaults.
/// `iterations_override` and `out_override` are the command-line flags,
/// which beat the file.
pub fn resolve(
    cfg: &ScenarioConfig,
    iterations_override: Option<usize>,
    out_override: Option<&Path>,
) -> Result<ResolvedRun> {
    let scenario = scenario_defaults(&cfg.system)?;

    let dt = cfg.dt.unwrap_or(scenario.dt);
    if !(dt > 0.0 && dt.is_finite()) {
        bail!("dt must be positive and finite, got {dt}");
    }

    let n_steps = match (cfg.duration, cfg.steps) {
        (Some(_), Some(_)) => bail!("duration and steps are mutually exclusive; give one"),
        (None, Some(steps)) => {
            if steps == 0 {
                bail!("steps must be at least 1");
            }
            steps
        }
        (Some(duration), None) => {
            if !(duration > 0.0 && duration.is_finite()) {
                bail!("duration must be positive and finite, got {duration}");
            }
            steps_for(duration, dt)
        }
        (None, None) => steps_for(scenario.duration, dt),
    };

    let weights = match &cfg.weights {
        Some(w) => {
            if w.q_diag.len() != scenario.n {
                bail!(
                    "weights.q_diag has {} entries, {} needs {}",
                    w.q_diag.len(),
                    scenario.name,
                    scenario.n
                );
            }
            if w.r_diag.len() != scenario.m {
                bail!(
                    "weights.r_diag has {} entries, {} needs {}",
                    w.r_diag.len(),
                    scenario.name,
                    scenario.m
                );
            }
            WeightSpec::new(w.q_diag.clone(), w.r_diag.clone())
        }
        None => WeightSpec::new(scenario.q_diag.clone(), scenario.r_diag.clone()),
    };

    let x0 = match &cfg.x0 {
        Some(x0) => {
            if x0.len() != scenario.n {
                bail!(
                    "x0 has {} entries, {} needs {}",
                    x0.len(),
                    scenario.name,
                    scenario.n
                );
            }
            x0.clone()
        }
        None => scenario.x0.clone(),
    };

    let problem = build_problem(&scenario, cfg, dt, n_steps, &weights, &x0)?;
    let violations = validate(&problem);
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        bail!(
            "configuration produces an ill-formed problem: {}",
            lines.join("; ")
        );
    }

    let iterations = iterations_override
        .or(cfg.iterations)
        .unwrap_or(scenario.iterations);
    if iterations == 0 {
        bail!("iterations must be at least 1");
    }

    let update = cfg
        .update_mode
        .map(UpdateMode::from)
        .unwrap_or(scenario.update);

    let defaults = Regularization::default();
    let reg = match &cfg.regularization {
        Some(r) => {
            let lambda = r.lambda.unwrap_or(defaults.lambda);
            if lambda < 0.0 {
                bail!("regularization.lambda must be nonnegative, got {lambda}");
            }
            Regularization {
                lambda,
                mode: match r.mode {
                    Some(RegularizationModeCfg::Always) => RegularizationMode::Always,
                    Some(RegularizationModeCfg::OnIllCondition) | None => defaults.mode,
                },
                condition_threshold: r
                    .condition_threshold
                    .unwrap_or(defaults.condition_threshold),
            }
        }
        None => defaults,
    };

    let (out_dir, formats) = match &cfg.outputs {
        Some(o) => {
            let dir = o.directory.clone().unwrap_or_else(|| PathBuf::from("out"));
            let formats = match &o.formats {
                Some(names) => {
                    let mut f = Formats {
                        trajectory: false,
                        gains: false,
                        costs: false,
                    };
                    for name in names {
                        match name.as_str() {
                            "trajectory" => f.trajectory = true,
                            "gains" => f.gains = true,
                            "costs" => f.costs = true,
                            other => bail!(
                                "unknown output format '{other}' (expected trajectory, gains, costs)"
                            ),
                        }
                    }
                    f
                }
                None => Formats::default(),
            };
            (dir, formats)
        }
        None => (PathBuf::from("out"), Formats::default()),
    };
    let out_dir = out_override.map(Path::to_path_buf).unwrap_or(out_dir);

    Ok(ResolvedRun {
        dynamics: scenario.dynamics(dt),
        problem,
        options: IlqrOptions {
            max_iterations: iterations,
            stop: StopMode::FixedCount,
            update,
            reg,
            ..IlqrOptions::default()
        },
        out_dir,
        formats,
        scenario,
    })
}

fn build_problem(
    scenario: &Scenario,
    cfg: &ScenarioConfig,
    dt: f64,
    n_steps: usize,
    weights: &WeightSpec,
    x0: &[f64],
) -> Result<TrackingProblem> {
    match &cfg.desired {
        None => Ok(TrackingProblem::constant(
            n_steps,
            dt,
            weights,
            &scenario.x_ref,
            &scenario.u_ref,
            x0,
        )),
        Some(d) => match (&d.x, &d.u, &d.path) {
            (Some(x), Some(u), None) => {
                if x.len() != scenario.n || u.len() != scenario.m {
                    bail!(
                        "desired.x/u must have {} and {} entries for {}",
                        scenario.n,
                        scenario.m,
                        scenario.name
                    );
                }
                Ok(TrackingProblem::constant(n_steps, dt, weights, x, u, x0))
            }
            (None, None, Some(path)) => {
                let (x_ref, u_ref) = load_desired_table(path, scenario.n, scenario.m, n_steps)?;
                let mut p = TrackingProblem::constant(
                    n_steps,
                    dt,
                    weights,
                    &scenario.x_ref,
                    &scenario.u_ref,
                    x0,
                );
                p.x_ref = x_ref;
                p.u_ref = u_ref;
                Ok(p)
            }
            _ => bail!("desired must be either x and u together, or path alone"),
        },
    }
}

/// Desired state sequence and desired control sequence, one entry per step.
type DesiredSeqs = (Vec<nalgebra::DVector<f64>>, Vec<nalgebra::DVector<f64>>);

/// Loads a per-step desired-value table: CSV with header
/// `x0,..,x{n-1},u0,..,u{m-1}` and exactly one row per step. Row k holds the
/// desired state for step k+1 and the desired control for step k.
fn load_desired_table(path: &Path, n: usize, m: usize, n_steps: usize) -> Result<DesiredSeqs> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read desired-value table {}", path.display()))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines
        .next()
        .context("desired-value table is empty")?
        .split(',')
        .map(str::trim)
        .collect();
    let expected: Vec<String> = (0..n)
        .map(|j| format!("x{j}"))
        .chain((0..m).map(|j| format!("u{j}")))
        .collect();
    if header != expected.iter().map(String::as_str).collect::<Vec<_>>() {
        bail!(
            "desired-value table header must be {}, got {}",
            expected.join(","),
            header.join(",")
        );
    }
    let mut x_ref = Vec::with_capacity(n_steps);
    let mut u_ref = Vec::with_capacity(n_steps);
    for (row, line) in lines.enumerate() {
        let values: Vec<f64> = line
            .split(',')
            .map(|cell| {
                cell.trim()
                    .parse::<f64>()
                    .with_context(|| format!("row {}: bad number '{}'", row + 1, cell.trim()))
            })
            .collect::<Result<_>>()?;
        if values.len() != n + m {
            bail!(
                "row {}: expected {} values, got {}",
                row + 1,
                n + m,
                values.len()
            );
        }
        x_ref.push(nalgebra::DVector::from_row_slice(&values[..n]));
        u_ref.push(nalgebra::DVector::from_row_slice(&values[n..]));
    }
    if x_ref.len() != n_steps {
        bail!(
            "desired-value table has {} rows but the horizon has {} steps",
            x_ref.len(),
            n_steps
        );
    }
    Ok((x_ref, u_ref))
}
