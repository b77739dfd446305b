//! Iterative LQR for nonlinear plants.
//!
//! Each iteration linearizes the plant along a nominal trajectory
//! `(x^i, u^i)` and solves the tracking problem *in increments* about it:
//! the increment problem reuses the weights, retargets the references,
//!
//! ```text
//!     dxd_{k+1} = xd_{k+1} - x^i_{k+1}
//!     dud_k     = ud_k     - u^i_k
//! ```
//!
//! and starts from `dx_0 = x0 - x^i_0`. The backward pass on the linearized
//! model yields increment gains `(c_k, F_k)`, and the update rule turns them
//! into the next nominal.
//!
//! The first nominal is the all-zero trajectory, so the whole initial
//! condition enters through `dx_0 = x0` and iteration 1 reproduces the plain
//! linear solve when the plant is already linear. From iteration 1 on, every
//! nominal starts at `x0` and `dx_0` is zero.
//!
//! Update rules ([`UpdateMode`]):
//!
//! - `LinearIncrement`: the increments are rolled through the *linearized*
//!   model and added to the nominal. States and controls stay consistent
//!   with the linear prediction; costs are still reported against the true
//!   plant by re-rolling each iterate's controls.
//! - `NonlinearRollout`: the new trajectory is generated by stepping the
//!   true plant while feeding back the deviation from the old nominal:
//!
//!   ```text
//!       u_k = u^i_k + c_k - F_k (x_k - x^i_k),    x_{k+1} = f_k(x_k, u_k)
//!   ```
//!
//!   so states and controls are exactly realizable on the plant at every
//!   iteration. This is the mode the bundled nonlinear scenarios use.

use nalgebra::DVector;

use crate::dynamics::{linearize_trajectory, rollout, DiscreteDynamics, DEFAULT_FD_EPS};
use crate::error::Error;
use crate::lqr::{backward_pass, forward_pass, Policy, Regularization};
use crate::problem::{tracking_cost, TrackingProblem, Trajectory};

/// Stopping rule for the iteration loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopMode {
    /// Run exactly `max_iterations` iterations.
    FixedCount,
    /// Stop early once the true-plant cost changes by less than
    /// `cost_tolerance` (relative) between consecutive iterations.
    CostDelta,
}

/// How an iteration's increments become the next nominal trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateMode {
    /// Add the linearly predicted increments to the nominal.
    LinearIncrement,
    /// Re-roll the true plant under the increment policy in feedback form.
    NonlinearRollout,
}

/// Options for [`solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IlqrOptions {
    pub max_iterations: usize,
    pub stop: StopMode,
    /// Relative cost-change threshold used by [`StopMode::CostDelta`].
    pub cost_tolerance: f64,
    pub update: UpdateMode,
    pub reg: Regularization,
    /// Probe scale for the finite-difference linearization.
    pub fd_eps: f64,
}

impl Default for IlqrOptions {
    /// One fixed iteration with the linear-increment update: the direct
    /// linearized solve about zero.
    fn default() -> Self {
        Self {
            max_iterations: 1,
            stop: StopMode::FixedCount,
            cost_tolerance: 1e-6,
            update: UpdateMode::LinearIncrement,
            reg: Regularization::default(),
            fd_eps: DEFAULT_FD_EPS,
        }
    }
}

/// Result of an iterative solve.
#[derive(Debug, Clone)]
pub struct IlqrSolution {
    /// True-plant rollout of the final controls; `trajectory.x[0]` is the
    /// problem's initial state.
    pub trajectory: Trajectory,
    /// Increment policy produced by each iteration's backward pass.
    pub policies: Vec<Policy>,
    /// True-plant tracking cost of each iteration's controls
    /// (`costs.len() == iterations`).
    pub costs: Vec<f64>,
    /// Iterations actually run (may be fewer than requested under
    /// [`StopMode::CostDelta`]).
    pub iterations: usize,
}

/// The solver's starting guess for a problem: zero controls and zero states
/// except for the fixed initial state.
pub fn initial_trajectory(problem: &TrackingProblem) -> Trajectory {
    let mut traj = Trajectory::zeros(problem.n, problem.m, problem.n_steps);
    traj.x[0] = problem.x0.clone();
    traj
}

/// Desired-value increments about a nominal trajectory: what remains of the
/// targets once the nominal is subtracted.
pub fn increment_targets(
    problem: &TrackingProblem,
    nominal: &Trajectory,
) -> (Vec<DVector<f64>>, Vec<DVector<f64>>) {
    let dx = (0..problem.n_steps)
        .map(|k| &problem.x_ref[k] - &nominal.x[k + 1])
        .collect();
    let du = (0..problem.n_steps)
        .map(|k| &problem.u_ref[k] - &nominal.u[k])
        .collect();
    (dx, du)
}

/// Applies increment sequences to a nominal trajectory.
///
/// With [`UpdateMode::LinearIncrement`] both states and controls are summed;
/// the state increment at step 0 must be zero because the initial state is
/// fixed. With [`UpdateMode::NonlinearRollout`] only the control increments
/// are taken and the states are regenerated by stepping `dynamics` from the
/// nominal's initial state.
pub fn apply_update(
    nominal: &Trajectory,
    increments: &Trajectory,
    mode: UpdateMode,
    dynamics: &dyn DiscreteDynamics,
) -> Result<Trajectory, Error> {
    if increments.n_steps() != nominal.n_steps() {
        return Err(Error::DimensionMismatch {
            context: "apply_update steps",
            expected: nominal.n_steps(),
            actual: increments.n_steps(),
        });
    }
    if increments.x[0].amax() != 0.0 {
        return Err(Error::NonzeroInitialIncrement);
    }
    let u: Vec<DVector<f64>> = nominal
        .u
        .iter()
        .zip(&increments.u)
        .map(|(un, du)| un + du)
        .collect();
    match mode {
        UpdateMode::LinearIncrement => {
            let x = nominal
                .x
                .iter()
                .zip(&increments.x)
                .map(|(xn, dx)| xn + dx)
                .collect();
            Ok(Trajectory { x, u })
        }
        UpdateMode::NonlinearRollout => rollout(dynamics, &nominal.x[0], &u),
    }
}

/// Closed-loop forward pass on the true plant: apply the increment policy in
/// feedback form around the old nominal.
fn closed_loop_rollout(
    dynamics: &dyn DiscreteDynamics,
    x0: &DVector<f64>,
    nominal: &Trajectory,
    policy: &Policy,
) -> Result<Trajectory, Error> {
    let n_steps = nominal.n_steps();
    let mut x = Vec::with_capacity(n_steps + 1);
    let mut u = Vec::with_capacity(n_steps);
    x.push(x0.clone());
    for k in 0..n_steps {
        let dx = &x[k] - &nominal.x[k];
        let uk = &nominal.u[k] + &policy.feedforward[k] - &policy.feedback[k] * dx;
        let xn = dynamics.step(k, &x[k], &uk);
        if !xn.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteState { step: k });
        }
        u.push(uk);
        x.push(xn);
    }
    Ok(Trajectory { x, u })
}

fn tag_iteration(err: Error, iteration: usize) -> Error {
    match err {
        Error::NonFiniteState { step } | Error::NonFiniteDynamics { step } => {
            Error::Diverged { iteration, step }
        }
        other => other,
    }
}

/// Iteratively solves a tracking problem on a nonlinear plant.
///
/// Iteration 0 linearizes around the all-zero trajectory; each later
/// iteration linearizes around the previous update's output. Per-iteration
/// costs are always measured by rolling that iteration's controls through
/// the true plant. Divergence (a non-finite state) is reported as an error
/// naming the iteration and step.
pub fn solve(
    problem: &TrackingProblem,
    dynamics: &dyn DiscreteDynamics,
    opts: &IlqrOptions,
) -> Result<IlqrSolution, Error> {
    if dynamics.state_dim() != problem.n {
        return Err(Error::DimensionMismatch {
            context: "ilqr state dimension",
            expected: problem.n,
            actual: dynamics.state_dim(),
        });
    }
    if dynamics.control_dim() != problem.m {
        return Err(Error::DimensionMismatch {
            context: "ilqr control dimension",
            expected: problem.m,
            actual: dynamics.control_dim(),
        });
    }

    // The all-zero nominal: its step-0 increment carries the initial
    // condition, so the first backward pass sees the whole problem.
    let mut nominal = Trajectory::zeros(problem.n, problem.m, problem.n_steps);
    let mut on_plant: Option<Trajectory> = None;
    let mut policies = Vec::new();
    let mut costs: Vec<f64> = Vec::new();

    for i in 0..opts.max_iterations.max(1) {
        let ltv = linearize_trajectory(dynamics, &nominal, opts.fd_eps)
            .map_err(|e| tag_iteration(e, i))?;
        let (x_ref, u_ref) = increment_targets(problem, &nominal);
        let inc_problem = TrackingProblem {
            n: problem.n,
            m: problem.m,
            n_steps: problem.n_steps,
            dt: problem.dt,
            q: problem.q.clone(),
            r: problem.r.clone(),
            x_ref,
            u_ref,
            x0: &problem.x0 - &nominal.x[0],
        };
        let policy = backward_pass(&ltv, &inc_problem, &opts.reg)?;

        nominal = match opts.update {
            UpdateMode::LinearIncrement => {
                let inc = forward_pass(&policy, &ltv, &inc_problem.x0)?;
                // Direct sum; inc.x[0] equals x0 - nominal.x[0] by
                // construction, so the new nominal always starts at x0.
                let x = nominal.x.iter().zip(&inc.x).map(|(a, b)| a + b).collect();
                let u = nominal.u.iter().zip(&inc.u).map(|(a, b)| a + b).collect();
                Trajectory { x, u }
            }
            UpdateMode::NonlinearRollout => {
                closed_loop_rollout(dynamics, &problem.x0, &nominal, &policy)
                    .map_err(|e| tag_iteration(e, i))?
            }
        };

        // Cost of this iterate on the true plant. Under NonlinearRollout the
        // nominal is already a plant rollout of its own controls, so re-use.
        let replay = match opts.update {
            UpdateMode::NonlinearRollout => nominal.clone(),
            UpdateMode::LinearIncrement => {
                rollout(dynamics, &problem.x0, &nominal.u).map_err(|e| tag_iteration(e, i))?
            }
        };
        let cost = tracking_cost(problem, &replay)?;
        policies.push(policy);
        costs.push(cost);
        on_plant = Some(replay);

        if opts.stop == StopMode::CostDelta && costs.len() >= 2 {
            let prev = costs[costs.len() - 2];
            let delta = (cost - prev).abs();
            if delta <= opts.cost_tolerance * prev.abs().max(1.0) {
                break;
            }
        }
    }

    let iterations = costs.len();
    Ok(IlqrSolution {
        // Guaranteed present: the loop body runs at least once.
        trajectory: on_plant.expect("at least one iteration"),
        policies,
        costs,
        iterations,
    })
}
