//! Independent batch solution of the linear tracking problem.
//!
//! Instead of stepping a recursion, the whole control sequence is found in
//! one shot. Stacking the controls as `z = (u_0, ..., u_{N-1})` and expanding
//! the reached states affinely,
//!
//! ```text
//!     X = Sx x0 + Su z,        X = (x_1, ..., x_N)
//! ```
//!
//! the tracking cost becomes an unconstrained quadratic in z whose normal
//! equations are
//!
//! ```text
//!     (Su' Qb Su + Rb) z = Su' Qb (Xd - Sx x0) + Rb Ud
//! ```
//!
//! with `Qb`, `Rb` the block-diagonal stacked weights. This is O((N m)^3)
//! and exists purely to cross-check the recursion at small sizes; it shares
//! the problem types and the cost evaluator with the rest of the crate but
//! no solver code, and it factorizes with LU where the recursion uses
//! Cholesky.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::lqr::{Regularization, RegularizationMode};
use crate::problem::{tracking_cost, LtvModel, TrackingProblem, Trajectory};

/// Largest stacked control dimension (`N * m`) the batch solver accepts.
pub const MAX_BATCH: usize = 512;

/// Result of a batch solve.
#[derive(Debug, Clone)]
pub struct BatchSolution {
    /// The minimizing control sequence `u_0..u_{N-1}`.
    pub controls: Vec<DVector<f64>>,
    /// Rollout of those controls through the linear model.
    pub trajectory: Trajectory,
    /// Tracking cost of that trajectory.
    pub cost: f64,
}

/// Solves the tracking problem by stacked least squares.
///
/// Weights may be positive semidefinite; if the normal-equation matrix is
/// ill conditioned it receives the same Levenberg-style diagonal shift the
/// recursion applies to its gain denominators (default [`Regularization`]).
pub fn solve_batch(model: &LtvModel, problem: &TrackingProblem) -> Result<BatchSolution, Error> {
    let n = problem.n;
    let m = problem.m;
    let n_steps = problem.n_steps;
    if model.n_steps() != n_steps {
        return Err(Error::DimensionMismatch {
            context: "batch model steps",
            expected: n_steps,
            actual: model.n_steps(),
        });
    }
    if model.state_dim() != n || model.control_dim() != m {
        return Err(Error::DimensionMismatch {
            context: "batch model dims",
            expected: n + m,
            actual: model.state_dim() + model.control_dim(),
        });
    }
    let nm = n_steps * m;
    if nm > MAX_BATCH {
        return Err(Error::BatchTooLarge {
            actual: nm,
            limit: MAX_BATCH,
        });
    }

    // State expansion X = Sx x0 + Su z, built row-block by row-block:
    // row k holds Phi_{k+1} = A_k ... A_0 and G_{k+1,j} = A_k ... A_{j+1} B_j.
    let mut sx = DMatrix::zeros(n_steps * n, n);
    let mut su = DMatrix::zeros(n_steps * n, nm);
    let mut phi = DMatrix::identity(n, n);
    let mut gains: Vec<DMatrix<f64>> = Vec::with_capacity(n_steps);
    for k in 0..n_steps {
        phi = &model.a[k] * &phi;
        sx.view_mut((k * n, 0), (n, n)).copy_from(&phi);
        for g in gains.iter_mut() {
            *g = &model.a[k] * &*g;
        }
        gains.push(model.b[k].clone());
        for (j, g) in gains.iter().enumerate() {
            su.view_mut((k * n, j * m), (n, m)).copy_from(g);
        }
    }

    // Stacked weights and targets.
    let mut qb = DMatrix::zeros(n_steps * n, n_steps * n);
    let mut rb = DMatrix::zeros(nm, nm);
    let mut xd = DVector::zeros(n_steps * n);
    let mut ud = DVector::zeros(nm);
    for k in 0..n_steps {
        qb.view_mut((k * n, k * n), (n, n)).copy_from(&problem.q[k]);
        rb.view_mut((k * m, k * m), (m, m)).copy_from(&problem.r[k]);
        xd.rows_mut(k * n, n).copy_from(&problem.x_ref[k]);
        ud.rows_mut(k * m, m).copy_from(&problem.u_ref[k]);
    }

    let e = xd - &sx * &problem.x0;
    let mut h = su.transpose() * &qb * &su + &rb;
    let g = su.transpose() * &qb * e + &rb * ud;

    // Same shift policy as the recursion's gain denominators.
    let reg = Regularization::default();
    let shift = match reg.mode {
        RegularizationMode::Always => true,
        RegularizationMode::OnIllCondition => {
            let eigs = h.symmetric_eigenvalues();
            let largest = eigs.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
            largest == 0.0 || {
                let smallest = eigs.iter().fold(f64::INFINITY, |acc, e| acc.min(e.abs()));
                smallest / largest < reg.condition_threshold
            }
        }
    };
    if shift {
        for i in 0..nm {
            h[(i, i)] += reg.lambda;
        }
    }

    let z = h.lu().solve(&g).ok_or(Error::SingularBatch)?;

    let controls: Vec<DVector<f64>> = (0..n_steps)
        .map(|k| DVector::from(z.rows(k * m, m).clone_owned()))
        .collect();

    // Plain rollout through the linear model; deliberately not the
    // recursion's forward pass.
    let mut x = Vec::with_capacity(n_steps + 1);
    x.push(problem.x0.clone());
    for k in 0..n_steps {
        let xn = &model.a[k] * &x[k] + &model.b[k] * &controls[k];
        x.push(xn);
    }
    let trajectory = Trajectory {
        x,
        u: controls.clone(),
    };
    let cost = tracking_cost(problem, &trajectory)?;
    Ok(BatchSolution {
        controls,
        trajectory,
        cost,
    })
}
