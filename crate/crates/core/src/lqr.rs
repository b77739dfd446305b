//! Exact solution of the linear tracking problem by backward recursion.
//!
//! Walking the horizon backwards with terminal cost-to-go zero
//! (`P_N = 0`, `v_N = 0`), each step computes
//!
//! ```text
//!     M_k = Q_k + P_{k+1}
//!     W_k = B_k' M_k B_k + R_k                       (+ lambda I, see below)
//!     c_k = W_k^{-1} [ B_k' (Q_k xd_{k+1} + v_{k+1}) + R_k ud_k ]
//!     F_k = W_k^{-1} [ B_k' M_k A_k ]
//!     Z_k = A_k - B_k F_k
//!     P_k = Z_k' M_k Z_k + F_k' R_k F_k
//!     v_k = Z_k' (Q_k xd_{k+1} + v_{k+1} - M_k B_k c_k) + F_k' R_k (c_k - ud_k)
//! ```
//!
//! giving the affine policy `u_k = c_k - F_k x_k` that minimizes the tracking
//! cost from any state. `P_k` / `v_k` are the quadratic and linear
//! coefficients of the optimal cost-to-go from step k; the minimized cost
//! from state `x` at step k is `x' P_k x - 2 v_k' x + const`.
//!
//! `W_k` is symmetric positive semidefinite by construction and positive
//! definite whenever `R_k` is, so it is factorized by Cholesky. When weights
//! are only semidefinite, a Levenberg-style diagonal `lambda I` keeps the
//! factorization alive; see [`Regularization`].

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::Error;
use crate::problem::{LtvModel, TrackingProblem, Trajectory};

/// Time-varying affine policy and cost-to-go model from a backward pass.
///
/// Gains are indexed by the forward step at which they apply; the cost-to-go
/// sequences have one extra entry with `riccati[N]` and `offset[N]` zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    /// Feedforward terms `c_0..c_{N-1}`.
    pub feedforward: Vec<DVector<f64>>,
    /// Feedback gains `F_0..F_{N-1}`, each m x n.
    pub feedback: Vec<DMatrix<f64>>,
    /// Quadratic cost-to-go coefficients `P_0..P_N` (symmetric, PSD).
    pub riccati: Vec<DMatrix<f64>>,
    /// Linear cost-to-go coefficients `v_0..v_N`.
    pub offset: Vec<DVector<f64>>,
}

impl Policy {
    /// Number of steps the policy covers.
    pub fn n_steps(&self) -> usize {
        self.feedforward.len()
    }

    /// Control prescribed at step k in state x: `u = c_k - F_k x`.
    pub fn control(&self, k: usize, x: &DVector<f64>) -> DVector<f64> {
        &self.feedforward[k] - &self.feedback[k] * x
    }
}

/// When the Levenberg-style diagonal `lambda I` is added to the gain
/// denominator `W` before factorizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularizationMode {
    /// Add `lambda I` on every step.
    Always,
    /// Add `lambda I` only on steps where `W` is ill conditioned, measured by
    /// its reciprocal condition number dropping below the threshold.
    OnIllCondition,
}

/// Regularization policy for the gain denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regularization {
    /// Diagonal shift added when triggered.
    pub lambda: f64,
    pub mode: RegularizationMode,
    /// Reciprocal-condition threshold (smallest / largest eigenvalue
    /// magnitude) that triggers the shift in `OnIllCondition` mode.
    pub condition_threshold: f64,
}

impl Default for Regularization {
    /// `lambda = 1e-9`, applied only on ill-conditioned steps
    /// (reciprocal condition below `1e-12`).
    fn default() -> Self {
        Self {
            lambda: 1e-9,
            mode: RegularizationMode::OnIllCondition,
            condition_threshold: 1e-12,
        }
    }
}

/// Reciprocal condition number of a symmetric matrix: smallest over largest
/// eigenvalue magnitude. Zero for the zero matrix.
fn reciprocal_condition(w: &DMatrix<f64>) -> f64 {
    let eigs = w.symmetric_eigenvalues();
    let largest = eigs.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    if largest == 0.0 {
        return 0.0;
    }
    let smallest = eigs.iter().fold(f64::INFINITY, |acc, e| acc.min(e.abs()));
    smallest / largest
}

fn checked_dims(model: &LtvModel, problem: &TrackingProblem) -> Result<(), Error> {
    if model.n_steps() != problem.n_steps {
        return Err(Error::DimensionMismatch {
            context: "model steps vs problem steps",
            expected: problem.n_steps,
            actual: model.n_steps(),
        });
    }
    if model.state_dim() != problem.n {
        return Err(Error::DimensionMismatch {
            context: "model state dimension",
            expected: problem.n,
            actual: model.state_dim(),
        });
    }
    if model.control_dim() != problem.m {
        return Err(Error::DimensionMismatch {
            context: "model control dimension",
            expected: problem.m,
            actual: model.control_dim(),
        });
    }
    Ok(())
}

/// Runs the backward recursion over the whole horizon and returns the
/// policy together with the cost-to-go model.
pub fn backward_pass(
    model: &LtvModel,
    problem: &TrackingProblem,
    reg: &Regularization,
) -> Result<Policy, Error> {
    checked_dims(model, problem)?;
    let n = problem.n;
    let m = problem.m;
    let n_steps = problem.n_steps;

    let mut feedforward = vec![DVector::zeros(m); n_steps];
    let mut feedback = vec![DMatrix::zeros(m, n); n_steps];
    let mut riccati = vec![DMatrix::zeros(n, n); n_steps + 1];
    let mut offset = vec![DVector::zeros(n); n_steps + 1];

    for k in (0..n_steps).rev() {
        let a = &model.a[k];
        let b = &model.b[k];
        let q = &problem.q[k];
        let r = &problem.r[k];

        let mm = q + &riccati[k + 1];
        let mut w = b.transpose() * &mm * b + r;
        let shift = match reg.mode {
            RegularizationMode::Always => true,
            RegularizationMode::OnIllCondition => {
                reciprocal_condition(&w) < reg.condition_threshold
            }
        };
        if shift {
            for i in 0..m {
                w[(i, i)] += reg.lambda;
            }
        }
        let chol = Cholesky::new(w).ok_or(Error::SingularGain { step: k })?;

        // s = Q_k xd_{k+1} + v_{k+1}: the linear pull toward the next target.
        let s = q * &problem.x_ref[k] + &offset[k + 1];
        let c = chol.solve(&(b.transpose() * &s + r * &problem.u_ref[k]));
        let f = chol.solve(&(b.transpose() * &mm * a));

        let z = a - b * &f;
        let p = z.transpose() * &mm * &z + f.transpose() * r * &f;
        let v = z.transpose() * (&s - &mm * b * &c) + f.transpose() * r * (&c - &problem.u_ref[k]);

        // Symmetrize: P is symmetric in exact arithmetic, keep it that way.
        riccati[k] = (&p + p.transpose()) * 0.5;
        offset[k] = v;
        feedforward[k] = c;
        feedback[k] = f;
    }

    Ok(Policy {
        feedforward,
        feedback,
        riccati,
        offset,
    })
}

/// Rolls the policy through the linear model from `x0`, applying
/// `u_k = c_k - F_k x_k` at every step.
pub fn forward_pass(
    policy: &Policy,
    model: &LtvModel,
    x0: &DVector<f64>,
) -> Result<Trajectory, Error> {
    if policy.n_steps() != model.n_steps() {
        return Err(Error::DimensionMismatch {
            context: "policy steps vs model steps",
            expected: model.n_steps(),
            actual: policy.n_steps(),
        });
    }
    if x0.len() != model.state_dim() {
        return Err(Error::DimensionMismatch {
            context: "forward_pass initial state",
            expected: model.state_dim(),
            actual: x0.len(),
        });
    }
    let n_steps = model.n_steps();
    let mut x = Vec::with_capacity(n_steps + 1);
    let mut u = Vec::with_capacity(n_steps);
    x.push(x0.clone());
    for k in 0..n_steps {
        let uk = policy.control(k, &x[k]);
        let xn = &model.a[k] * &x[k] + &model.b[k] * &uk;
        u.push(uk);
        x.push(xn);
    }
    Ok(Trajectory { x, u })
}

/// Relative agreement tolerance used by [`steady_gain`] to decide whether the
/// backward recursion has settled by the horizon start.
pub const STEADY_GAIN_TOL: f64 = 1e-6;

/// Horizon-start gains with a settledness flag.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyGain {
    /// Feedforward term at step 0.
    pub c: DVector<f64>,
    /// Feedback gain at step 0.
    pub f: DMatrix<f64>,
    /// True when the gains at steps 0 and 1 agree to within
    /// [`STEADY_GAIN_TOL`] in relative max norm. On horizons much longer than
    /// the plant's settling time the recursion reaches a plateau and the
    /// step-0 gains are the steady regulator; a single-step policy can never
    /// set this flag.
    pub converged: bool,
}

fn rel_close(a: &[f64], b: &[f64]) -> bool {
    let scale = a.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - y).abs() <= STEADY_GAIN_TOL * scale)
}

/// Extracts the gains at step 0 and reports whether they sit on the settled
/// plateau of the recursion.
pub fn steady_gain(policy: &Policy) -> SteadyGain {
    let c = policy.feedforward[0].clone();
    let f = policy.feedback[0].clone();
    let converged = policy.n_steps() >= 2
        && rel_close(c.as_slice(), policy.feedforward[1].as_slice())
        && rel_close(f.as_slice(), policy.feedback[1].as_slice());
    SteadyGain { c, f, converged }
}
