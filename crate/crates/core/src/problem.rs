//! Problem data for finite-horizon trajectory tracking.
//!
//! A tracking problem pairs desired state and control sequences with
//! per-step quadratic weights:
//!
//! ```text
//!     J(u) = sum_{k=0}^{N-1}  (xd_{k+1} - x_{k+1})' Q_k (xd_{k+1} - x_{k+1})
//!                           + (ud_k - u_k)' R_k (ud_k - u_k)
//! ```
//!
//! `Q_k` weights the state *reached after* applying `u_k`. The initial state
//! is given and never penalized, so desired states are stored for steps
//! 1..=N while desired controls are stored for steps 0..N-1; both sequences
//! have length N and are indexed by the step at which the control acts.
//! There is no separate terminal weight: the last state is covered by
//! `Q_{N-1}`.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::Error;

/// Linear time-varying model `x_{k+1} = A_k x_k + B_k u_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LtvModel {
    /// State transition matrices `A_0..A_{N-1}`, each n x n.
    pub a: Vec<DMatrix<f64>>,
    /// Input matrices `B_0..B_{N-1}`, each n x m.
    pub b: Vec<DMatrix<f64>>,
    /// Step length in seconds. Informational: the matrices are already
    /// discrete-time.
    pub dt: f64,
}

impl LtvModel {
    /// Number of steps N.
    pub fn n_steps(&self) -> usize {
        self.a.len()
    }

    /// State dimension, read off the first step.
    pub fn state_dim(&self) -> usize {
        self.a.first().map_or(0, |a| a.nrows())
    }

    /// Control dimension, read off the first step.
    pub fn control_dim(&self) -> usize {
        self.b.first().map_or(0, |b| b.ncols())
    }

    /// Constant-coefficient model repeated over `n_steps`.
    pub fn constant(a: DMatrix<f64>, b: DMatrix<f64>, dt: f64, n_steps: usize) -> Self {
        Self {
            a: vec![a; n_steps],
            b: vec![b; n_steps],
            dt,
        }
    }
}

/// Diagonal weight template, expanded to per-step matrices when a problem is
/// built. Diagonals are the common case for the benchmark plants; full
/// matrices can always be set on [`TrackingProblem`] directly.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    /// Diagonal of Q (state-error weights), length n, entries >= 0.
    pub q_diag: Vec<f64>,
    /// Diagonal of R (control-error weights), length m, entries >= 0.
    pub r_diag: Vec<f64>,
}

impl WeightSpec {
    pub fn new(q_diag: Vec<f64>, r_diag: Vec<f64>) -> Self {
        Self { q_diag, r_diag }
    }

    /// Expands the diagonals into `n_steps` copies of Q and R.
    pub fn expand(&self, n_steps: usize) -> (Vec<DMatrix<f64>>, Vec<DMatrix<f64>>) {
        let q = DMatrix::from_diagonal(&DVector::from_row_slice(&self.q_diag));
        let r = DMatrix::from_diagonal(&DVector::from_row_slice(&self.r_diag));
        (vec![q; n_steps], vec![r; n_steps])
    }
}

/// A finite-horizon tracking problem.
///
/// All sequences have length `n_steps` and are indexed by the forward step:
/// `x_ref[k]` is the desired value for the state reached at step k+1, and
/// `u_ref[k]` pairs with the control applied at step k.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackingProblem {
    /// State dimension.
    pub n: usize,
    /// Control dimension.
    pub m: usize,
    /// Horizon length N (number of controls applied).
    pub n_steps: usize,
    /// Step length in seconds.
    pub dt: f64,
    /// State-error weights `Q_0..Q_{N-1}`; `Q_k` penalizes `x_{k+1}`.
    pub q: Vec<DMatrix<f64>>,
    /// Control-error weights `R_0..R_{N-1}`.
    pub r: Vec<DMatrix<f64>>,
    /// Desired states for steps 1..=N.
    pub x_ref: Vec<DVector<f64>>,
    /// Desired controls for steps 0..N-1.
    pub u_ref: Vec<DVector<f64>>,
    /// Fixed initial state.
    pub x0: DVector<f64>,
}

impl TrackingProblem {
    /// Builds a problem with constant weights and constant desired values,
    /// the shape shared by all bundled scenarios.
    pub fn constant(
        n_steps: usize,
        dt: f64,
        weights: &WeightSpec,
        x_ref: &[f64],
        u_ref: &[f64],
        x0: &[f64],
    ) -> Self {
        let n = weights.q_diag.len();
        let m = weights.r_diag.len();
        let (q, r) = weights.expand(n_steps);
        Self {
            n,
            m,
            n_steps,
            dt,
            q,
            r,
            x_ref: vec![DVector::from_row_slice(x_ref); n_steps],
            u_ref: vec![DVector::from_row_slice(u_ref); n_steps],
            x0: DVector::from_row_slice(x0),
        }
    }
}

/// One rule violation found by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// The offending field of [`TrackingProblem`].
    pub field: &'static str,
    /// Step index, for per-step violations.
    pub index: Option<usize>,
    /// Human-readable description of what is wrong.
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(k) => write!(f, "{}[{}]: {}", self.field, k, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

/// Tolerance scale for the symmetry / positive-semidefiniteness checks in
/// [`validate`]: absolute slack `1e-9 * (1 + max |entry|)`.
const PSD_SLACK: f64 = 1e-9;

/// Checks a problem against its construction rules and returns *every*
/// violation found, not just the first. An empty vector means well formed:
/// positive `dt`, at least one step, sequence lengths equal to `n_steps`,
/// consistent dimensions, and symmetric positive-semidefinite weights
/// (within a small numerical slack).
pub fn validate(p: &TrackingProblem) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |field, index, message: String| {
        out.push(Violation {
            field,
            index,
            message,
        })
    };

    // Written to also reject NaN, which fails every comparison.
    if p.dt.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        push("dt", None, format!("must be positive, got {}", p.dt));
    }
    if p.n_steps == 0 {
        push(
            "n_steps",
            None,
            "horizon must have at least one step".into(),
        );
    }
    if p.x0.len() != p.n {
        push(
            "x0",
            None,
            format!(
                "length {} does not match state dimension {}",
                p.x0.len(),
                p.n
            ),
        );
    }

    let seq_lengths: [(&'static str, usize); 4] = [
        ("q", p.q.len()),
        ("r", p.r.len()),
        ("x_ref", p.x_ref.len()),
        ("u_ref", p.u_ref.len()),
    ];
    for (field, len) in seq_lengths {
        if len != p.n_steps {
            push(
                field,
                None,
                format!(
                    "sequence length {} does not match n_steps {}",
                    len, p.n_steps
                ),
            );
        }
    }

    for (k, xr) in p.x_ref.iter().enumerate() {
        if xr.len() != p.n {
            push(
                "x_ref",
                Some(k),
                format!("length {}, expected {}", xr.len(), p.n),
            );
        }
    }
    for (k, ur) in p.u_ref.iter().enumerate() {
        if ur.len() != p.m {
            push(
                "u_ref",
                Some(k),
                format!("length {}, expected {}", ur.len(), p.m),
            );
        }
    }

    for (field, dim, seq) in [("q", p.n, &p.q), ("r", p.m, &p.r)] {
        for (k, w) in seq.iter().enumerate() {
            if w.nrows() != dim || w.ncols() != dim {
                push(
                    field,
                    Some(k),
                    format!(
                        "shape {}x{}, expected {}x{}",
                        w.nrows(),
                        w.ncols(),
                        dim,
                        dim
                    ),
                );
                continue;
            }
            if dim == 0 {
                continue;
            }
            let slack = PSD_SLACK * (1.0 + w.amax());
            let asym = (w - w.transpose()).amax();
            if asym > slack {
                push(
                    field,
                    Some(k),
                    format!("not symmetric (max asymmetry {:.3e})", asym),
                );
                continue;
            }
            let min_eig = w
                .symmetric_eigenvalues()
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            if min_eig < -slack {
                push(
                    field,
                    Some(k),
                    format!("not positive semidefinite (min eigenvalue {:.3e})", min_eig),
                );
            }
        }
    }

    out
}

/// State/control sequences from a rollout: `x` has N+1 entries (initial state
/// included), `u` has N.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub x: Vec<DVector<f64>>,
    pub u: Vec<DVector<f64>>,
}

impl Trajectory {
    /// All-zero trajectory over `n_steps` steps.
    pub fn zeros(n: usize, m: usize, n_steps: usize) -> Self {
        Self {
            x: vec![DVector::zeros(n); n_steps + 1],
            u: vec![DVector::zeros(m); n_steps],
        }
    }

    /// Number of steps N (length of the control sequence).
    pub fn n_steps(&self) -> usize {
        self.u.len()
    }
}

/// Tracking cost of a trajectory under the problem's weights and desired
/// values. The initial state does not enter the sum.
pub fn tracking_cost(p: &TrackingProblem, traj: &Trajectory) -> Result<f64, Error> {
    if traj.u.len() != p.n_steps {
        return Err(Error::DimensionMismatch {
            context: "tracking_cost controls",
            expected: p.n_steps,
            actual: traj.u.len(),
        });
    }
    if traj.x.len() != p.n_steps + 1 {
        return Err(Error::DimensionMismatch {
            context: "tracking_cost states",
            expected: p.n_steps + 1,
            actual: traj.x.len(),
        });
    }
    let mut cost = 0.0;
    for k in 0..p.n_steps {
        let ex = &p.x_ref[k] - &traj.x[k + 1];
        let eu = &p.u_ref[k] - &traj.u[k];
        if ex.len() != p.n || eu.len() != p.m {
            return Err(Error::DimensionMismatch {
                context: "tracking_cost entry",
                expected: p.n,
                actual: ex.len(),
            });
        }
        cost += (ex.transpose() * &p.q[k] * &ex)[(0, 0)];
        cost += (eu.transpose() * &p.r[k] * &eu)[(0, 0)];
    }
    Ok(cost)
}
