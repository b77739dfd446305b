//! Dynamics abstractions, discretization, and numerical linearization.
//!
//! Plants are described either in continuous time (`x' = f(x, u)`) or
//! directly as discrete steps (`x_{k+1} = f_k(x_k, u_k)`). The bridge is a
//! fixed-step discretizer: forward Euler for the benchmark scenarios, RK4
//! when more fidelity per step is wanted.
//!
//! Linearization is numerical: central differences around a point give the
//! step Jacobians
//!
//! ```text
//!     A = df/dx,   B = df/du        (of the discrete step map)
//! ```
//!
//! with probe size `eps * max(1, |z_j|)` in coordinate j, so probes stay
//! well scaled for both near-zero and large states.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::problem::{LtvModel, Trajectory};

/// Continuous-time dynamics `x' = f(x, u)`.
pub trait ContinuousDynamics {
    fn state_dim(&self) -> usize;
    fn control_dim(&self) -> usize;
    /// Time derivative of the state at `(x, u)`.
    fn derivative(&self, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64>;
}

/// Discrete-time dynamics `x_{k+1} = f_k(x_k, u_k)`.
pub trait DiscreteDynamics {
    fn state_dim(&self) -> usize;
    fn control_dim(&self) -> usize;
    /// Step length represented by one application of [`Self::step`].
    fn dt(&self) -> f64;
    /// State after one step from `x` under `u`. The step index `k` is there
    /// for time-varying maps; the built-in discretizers ignore it.
    fn step(&self, k: usize, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64>;
}

/// Forward-Euler discretization: `x_{k+1} = x_k + dt f(x_k, u_k)`.
#[derive(Debug, Clone)]
pub struct Euler<D> {
    pub dynamics: D,
    pub dt: f64,
}

/// Wraps continuous dynamics in a forward-Euler step of length `dt`.
pub fn discretize_euler<D: ContinuousDynamics>(dynamics: D, dt: f64) -> Euler<D> {
    Euler { dynamics, dt }
}

impl<D: ContinuousDynamics> DiscreteDynamics for Euler<D> {
    fn state_dim(&self) -> usize {
        self.dynamics.state_dim()
    }
    fn control_dim(&self) -> usize {
        self.dynamics.control_dim()
    }
    fn dt(&self) -> f64 {
        self.dt
    }
    fn step(&self, _k: usize, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        x + self.dynamics.derivative(x, u) * self.dt
    }
}

/// Classical fixed-step Runge-Kutta 4 discretization with the control held
/// constant over the step.
#[derive(Debug, Clone)]
pub struct Rk4<D> {
    pub dynamics: D,
    pub dt: f64,
}

/// Wraps continuous dynamics in an RK4 step of length `dt`.
pub fn discretize_rk4<D: ContinuousDynamics>(dynamics: D, dt: f64) -> Rk4<D> {
    Rk4 { dynamics, dt }
}

impl<D: ContinuousDynamics> DiscreteDynamics for Rk4<D> {
    fn state_dim(&self) -> usize {
        self.dynamics.state_dim()
    }
    fn control_dim(&self) -> usize {
        self.dynamics.control_dim()
    }
    fn dt(&self) -> f64 {
        self.dt
    }
    fn step(&self, _k: usize, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        let h = self.dt;
        let k1 = self.dynamics.derivative(x, u);
        let k2 = self.dynamics.derivative(&(x + &k1 * (h / 2.0)), u);
        let k3 = self.dynamics.derivative(&(x + &k2 * (h / 2.0)), u);
        let k4 = self.dynamics.derivative(&(x + &k3 * h), u);
        x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
    }
}

/// Default probe scale for the central-difference Jacobians.
pub const DEFAULT_FD_EPS: f64 = 1e-5;

/// Central-difference Jacobians of the discrete step map about `(x, u)` at
/// step `k`: returns `(A, B)` with `A = df/dx` (n x n) and `B = df/du`
/// (n x m). Probe size in coordinate j is `eps * max(1, |z_j|)`. Non-finite
/// dynamics output at any probe point is an error.
pub fn jacobians_fd(
    dynamics: &dyn DiscreteDynamics,
    k: usize,
    x: &DVector<f64>,
    u: &DVector<f64>,
    eps: f64,
) -> Result<(DMatrix<f64>, DMatrix<f64>), Error> {
    let n = dynamics.state_dim();
    let m = dynamics.control_dim();
    let mut a = DMatrix::zeros(n, n);
    let mut b = DMatrix::zeros(n, m);

    let probe = |xp: &DVector<f64>, up: &DVector<f64>| -> Result<DVector<f64>, Error> {
        let out = dynamics.step(k, xp, up);
        if out.iter().all(|v| v.is_finite()) {
            Ok(out)
        } else {
            Err(Error::NonFiniteDynamics { step: k })
        }
    };

    for j in 0..n {
        let h = eps * x[j].abs().max(1.0);
        let mut hi = x.clone();
        let mut lo = x.clone();
        hi[j] += h;
        lo[j] -= h;
        let col = (probe(&hi, u)? - probe(&lo, u)?) / (2.0 * h);
        a.set_column(j, &col);
    }
    for j in 0..m {
        let h = eps * u[j].abs().max(1.0);
        let mut hi = u.clone();
        let mut lo = u.clone();
        hi[j] += h;
        lo[j] -= h;
        let col = (probe(x, &hi)? - probe(x, &lo)?) / (2.0 * h);
        b.set_column(j, &col);
    }
    Ok((a, b))
}

/// Linearizes a discrete plant along a trajectory: `A_k, B_k` are the step
/// Jacobians at `(x_k, u_k)` for k = 0..N-1.
pub fn linearize_trajectory(
    dynamics: &dyn DiscreteDynamics,
    traj: &Trajectory,
    eps: f64,
) -> Result<LtvModel, Error> {
    let n_steps = traj.n_steps();
    if traj.x.len() != n_steps + 1 {
        return Err(Error::DimensionMismatch {
            context: "linearize_trajectory states",
            expected: n_steps + 1,
            actual: traj.x.len(),
        });
    }
    let mut a = Vec::with_capacity(n_steps);
    let mut b = Vec::with_capacity(n_steps);
    for k in 0..n_steps {
        let (ak, bk) = jacobians_fd(dynamics, k, &traj.x[k], &traj.u[k], eps)?;
        a.push(ak);
        b.push(bk);
    }
    Ok(LtvModel {
        a,
        b,
        dt: dynamics.dt(),
    })
}

/// Rolls a control sequence through the dynamics from `x0`. Errors if any
/// produced state is non-finite.
pub fn rollout(
    dynamics: &dyn DiscreteDynamics,
    x0: &DVector<f64>,
    controls: &[DVector<f64>],
) -> Result<Trajectory, Error> {
    let mut x = Vec::with_capacity(controls.len() + 1);
    x.push(x0.clone());
    for (k, u) in controls.iter().enumerate() {
        let xn = dynamics.step(k, &x[k], u);
        if !xn.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteState { step: k });
        }
        x.push(xn);
    }
    Ok(Trajectory {
        x,
        u: controls.to_vec(),
    })
}
