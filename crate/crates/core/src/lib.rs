//! Finite-horizon trajectory tracking for linear time-varying and nonlinear
//! plants.
//!
//! The core problem is discrete-time tracking over N steps:
//!
//! ```text
//!     x_{k+1} = A_k x_k + B_k u_k
//!     J(u)    = sum_{k=0}^{N-1}  (xd_{k+1} - x_{k+1})' Q_k (xd_{k+1} - x_{k+1})
//!                              + (ud_k - u_k)' R_k (ud_k - u_k)
//! ```
//!
//! solved exactly by a backward recursion that yields a time-varying affine
//! policy `u_k = c_k - F_k x_k` ([`lqr`]). Nonlinear plants are handled by
//! repeatedly linearizing along a nominal trajectory and solving the tracking
//! problem in increments ([`ilqr`]). Everything is dense and double
//! precision, sized for control loops (tens of states), not PDE grids.
//!
//! Module map:
//!
//! - [`problem`]: problem data, validation, trajectories, and the cost.
//! - [`lqr`]: backward/forward passes, regularization, steady-gain readout.
//! - [`dynamics`]: dynamics traits, Euler/RK4 discretization, central
//!   finite-difference Jacobians, trajectory linearization.
//! - [`ilqr`]: the iterative solver and its update rules.
//! - [`models`]: four benchmark plants with pinned scenario data.
//! - [`oracle`]: independent batch solution of the linear problem, used to
//!   cross-check the recursion.
//!
//! Solving a bundled scenario end to end:
//!
//! ```
//! use tracklqr::ilqr::{self, IlqrOptions};
//! use tracklqr::lqr::steady_gain;
//! use tracklqr::models::scenario_defaults;
//!
//! let scenario = scenario_defaults("rayleigh")?;
//! let problem = scenario.problem();
//! let dynamics = scenario.dynamics(problem.dt);
//! let opts = IlqrOptions {
//!     max_iterations: scenario.iterations,
//!     update: scenario.update,
//!     ..Default::default()
//! };
//! let solution = ilqr::solve(&problem, dynamics.as_ref(), &opts)?;
//! assert!(solution.costs.last() <= solution.costs.first());
//!
//! let gain = steady_gain(solution.policies.last().unwrap());
//! assert_eq!(gain.f.nrows(), problem.m);
//! # Ok::<(), tracklqr::Error>(())
//! ```

pub mod dynamics;
pub mod error;
pub mod ilqr;
pub mod lqr;
pub mod models;
pub mod oracle;
pub mod problem;

pub use error::Error;
