//! Benchmark plants and pinned scenario data.
//!
//! Four nonlinear test systems of increasing size exercise the solvers: a
//! mildly nonlinear oscillator, two underactuated mechanisms, and a 16-state
//! quadcopter. Each comes with one or two named scenarios (initial state,
//! targets, weights, step length, horizon, iteration budget) fixed here so
//! every run of the toolkit reproduces the same numbers.
//!
//! All scenario plants are integrated with forward Euler at the scenario's
//! step length. The cart-pole scenarios use a coarser step than the rest;
//! their gain plateaus are step-length dependent and the pinned values
//! belong to `dt = 0.1`.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

use nalgebra::{DMatrix, DVector};

use crate::dynamics::{discretize_euler, ContinuousDynamics, DiscreteDynamics};
use crate::error::Error;
use crate::ilqr::UpdateMode;
use crate::problem::{TrackingProblem, WeightSpec};

/// Parameters of the Rayleigh oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighParams {
    /// Damping shape coefficient.
    pub a: f64,
    /// Control gain into the velocity equation.
    pub b: f64,
}

impl Default for RayleighParams {
    fn default() -> Self {
        Self { a: 1.4, b: 4.0 }
    }
}

/// Rayleigh oscillator: a 2-state limit-cycle system with the control
/// entering the velocity equation.
///
/// ```text
///     x0' = x1
///     x1' = -x0 + a (1 - x1^2 / 10) x1 + b u
/// ```
///
/// The damping term feeds energy in at small velocity and removes it at
/// large velocity, so the uncontrolled system orbits a limit cycle instead
/// of settling.
#[derive(Debug, Clone, Default)]
pub struct Rayleigh {
    pub params: RayleighParams,
}

impl ContinuousDynamics for Rayleigh {
    fn state_dim(&self) -> usize {
        2
    }
    fn control_dim(&self) -> usize {
        1
    }
    fn derivative(&self, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        let RayleighParams { a, b } = self.params;
        DVector::from_row_slice(&[
            x[1],
            -x[0] + a * (1.0 - x[1] * x[1] / 10.0) * x[1] + b * u[0],
        ])
    }
}

impl Rayleigh {
    /// Hand-derived Jacobians of the continuous dynamics at `x`, used to
    /// cross-check the finite-difference path:
    ///
    /// ```text
    ///     df/dx = [ 0              1               ]      df/du = [ 0 ]
    ///             [ -1   a (1 - 3 x1^2 / 10) ]                    [ b ]
    /// ```
    pub fn analytic_jacobians(&self, x: &DVector<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
        let RayleighParams { a, b } = self.params;
        let dfdx = DMatrix::from_row_slice(
            2,
            2,
            &[0.0, 1.0, -1.0, a * (1.0 - 3.0 * x[1] * x[1] / 10.0)],
        );
        let dfdu = DMatrix::from_row_slice(2, 1, &[0.0, b]);
        (dfdx, dfdu)
    }
}

/// Parameters of the cart-pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartPoleParams {
    pub gravity: f64,
    /// Point mass at the pole tip.
    pub pole_mass: f64,
    pub cart_mass: f64,
    pub pole_length: f64,
}

impl Default for CartPoleParams {
    fn default() -> Self {
        Self {
            gravity: 9.81,
            pole_mass: 1.0,
            cart_mass: 1.0,
            pole_length: 1.0,
        }
    }
}

/// Cart with an inverted point-mass pendulum. State
/// `(position, velocity, angle, angular rate)` with the angle measured from
/// upright; the control is the horizontal force on the cart.
///
/// ```text
///     p''  = ( -mp l w^2 sin t + mp g sin t cos t + u ) / (mc + mp sin^2 t)
///     t''  = ( -mp l w^2 sin t cos t + (mc + mp) g sin t + u cos t )
///            / ( l (mc + mp sin^2 t) )
/// ```
#[derive(Debug, Clone, Default)]
pub struct CartPole {
    pub params: CartPoleParams,
}

impl ContinuousDynamics for CartPole {
    fn state_dim(&self) -> usize {
        4
    }
    fn control_dim(&self) -> usize {
        1
    }
    fn derivative(&self, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        let CartPoleParams {
            gravity: g,
            pole_mass: mp,
            cart_mass: mc,
            pole_length: l,
        } = self.params;
        let (v, t, w) = (x[1], x[2], x[3]);
        let (st, ct) = t.sin_cos();
        let den = mc + mp * st * st;
        let vdot = (-mp * l * w * w * st + mp * g * st * ct + u[0]) / den;
        let wdot = (-mp * l * w * w * st * ct + (mc + mp) * g * st + u[0] * ct) / (l * den);
        DVector::from_row_slice(&[v, vdot, w, wdot])
    }
}

/// Parameters of the planar two-link arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLinkParams {
    pub gravity: f64,
    /// Mass of link 1 (concentrated at the link end).
    pub m1: f64,
    pub m2: f64,
    pub l1: f64,
    pub l2: f64,
}

impl Default for TwoLinkParams {
    fn default() -> Self {
        Self {
            gravity: 9.81,
            m1: 1.0,
            m2: 1.0,
            l1: 1.0,
            l2: 1.0,
        }
    }
}

/// Planar two-link arm under gravity with a torque at each joint. State
/// `(t1, w1, t2, w2)` with angles measured from the horizontal; controls are
/// the joint torques `(T1, T2)`.
///
/// With the mass ratio `mu = m2 / (m1 + m2)` and the joint offset terms
/// `s = sin(t1 - t2)`, `d = cos(t1 - t2)`:
///
/// ```text
///     e1  = mu T1 / (m2 l1) - mu l2 w2^2 s - g cos t1
///     e2  = T2 / (m2 l2) + l1 w1^2 s - g cos t2
///     w1' = ( e1 - mu d e2 ) / ( l1 (1 - mu d^2) )
///     w2' = ( e2 -     d e1 ) / ( l2 (1 - mu d^2) )
/// ```
#[derive(Debug, Clone, Default)]
pub struct TwoLink {
    pub params: TwoLinkParams,
}

impl ContinuousDynamics for TwoLink {
    fn state_dim(&self) -> usize {
        4
    }
    fn control_dim(&self) -> usize {
        2
    }
    fn derivative(&self, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        let TwoLinkParams {
            gravity: g,
            m1,
            m2,
            l1,
            l2,
        } = self.params;
        let (t1, w1, t2, w2) = (x[0], x[1], x[2], x[3]);
        let (tq1, tq2) = (u[0], u[1]);
        let mu = m2 / (m1 + m2);
        let s = (t1 - t2).sin();
        let d = (t1 - t2).cos();
        let den = 1.0 - mu * d * d;
        let e1 = mu * tq1 / (m2 * l1) - mu * l2 * w2 * w2 * s - g * t1.cos();
        let e2 = tq2 / (m2 * l2) + l1 * w1 * w1 * s - g * t2.cos();
        DVector::from_row_slice(&[
            w1,
            (e1 - mu * d * e2) / (l1 * den),
            w2,
            (e2 - d * e1) / (l2 * den),
        ])
    }
}

/// Parameters of the quadcopter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadcopterParams {
    pub gravity: f64,
    /// Rotor arm length.
    pub arm_length: f64,
    pub mass: f64,
    /// Body inertias about the three axes.
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
}

impl Default for QuadcopterParams {
    fn default() -> Self {
        Self {
            gravity: 9.81,
            arm_length: 0.23,
            mass: 0.65,
            jx: 7.5e-3,
            jy: 7.5e-3,
            jz: 1.3e-2,
        }
    }
}

/// Quadcopter with thrust and body torques behind integrators, 16 states and
/// 4 controls. State order:
///
/// ```text
///     ( roll, roll rate, pitch, pitch rate, yaw, yaw rate,
///       x, vx, y, vy, z, vz, thrust, roll torque, pitch torque, yaw torque )
/// ```
///
/// The physical inputs (thrust `T` and torques `tau`) are themselves states;
/// the controls are their rates of change, which smooths the commanded
/// forces. With `a1 = (Jy - Jz) / Jx`, `b1 = l / Jx` (and cyclic variants):
///
/// ```text
///     wphi' = a1 wth wpsi + b1 tau_phi          (body rates couple axes)
///     vx'   = T/m (cos phi sin th cos psi + sin phi sin psi)
///     vy'   = T/m (cos phi sin th sin psi - sin phi cos psi)
///     vz'   = T/m  cos phi cos th - g
///     T'    = u0,   tau' = (u1, u2, u3)
/// ```
#[derive(Debug, Clone, Default)]
pub struct Quadcopter {
    pub params: QuadcopterParams,
}

impl ContinuousDynamics for Quadcopter {
    fn state_dim(&self) -> usize {
        16
    }
    fn control_dim(&self) -> usize {
        4
    }
    fn derivative(&self, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        let QuadcopterParams {
            gravity: g,
            arm_length: l,
            mass,
            jx,
            jy,
            jz,
        } = self.params;
        let (a1, a2, a3) = ((jy - jz) / jx, (jz - jx) / jy, (jx - jy) / jz);
        let (b1, b2, b3) = (l / jx, l / jy, l / jz);
        let (phi, wphi, th, wth, psi, wpsi) = (x[0], x[1], x[2], x[3], x[4], x[5]);
        let (vx, vy, vz) = (x[7], x[9], x[11]);
        let (thrust, tau_phi, tau_th, tau_psi) = (x[12], x[13], x[14], x[15]);
        let (sph, cph) = phi.sin_cos();
        let (sth, cth) = th.sin_cos();
        let (sps, cps) = psi.sin_cos();
        DVector::from_row_slice(&[
            wphi,
            a1 * wth * wpsi + b1 * tau_phi,
            wth,
            a2 * wphi * wpsi + b2 * tau_th,
            wpsi,
            a3 * wphi * wth + b3 * tau_psi,
            vx,
            thrust / mass * (cph * sth * cps + sph * sps),
            vy,
            thrust / mass * (cph * sth * sps - sph * cps),
            vz,
            thrust / mass * cph * cth - g,
            u[0],
            u[1],
            u[2],
            u[3],
        ])
    }
}

/// Fixed data for one bundled benchmark scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: &'static str,
    /// One-line description for listings.
    pub summary: &'static str,
    /// State and control dimensions.
    pub n: usize,
    pub m: usize,
    /// Default step length in seconds.
    pub dt: f64,
    /// Default horizon in seconds.
    pub duration: f64,
    /// Iteration budget the scenario is normally run with.
    pub iterations: usize,
    /// Update rule the scenario is normally run with.
    pub update: UpdateMode,
    pub q_diag: Vec<f64>,
    pub r_diag: Vec<f64>,
    /// Constant desired state (held over the whole horizon).
    pub x_ref: Vec<f64>,
    /// Constant desired control.
    pub u_ref: Vec<f64>,
    pub x0: Vec<f64>,
}

/// Number of steps covering `duration` at step length `dt`, rounded to the
/// nearest whole step (at least one).
pub fn steps_for(duration: f64, dt: f64) -> usize {
    ((duration / dt).round() as usize).max(1)
}

impl Scenario {
    /// Steps in the default horizon.
    pub fn n_steps(&self) -> usize {
        steps_for(self.duration, self.dt)
    }

    /// The scenario's tracking problem at its default step length and
    /// horizon.
    pub fn problem(&self) -> TrackingProblem {
        self.problem_with(self.dt, self.n_steps())
    }

    /// The scenario's tracking problem at a caller-chosen step length and
    /// step count.
    pub fn problem_with(&self, dt: f64, n_steps: usize) -> TrackingProblem {
        TrackingProblem::constant(
            n_steps,
            dt,
            &WeightSpec::new(self.q_diag.clone(), self.r_diag.clone()),
            &self.x_ref,
            &self.u_ref,
            &self.x0,
        )
    }

    /// Euler-discretized plant for this scenario at step length `dt`.
    pub fn dynamics(&self, dt: f64) -> Box<dyn DiscreteDynamics> {
        match self.name {
            "rayleigh" => Box::new(discretize_euler(Rayleigh::default(), dt)),
            "cartpole" | "cartpole_soft" => Box::new(discretize_euler(CartPole::default(), dt)),
            "twolink" => Box::new(discretize_euler(TwoLink::default(), dt)),
            "quadcopter" => Box::new(discretize_euler(Quadcopter::default(), dt)),
            other => unreachable!("scenario {other} constructed outside this module"),
        }
    }
}

/// Names of the bundled scenarios, in listing order.
pub const SCENARIO_NAMES: [&str; 5] = [
    "rayleigh",
    "cartpole",
    "cartpole_soft",
    "twolink",
    "quadcopter",
];

/// Looks up the pinned data for a bundled scenario.
pub fn scenario_defaults(name: &str) -> Result<Scenario, Error> {
    let scenario = match name {
        "rayleigh" => Scenario {
            name: "rayleigh",
            summary: "Rayleigh oscillator driven to rest from (-5, -5)",
            n: 2,
            m: 1,
            dt: 0.01,
            duration: 10.0,
            iterations: 3,
            update: UpdateMode::NonlinearRollout,
            q_diag: vec![1.0, 0.0],
            r_diag: vec![1.0],
            x_ref: vec![0.0, 0.0],
            u_ref: vec![0.0],
            x0: vec![-5.0, -5.0],
        },
        "cartpole" => Scenario {
            name: "cartpole",
            summary: "Cart moved 10 m while balancing the inverted pole",
            n: 4,
            m: 1,
            dt: 0.1,
            duration: 10.0,
            iterations: 3,
            update: UpdateMode::NonlinearRollout,
            q_diag: vec![100.0, 1.0, 1.0, 1.0],
            r_diag: vec![10.0],
            x_ref: vec![10.0, 0.0, 0.0, 0.0],
            u_ref: vec![0.0],
            x0: vec![0.0, 0.0, 0.0, 0.0],
        },
        "cartpole_soft" => Scenario {
            name: "cartpole_soft",
            summary: "Cart-pole with free control effort and a stiff angle hold",
            n: 4,
            m: 1,
            dt: 0.1,
            duration: 10.0,
            iterations: 1,
            update: UpdateMode::NonlinearRollout,
            q_diag: vec![1.0, 1.0, 1000.0, 1000.0],
            r_diag: vec![0.0],
            x_ref: vec![10.0, 0.0, 0.0, 0.0],
            u_ref: vec![0.0],
            x0: vec![0.0, 0.0, 0.0, 0.0],
        },
        "twolink" => Scenario {
            name: "twolink",
            summary: "Two-link arm raised to (45, 30) degrees against gravity",
            n: 4,
            m: 2,
            dt: 0.01,
            duration: 5.0,
            iterations: 3,
            update: UpdateMode::NonlinearRollout,
            q_diag: vec![1e5, 0.0, 1e5, 0.0],
            r_diag: vec![1.0, 1.0],
            x_ref: vec![FRAC_PI_4, 0.0, FRAC_PI_6, 0.0],
            u_ref: vec![0.0, 0.0],
            x0: vec![0.0, 0.0, 0.0, 0.0],
        },
        "quadcopter" => Scenario {
            name: "quadcopter",
            summary: "Quadcopter brought to hover from an off-nominal launch",
            n: 16,
            m: 4,
            dt: 0.01,
            duration: 10.0,
            iterations: 5,
            update: UpdateMode::NonlinearRollout,
            q_diag: vec![
                10.0, 1.0, 10.0, 1.0, 10.0, 1.0, 10.0, 1.0, 10.0, 1.0, 50.0, 5.0, 0.0, 0.0, 0.0,
                0.0,
            ],
            r_diag: vec![0.5, 0.5, 0.5, 0.5],
            x_ref: vec![0.0; 16],
            u_ref: vec![0.0; 4],
            x0: vec![
                0.3, 1.0, -0.4, 1.0, 0.2, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0,
            ],
        },
        _ => {
            return Err(Error::UnknownScenario {
                name: name.to_string(),
                known: "rayleigh, cartpole, cartpole_soft, twolink, quadcopter",
            })
        }
    };
    Ok(scenario)
}
