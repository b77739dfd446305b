//! The `verify` subcommand: seeded cross-check of the backward/forward
//! recursion against the independent batch solver on randomized linear
//! time-varying problems.

use anyhow::{bail, Result};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tracklqr::lqr::{backward_pass, forward_pass, Regularization};
use tracklqr::oracle::solve_batch;
use tracklqr::problem::{tracking_cost, LtvModel, TrackingProblem, WeightSpec};

/// Agreement the cross-check demands: controls to 1e-8 relative, costs to
/// 1e-10 relative.
pub const CONTROL_RTOL: f64 = 1e-8;
pub const COST_RTOL: f64 = 1e-10;

/// Summary of a verification sweep.
pub struct VerifyOutcome {
    pub cases: usize,
    /// Worst relative control deviation seen.
    pub worst_control: f64,
    /// Worst relative cost deviation seen.
    pub worst_cost: f64,
    pub pass: bool,
}

/// Runs `cases` random problems from `seed` and compares the two solvers.
pub fn verify(seed: u64, cases: usize) -> Result<VerifyOutcome> {
    if cases == 0 {
        bail!("cases must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_control = 0.0f64;
    let mut worst_cost = 0.0f64;
    for _ in 0..cases {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=2);
        let n_steps = rng.gen_range(1..=6);
        let a: Vec<DMatrix<f64>> = (0..n_steps)
            .map(|_| DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0)))
            .collect();
        let b: Vec<DMatrix<f64>> = (0..n_steps)
            .map(|_| DMatrix::from_fn(n, m, |_, _| rng.gen_range(-1.0..1.0)))
            .collect();
        let model = LtvModel { a, b, dt: 0.1 };
        let q_diag: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
        let r_diag: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..2.0)).collect();
        let (q, r) = WeightSpec::new(q_diag, r_diag).expand(n_steps);
        let problem = TrackingProblem {
            n,
            m,
            n_steps,
            dt: 0.1,
            q,
            r,
            x_ref: (0..n_steps)
                .map(|_| DVector::from_fn(n, |_, _| rng.gen_range(-2.0..2.0)))
                .collect(),
            u_ref: (0..n_steps)
                .map(|_| DVector::from_fn(m, |_, _| rng.gen_range(-2.0..2.0)))
                .collect(),
            x0: DVector::from_fn(n, |_, _| rng.gen_range(-2.0..2.0)),
        };

        let policy = backward_pass(&model, &problem, &Regularization::default())?;
        let dp = forward_pass(&policy, &model, &problem.x0)?;
        let dp_cost = tracking_cost(&problem, &dp)?;
        let batch = solve_batch(&model, &problem)?;

        let scale = 1.0
            + batch
                .controls
                .iter()
                .fold(0.0f64, |acc, u| acc.max(u.amax()));
        for k in 0..n_steps {
            worst_control = worst_control.max((&dp.u[k] - &batch.controls[k]).amax() / scale);
        }
        worst_cost = worst_cost.max((dp_cost - batch.cost).abs() / (1.0 + batch.cost.abs()));
    }
    Ok(VerifyOutcome {
        cases,
        worst_control,
        worst_cost,
        pass: worst_control <= CONTROL_RTOL && worst_cost <= COST_RTOL,
    })
}
