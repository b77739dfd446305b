//! Error type shared across the solver modules.

use thiserror::Error;

/// Errors reported by the solvers, linearizers, and model lookups.
#[derive(Debug, Error)]
pub enum Error {
    /// Two objects that must agree in size do not.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// The gain denominator `B' (Q + P) B + R` could not be factorized even
    /// after regularization was applied.
    #[error("gain denominator not positive definite at step {step} (after regularization)")]
    SingularGain { step: usize },

    /// The stacked normal equations of the batch solver could not be
    /// factorized even after regularization was applied.
    #[error("batch normal equations singular (after regularization)")]
    SingularBatch,

    /// The batch solver was asked for more decision variables than it
    /// supports.
    #[error("batch solve too large: N*m = {actual} exceeds the {limit} limit")]
    BatchTooLarge { actual: usize, limit: usize },

    /// Dynamics returned NaN or infinity while being probed for Jacobians.
    #[error("non-finite dynamics output while linearizing at step {step}")]
    NonFiniteDynamics { step: usize },

    /// A rollout produced a non-finite state.
    #[error("non-finite state produced by rollout at step {step}")]
    NonFiniteState { step: usize },

    /// An iterative solve produced a non-finite state, with the iteration
    /// that did it.
    #[error("solver diverged: non-finite state at iteration {iteration}, step {step}")]
    Diverged { iteration: usize, step: usize },

    /// A state-increment sequence tried to move the fixed initial state.
    #[error("state increment at step 0 must be zero: the initial state is fixed")]
    NonzeroInitialIncrement,

    /// Scenario name not in the bundled set.
    #[error("unknown scenario '{name}' (known: {known})")]
    UnknownScenario { name: String, known: &'static str },
}
