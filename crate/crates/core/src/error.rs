//! Error types shared by all modules of the crate.
//!
//! Every fallible operation returns [`Result`] with the single crate-wide
//! [`Error`] enum. Variants are deliberately fine-grained so that callers
//! (and the command-line frontend) can distinguish domain violations from
//! budget exhaustion and from genuine numerical breakdown.

use crate::ComplexValue;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All error conditions reported by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Gamma evaluated within `1e-12` of one of its poles (the nonpositive
    /// integers), where no finite value can be returned.
    #[error("gamma pole: {z} is within 1e-12 of a nonpositive integer")]
    Pole { z: ComplexValue },

    /// A series or iterative scheme hit its hard term/iteration budget
    /// before satisfying its truncation criterion.
    #[error("convergence budget exceeded: {context} did not converge within {budget} terms")]
    ConvergenceBudget { context: &'static str, budget: usize },

    /// An argument lies outside the supported domain of an operation.
    #[error("domain error: {reason}")]
    Domain { reason: String },

    /// Evaluation at a branch point of a multivalued power (reserved for
    /// derivative evaluations; plain model evaluation cannot reach it).
    #[error("branch point: power term with exponent {exponent} is not differentiable at the reference point")]
    BranchPoint { exponent: f64 },

    /// The fractional-derivative base point does not match the reference
    /// point the model's power terms are centered on.
    #[error("base mismatch: derivative base {base} differs from model reference point {reference_point}")]
    BaseMismatch { base: f64, reference_point: f64 },

    /// The requested value is singular at the evaluation point (for
    /// example a Riemann-Liouville derivative of a constant at the base).
    #[error("singular evaluation: {reason}")]
    Singularity { reason: String },

    /// Recentering requires integer exponents; this power term has a
    /// fractional one.
    #[error("cannot recenter: power term exponent {exponent} is not an integer")]
    NonIntegerExponent { exponent: f64 },

    /// Exponential terms only admit closed-form fractional derivatives with
    /// base 0; the model cannot be recentered or differentiated elsewhere.
    #[error("exponential terms require base 0, got {base}")]
    ExpBase { base: f64 },

    /// The adaptive quadrature could not meet its tolerance within the
    /// evaluation budget.
    #[error("quadrature failed: error estimate {error_estimate:e} above tolerance after {evaluations} integrand evaluations")]
    Quadrature { error_estimate: f64, evaluations: usize },

    /// A fractional derivative in an iteration denominator is numerically
    /// zero (magnitude below `1e-30`), so no step can be formed.
    #[error("fractional derivative magnitude {magnitude:e} below 1e-30; iteration step undefined")]
    DerivativeZero { magnitude: f64 },

    /// Not enough usable data to estimate a convergence order.
    #[error("insufficient data: {reason}")]
    InsufficientData { reason: String },

    /// The palette passed to the plane renderer has fewer colors than
    /// `roots + 1` (one per root plus the divergence color).
    #[error("palette too small: need at least {needed} colors, got {got}")]
    PaletteTooSmall { needed: usize, got: usize },
}

impl Error {
    /// Convenience constructor for [`Error::Domain`].
    pub(crate) fn domain(reason: impl Into<String>) -> Self {
        Error::Domain { reason: reason.into() }
    }

    /// Convenience constructor for [`Error::Singularity`].
    pub(crate) fn singular(reason: impl Into<String>) -> Self {
        Error::Singularity { reason: reason.into() }
    }
}
