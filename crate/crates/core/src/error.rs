//! Error type shared by every module of the crate.
//!
//! Numerical routines return `Result<_, Error>` whenever a precondition can
//! fail at runtime (pole inputs, series/quadrature budgets, regime mismatches).
//! Programmer errors (mixing jet orders, indexing past an array) panic instead.

use num_complex::Complex64;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Log-gamma was evaluated exactly on a non-positive integer.
    #[error("gamma pole at z = {0}")]
    GammaPole(Complex64),

    /// A power series did not converge within its term budget, or the
    /// expansion variable was too close to the radius of convergence.
    #[error("series budget exceeded ({0})")]
    SeriesBudgetExceeded(String),

    /// Jet division (or reciprocal) with a zero constant term.
    #[error("jet not invertible: constant term is zero")]
    JetNotInvertible,

    /// Invalid constant term for a fractional power or logarithm of a jet,
    /// or a composition whose inner jet has a non-zero constant term.
    #[error("jet domain error: {0}")]
    JetDomainError(&'static str),

    /// A derivative of order higher than the jet order was requested.
    #[error("jet order exceeded: wanted {wanted}, jet has order {order}")]
    JetOrderExceeded { wanted: usize, order: usize },

    /// Functional calculus applied to a Grassmann element that is not even
    /// with vanishing body.
    #[error("not an even nilpotent")]
    NotAnEvenNilpotent,

    /// A Grassmann weight integral was requested outside the parity/sign
    /// regime in which it is defined.
    #[error("parity/sign regime error: {0}")]
    ParitySignRegimeError(String),

    /// A bosonic radial integral failed to converge within its budget.
    #[error("integral budget exceeded: {0}")]
    IntegralBudgetExceeded(String),

    /// The c-function was evaluated at one of its genuine poles.
    #[error("c-function pole at lambda = {0}")]
    CFunctionPole(Complex64),

    /// The Harish-Chandra series tail could not be certified at this point.
    #[error("HC series out of range: {0}")]
    HcSeriesOutOfRange(String),

    /// A spherical-function method was used outside its validity range.
    #[error("evaluation out of method range: {0}")]
    EvaluationOutOfMethodRange(String),

    /// A closed-form constant was requested in a parameter regime where it
    /// is not defined.
    #[error("constant undefined in this regime: {0}")]
    ConstantUndefinedInThisRegime(String),

    /// The wave packet of the constant function exists only for negative rho.
    #[error("J(1) defined only for \u{03c1}<0")]
    JOneOnlyForNegativeRho,

    /// A residue index outside 0 <= k < -rho.
    #[error("no pole at requested index {0}")]
    NoPoleAtRequestedIndex(i64),

    /// Quadrature failed to reach its tolerance within the evaluation budget.
    #[error("quadrature budget exceeded: {0}")]
    QuadratureBudgetExceeded(String),

    /// Configuration / input validation failure (CLI and report plumbing).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
