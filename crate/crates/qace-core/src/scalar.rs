use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar underlying all state, operator and bound arithmetic.
///
/// `f64` is the working precision; `f32` is supported with proportionally
/// looser validity tolerances. All quantities handled by this crate are O(1)
/// (probabilities, expectation values, angles), so the tolerances below are
/// absolute.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + std::ops::AddAssign
    + std::ops::SubAssign
    + std::ops::MulAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Absolute tolerance for validity checks on O(1) quantities
    /// (Hermiticity, unit trace, probability ranges, dichotomic spectra).
    fn atol() -> Self;

    /// Tolerance on probability-table row sums.
    fn sum_tol() -> Self;

    /// Slack beyond [0, 1] tolerated (and then clamped away) for Born-rule
    /// round-off; anything larger is reported as an invariant violation.
    fn clamp_slack() -> Self;

    /// Feasibility and optimality tolerance for the strategy-polytope LP.
    fn lp_tol() -> Self;
}

impl Scalar for f64 {
    fn atol() -> Self {
        1e-10
    }
    fn sum_tol() -> Self {
        1e-9
    }
    fn clamp_slack() -> Self {
        1e-8
    }
    fn lp_tol() -> Self {
        1e-7
    }
}

impl Scalar for f32 {
    fn atol() -> Self {
        1e-5
    }
    fn sum_tol() -> Self {
        1e-4
    }
    fn clamp_slack() -> Self {
        1e-4
    }
    fn lp_tol() -> Self {
        1e-3
    }
}
