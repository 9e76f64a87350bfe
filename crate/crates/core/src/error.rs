use thiserror::Error;

use crate::shock::ShockRegime;

#[derive(Debug, Clone, Error)]
pub enum FlowError {
    #[error("invalid gas model: {0}")]
    InvalidGas(String),

    #[error("invalid boundary state: {0}")]
    InvalidBoundary(String),

    #[error("invalid flow invariants: {0}")]
    InvalidInvariants(String),

    #[error("radial velocity vanishes at the boundary; use the purely circulatory solution")]
    DegenerateCirculatory,

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("no admissible density at r = {r} (inside the limiting circle)")]
    NoRoot { r: f64 },

    #[error("root bracketing failed: {0}")]
    BracketFailure(String),

    #[error("boundary data is radially sonic (M1^2 = {m1sq}); derivatives are unbounded there")]
    SonicBoundary { m1sq: f64 },

    #[error("radial Mach number is sonic at r = {r}; the ODE right-hand side is singular")]
    SonicSingularity { r: f64 },

    #[error("upstream state is not radially supersonic (M1^2 = {m1sq})")]
    NotSupersonic { m1sq: f64 },

    #[error("exit pressure {p_ex} lies outside the admissible interval ({p1}, {p0})")]
    PressureOutOfRange { p_ex: f64, p1: f64, p0: f64 },

    #[error("no piecewise smooth shock solution exists: {reason}")]
    NoSolution {
        reason: String,
        diagnostics: Box<ShockRegime>,
    },

    #[error("shock inequality violated: {0}")]
    InequalityFailed(String),
}

pub type Result<T> = std::result::Result<T, FlowError>;
