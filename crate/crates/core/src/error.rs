use alloc::boxed::Box;

use crate::roots::RootSet;

/// Failures raised by the numerical routines.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("polynomial has degree {degree}, which exceeds the cap of {cap}")]
    CapExceeded { degree: usize, cap: usize },

    #[error("polynomial has degree zero")]
    DegreeZero,

    #[error("degree {0} is too small for this operation")]
    DegreeTooSmall(usize),

    #[error("root iteration did not converge after {iterations} steps (worst residual {worst_residual:e})")]
    NonConvergence {
        iterations: usize,
        worst_residual: f64,
        best: Box<RootSet>,
    },

    #[error("points do not close into a cycle (gap {gap:e})")]
    NotACycle { gap: f64 },

    #[error("two candidate cycles overlap within tolerance")]
    AmbiguousGrouping,

    #[error("basepoint lies in the exceptional set")]
    ExceptionalBasepoint,

    #[error("point is not fixed (|P(z) - z| = {gap:e})")]
    NotFixedPoint { gap: f64 },

    #[error("multiplier is resonant: |lambda^{order} - lambda| = {modulus:e}")]
    ResonantMultiplier { order: usize, modulus: f64 },

    #[error("multiplier modulus {modulus} is not attracting or repelling")]
    NotAttracting { modulus: f64 },

    #[error("fixed point is not superattracting")]
    NotSuperattracting,

    #[error("multiplier is not on the unit circle (|lambda| = {modulus})")]
    NotNeutral { modulus: f64 },

    #[error("small denominator at order {order}: |lambda^j - lambda| = {modulus:e}")]
    SmallDenominator { order: usize, modulus: f64 },

    #[error("map is not tangent to the identity at 0")]
    NotTangentToIdentity,

    #[error("leading nonlinearity is inconsistent with petal order {0}")]
    WrongOrder(usize),

    #[error("test function is undefined at an atom")]
    UndefinedAtAtom,

    #[error("disc meets the postcritical set")]
    PostcriticalOverlap,

    #[error("point lies outside the open unit disc")]
    OutsideDisc,

    #[error("map does not send the disc into itself (sup |f| = {sup})")]
    NotASelfMap { sup: f64 },

    #[error("series is not normalized as z + a2 z^2 + ...")]
    NotNormalized,

    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
