//! Local coordinates that conjugate a polynomial to a normal form near a
//! fixed point.
//!
//! All conjugacies are computed by exact coefficient recursion on truncated
//! series, and every result carries the residual of its functional equation
//! measured on a circle.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::poly::Complex;
use crate::series::PowerSeries;

mod koenigs;
mod parabolic;
mod siegel;

pub use koenigs::{boettcher_series, green_function, koenigs, GreenValue};
pub use parabolic::{
    parabolic_petal, PetalReport, DEFAULT_PETAL_MAX_STEPS, DEFAULT_PETAL_SAMPLES, DEFAULT_PETAL_TARGET,
};
pub use siegel::{
    cremer_theta, diophantine_check, golden_mean, kam_schedule, siegel_radius_bound, siegel_series,
    CremerReport, CremerTerm, DiophantineParams, DiophantineReport, GrowthCheck, KamSchedule,
};

/// Samples per circle when measuring functional-equation residuals.
pub const RESIDUAL_SAMPLES: usize = 64;
/// Residual level that defines the radius hint.
pub const RADIUS_HINT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Koenigs,
    Boettcher,
    Siegel,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Koenigs => "koenigs",
            Regime::Boettcher => "boettcher",
            Regime::Siegel => "siegel",
        }
    }
}

/// A linearizing series in the local coordinate `u = z - center` together
/// with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Linearization {
    pub regime: Regime,
    pub center: Complex,
    pub multiplier: Complex,
    /// Local degree `p` of the superattracting case, 1 otherwise.
    pub local_degree: usize,
    /// Boettcher gauge `c` with `c^{p-1} = a_p` (the series is in `w = c u`); 1 otherwise.
    pub gauge: Complex,
    pub series: PowerSeries,
    pub residual_radius: f64,
    pub residual: f64,
    /// `(k, |denominator_k|)` for every divided coefficient.
    pub denominators: Vec<(usize, f64)>,
}

impl Linearization {
    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn radius_hint(&self) -> f64 {
        self.series.radius_hint
    }

    pub fn denominators_min(&self) -> f64 {
        self.denominators
            .iter()
            .map(|d| d.1)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_inverse_denominator(&self) -> f64 {
        1.0 / self.denominators_min()
    }
}

pub(crate) fn max_on_circle(r: f64, mut f: impl FnMut(Complex) -> Complex) -> f64 {
    (0..RESIDUAL_SAMPLES)
        .map(|k| f(Complex::from_polar(r, 2.0 * PI * k as f64 / RESIDUAL_SAMPLES as f64)).norm())
        .fold(0.0, f64::max)
}

/// Largest radius of the grid `2^{-j/4}`, `j = 0..=80`, below which every
/// grid radius keeps the residual under [`RADIUS_HINT_TOL`]; 0 if none does.
pub(crate) fn radius_hint(mut residual: impl FnMut(f64) -> f64) -> f64 {
    let mut hint = 0.0;
    for j in (0..=80).rev() {
        let r = 2f64.powf(-(j as f64) / 4.0);
        let res = residual(r);
        if !(res < RADIUS_HINT_TOL) {
            break;
        }
        hint = r;
    }
    hint
}
