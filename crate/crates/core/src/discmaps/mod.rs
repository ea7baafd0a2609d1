//! Holomorphic self-maps of the unit disc: the Poincaré metric, contraction,
//! Denjoy–Wolff limits and inequalities for univalent functions.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Complex, Polynomial};
use crate::series::PowerSeries;

mod univalent;

pub use univalent::{
    area_theorem_sum, gauss_legendre, image_area, koebe_distortion_check, koebe_quarter_check,
    winding_number, AreaReport, DistortionReport, KoebeFunction, KoebeReport, LaurentTail,
    Univalent,
};

/// Radius beyond which Denjoy–Wolff displacement is measured in the Euclidean metric.
pub const BOUNDARY_SWITCH: f64 = 0.999;
/// Radius of the circle on which self-map claims are validated.
pub const SELF_MAP_RADIUS: f64 = 0.999;
const SELF_MAP_SAMPLES: usize = 2048;

fn check_inside(z: Complex) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDisc)
    }
}

/// `ρ(z, w) = artanh |(z − w)/(1 − z̄w)|`.
///
/// Evaluated as `ln(1 + x) − ½ ln(1 − x²)` with
/// `1 − x² = (1 − |z|²)(1 − |w|²)/|1 − z̄w|²`, which stays accurate near the boundary.
pub fn poincare_distance(z: Complex, w: Complex) -> Result<f64> {
    check_inside(z)?;
    check_inside(w)?;
    let denom = (Complex::one() - z.conj() * w).norm();
    let x = ((z - w).norm() / denom).min(1.0);
    let one_minus = |a: Complex| {
        let r = a.norm();
        (1.0 - r) * (1.0 + r)
    };
    let one_minus_x2 = one_minus(z) * one_minus(w) / (denom * denom);
    Ok(x.ln_1p() - 0.5 * one_minus_x2.ln())
}

/// Disc automorphism `e^{iθ} (z − a)/(1 − āz)`.
pub fn mobius(theta: f64, a: Complex, z: Complex) -> Complex {
    Complex::from_polar(1.0, theta) * (z - a) / (Complex::one() - a.conj() * z)
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiscMapKind {
    /// `rotation · Π (z − a_k)/(1 − ā_k z)`.
    Blaschke { rotation: Complex, zeros: Vec<Complex> },
    Polynomial(Polynomial),
    Series(PowerSeries),
}

/// A holomorphic map from the disc into itself, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscMap {
    kind: DiscMapKind,
}

impl DiscMap {
    pub fn blaschke(rotation: Complex, zeros: Vec<Complex>) -> Result<Self> {
        if (rotation.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput("Blaschke rotation must be unimodular"));
        }
        for &a in &zeros {
            check_inside(a)?;
        }
        if zeros.is_empty() {
            return Err(Error::InvalidInput("Blaschke product needs at least one zero"));
        }
        Ok(Self { kind: DiscMapKind::Blaschke { rotation, zeros } })
    }

    /// `(z + a)/(1 + āz)`, the automorphism sending 0 to `a`.
    pub fn mobius(a: Complex) -> Result<Self> {
        Self::blaschke(Complex::one(), alloc::vec![-a])
    }

    pub fn polynomial(p: Polynomial) -> Result<Self> {
        let map = Self { kind: DiscMapKind::Polynomial(p) };
        map.validate()?;
        Ok(map)
    }

    pub fn series(s: PowerSeries) -> Result<Self> {
        let map = Self { kind: DiscMapKind::Series(s) };
        map.validate()?;
        Ok(map)
    }

    fn validate(&self) -> Result<()> {
        let sup = (0..SELF_MAP_SAMPLES)
            .map(|k| {
                let z = Complex::from_polar(SELF_MAP_RADIUS, 2.0 * PI * k as f64 / SELF_MAP_SAMPLES as f64);
                self.eval(z).norm()
            })
            .fold(0.0, f64::max);
        if sup < 1.0 && sup.is_finite() {
            Ok(())
        } else {
            Err(Error::NotASelfMap { sup })
        }
    }

    pub fn kind(&self) -> &DiscMapKind {
        &self.kind
    }

    pub fn eval(&self, z: Complex) -> Complex {
        match &self.kind {
            DiscMapKind::Blaschke { rotation, zeros } => zeros.iter().fold(*rotation, |acc, &a| {
                acc * (z - a) / (Complex::one() - a.conj() * z)
            }),
            DiscMapKind::Polynomial(p) => p.eval(z),
            DiscMapKind::Series(s) => s.eval(z),
        }
    }

    pub fn derivative(&self, z: Complex) -> Complex {
        match &self.kind {
            DiscMapKind::Blaschke { rotation, zeros } => {
                // product rule with b_k' = (1 − |a_k|²)/(1 − ā_k z)²
                let factor = |a: Complex| (z - a) / (Complex::one() - a.conj() * z);
                let mut value = *rotation;
                let mut deriv = Complex::zero();
                for &a in zeros {
                    let w = Complex::one() - a.conj() * z;
                    deriv = deriv * factor(a) + value * (1.0 - a.norm_sqr()) / (w * w);
                    value *= factor(a);
                }
                deriv
            }
            DiscMapKind::Polynomial(p) => p.eval_with_derivative(z).1,
            DiscMapKind::Series(s) => s.eval_derivative(z),
        }
    }

    /// True for degree-one Blaschke products and rotations `e^{iθ}z`.
    pub fn is_automorphism(&self) -> bool {
        match &self.kind {
            DiscMapKind::Blaschke { zeros, .. } => zeros.len() == 1,
            DiscMapKind::Polynomial(p) => {
                p.degree() == 1 && p.coeff(0).is_zero() && (p.coeff(1).norm() - 1.0).abs() < 1e-12
            }
            DiscMapKind::Series(s) => {
                s.coeff(0).is_zero()
                    && (s.coeff(1).norm() - 1.0).abs() < 1e-12
                    && s.coeffs()[2..].iter().all(|c| c.is_zero())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzPickReport {
    pub ratio: f64,
    pub automorphism: bool,
    /// `ratio ≤ 1 + 1e-10`.
    pub pass: bool,
    /// `ratio < 1` for a non-automorphism.
    pub strict: bool,
}

/// `ρ(f(z), f(w)) / ρ(z, w)`.
pub fn schwarz_pick(f: &DiscMap, z: Complex, w: Complex) -> Result<SchwarzPickReport> {
    let base = poincare_distance(z, w)?;
    if base == 0.0 {
        return Err(Error::InvalidInput("Schwarz-Pick needs distinct points"));
    }
    let ratio = poincare_distance(f.eval(z), f.eval(w))? / base;
    let automorphism = f.is_automorphism();
    Ok(SchwarzPickReport {
        ratio,
        automorphism,
        pass: ratio <= 1.0 + 1e-10,
        strict: automorphism || ratio < 1.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WolffKind {
    InteriorFixed,
    BoundaryPoint,
    Undecided(usize),
}

impl WolffKind {
    pub fn name(self) -> &'static str {
        match self {
            WolffKind::InteriorFixed => "interior-fixed",
            WolffKind::BoundaryPoint => "boundary-point",
            WolffKind::Undecided(_) => "undecided",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenjoyWolff {
    pub alpha: Complex,
    pub kind: WolffKind,
    pub iterations: usize,
    /// `|f'(α)|` for an interior limit.
    pub derivative_modulus: Option<f64>,
}

/// Iterates `f` from `z0` until the step falls below `tol`.
///
/// Steps are measured in the Poincaré metric while `|z| ≤ 0.999` and in the
/// Euclidean metric beyond.
pub fn denjoy_wolff(f: &DiscMap, z0: Complex, tol: f64, n_max: usize) -> Result<DenjoyWolff> {
    check_inside(z0)?;
    let mut z = z0;
    for n in 1..=n_max {
        let next = f.eval(z);
        let near_boundary = next.norm() > BOUNDARY_SWITCH || next.norm() >= 1.0;
        let step = if near_boundary || z.norm() >= 1.0 {
            (next - z).norm()
        } else {
            poincare_distance(z, next)?
        };
        z = next;
        if step < tol {
            return Ok(if near_boundary {
                DenjoyWolff {
                    alpha: z / z.norm(),
                    kind: WolffKind::BoundaryPoint,
                    iterations: n,
                    derivative_modulus: None,
                }
            } else {
                DenjoyWolff {
                    alpha: z,
                    kind: WolffKind::InteriorFixed,
                    iterations: n,
                    derivative_modulus: Some(f.derivative(z).norm()),
                }
            });
        }
    }
    Ok(DenjoyWolff {
        alpha: z,
        kind: WolffKind::Undecided(n_max),
        iterations: n_max,
        derivative_modulus: None,
    })
}
