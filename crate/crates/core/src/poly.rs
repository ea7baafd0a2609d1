//! Complex polynomials, affine conjugation and iteration with escape.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

/// Default cap on the degree produced by [`Polynomial::compose`].
pub const DEFAULT_DEGREE_CAP: usize = 4096;

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint {
    Finite(Complex),
    Infinity,
}

impl SpherePoint {
    pub fn finite(self) -> Option<Complex> {
        match self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    /// Chordal distance on the sphere of diameter 1.
    pub fn chordal_distance(self, other: SpherePoint) -> f64 {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            (SpherePoint::Finite(z), SpherePoint::Infinity)
            | (SpherePoint::Infinity, SpherePoint::Finite(z)) => {
                1.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (SpherePoint::Finite(z), SpherePoint::Finite(w)) => {
                (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
            }
        }
    }
}

impl From<Complex> for SpherePoint {
    fn from(z: Complex) -> Self {
        SpherePoint::Finite(z)
    }
}

/// A complex polynomial stored by ascending coefficients `a_0, ..., a_d`.
///
/// The leading coefficient is nonzero except for the zero polynomial,
/// which is represented by the single coefficient `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex>,
}

impl Polynomial {
    /// Builds a polynomial, trimming exact trailing zeros.
    pub fn new(mut coeffs: Vec<Complex>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex::zero());
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex) -> Self {
        Self::new(vec![c])
    }

    pub fn identity() -> Self {
        Self::new(vec![Complex::zero(), Complex::new(1.0, 0.0)])
    }

    /// `z^d`.
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![Complex::zero(); d + 1];
        coeffs[d] = Complex::new(1.0, 0.0);
        Self::new(coeffs)
    }

    /// `z^2 + c`.
    pub fn quadratic(c: Complex) -> Self {
        Self::new(vec![c, Complex::zero(), Complex::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex {
        self.coeffs[self.degree()]
    }

    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).copied().unwrap_or_else(Complex::zero)
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(), |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex) -> (Complex, Complex) {
        let mut p = Complex::zero();
        let mut dp = Complex::zero();
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum |a_k| |z|^k`, the natural scale for the rounding error of `eval`.
    pub fn abs_eval(&self, z: Complex) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.degree() == 0 {
            return Polynomial::constant(Complex::zero());
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![Complex::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn scale_by(&self, s: Complex) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `P(z) - w`.
    pub fn minus_constant(&self, w: Complex) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] -= w;
        Polynomial::new(coeffs)
    }

    /// `P ∘ Q`, refusing results of degree above [`DEFAULT_DEGREE_CAP`].
    pub fn compose(&self, inner: &Polynomial) -> Result<Polynomial> {
        self.compose_capped(inner, DEFAULT_DEGREE_CAP)
    }

    pub fn compose_capped(&self, inner: &Polynomial, cap: usize) -> Result<Polynomial> {
        let degree = self.degree() * inner.degree();
        if degree > cap {
            return Err(Error::CapExceeded { degree, cap });
        }
        // Horner in the polynomial ring.
        let mut acc = Polynomial::constant(self.leading());
        for &c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(inner);
            acc.coeffs[0] += c;
        }
        Ok(Polynomial::new(acc.coeffs))
    }

    /// Coefficients of `P^m` by repeated composition.
    pub fn iterate_symbolic(&self, m: usize, cap: usize) -> Result<Polynomial> {
        let degree = self.degree().saturating_pow(m as u32);
        if degree > cap {
            return Err(Error::CapExceeded { degree, cap });
        }
        let mut out = Polynomial::identity();
        for _ in 0..m {
            out = self.compose_capped(&out, cap)?;
        }
        Ok(out)
    }

    /// Coefficients of `u ↦ P(z0 + u)`.
    pub fn taylor_shift(&self, z0: Complex) -> Polynomial {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let next = c[j + 1];
                c[j] += z0 * next;
            }
        }
        Polynomial::new(c)
    }

    /// Coefficients of `u ↦ P(z0 + u) - z0`, the local form at a fixed point.
    pub fn local_at(&self, z0: Complex) -> Polynomial {
        self.taylor_shift(z0).minus_constant(z0)
    }

    /// `P^n(z)`, or infinity once an iterate leaves the disc of radius `radius`
    /// or overflows.
    pub fn iterate(&self, z: Complex, n: usize, radius: f64) -> SpherePoint {
        let escaped = |z: Complex| {
            let r = z.norm();
            !r.is_finite() || r > radius
        };
        let mut z = z;
        if escaped(z) {
            return SpherePoint::Infinity;
        }
        for _ in 0..n {
            z = self.eval(z);
            if escaped(z) {
                return SpherePoint::Infinity;
            }
        }
        SpherePoint::Finite(z)
    }

    /// Image of a point of the sphere; infinity is fixed.
    pub fn apply(&self, z: SpherePoint) -> SpherePoint {
        match z {
            SpherePoint::Infinity => SpherePoint::Infinity,
            SpherePoint::Finite(z) => {
                let w = self.eval(z);
                if w.is_finite() {
                    SpherePoint::Finite(w)
                } else {
                    SpherePoint::Infinity
                }
            }
        }
    }

    /// `P^n(z)` together with `(P^n)'(z)` by the chain rule.
    pub fn iterate_with_derivative(&self, z: Complex, n: usize) -> (Complex, Complex) {
        let mut z = z;
        let mut dz = Complex::new(1.0, 0.0);
        for _ in 0..n {
            let (p, dp) = self.eval_with_derivative(z);
            dz *= dp;
            z = p;
        }
        (z, dz)
    }

    /// Radius beyond which `|P(z)| >= 2|z|`:
    /// `max(1, (2 + sum_{k<d} |a_k|) / |a_d|)`.
    pub fn escape_radius(&self) -> f64 {
        let d = self.degree();
        let tail: f64 = self.coeffs[..d].iter().map(|c| c.norm()).sum();
        f64::max(1.0, (2.0 + tail) / self.leading().norm())
    }

    /// `Q = φ ∘ P ∘ φ⁻¹` for an affine `φ`.
    pub fn conjugate_affine(&self, phi: &AffineMap) -> Polynomial {
        let inv = phi.inverse();
        let inner = Polynomial::new(vec![inv.b, inv.a]);
        // degree is unchanged, so the cap cannot trigger
        let composed = self
            .compose_capped(&inner, usize::MAX)
            .expect("affine composition preserves degree");
        let mut q = composed.scale_by(phi.a);
        q.coeffs[0] += phi.b;
        q
    }

    /// Critical points of `P`, the roots of `P'`, with multiplicity.
    pub fn critical_points(&self) -> Result<crate::roots::RootSet> {
        crate::roots::all_roots(&self.derivative(), &crate::roots::SolveOptions::default())
    }
}

impl fmt::Display for Polynomial {
    /// Writes the comma-separated ascending coefficient list.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else if c.im < 0.0 {
                write!(f, "{}{}i", c.re, c.im)?;
            } else {
                write!(f, "{}+{}i", c.re, c.im)?;
            }
        }
        Ok(())
    }
}

/// The affine map `w = a z + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub a: Complex,
    pub b: Complex,
}

impl AffineMap {
    pub fn new(a: Complex, b: Complex) -> Result<Self> {
        if a.is_zero() || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput("affine scale must be finite and nonzero"));
        }
        Ok(Self { a, b })
    }

    pub fn identity() -> Self {
        Self {
            a: Complex::new(1.0, 0.0),
            b: Complex::zero(),
        }
    }

    pub fn apply(&self, z: Complex) -> Complex {
        self.a * z + self.b
    }

    pub fn inverse(&self) -> AffineMap {
        let a = self.a.inv();
        AffineMap { a, b: -self.b * a }
    }

    /// The map `w = c (z - z0)` with `c^{d-1} = a_d` (principal root),
    /// which turns `P` into a monic polynomial centered at `z0`.
    pub fn monicizing(p: &Polynomial, z0: Complex) -> AffineMap {
        let d = p.degree();
        let c = if d >= 2 {
            p.leading().powf(1.0 / (d - 1) as f64)
        } else {
            Complex::new(1.0, 0.0)
        };
        AffineMap { a: c, b: -c * z0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let sq = Polynomial::monomial(2);
        assert_eq!(sq.eval(c(1.0, 1.0)), c(0.0, 2.0));
        assert_eq!(Polynomial::from_real(&[1.0, 0.0, 1.0]).eval(Complex::zero()), c(1.0, 0.0));
        // fixed point of z^2 - 1 from the quadratic formula
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        assert_abs_diff_eq!(p.eval(c(golden, 0.0)).re, golden, epsilon = 1e-14);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(Polynomial::monomial(2).derivative(), Polynomial::from_real(&[0.0, 2.0]));
        assert_eq!(
            Polynomial::quadratic(c(0.3, -2.0)).derivative(),
            Polynomial::from_real(&[0.0, 2.0])
        );
        assert_eq!(
            Polynomial::from_real(&[0.0, -2.0, 0.0, 1.0]).derivative(),
            Polynomial::from_real(&[-2.0, 0.0, 3.0])
        );
    }

    #[test]
    fn compose_examples() {
        let sq = Polynomial::monomial(2);
        assert_eq!(sq.compose(&sq).unwrap(), Polynomial::monomial(4));
        let p = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        assert_eq!(
            p.compose(&p).unwrap(),
            Polynomial::from_real(&[2.0, 0.0, 2.0, 0.0, 1.0])
        );
        assert_eq!(p.compose(&Polynomial::identity()).unwrap(), p);
    }

    #[test]
    fn compose_respects_cap() {
        let p = Polynomial::monomial(64);
        assert_eq!(p.compose(&p).unwrap().degree(), 4096);
        let q = Polynomial::monomial(65);
        assert!(matches!(q.compose(&p), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn iterate_examples() {
        let sq = Polynomial::monomial(2);
        let r = sq.escape_radius();
        assert_eq!(sq.iterate(c(0.5, 0.0), 3, r), SpherePoint::Finite(c(0.00390625, 0.0)));
        assert_eq!(sq.iterate(c(2.0, 0.0), 200, r), SpherePoint::Infinity);
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        assert_eq!(p.iterate(Complex::zero(), 2, p.escape_radius()), SpherePoint::Finite(Complex::zero()));
    }

    #[test]
    fn escape_radius_examples() {
        assert_eq!(Polynomial::monomial(2).escape_radius(), 2.0);
        assert_eq!(Polynomial::from_real(&[1.0, 0.0, 1.0]).escape_radius(), 3.0);
        for d in 2..6 {
            assert!(Polynomial::monomial(d).escape_radius() <= 2.0);
        }
        // |P(z)| >= 2|z| on the circle of radius R
        let p = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        let r = p.escape_radius();
        for k in 0..360 {
            let z = Complex::from_polar(r, k as f64 * core::f64::consts::PI / 180.0);
            assert!(p.eval(z).norm() >= 2.0 * z.norm() - 1e-12);
        }
    }

    #[test]
    fn conjugation_monicizes() {
        let p = Polynomial::from_real(&[0.0, 0.0, 2.0]);
        let q = p.conjugate_affine(&AffineMap::new(c(2.0, 0.0), Complex::zero()).unwrap());
        assert_eq!(q, Polynomial::monomial(2));
        let phi = AffineMap::monicizing(&p, Complex::zero());
        assert_eq!(phi.a, c(2.0, 0.0));
        let quad = Polynomial::quadratic(c(-0.4, 0.3));
        assert_eq!(quad.conjugate_affine(&AffineMap::identity()), quad);
    }

    #[test]
    fn taylor_shift_matches_eval() {
        let p = Polynomial::new(vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 1.0), c(2.0, -1.0)]);
        let z0 = c(0.3, -0.7);
        let shifted = p.taylor_shift(z0);
        for u in [c(0.1, 0.2), c(-1.0, 0.5), c(2.0, 0.0)] {
            assert!((shifted.eval(u) - p.eval(z0 + u)).norm() < 1e-12);
        }
    }

    #[test]
    fn display_roundtrips_format() {
        let p = Polynomial::new(vec![c(0.0, 0.0), c(0.5, 0.1), c(1.0, 0.0)]);
        assert_eq!(alloc::format!("{p}"), "0,0.5+0.1i,1");
        let q = Polynomial::new(vec![c(-1.0, -2.0), c(1.0, 0.0)]);
        assert_eq!(alloc::format!("{q}"), "-1-2i,1");
    }
}
