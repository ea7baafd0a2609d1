//! Truncated power series in one variable.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Complex, Polynomial};

/// `c_0 + c_1 z + ... + c_N z^N`; arithmetic truncates at order `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex>,
    /// Estimated radius on which the truncation is trustworthy; 0 if unknown.
    pub radius_hint: f64,
}

impl PowerSeries {
    /// Builds a series of order `coeffs.len() - 1`; the order must be at least 1.
    pub fn new(coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput("power series needs order >= 1"));
        }
        Ok(Self {
            coeffs,
            radius_hint: 0.0,
        })
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex::zero(); order.max(1) + 1],
            radius_hint: 0.0,
        }
    }

    /// `z` truncated at `order`.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[1] = Complex::one();
        s
    }

    /// The polynomial, truncated or zero-padded to `order`.
    pub fn from_polynomial(p: &Polynomial, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (k, &c) in p.coeffs().iter().enumerate().take(s.coeffs.len()) {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).copied().unwrap_or_else(Complex::zero)
    }

    pub fn set_coeff(&mut self, k: usize, value: Complex) {
        self.coeffs[k] = value;
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(), |acc, &c| acc * z + c)
    }

    pub fn eval_derivative(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex::zero(), |acc, (k, &c)| acc * z + c * k as f64)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut s = Self::zero(order);
        for k in 0..=order.min(self.order()) {
            s.coeffs[k] = self.coeffs[k];
        }
        s.radius_hint = self.radius_hint;
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| self.coeffs[k] + other.coeffs[k]).collect();
        Self {
            coeffs,
            radius_hint: 0.0,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| self.coeffs[k] - other.coeffs[k]).collect();
        Self {
            coeffs,
            radius_hint: 0.0,
        }
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
            radius_hint: self.radius_hint,
        }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Complex::zero(); n + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self {
            coeffs: out,
            radius_hint: 0.0,
        }
    }

    pub fn powi(&self, k: usize) -> Self {
        let mut out = Self::zero(self.order());
        out.coeffs[0] = Complex::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `self ∘ inner`; `inner` must vanish at 0.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InvalidInput("inner series must vanish at 0"));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::zero(n);
        for &c in self.coeffs.iter().take(n + 1).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Compositional inverse of a series `c_1 z + c_2 z^2 + ...` with `c_1 != 0`.
    pub fn invert(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.coeffs[1].is_zero() {
            return Err(Error::InvalidInput("series is not invertible at 0"));
        }
        let n = self.order();
        let c1_inv = self.coeffs[1].inv();
        // g_k from [z^k] f(g(z)) = 0 for k >= 2, with g_1 = 1/c_1.
        let mut g = Self::zero(n);
        g.coeffs[1] = c1_inv;
        for k in 2..=n {
            let composed = self.compose(&g)?;
            let excess = composed.coeffs[k];
            g.coeffs[k] = -excess * c1_inv;
        }
        Ok(g)
    }

    /// Largest sampled `|self(z)|` on the circle `|z| = r`.
    pub fn sup_on_circle(&self, r: f64, samples: usize) -> f64 {
        (0..samples)
            .map(|k| {
                let t = 2.0 * core::f64::consts::PI * k as f64 / samples as f64;
                self.eval(Complex::from_polar(r, t)).norm()
            })
            .fold(0.0, f64::max)
    }
}
