use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Complex, Polynomial};
use crate::series::PowerSeries;

#[derive(Debug, Clone, PartialEq)]
pub struct PetalReport {
    pub k: usize,
    /// `a` in `P(z) = z + a z^{k+1} + ...`.
    pub leading: Complex,
    /// `b` with `b^k = k a`; the petal lives in `W = (b z)^k`.
    pub normalizer: Complex,
    pub epsilon: f64,
    /// `max |F(W) + ε|` over the sampled boundary of `Δ(−ε, ε)`.
    pub epsilon_image: f64,
    pub samples: usize,
    pub boundary_maps_inside: bool,
    /// Steps for `W = −ε` to reach `|W| < target`, if it did within the cap.
    pub steps_to_target: Option<usize>,
    pub target: f64,
    /// `(w, |Q(w) − w − 1|)` for the Fatou coordinate `Q(w) = −1/F(−1/w)`.
    pub fatou_errors: Vec<(f64, f64)>,
    /// Coefficient of `z^k` in `(P(z)/z)^k`, equal to `k a`.
    pub sector_coefficient: Complex,
}

pub const DEFAULT_PETAL_SAMPLES: usize = 360;
pub const DEFAULT_PETAL_TARGET: f64 = 1e-6;
pub const DEFAULT_PETAL_MAX_STEPS: usize = 10_000_000;

struct Normalized {
    p: Polynomial,
    b: Complex,
    k: usize,
}

impl Normalized {
    /// `u` with `(b u)^k = W`, taking `arg W` in `(0, 2π]`.
    fn root(&self, w: Complex) -> Complex {
        if w.is_zero() {
            return w;
        }
        let mut t = w.arg();
        if t <= 0.0 {
            t += 2.0 * PI;
        }
        Complex::from_polar(w.norm().powf(1.0 / self.k as f64), t / self.k as f64) / self.b
    }

    /// The induced map on `W = (b z)^k`.
    fn map(&self, w: Complex) -> Complex {
        (self.b * self.p.eval(self.root(w))).powu(self.k as u32)
    }
}

/// Attracting petal `Δ(−ε, ε)` for `P(z) = z + a z^{k+1} + ...` in the
/// coordinate `W = (b z)^k`, where `F(W) = W + W^2 + O(W^{2+1/k})`.
pub fn parabolic_petal(
    p: &Polynomial,
    k: usize,
    epsilon: f64,
    samples: usize,
    max_steps: usize,
) -> Result<PetalReport> {
    if p.coeff(0).norm() > 1e-12 {
        return Err(Error::NotFixedPoint { gap: p.coeff(0).norm() });
    }
    if (p.coeff(1) - Complex::new(1.0, 0.0)).norm() > 1e-10 {
        return Err(Error::NotTangentToIdentity);
    }
    let actual = (2..=p.degree()).find(|&j| p.coeff(j).norm() > 1e-14).map(|j| j - 1);
    if k == 0 || actual != Some(k) {
        return Err(Error::WrongOrder(actual.unwrap_or(0)));
    }
    if !(epsilon > 0.0) || samples == 0 {
        return Err(Error::InvalidInput("epsilon and samples must be positive"));
    }
    let a = p.coeff(k + 1);
    let b = if k == 1 { a } else { (a * k as f64).powf(1.0 / k as f64) };
    let norm = Normalized { p: p.clone(), b, k };

    let epsilon_image = (0..samples)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / samples as f64;
            let w = Complex::new(-epsilon, 0.0) + Complex::from_polar(epsilon, t);
            (norm.map(w) + epsilon).norm()
        })
        .fold(0.0, f64::max);

    let target = DEFAULT_PETAL_TARGET;
    let mut u = norm.root(Complex::new(-epsilon, 0.0));
    let mut steps_to_target = None;
    for step in 0..=max_steps {
        if (b * u).norm().powi(k as i32) < target {
            steps_to_target = Some(step);
            break;
        }
        u = p.eval(u);
    }

    let fatou_errors = [10.0, 100.0, 1000.0]
        .iter()
        .map(|&w| {
            let w = Complex::new(w, 0.0);
            let q = -norm.map(-w.inv()).inv();
            (w.re, (q - w - 1.0).norm())
        })
        .collect();

    let mut ratio = p.coeffs()[1..].to_vec();
    ratio.push(Complex::zero());
    let sector = PowerSeries::new(ratio)?.truncate(k.max(1)).powi(k);

    Ok(PetalReport {
        k,
        leading: a,
        normalizer: b,
        epsilon,
        epsilon_image,
        samples,
        boundary_maps_inside: epsilon_image <= epsilon * (1.0 + 1e-12),
        steps_to_target,
        target,
        fatou_errors,
        sector_coefficient: sector.coeff(k),
    })
}
