use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::{One, Zero};

use super::{max_on_circle, radius_hint, Linearization, Regime};
use crate::error::{Error, Result};
use crate::poly::{Complex, Polynomial};
use crate::series::PowerSeries;

/// Denominators below this modulus abort the Siegel recursion.
pub const SMALL_DENOMINATOR_FLOOR: f64 = 1e-14;
const SIEGEL_RESIDUAL_RADIUS: f64 = 0.01;

/// `(√5 − 1) / 2`.
pub fn golden_mean() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// `|e^{2πi nθ} − 1| = 2|sin(π frac(nθ))|`, with the fractional part taken first.
fn rotation_gap(theta: f64, n: u64) -> f64 {
    let t = theta.rem_euclid(1.0);
    let x = (t * n as f64).rem_euclid(1.0);
    2.0 * (PI * x).sin().abs()
}

/// Solves `h(λz) = P(h(z))`, `h(0) = 0`, `h'(0) = 1`, for `P(0) = 0`, `P'(0) = λ`, `|λ| = 1`.
///
/// `h_k = [z^k] Σ_{j≥2} p_j h^j / (λ^k − λ)`.
pub fn siegel_series(lambda: Complex, p: &Polynomial, order: usize) -> Result<Linearization> {
    let gap = p.coeff(0).norm();
    if gap > 1e-12 {
        return Err(Error::NotFixedPoint { gap });
    }
    if (p.coeff(1) - lambda).norm() > 1e-12 || (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::NotNeutral { modulus: p.coeff(1).norm() });
    }
    let order = order.max(1);
    let mut h = PowerSeries::identity(order);
    let mut denominators = Vec::new();
    let mut lambda_k = lambda;
    for k in 2..=order {
        lambda_k *= lambda;
        let denom = lambda_k - lambda;
        if denom.norm() < SMALL_DENOMINATOR_FLOOR {
            return Err(Error::SmallDenominator { order: k, modulus: denom.norm() });
        }
        denominators.push((k, denom.norm()));
        // Horner in h for the nonlinear part; h_k is still zero here
        let mut acc = PowerSeries::zero(k);
        let hk = h.truncate(k);
        for j in (2..=p.degree()).rev() {
            acc = acc.mul(&hk);
            let c0 = acc.coeff(0) + p.coeff(j);
            acc.set_coeff(0, c0);
        }
        let nonlinear = acc.mul(&hk).mul(&hk);
        h.set_coeff(k, nonlinear.coeff(k) / denom);
    }
    let residual_at = |r: f64| max_on_circle(r, |z| h.eval(lambda * z) - p.eval(h.eval(z)));
    let hint = radius_hint(residual_at);
    let residual = residual_at(SIEGEL_RESIDUAL_RADIUS);
    h.radius_hint = hint;
    Ok(Linearization {
        regime: Regime::Siegel,
        center: Complex::zero(),
        multiplier: lambda,
        local_degree: 1,
        gauge: Complex::one(),
        series: h,
        residual_radius: SIEGEL_RESIDUAL_RADIUS,
        residual,
        denominators,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiophantineParams {
    pub c: f64,
    pub mu: f64,
    pub n_max: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiophantineReport {
    /// `min_{n ≤ n_max} |λ^n − 1| n^μ`.
    pub margin: f64,
    pub argmin: u64,
    pub pass: bool,
}

pub fn diophantine_check(theta: f64, params: DiophantineParams) -> DiophantineReport {
    let mut margin = f64::INFINITY;
    let mut argmin = 0;
    for n in 1..=params.n_max {
        let m = rotation_gap(theta, n) * (n as f64).powf(params.mu);
        if m < margin {
            margin = m;
            argmin = n;
        }
    }
    DiophantineReport {
        margin,
        argmin,
        pass: margin >= params.c,
    }
}

/// The growth condition `4π 2^{q_ℓ − q_{ℓ+1}} < (1/ℓ)^{d^{2^{q_ℓ}}}` in log form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthCheck {
    pub d: u32,
    /// `ln(4π) + (q_ℓ − q_{ℓ+1}) ln 2`.
    pub log_lhs: f64,
    /// `ln ln ℓ + 2^{q_ℓ} ln d`, the log of `−ln(rhs)`; `-inf` when `ℓ = 1`.
    pub log_neg_log_rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CremerTerm {
    /// 1-based index `ℓ`.
    pub ell: usize,
    /// `q_ℓ`, so the probed power is `n = 2^{q_ℓ}`.
    pub q: u32,
    /// `|λ^{2^{q_ℓ}} − 1|` from the exact dyadic tail.
    pub distance: f64,
    /// `4π 2^{q_ℓ − q_{ℓ+1}}`.
    pub bound: f64,
    pub holds: bool,
    pub growth: Vec<GrowthCheck>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CremerReport {
    pub theta: f64,
    pub terms: Vec<CremerTerm>,
}

impl CremerReport {
    pub fn all_hold(&self) -> bool {
        self.terms.iter().all(|t| t.holds)
    }
}

/// `θ = Σ_{k ≤ L} 2^{−q_k}` with smallness certificates for `ℓ < L`.
///
/// `2^{q_ℓ} θ ≡ Σ_{k>ℓ} 2^{q_ℓ − q_k} (mod 1)`, so the distances are exact up to
/// one rounding of the sine.
pub fn cremer_theta(q: &[u32], degrees: &[u32]) -> Result<CremerReport> {
    if q.is_empty() || q[0] < 2 || q.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("q must be strictly increasing with q_1 > 1"));
    }
    let theta: f64 = q.iter().map(|&qk| 2f64.powi(-(qk as i32))).sum();
    let mut terms = Vec::new();
    for ell in 0..q.len() - 1 {
        let tail: f64 = q[ell + 1..]
            .iter()
            .map(|&qk| 2f64.powi(q[ell] as i32 - qk as i32))
            .sum();
        let distance = 2.0 * (PI * tail.rem_euclid(1.0)).sin().abs();
        let log_lhs = (4.0 * PI).ln() + (q[ell] as f64 - q[ell + 1] as f64) * 2f64.ln();
        let bound = log_lhs.exp();
        let index = ell + 1;
        let growth = degrees
            .iter()
            .map(|&d| {
                let log_neg_log_rhs = if index == 1 {
                    f64::NEG_INFINITY
                } else {
                    (index as f64).ln().ln() + 2f64.powi(q[ell] as i32) * (d as f64).ln()
                };
                // lhs < rhs  ⇔  −log_lhs > −log_rhs = exp(log_neg_log_rhs)
                let holds = if index == 1 {
                    log_lhs < 0.0
                } else {
                    log_lhs < 0.0 && (-log_lhs).ln() > log_neg_log_rhs
                };
                GrowthCheck { d, log_lhs, log_neg_log_rhs, holds }
            })
            .collect();
        terms.push(CremerTerm {
            ell: index,
            q: q[ell],
            distance,
            bound,
            holds: distance <= bound * (1.0 + 1e-12),
            growth,
        });
    }
    Ok(CremerReport { theta, terms })
}

/// `min_{n ≤ n_max} |λ^n − 1|^{1/(d^n − 1)}`; resonances below the
/// small-denominator floor count as exact zeros.
pub fn siegel_radius_bound(lambda: Complex, d: u32, n_max: u32) -> f64 {
    let one = Complex::one();
    let mut power = one;
    let mut best = f64::INFINITY;
    for n in 1..=n_max {
        power *= lambda;
        let gap = (power - one).norm();
        let exponent = (d as f64).powi(n as i32) - 1.0;
        let value = if gap < SMALL_DENOMINATOR_FLOOR {
            0.0
        } else if exponent.is_finite() && exponent > 0.0 {
            (gap.ln() / exponent).exp()
        } else {
            1.0
        };
        best = best.min(value);
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct KamSchedule {
    pub r: Vec<f64>,
    pub eta: Vec<f64>,
    pub delta: Vec<f64>,
    /// `0 < η < 1/5`, `δ < η` and `c₀ δ < η^{μ+2}` at each step.
    pub valid: Vec<bool>,
}

impl KamSchedule {
    pub fn all_valid(&self) -> bool {
        self.valid.iter().all(|&v| v)
    }

    /// `r_final / r₀`.
    pub fn radius_ratio(&self) -> f64 {
        self.r[self.r.len() - 1] / self.r[0]
    }

    pub fn eta_sum(&self) -> f64 {
        self.eta.iter().sum()
    }
}

/// `r_{n+1} = r_n(1 − 5η_n)`, `η_{n+1} = η_n / 2`, `δ_{n+1} = c₀ δ_n² η_n^{−μ−2} 2^{−μ−2}`.
pub fn kam_schedule(r0: f64, eta0: f64, delta0: f64, c0: f64, mu: f64, steps: usize) -> Result<KamSchedule> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidInput("r0 must be positive"));
    }
    let mut s = KamSchedule {
        r: Vec::with_capacity(steps + 1),
        eta: Vec::with_capacity(steps + 1),
        delta: Vec::with_capacity(steps + 1),
        valid: Vec::with_capacity(steps + 1),
    };
    let (mut r, mut eta, mut delta) = (r0, eta0, delta0);
    for _ in 0..=steps {
        s.r.push(r);
        s.eta.push(eta);
        s.delta.push(delta);
        s.valid
            .push(eta > 0.0 && eta < 0.2 && delta < eta && c0 * delta < eta.powf(mu + 2.0));
        r *= 1.0 - 5.0 * eta;
        delta = c0 * delta * delta * eta.powf(-mu - 2.0) * 2f64.powf(-mu - 2.0);
        eta /= 2.0;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::rotation;
    use alloc::vec;

    fn golden_quadratic() -> (Complex, Polynomial) {
        let lambda = rotation(golden_mean());
        (lambda, Polynomial::new(vec![Complex::zero(), lambda, Complex::one()]))
    }

    #[test]
    fn golden_quadratic_series() {
        let (lambda, p) = golden_quadratic();
        let lin = siegel_series(lambda, &p, 40).unwrap();
        let h2 = Complex::one() / (lambda * lambda - lambda);
        assert!((lin.series.coeff(2) - h2).norm() < 1e-14);
        assert!(lin.residual < 1e-6, "{}", lin.residual);
        assert_eq!(lin.denominators.len(), 39);
    }

    #[test]
    fn siegel_linear_is_identity() {
        let lambda = rotation(0.1234567);
        let p = Polynomial::new(vec![Complex::zero(), lambda]);
        let lin = siegel_series(lambda, &p, 12).unwrap();
        for k in 2..=12 {
            assert_eq!(lin.series.coeff(k), Complex::zero());
        }
    }

    #[test]
    fn siegel_rejects_resonance() {
        let lambda = rotation(0.25);
        let p = Polynomial::new(vec![Complex::zero(), lambda, Complex::one()]);
        assert!(matches!(siegel_series(lambda, &p, 10), Err(Error::SmallDenominator { order: 5, .. })));
    }

    #[test]
    fn golden_denominators_respect_a_fitted_bound() {
        // |λ^k − λ| = |λ^{k−1} − 1| ≥ c / (k−1)^μ with μ = 2
        let (lambda, p) = golden_quadratic();
        let lin = siegel_series(lambda, &p, 200).unwrap();
        let c = lin
            .denominators
            .iter()
            .map(|&(k, m)| m * ((k - 1) as f64).powi(2))
            .fold(f64::INFINITY, f64::min);
        assert!(c > 0.5);
    }

    #[test]
    fn diophantine_examples() {
        let golden = diophantine_check(golden_mean(), DiophantineParams { c: 0.1, mu: 2.0, n_max: 10_000 });
        assert!(golden.pass && golden.margin > 0.0);
        let third = diophantine_check(1.0 / 3.0, DiophantineParams { c: 1e-9, mu: 2.0, n_max: 10 });
        assert!(!third.pass);
        assert_eq!(third.argmin, 3);
        assert!(third.margin < 1e-12);
        let theta = cremer_theta(&[2, 4, 16], &[]).unwrap().theta;
        let r = diophantine_check(theta, DiophantineParams { c: 1e-3, mu: 2.0, n_max: 1 << 16 });
        assert_eq!(r.argmin, 1 << 16);
    }

    #[test]
    fn cremer_examples() {
        let r = cremer_theta(&[2, 4], &[2]).unwrap();
        assert_eq!(r.theta, 0.3125);
        let direct = (rotation(0.3125).powu(4) - Complex::one()).norm();
        assert!((r.terms[0].distance - direct).abs() < 1e-14);
        assert!((r.terms[0].bound - PI).abs() < 1e-14);
        assert!(r.all_hold());
        let r = cremer_theta(&[2, 20], &[2]).unwrap();
        assert!((r.terms[0].bound - 4.0 * PI * 2f64.powi(-18)).abs() < 1e-18);
        assert!((r.terms[0].bound - 4.79e-5).abs() < 1e-7);
        assert!(r.all_hold());
        // deeper tails shrink the distance geometrically
        let r = cremer_theta(&[2, 5, 9, 14], &[2, 3]).unwrap();
        assert!(r.all_hold());
        assert_eq!(r.terms[2].growth.len(), 2);
        assert!(r.terms[2].growth[0].log_neg_log_rhs.is_finite());
    }

    #[test]
    fn radius_bound_examples() {
        let lambda = rotation(golden_mean());
        let r = siegel_radius_bound(lambda, 2, 12);
        assert!(r > 0.0 && r < 1.0);
        // the per-n terms tend to 1, so extending the scan eventually stops lowering the bound
        assert_eq!(siegel_radius_bound(lambda, 2, 40), siegel_radius_bound(lambda, 2, 60));
        assert_eq!(siegel_radius_bound(rotation(0.5), 2, 4), 0.0);
    }

    #[test]
    fn kam_examples() {
        let (eta0, mu, c0) = (0.1f64, 2.0, 1.0);
        let delta0 = eta0.powf(mu + 2.0) / 2.0;
        let s = kam_schedule(1.0, eta0, delta0, c0, mu, 30).unwrap();
        assert!(s.all_valid());
        assert!(s.radius_ratio() > 0.0);
        assert!(s.eta_sum() < 2.0 * eta0 + 1e-12);
        assert_eq!(s.eta[10], eta0 / 1024.0);
        let bad = kam_schedule(1.0, eta0, 2.0 * eta0.powf(mu + 2.0), c0, mu, 3).unwrap();
        assert!(!bad.valid[0]);
    }
}
