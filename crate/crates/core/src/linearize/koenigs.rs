use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{max_on_circle, radius_hint, Linearization, Regime};
use crate::error::{Error, Result};
use crate::orbits::DEFAULT_NEUTRAL_TOL;
use crate::poly::{Complex, Polynomial};
use crate::series::PowerSeries;

const RESONANCE_FLOOR: f64 = 1e-12;

fn local_form(p: &Polynomial, z0: Complex) -> Result<Polynomial> {
    let gap = (p.eval(z0) - z0).norm();
    if !(gap <= 1e-9 * (1.0 + z0.norm())) {
        return Err(Error::NotFixedPoint { gap });
    }
    let mut f = p.local_at(z0);
    let mut coeffs = f.coeffs().to_vec();
    coeffs[0] = Complex::zero();
    f = Polynomial::new(coeffs);
    Ok(f)
}

fn fallback_radius(hint: f64) -> f64 {
    0.1 * hint.max(2f64.powi(-20))
}

/// Koenigs coordinate `φ` at a fixed point with `0 < |λ| ≠ 1`:
/// `φ(P(z)) = λ φ(z)`, `φ(z₀) = 0`, `φ'(z₀) = 1`.
pub fn koenigs(p: &Polynomial, z0: Complex, order: usize) -> Result<Linearization> {
    let f = local_form(p, z0)?;
    let lambda = f.coeff(1);
    let r = lambda.norm();
    if r == 0.0 || (r >= 1.0 - DEFAULT_NEUTRAL_TOL && r <= 1.0 + DEFAULT_NEUTRAL_TOL) {
        return Err(Error::NotAttracting { modulus: r });
    }
    let order = order.max(1);
    let fs = PowerSeries::from_polynomial(&f, order);
    // powers[j] = f^j truncated at `order`
    let mut powers = Vec::with_capacity(order + 1);
    let mut one = PowerSeries::zero(order);
    one.set_coeff(0, Complex::one());
    powers.push(one);
    for j in 1..order {
        let next = powers[j - 1].mul(&fs);
        powers.push(next);
    }
    let mut phi = PowerSeries::identity(order);
    let mut denominators = Vec::new();
    let mut lambda_k = lambda;
    for k in 2..=order {
        lambda_k *= lambda;
        let denom = lambda - lambda_k;
        if denom.norm() < RESONANCE_FLOOR {
            return Err(Error::ResonantMultiplier { order: k, modulus: denom.norm() });
        }
        denominators.push((k, denom.norm()));
        let mut rhs = Complex::zero();
        for j in 1..k {
            rhs += phi.coeff(j) * powers[j].coeff(k);
        }
        phi.set_coeff(k, rhs / denom);
    }
    let residual_at = |r: f64| max_on_circle(r, |u| phi.eval(f.eval(u)) - lambda * phi.eval(u));
    let hint = radius_hint(residual_at);
    let residual_radius = fallback_radius(hint);
    let residual = residual_at(residual_radius);
    phi.radius_hint = hint;
    Ok(Linearization {
        regime: Regime::Koenigs,
        center: z0,
        multiplier: lambda,
        local_degree: 1,
        gauge: Complex::one(),
        series: phi,
        residual_radius,
        residual,
        denominators,
    })
}

/// Boettcher coordinate at a finite superattracting fixed point.
///
/// With `P(z₀ + u) - z₀ = a_p u^p + ...` the series is built for the monic
/// form `g(w) = c f(w / c)`, `c^{p-1} = a_p` principal, and solves
/// `φ(g(w)) = φ(w)^p`.
pub fn boettcher_series(p: &Polynomial, z0: Complex, order: usize) -> Result<Linearization> {
    let f = local_form(p, z0)?;
    let scale = f.scale().max(1.0);
    if f.coeff(1).norm() > 1e-12 * scale {
        return Err(Error::NotSuperattracting);
    }
    let local_degree = (2..=f.degree())
        .find(|&k| f.coeff(k).norm() > 1e-14 * scale)
        .ok_or(Error::NotSuperattracting)?;
    let a_p = f.coeff(local_degree);
    let gauge = if local_degree == 2 {
        a_p
    } else {
        a_p.powf(1.0 / (local_degree - 1) as f64)
    };
    let g_coeffs: Vec<Complex> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &a)| if k < local_degree { Complex::zero() } else { a * gauge.powi(1 - k as i32) })
        .collect();
    let g = Polynomial::new(g_coeffs);
    let order = order.max(1);
    let work = local_degree + order - 1;
    let gs = PowerSeries::from_polynomial(&g, work);
    let mut phi = PowerSeries::identity(order);
    let mut denominators = Vec::new();
    for k in 2..=order {
        let wide = phi.truncate(work);
        let lhs = wide.compose(&gs)?.coeff(local_degree + k - 1);
        let rhs = wide.powi(local_degree).coeff(local_degree + k - 1);
        denominators.push((k, local_degree as f64));
        phi.set_coeff(k, (lhs - rhs) / local_degree as f64);
    }
    let residual_at =
        |r: f64| max_on_circle(r, |w| phi.eval(g.eval(w)) - phi.eval(w).powu(local_degree as u32));
    let hint = radius_hint(residual_at);
    let residual_radius = fallback_radius(hint);
    let residual = residual_at(residual_radius);
    phi.radius_hint = hint;
    Ok(Linearization {
        regime: Regime::Boettcher,
        center: z0,
        multiplier: Complex::zero(),
        local_degree,
        gauge,
        series: phi,
        residual_radius,
        residual,
        denominators,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenValue {
    pub value: f64,
    pub escaped: bool,
    pub iterations: usize,
}

/// `G(z) = lim d^{-n} log|P^n(z)|`, zero when the orbit stays bounded for `n_max` steps.
pub fn green_function(p: &Polynomial, z: Complex, n_max: usize) -> Result<GreenValue> {
    let d = p.degree();
    if d < 2 {
        return Err(Error::DegreeTooSmall(d));
    }
    let df = d as f64;
    let bailout = f64::min(1e20, 10f64.powf(250.0 / df)).max(p.escape_radius() * 2.0);
    let correction = p.leading().norm().ln() / (df - 1.0);
    let mut w = z;
    let mut scale = 1.0;
    for n in 0..=n_max {
        if w.norm() > bailout {
            return Ok(GreenValue {
                value: scale * (w.norm().ln() + correction),
                escaped: true,
                iterations: n,
            });
        }
        if n < n_max {
            w = p.eval(w);
            scale /= df;
        }
    }
    Ok(GreenValue { value: 0.0, escaped: false, iterations: n_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn linear_map_gives_identity() {
        let p = Polynomial::new(vec![c(0.0, 0.0), c(0.3, 0.2)]);
        let lin = koenigs(&p, c(0.0, 0.0), 10).unwrap();
        assert_eq!(lin.series, {
            let mut id = PowerSeries::identity(10);
            id.radius_hint = lin.series.radius_hint;
            id
        });
    }

    #[test]
    fn half_z_plus_z_squared() {
        let p = Polynomial::from_real(&[0.0, 0.5, 1.0]);
        let lin = koenigs(&p, c(0.0, 0.0), 30).unwrap();
        assert_eq!(lin.series.coeff(1), c(1.0, 0.0));
        assert!((lin.series.coeff(2) - c(4.0, 0.0)).norm() < 1e-10);
        assert!(lin.radius_hint() > 0.0);
        assert!(lin.residual < 1e-8);
        // φ₃(λ−λ³) = φ₂·[u³]f² = 4·2λ = 4
        assert!((lin.series.coeff(3) - c(32.0 / 3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn koenigs_matches_limit_construction() {
        // φ_n = P^n / λ^n converges to φ
        let p = Polynomial::from_real(&[0.0, 0.3, 1.0, 0.2]);
        let lin = koenigs(&p, c(0.0, 0.0), 40).unwrap();
        let z = c(0.05, 0.02);
        let n = 40;
        let approx = p.iterate_with_derivative(z, n).0 / 0.3f64.powi(n as i32);
        assert!((lin.series.eval(z) - approx).norm() < 1e-9);
    }

    #[test]
    fn residual_shrinks_with_order() {
        for p in [Polynomial::from_real(&[0.0, 0.5, 1.0]), Polynomial::from_real(&[0.0, 0.3, 1.0, 0.2])] {
            let r = 0.05;
            let f = |n| {
                let lin = koenigs(&p, c(0.0, 0.0), n).unwrap();
                max_on_circle(r, |u| lin.series.eval(p.eval(u)) - p.coeff(1) * lin.series.eval(u))
            };
            assert!(f(30) < f(10));
        }
    }

    #[test]
    fn koenigs_at_shifted_repelling_point() {
        let p = Polynomial::quadratic(c(-1.0, 0.0));
        let z0 = c((1.0 + 5f64.sqrt()) / 2.0, 0.0);
        let lin = koenigs(&p, z0, 20).unwrap();
        assert!((lin.multiplier - c(1.0 + 5f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!(lin.residual < 1e-8);
    }

    #[test]
    fn koenigs_errors() {
        let sq = Polynomial::monomial(2);
        assert!(matches!(koenigs(&sq, c(0.0, 0.0), 5), Err(Error::NotAttracting { .. })));
        let parabolic = Polynomial::from_real(&[0.0, 1.0, 1.0]);
        assert!(matches!(koenigs(&parabolic, c(0.0, 0.0), 5), Err(Error::NotAttracting { .. })));
        assert!(matches!(koenigs(&sq, c(0.5, 0.0), 5), Err(Error::NotFixedPoint { .. })));
        let tiny = Polynomial::new(vec![c(0.0, 0.0), c(1e-13, 0.0), c(1.0, 0.0)]);
        assert!(matches!(koenigs(&tiny, c(0.0, 0.0), 5), Err(Error::ResonantMultiplier { .. })));
    }

    #[test]
    fn boettcher_examples() {
        let lin = boettcher_series(&Polynomial::monomial(3), c(0.0, 0.0), 8).unwrap();
        assert_eq!(lin.local_degree, 3);
        for k in 2..=8 {
            assert_eq!(lin.series.coeff(k), c(0.0, 0.0));
        }
        let p = Polynomial::from_real(&[0.0, 0.0, 1.0, 1.0]);
        let lin = boettcher_series(&p, c(0.0, 0.0), 3).unwrap();
        assert!((lin.series.coeff(2) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((lin.series.coeff(3) - c(0.125, 0.0)).norm() < 1e-15);
        let lin = boettcher_series(&p, c(0.0, 0.0), 30).unwrap();
        let res = max_on_circle(0.05, |z| lin.series.eval(p.eval(z)) - lin.series.eval(z).powu(2));
        assert!(res < 1e-8);
        assert!(matches!(
            boettcher_series(&Polynomial::from_real(&[0.0, 0.5, 1.0]), c(0.0, 0.0), 4),
            Err(Error::NotSuperattracting)
        ));
    }

    #[test]
    fn boettcher_with_gauge() {
        // 3(z-1)^2 + 1: superattracting at 1, a_2 = 3
        let p = Polynomial::from_real(&[4.0, -6.0, 3.0]);
        let lin = boettcher_series(&p, c(1.0, 0.0), 10).unwrap();
        assert!((lin.gauge - c(3.0, 0.0)).norm() < 1e-14);
        for k in 2..=10 {
            assert!(lin.series.coeff(k).norm() < 1e-14);
        }
        // 2z^3 + z^4 needs c^2 = 2
        let q = Polynomial::from_real(&[0.0, 0.0, 0.0, 2.0, 1.0]);
        let lin = boettcher_series(&q, c(0.0, 0.0), 20).unwrap();
        assert!((lin.gauge * lin.gauge - c(2.0, 0.0)).norm() < 1e-14);
        assert!(lin.residual < 1e-8);
    }

    #[test]
    fn green_examples() {
        let sq = Polynomial::monomial(2);
        for z in [c(1.0, 0.0), c(1.5, -0.3), c(0.0, 4.0), c(1.0 + 1e-9, 0.0)] {
            let g = green_function(&sq, z, 100_000).unwrap();
            if z.norm() > 1.0 {
                assert!(g.escaped);
            }
            assert!((g.value - z.norm().ln()).abs() < 1e-10, "{z}");
        }
        let inside = green_function(&sq, c(0.5, 0.5), 1000).unwrap();
        assert_eq!((inside.value, inside.escaped), (0.0, false));
    }

    #[test]
    fn green_functional_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for cc in [c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)] {
            let p = Polynomial::quadratic(cc);
            let mut tested = 0;
            while tested < 100 {
                let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                let g = green_function(&p, z, 10_000).unwrap();
                if !g.escaped || g.value < 1e-3 {
                    continue;
                }
                let gp = green_function(&p, p.eval(z), 10_000).unwrap();
                assert!((gp.value - 2.0 * g.value).abs() < 1e-8);
                tested += 1;
            }
        }
    }

    #[test]
    fn green_non_monic() {
        // 2z^2 is conjugate to w^2 by w = 2z, so G(z) = log|2z|
        let p = Polynomial::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        let z = c(0.7, 0.4);
        let g = green_function(&p, z, 1000).unwrap();
        assert!((g.value - (2.0 * z).norm().ln()).abs() < 1e-12);
    }
}
