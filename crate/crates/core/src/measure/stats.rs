use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::measure::{integrate, mu_nx, EmpiricalMeasure, SamplingOptions, TestFunction};
use crate::orbits::exceptional_set;
use crate::poly::{Complex, Polynomial, SpherePoint};

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionGap {
    pub label: String,
    pub value_x: Complex,
    pub value_y: Complex,
    pub gap: f64,
    /// Monte-Carlo standard error of the gap; zero in exact mode.
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakGapReport {
    pub n: usize,
    pub exact: bool,
    /// Largest gap over the panel.
    pub gap: f64,
    /// Standard error attached to the largest gap.
    pub stderr: f64,
    pub per_function: Vec<FunctionGap>,
}

/// `max_φ |∫φ dμ_{n,x} − ∫φ dμ_{n,y}|` over a panel.
pub fn weak_gap(
    p: &Polynomial,
    x: Complex,
    y: Complex,
    n: usize,
    panel: &[TestFunction],
    opts: &SamplingOptions,
) -> Result<WeakGapReport> {
    let e = exceptional_set(p, 1e-9);
    if e.contains(x) || e.contains(y) {
        return Err(Error::ExceptionalBasepoint);
    }
    let exact = opts.exact_for(p.degree(), n);
    let mu_x = mu_nx(p, SpherePoint::Finite(x), n, opts)?;
    let mu_y = if x == y && exact {
        mu_x.clone()
    } else {
        let opts_y = SamplingOptions {
            rng_seed: opts.rng_seed.map(|s| s.wrapping_add(0x9e37_79b9_7f4a_7c15)),
            ..*opts
        };
        mu_nx(p, SpherePoint::Finite(y), n, &opts_y)?
    };
    let mut per_function = Vec::with_capacity(panel.len());
    for phi in panel {
        let value_x = integrate(&mu_x, phi)?;
        let value_y = integrate(&mu_y, phi)?;
        let stderr = if exact {
            0.0
        } else {
            (variance(&mu_x, phi, value_x)? / mu_x.len() as f64
                + variance(&mu_y, phi, value_y)? / mu_y.len() as f64)
                .sqrt()
        };
        per_function.push(FunctionGap {
            label: phi.label.clone(),
            value_x,
            value_y,
            gap: (value_x - value_y).norm(),
            stderr,
        });
    }
    let worst = per_function
        .iter()
        .max_by(|a, b| a.gap.total_cmp(&b.gap))
        .cloned();
    Ok(WeakGapReport {
        n,
        exact,
        gap: worst.as_ref().map_or(0.0, |f| f.gap),
        stderr: worst.as_ref().map_or(0.0, |f| f.stderr),
        per_function,
    })
}

fn variance(mu: &EmpiricalMeasure, phi: &TestFunction, mean: Complex) -> Result<f64> {
    let mut acc = 0.0;
    for a in mu.atoms() {
        let v = phi.eval(a.point).ok_or(Error::UndefinedAtAtom)?;
        acc += a.weight * (v - mean).norm_sqr();
    }
    Ok(acc / mu.mass())
}

fn forward(p: &Polynomial, point: SpherePoint, n: usize) -> SpherePoint {
    (0..n).fold(point, |z, _| p.apply(z))
}

/// `C_n = ∫ φ·(ψ∘P^n) dμ − (∫φ dμ)(∫ψ dμ)` for a probability-normalized `μ`.
pub fn mixing_correlation(
    p: &Polynomial,
    phi: &TestFunction,
    psi: &TestFunction,
    n: usize,
    mu: &EmpiricalMeasure,
) -> Result<Complex> {
    let mass = mu.mass();
    let mut joint = Complex::zero();
    for a in mu.atoms() {
        let f = phi.eval(a.point).ok_or(Error::UndefinedAtAtom)?;
        let g = psi
            .eval(forward(p, a.point, n))
            .ok_or(Error::UndefinedAtAtom)?;
        joint += f * g * a.weight;
    }
    let joint = joint / mass;
    let mean_phi = integrate(mu, phi)? / mass;
    let mean_psi = integrate(mu, psi)? / mass;
    Ok(joint - mean_phi * mean_psi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErgodicityReport {
    /// `μ(E)`.
    pub measure: f64,
    /// `(n, μ(E ∩ P^{-n}E))`.
    pub returns: Vec<(usize, f64)>,
    /// `μ(E Δ P^{-1}E)`.
    pub symmetric_difference: f64,
    pub invariant: bool,
    /// False only when `E` looks invariant but `μ(E)` is neither 0 nor 1.
    pub consistent: bool,
}

/// Invariance and return statistics of a `{0,1}`-valued set function.
pub fn ergodicity_check(
    p: &Polynomial,
    set: &TestFunction,
    mu: &EmpiricalMeasure,
    schedule: &[usize],
    tol: f64,
) -> Result<ErgodicityReport> {
    let mass = mu.mass();
    let indicator = |point: SpherePoint| -> Result<bool> {
        let v = set.eval(point).ok_or(Error::UndefinedAtAtom)?;
        Ok(v.re > 0.5)
    };
    let mut measure = 0.0;
    let mut sym_diff = 0.0;
    let mut returns: Vec<(usize, f64)> = schedule.iter().map(|&n| (n, 0.0)).collect();
    for a in mu.atoms() {
        let inside = indicator(a.point)?;
        if inside {
            measure += a.weight;
        }
        if inside != indicator(p.apply(a.point))? {
            sym_diff += a.weight;
        }
        if inside {
            for (n, acc) in returns.iter_mut() {
                if indicator(forward(p, a.point, *n))? {
                    *acc += a.weight;
                }
            }
        }
    }
    let measure = measure / mass;
    let symmetric_difference = sym_diff / mass;
    for (_, acc) in returns.iter_mut() {
        *acc /= mass;
    }
    let invariant = symmetric_difference < tol;
    let trivial = measure < tol || measure > 1.0 - tol;
    Ok(ErgodicityReport {
        measure,
        returns,
        symmetric_difference,
        invariant,
        consistent: !invariant || trivial,
    })
}
