//! Periodic orbits, their multipliers and classes, the exceptional set and
//! point clouds on the Julia set.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::measure::{preimage_levels, EmpiricalMeasure};
use crate::poly::{Complex, Polynomial, SpherePoint, DEFAULT_DEGREE_CAP};
use crate::roots::{aberth_refine, cluster, raw_roots, RootSet, SolveOptions};
use crate::sampling::{backward_orbit_endpoint, task_rng, task_share};

pub const DEFAULT_NEUTRAL_TOL: f64 = 1e-6;
pub const DEFAULT_ROOT_OF_UNITY_MAX: usize = 64;
pub const DEFAULT_BURN_IN: usize = 20;
const REFINE_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Superattracting,
    Attracting,
    Repelling,
    /// `λ` is a primitive `q`-th root of unity.
    RationallyNeutral(usize),
    IrrationallyNeutral,
}

impl Classification {
    pub fn is_repelling(self) -> bool {
        self == Classification::Repelling
    }

    pub fn name(self) -> &'static str {
        match self {
            Classification::Superattracting => "superattracting",
            Classification::Attracting => "attracting",
            Classification::Repelling => "repelling",
            Classification::RationallyNeutral(_) => "rationally-neutral",
            Classification::IrrationallyNeutral => "irrationally-neutral",
        }
    }
}

pub fn classify(lambda: Complex, neutral_tol: f64, root_of_unity_max: usize) -> Classification {
    let r = lambda.norm();
    if r < neutral_tol {
        return Classification::Superattracting;
    }
    if r < 1.0 - neutral_tol {
        return Classification::Attracting;
    }
    if r > 1.0 + neutral_tol {
        return Classification::Repelling;
    }
    let one = Complex::new(1.0, 0.0);
    let mut power = one;
    for q in 1..=root_of_unity_max {
        power *= lambda;
        if (power - one).norm() < neutral_tol {
            return Classification::RationallyNeutral(q);
        }
    }
    Classification::IrrationallyNeutral
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit {
    /// The cycle in dynamical order.
    pub points: Vec<Complex>,
    pub period: usize,
    pub multiplier: Complex,
    pub class: Classification,
}

/// Solutions of `P^m(z) = z` with multiplicity, Newton-polished when simple.
pub fn periodic_points(p: &Polynomial, m: usize, cap: usize) -> Result<RootSet> {
    if m == 0 {
        return Err(Error::InvalidInput("period must be at least 1"));
    }
    let pm = p.iterate_symbolic(m, cap)?;
    let f = pm.sub(&Polynomial::identity());
    let one = Complex::new(1.0, 0.0);
    let mut raw = raw_roots(&f, &SolveOptions::default())?;
    if m > 1 {
        aberth_refine(
            &mut raw,
            |z| {
                let (w, dw) = p.iterate_with_derivative(z, m);
                (w - z, dw - one)
            },
            REFINE_ITERATIONS,
        );
    }
    let eps = 1e-6 * (1.0 + raw.iter().map(|z| z.norm()).fold(0.0, f64::max));
    let mut set = cluster(&RootSet::simple(raw), eps);
    set.residuals = set.roots.iter().map(|&z| (p.iterate_with_derivative(z, m).0 - z).norm()).collect();
    for (k, z) in set.roots.iter_mut().enumerate() {
        if set.multiplicities[k] != 1 {
            continue;
        }
        let mut best = *z;
        let mut best_res = (p.iterate_with_derivative(best, m).0 - best).norm();
        for _ in 0..4 {
            let (w, dw) = p.iterate_with_derivative(best, m);
            let denom = dw - one;
            if denom.norm() == 0.0 {
                break;
            }
            let next = best - (w - best) / denom;
            let res = (p.iterate_with_derivative(next, m).0 - next).norm();
            if !(res < best_res) {
                break;
            }
            best = next;
            best_res = res;
        }
        *z = best;
        set.residuals[k] = best_res;
    }
    Ok(set)
}

fn period_tol(z: Complex) -> f64 {
    1e-7 * (1.0 + z.norm())
}

fn match_tol(z: Complex) -> f64 {
    1e-6 * (1.0 + z.norm())
}

/// `Π P'(z_i)` over a cycle, after checking that the points close up.
pub fn multiplier(p: &Polynomial, points: &[Complex]) -> Result<Complex> {
    if points.is_empty() {
        return Err(Error::InvalidInput("empty cycle"));
    }
    let m = points.len();
    let mut lambda = Complex::new(1.0, 0.0);
    let mut worst = 0.0f64;
    for (i, &z) in points.iter().enumerate() {
        let (w, dw) = p.eval_with_derivative(z);
        let next = points[(i + 1) % m];
        worst = worst.max((w - next).norm() / (1.0 + next.norm()));
        lambda *= dw;
    }
    if !(worst < 1e-6) {
        return Err(Error::NotACycle { gap: worst });
    }
    Ok(lambda)
}

/// Least divisor `q` of `m` with `P^q(z) ≈ z`.
pub fn exact_period(p: &Polynomial, z: Complex, m: usize) -> usize {
    let mut w = z;
    for q in 1..=m {
        w = p.eval(w);
        if m % q == 0 && (w - z).norm() < period_tol(z) {
            return q;
        }
    }
    m
}

/// Partitions the solutions of `P^m(z) = z` into cycles of exact period.
pub fn group_into_orbits(
    roots: &RootSet,
    p: &Polynomial,
    m: usize,
    neutral_tol: f64,
    root_of_unity_max: usize,
) -> Result<Vec<PeriodicOrbit>> {
    let n = roots.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let find = |z: Complex| -> Option<usize> {
        roots
            .roots
            .iter()
            .enumerate()
            .filter(|(_, r)| (*r - z).norm() < match_tol(z))
            .min_by(|a, b| (a.1 - z).norm().total_cmp(&(b.1 - z).norm()))
            .map(|(k, _)| k)
    };
    let mut orbits = Vec::new();
    for start in 0..n {
        if owner[start].is_some() {
            continue;
        }
        let id = orbits.len();
        let z0 = roots.roots[start];
        let q = exact_period(p, z0, m);
        owner[start] = Some(id);
        let mut points = vec![z0];
        let mut w = z0;
        for _ in 1..q {
            w = p.eval(w);
            let point = match find(w) {
                Some(k) => {
                    if owner[k].is_some() {
                        return Err(Error::AmbiguousGrouping);
                    }
                    owner[k] = Some(id);
                    roots.roots[k]
                }
                None => w,
            };
            points.push(point);
            w = point;
        }
        let lambda = multiplier(p, &points)?;
        orbits.push(PeriodicOrbit {
            points,
            period: q,
            multiplier: lambda,
            class: classify(lambda, neutral_tol, root_of_unity_max),
        });
    }
    Ok(orbits)
}

/// All cycles of exact period `m`.
pub fn cycles_of_period(p: &Polynomial, m: usize) -> Result<Vec<PeriodicOrbit>> {
    let roots = periodic_points(p, m, DEFAULT_DEGREE_CAP)?;
    Ok(
        group_into_orbits(&roots, p, m, DEFAULT_NEUTRAL_TOL, DEFAULT_ROOT_OF_UNITY_MAX)?
            .into_iter()
            .filter(|o| o.period == m)
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    /// Non-repelling cycles of exact period `<= m_max`, infinity included.
    pub count: usize,
    /// `3d - 1`.
    pub bound: usize,
    /// Finite non-repelling cycles.
    pub orbits: Vec<PeriodicOrbit>,
}

impl Census {
    pub fn within_bound(&self) -> bool {
        self.count <= self.bound
    }
}

/// Counts non-repelling cycles of exact period `<= m_max`.
pub fn nonrepelling_census(p: &Polynomial, m_max: usize) -> Result<Census> {
    let d = p.degree();
    if d < 2 {
        return Err(Error::DegreeTooSmall(d));
    }
    let mut orbits = Vec::new();
    for m in 1..=m_max {
        orbits.extend(
            cycles_of_period(p, m)?
                .into_iter()
                .filter(|o| !o.class.is_repelling()),
        );
    }
    Ok(Census {
        count: orbits.len() + 1,
        bound: 3 * d - 1,
        orbits,
    })
}

/// `{∞}` or `{∞, z₀}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalSet {
    pub points: Vec<SpherePoint>,
}

impl ExceptionalSet {
    pub fn finite_point(&self) -> Option<Complex> {
        self.points.iter().find_map(|p| p.finite())
    }

    pub fn contains(&self, z: Complex) -> bool {
        self.finite_point()
            .is_some_and(|e| (e - z).norm() <= 1e-9 * (1.0 + e.norm()))
    }
}

/// Detects `P(z) = a (z - z₀)^d + z₀`.
pub fn exceptional_set(p: &Polynomial, tol: f64) -> ExceptionalSet {
    let mut points = vec![SpherePoint::Infinity];
    let d = p.degree();
    if d >= 2 {
        let z0 = -p.coeff(d - 1) / (p.leading() * d as f64);
        let shifted = p.taylor_shift(z0);
        let scale = p.scale().max(1.0) * (1.0 + z0.norm()).powi(d as i32);
        let middle_vanishes = (1..d).all(|k| shifted.coeff(k).norm() <= tol * scale);
        if middle_vanishes && (shifted.coeff(0) - z0).norm() <= tol * scale {
            points.push(SpherePoint::Finite(z0));
        }
    }
    ExceptionalSet { points }
}

/// Repelling fixed point with the largest multiplier, or a point beyond the
/// escape radius when every fixed point is non-repelling.
pub fn default_basepoint(p: &Polynomial) -> Result<Complex> {
    let fixed = periodic_points(p, 1, DEFAULT_DEGREE_CAP)?;
    let best = fixed
        .roots
        .iter()
        .map(|&z| (z, p.eval_with_derivative(z).1.norm()))
        .filter(|&(_, m)| m > 1.0 + DEFAULT_NEUTRAL_TOL)
        .max_by(|a, b| a.1.total_cmp(&b.1));
    Ok(match best {
        Some((z, _)) => z,
        None => Complex::new(p.escape_radius() + 1.0, 0.0),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct CloudOptions {
    pub budget: usize,
    pub rng_seed: Option<u64>,
    pub burn_in: usize,
    pub tasks: usize,
}

impl Default for CloudOptions {
    fn default() -> Self {
        Self {
            budget: 1 << 16,
            rng_seed: None,
            burn_in: DEFAULT_BURN_IN,
            tasks: 1,
        }
    }
}

impl CloudOptions {
    pub fn exact_for(&self, degree: usize, n: usize) -> bool {
        degree
            .checked_pow(n as u32)
            .is_some_and(|size| size <= self.budget)
    }
}

/// Points approximating `J` from backward orbits of a non-exceptional `z`.
///
/// Exact preimage tree when `d^n <= budget`; otherwise `budget` random
/// backward walks of length `max(n, burn_in)`.
pub fn julia_cloud(p: &Polynomial, z: Complex, n: usize, opts: &CloudOptions) -> Result<EmpiricalMeasure> {
    check_basepoint(p, z, opts)?;
    if opts.exact_for(p.degree(), n) {
        if n == 0 {
            return Ok(EmpiricalMeasure::dirac(SpherePoint::Finite(z)));
        }
        return Ok(preimage_levels(p, SpherePoint::Finite(z), n)?
            .pop()
            .expect("n >= 1 levels"));
    }
    let seed = opts
        .rng_seed
        .ok_or(Error::InvalidInput("sampled mode requires an rng seed"))?;
    let tasks = opts.tasks.max(1);
    let mut points = Vec::with_capacity(opts.budget);
    for task in 0..tasks {
        points.extend(julia_cloud_task(p, z, n, opts, seed, task)?);
    }
    Ok(EmpiricalMeasure::uniform(points))
}

pub fn check_basepoint(p: &Polynomial, z: Complex, opts: &CloudOptions) -> Result<()> {
    if p.degree() < 2 {
        return Err(Error::DegreeTooSmall(p.degree()));
    }
    if opts.budget == 0 {
        return Err(Error::InvalidInput("budget must be at least 1"));
    }
    if exceptional_set(p, 1e-9).contains(z) {
        return Err(Error::ExceptionalBasepoint);
    }
    Ok(())
}

/// Walk endpoints produced by one task of the sampled branch of [`julia_cloud`].
pub fn julia_cloud_task(
    p: &Polynomial,
    z: Complex,
    n: usize,
    opts: &CloudOptions,
    seed: u64,
    task: usize,
) -> Result<Vec<Complex>> {
    let tasks = opts.tasks.max(1);
    let steps = n.max(opts.burn_in);
    let mut rng = task_rng(seed, task as u64);
    (0..task_share(opts.budget, tasks, task))
        .map(|_| backward_orbit_endpoint(p, z, steps, &mut rng))
        .collect()
}

/// `e^{2πiθ}`.
pub fn rotation(theta: f64) -> Complex {
    Complex::from_polar(1.0, 2.0 * PI * theta)
}
