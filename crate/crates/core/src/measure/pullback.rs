use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::measure::{integrate, total_variation, Atom, EmpiricalMeasure, TestFunction, ATOM_MATCH_TOL};
use crate::poly::{Complex, Polynomial, SpherePoint};
use crate::roots::preimages;
use crate::sampling::{backward_orbit_endpoint, task_rng, task_share};

/// Largest preimage tree computed exactly by default (`2^16` atoms).
pub const DEFAULT_EXACT_BUDGET: usize = 1 << 16;

#[derive(Debug, Clone, Copy)]
pub struct SamplingOptions {
    /// Exact mode when `d^n <= budget`; otherwise the number of samples.
    pub budget: usize,
    /// Required only when sampling is needed.
    pub rng_seed: Option<u64>,
    pub tasks: usize,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_EXACT_BUDGET,
            rng_seed: None,
            tasks: 1,
        }
    }
}

impl SamplingOptions {
    pub fn exact_for(&self, degree: usize, n: usize) -> bool {
        degree
            .checked_pow(n as u32)
            .is_some_and(|size| size <= self.budget)
    }

    fn seed(&self) -> Result<u64> {
        self.rng_seed
            .ok_or(Error::InvalidInput("sampled mode requires an rng seed"))
    }
}

/// `P^*ν`: every finite atom `(y, w)` becomes the preimages of `y`, each with
/// weight `w` times its multiplicity; the atom at infinity gets weight `d w`.
pub fn pullback(p: &Polynomial, nu: &EmpiricalMeasure) -> Result<EmpiricalMeasure> {
    let d = p.degree() as f64;
    let mut atoms = Vec::with_capacity(nu.len() * p.degree());
    for a in nu.atoms() {
        match a.point {
            SpherePoint::Infinity => atoms.push(Atom {
                point: SpherePoint::Infinity,
                weight: a.weight * d,
            }),
            SpherePoint::Finite(y) => {
                let set = preimages(p, y)?;
                atoms.extend(set.iter().map(|(z, m)| Atom {
                    point: SpherePoint::Finite(z),
                    weight: a.weight * m as f64,
                }));
            }
        }
    }
    Ok(EmpiricalMeasure::from_atoms_unchecked(atoms))
}

/// Exact `μ_{1,x}, ..., μ_{n,x}` by repeated normalized pullback of `δ_x`.
pub fn preimage_levels(p: &Polynomial, x: SpherePoint, n: usize) -> Result<Vec<EmpiricalMeasure>> {
    let d = p.degree() as f64;
    let mut levels = Vec::with_capacity(n);
    let mut current = EmpiricalMeasure::dirac(x);
    for _ in 0..n {
        current = pullback(p, &current)?.scaled(1.0 / d);
        levels.push(current.clone());
    }
    Ok(levels)
}

/// `μ_{n,x}`, the normalized count of solutions of `P^n(z) = x`.
///
/// Exact when `d^n <= budget`; otherwise `budget` endpoints of independent
/// random backward orbits with multiplicity-weighted branching.
pub fn mu_nx(
    p: &Polynomial,
    x: SpherePoint,
    n: usize,
    opts: &SamplingOptions,
) -> Result<EmpiricalMeasure> {
    let x = match x {
        SpherePoint::Infinity => return Ok(EmpiricalMeasure::dirac(SpherePoint::Infinity)),
        SpherePoint::Finite(x) => x,
    };
    if n == 0 {
        return Ok(EmpiricalMeasure::dirac(SpherePoint::Finite(x)));
    }
    if opts.exact_for(p.degree(), n) {
        return Ok(preimage_levels(p, SpherePoint::Finite(x), n)?
            .pop()
            .expect("n >= 1 levels"));
    }
    let seed = opts.seed()?;
    let tasks = opts.tasks.max(1);
    let mut points = Vec::with_capacity(opts.budget);
    for task in 0..tasks {
        points.extend(mu_nx_task(p, x, n, opts.budget, seed, tasks, task)?);
    }
    Ok(EmpiricalMeasure::uniform(points))
}

/// The samples drawn by one task of the sampled branch of [`mu_nx`].
pub fn mu_nx_task(
    p: &Polynomial,
    x: Complex,
    n: usize,
    budget: usize,
    seed: u64,
    tasks: usize,
    task: usize,
) -> Result<Vec<Complex>> {
    let mut rng = task_rng(seed, task as u64);
    (0..task_share(budget, tasks, task))
        .map(|_| backward_orbit_endpoint(p, x, n, &mut rng))
        .collect()
}

/// Cesàro mean `(1/n) Σ_{j=1}^n μ_{j,x}`.
pub fn cesaro(
    p: &Polynomial,
    x: SpherePoint,
    n: usize,
    opts: &SamplingOptions,
) -> Result<EmpiricalMeasure> {
    if n == 0 {
        return Err(Error::InvalidInput("Cesàro mean needs n >= 1"));
    }
    if opts.exact_for(p.degree(), n) {
        let levels = preimage_levels(p, x, n)?;
        return Ok(cesaro_of_levels(&levels));
    }
    let seed = opts.seed()?;
    let mut levels = Vec::with_capacity(n);
    for j in 1..=n {
        let level_opts = SamplingOptions {
            rng_seed: Some(seed ^ ((j as u64) << 32)),
            ..*opts
        };
        levels.push(mu_nx(p, x, j, &level_opts)?);
    }
    Ok(cesaro_of_levels(&levels))
}

fn cesaro_of_levels(levels: &[EmpiricalMeasure]) -> EmpiricalMeasure {
    let w = 1.0 / levels.len() as f64;
    let parts: Vec<(f64, &EmpiricalMeasure)> = levels.iter().map(|m| (w, m)).collect();
    EmpiricalMeasure::mixture(&parts)
}

/// Mass of consecutive Cesàro differences against the bound `2/(n+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CesaroGap {
    pub n: usize,
    /// Total mass of `|λ_{n+1} - λ_n|`.
    pub tv_consecutive: f64,
    /// Total mass of `|λ_{n+1} - P^*λ_n / d|`.
    pub tv_pullback: f64,
    pub bound: f64,
}

/// Exact Cesàro gaps for `n = 1..=n_max`.
pub fn cesaro_mass_gaps(p: &Polynomial, x: SpherePoint, n_max: usize) -> Result<Vec<CesaroGap>> {
    let levels = preimage_levels(p, x, n_max + 1)?;
    let d = p.degree() as f64;
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let lambda_n = cesaro_of_levels(&levels[..n]);
        let lambda_next = cesaro_of_levels(&levels[..n + 1]);
        let pulled = pullback(p, &lambda_n)?.scaled(1.0 / d);
        out.push(CesaroGap {
            n,
            tv_consecutive: total_variation(&lambda_next, &lambda_n, ATOM_MATCH_TOL),
            tv_pullback: total_variation(&lambda_next, &pulled, ATOM_MATCH_TOL),
            bound: 2.0 / (n as f64 + 1.0),
        });
    }
    Ok(out)
}

/// `P_*φ(z) = Σ_{P(w)=z} φ(w)`, preimages counted with multiplicity.
pub fn pushforward_fn(p: &Polynomial, phi: &TestFunction) -> TestFunction {
    let p = p.clone();
    let phi = phi.clone();
    let d = p.degree() as f64;
    let label = alloc::format!("push({})", phi.label);
    TestFunction::new(label, move |point| match point {
        SpherePoint::Infinity => phi.eval(SpherePoint::Infinity).map(|v| v * d),
        SpherePoint::Finite(z) => {
            let set = preimages(&p, z).ok()?;
            let mut acc = Complex::new(0.0, 0.0);
            for (w, m) in set.iter() {
                acc += phi.eval(SpherePoint::Finite(w))? * m as f64;
            }
            Some(acc)
        }
    })
}

/// `|∫φ d(P^*ν) − ∫(P_*φ) dν|`.
pub fn duality_residual(p: &Polynomial, phi: &TestFunction, nu: &EmpiricalMeasure) -> Result<f64> {
    let lhs = integrate(&pullback(p, nu)?, phi)?;
    let rhs = integrate(nu, &pushforward_fn(p, phi))?;
    Ok((lhs - rhs).norm())
}
