//! Task-parallel versions of the sampled core routines.
//!
//! Task `t` always draws from stream `t` of the seed and results are
//! concatenated in task order, so output depends on `tasks` but not on the
//! thread schedule. Exact mode ignores `tasks`.

use rayon::prelude::*;

use cdyn_core::measure::{
    check_disc, lyubich_branch_diameters, mu_nx_task, preimage_levels, summarize_lyubich, Disc,
    EmpiricalMeasure, LyubichOptions, LyubichReport, SamplingOptions,
};
use cdyn_core::orbits::{check_basepoint, julia_cloud_task, CloudOptions};
use cdyn_core::{Complex, Error, Polynomial, Result, SpherePoint};

fn collect_tasks<T: Send>(tasks: usize, f: impl Fn(usize) -> Result<Vec<T>> + Sync + Send) -> Result<Vec<T>> {
    let parts: Vec<Vec<T>> = (0..tasks.max(1)).into_par_iter().map(f).collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

fn exact_level(p: &Polynomial, z: Complex, n: usize) -> Result<EmpiricalMeasure> {
    if n == 0 {
        return Ok(EmpiricalMeasure::dirac(SpherePoint::Finite(z)));
    }
    Ok(preimage_levels(p, SpherePoint::Finite(z), n)?
        .pop()
        .expect("n >= 1 levels"))
}

fn seed(rng_seed: Option<u64>) -> Result<u64> {
    rng_seed.ok_or(Error::InvalidInput("sampled mode requires an rng seed"))
}

/// Same output as [`cdyn_core::orbits::julia_cloud`].
pub fn julia_cloud(p: &Polynomial, z: Complex, n: usize, opts: &CloudOptions) -> Result<EmpiricalMeasure> {
    check_basepoint(p, z, opts)?;
    if opts.exact_for(p.degree(), n) {
        return exact_level(p, z, n);
    }
    let seed = seed(opts.rng_seed)?;
    let points = collect_tasks(opts.tasks, |t| julia_cloud_task(p, z, n, opts, seed, t))?;
    Ok(EmpiricalMeasure::uniform(points))
}

/// Same output as [`cdyn_core::measure::mu_nx`].
pub fn mu_nx(p: &Polynomial, x: SpherePoint, n: usize, opts: &SamplingOptions) -> Result<EmpiricalMeasure> {
    let x = match x {
        SpherePoint::Infinity => return Ok(EmpiricalMeasure::dirac(SpherePoint::Infinity)),
        SpherePoint::Finite(x) => x,
    };
    if n == 0 || opts.exact_for(p.degree(), n) {
        return exact_level(p, x, n);
    }
    let seed = seed(opts.rng_seed)?;
    let tasks = opts.tasks.max(1);
    let points = collect_tasks(tasks, |t| mu_nx_task(p, x, n, opts.budget, seed, tasks, t))?;
    Ok(EmpiricalMeasure::uniform(points))
}

/// Same output as [`cdyn_core::measure::lyubich_diameters`].
pub fn lyubich_diameters(p: &Polynomial, disc: Disc, opts: &LyubichOptions) -> Result<LyubichReport> {
    check_disc(p, disc, opts)?;
    let diameters = collect_tasks(opts.tasks, |t| lyubich_branch_diameters(p, disc, opts, t))?;
    Ok(summarize_lyubich(p.degree(), opts.n_max, &diameters))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cdyn_core::{measure, orbits};

    #[test]
    fn matches_sequential_core() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let z = Complex::new(2.0, 0.0);
        let opts = CloudOptions {
            budget: 500,
            rng_seed: Some(3),
            tasks: 4,
            ..CloudOptions::default()
        };
        assert_eq!(julia_cloud(&p, z, 12, &opts).unwrap(), orbits::julia_cloud(&p, z, 12, &opts).unwrap());

        let s = SamplingOptions {
            budget: 300,
            rng_seed: Some(9),
            tasks: 3,
        };
        let x = SpherePoint::Finite(z);
        assert_eq!(mu_nx(&p, x, 10, &s).unwrap(), measure::mu_nx(&p, x, 10, &s).unwrap());

        let l = LyubichOptions {
            n_max: 4,
            branches: 30,
            rng_seed: 5,
            tasks: 3,
            ..LyubichOptions::default()
        };
        let disc = Disc {
            center: Complex::new(3.0, 0.0),
            radius: 0.05,
        };
        assert_eq!(
            lyubich_diameters(&p, disc, &l).unwrap(),
            measure::lyubich_diameters(&p, disc, &l).unwrap()
        );
    }

    #[test]
    fn exact_mode_ignores_tasks() {
        let p = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        let z = Complex::new(1.0, 0.0);
        let one = CloudOptions::default();
        let many = CloudOptions { tasks: 7, ..one };
        assert_eq!(julia_cloud(&p, z, 8, &one).unwrap(), julia_cloud(&p, z, 8, &many).unwrap());
    }
}
