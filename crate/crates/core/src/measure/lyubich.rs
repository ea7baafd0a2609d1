use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::{Complex, Polynomial};
use crate::roots::preimages;
use crate::sampling::{choose_weighted, task_rng, task_share};

/// A closed round disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub center: Complex,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct LyubichOptions {
    pub n_max: usize,
    pub branches: usize,
    /// Points tracked on the boundary of the disc.
    pub boundary_samples: usize,
    /// Forward iterates of the critical set excluded from the disc.
    pub ell: usize,
    pub rng_seed: u64,
    pub tasks: usize,
}

impl Default for LyubichOptions {
    fn default() -> Self {
        Self {
            n_max: 12,
            branches: 2000,
            boundary_samples: 16,
            ell: 20,
            rng_seed: 0,
            tasks: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyubichLevel {
    pub n: usize,
    pub mean_log_diameter: f64,
    pub stderr: f64,
    pub max_diameter: f64,
    /// Fraction of branches with diameter above `c d^{-n/2}`.
    pub fraction_exceeding: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyubichReport {
    pub levels: Vec<LyubichLevel>,
    /// Least-squares slope of mean log-diameter against `n` over `n >= 1`.
    pub fitted_slope: f64,
    pub fitted_intercept: f64,
    /// `c` calibrated as the largest `diam · d^{n/2}` at `n = 1`.
    pub fitted_c: f64,
    /// `-ln(d) / 2`.
    pub reference_slope: f64,
}

/// `V_ℓ = ∪_{q=1}^ℓ P^q(C)`, stopping orbits that leave the escape radius.
pub fn postcritical_points(p: &Polynomial, ell: usize) -> Result<Vec<Complex>> {
    let radius = p.escape_radius();
    let crit = p.critical_points()?;
    let mut out = Vec::new();
    for (c, _) in crit.iter() {
        let mut z = c;
        for _ in 0..ell {
            z = p.eval(z);
            if !(z.norm() <= radius) {
                break;
            }
            out.push(z);
        }
    }
    Ok(out)
}

fn diameter(points: &[Complex]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max((a - b).norm());
        }
    }
    best
}

/// Diameters `diam g(D)` for `n = 0..=n_max` along the branches drawn by one task.
///
/// A branch follows a random backward orbit of the center; each boundary
/// sample is continued by the preimage closest to the new center.
pub fn lyubich_branch_diameters(
    p: &Polynomial,
    disc: Disc,
    opts: &LyubichOptions,
    task: usize,
) -> Result<Vec<Vec<f64>>> {
    let tasks = opts.tasks.max(1);
    let mut rng = task_rng(opts.rng_seed, task as u64);
    let boundary: Vec<Complex> = (0..opts.boundary_samples)
        .map(|k| {
            let t = 2.0 * core::f64::consts::PI * k as f64 / opts.boundary_samples as f64;
            disc.center + Complex::from_polar(disc.radius, t)
        })
        .collect();
    let count = task_share(opts.branches, tasks, task);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut center = disc.center;
        let mut edge = boundary.clone();
        let mut diams = vec![diameter(&edge)];
        for _ in 0..opts.n_max {
            center = choose_weighted(&preimages(p, center)?, &mut rng);
            for b in edge.iter_mut() {
                let set = preimages(p, *b)?;
                *b = set
                    .roots
                    .iter()
                    .copied()
                    .min_by(|u, v| (u - center).norm().total_cmp(&(v - center).norm()))
                    .expect("degree >= 1");
            }
            diams.push(diameter(&edge));
        }
        out.push(diams);
    }
    Ok(out)
}

/// Inverse-branch diameter statistics for a disc avoiding `V_ℓ`.
pub fn lyubich_diameters(p: &Polynomial, disc: Disc, opts: &LyubichOptions) -> Result<LyubichReport> {
    check_disc(p, disc, opts)?;
    let mut all = Vec::with_capacity(opts.branches);
    for task in 0..opts.tasks.max(1) {
        all.extend(lyubich_branch_diameters(p, disc, opts, task)?);
    }
    Ok(summarize_lyubich(p.degree(), opts.n_max, &all))
}

/// Rejects discs that meet the postcritical set or are degenerate.
pub fn check_disc(p: &Polynomial, disc: Disc, opts: &LyubichOptions) -> Result<()> {
    if p.degree() < 2 {
        return Err(Error::DegreeTooSmall(p.degree()));
    }
    if !(disc.radius > 0.0) || opts.boundary_samples < 2 || opts.branches == 0 {
        return Err(Error::InvalidInput("disc needs positive radius, samples and branches"));
    }
    let v = postcritical_points(p, opts.ell)?;
    if v.iter().any(|z| (z - disc.center).norm() <= disc.radius) {
        return Err(Error::PostcriticalOverlap);
    }
    Ok(())
}

pub fn summarize_lyubich(degree: usize, n_max: usize, diameters: &[Vec<f64>]) -> LyubichReport {
    let d = degree as f64;
    let count = diameters.len() as f64;
    let fitted_c = if n_max >= 1 {
        diameters.iter().map(|b| b[1]).fold(0.0, f64::max) * d.sqrt()
    } else {
        diameters.iter().map(|b| b[0]).fold(0.0, f64::max)
    };
    let levels: Vec<LyubichLevel> = (0..=n_max)
        .map(|n| {
            let logs: Vec<f64> = diameters.iter().map(|b| b[n].ln()).collect();
            let mean = logs.iter().sum::<f64>() / count;
            let var = logs.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (count - 1.0).max(1.0);
            let threshold = fitted_c * d.powf(-(n as f64) / 2.0);
            let exceeding = diameters.iter().filter(|b| b[n] > threshold).count() as f64;
            LyubichLevel {
                n,
                mean_log_diameter: mean,
                stderr: (var / count).sqrt(),
                max_diameter: diameters.iter().map(|b| b[n]).fold(0.0, f64::max),
                fraction_exceeding: exceeding / count,
            }
        })
        .collect();
    let fit: Vec<(f64, f64)> = levels
        .iter()
        .filter(|l| l.n >= 1)
        .map(|l| (l.n as f64, l.mean_log_diameter))
        .collect();
    let (fitted_slope, fitted_intercept) = least_squares(&fit);
    LyubichReport {
        levels,
        fitted_slope,
        fitted_intercept,
        fitted_c,
        reference_slope: -0.5 * d.ln(),
    }
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    if points.len() < 2 {
        return (f64::NAN, points.first().map_or(f64::NAN, |p| p.1));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn depth_zero_diameter_is_twice_radius() {
        let disc = Disc { center: c(2.0, 0.0), radius: 0.1 };
        let opts = LyubichOptions { n_max: 0, branches: 3, ..Default::default() };
        let r = lyubich_diameters(&Polynomial::monomial(2), disc, &opts).unwrap();
        assert!((r.levels[0].max_diameter - 0.2).abs() < 1e-12);
    }

    #[test]
    fn square_root_branches_contract_by_half() {
        // g(z) = z^{1/2^n} near 2 has |g'| ~ 2^{-n} 2^{1/2^n - 1}
        let disc = Disc { center: c(2.0, 0.0), radius: 0.1 };
        let opts = LyubichOptions { n_max: 10, branches: 50, rng_seed: 3, ..Default::default() };
        let r = lyubich_diameters(&Polynomial::monomial(2), disc, &opts).unwrap();
        for n in 3..=10 {
            let want = 0.2 * (1.0 / (1u64 << n) as f64) * 2f64.powf(1.0 / (1u64 << n) as f64 - 1.0);
            let got = r.levels[n].max_diameter;
            assert!((got / want - 1.0).abs() < 0.05, "n={n} got={got} want={want}");
        }
        assert!((r.fitted_slope + 2f64.ln()).abs() < 0.1);
    }

    #[test]
    fn postcritical_overlap_is_rejected() {
        let p = Polynomial::quadratic(c(-1.0, 0.0));
        let disc = Disc { center: c(-1.0, 0.0), radius: 0.1 };
        assert!(matches!(
            lyubich_diameters(&p, disc, &LyubichOptions::default()),
            Err(Error::PostcriticalOverlap)
        ));
    }

    #[test]
    fn most_branches_stay_below_the_bound() {
        let p = Polynomial::quadratic(c(-1.0, 0.0));
        let disc = Disc { center: c(3.0, 0.0), radius: 0.05 };
        let opts = LyubichOptions { branches: 200, rng_seed: 1, ..Default::default() };
        let r = lyubich_diameters(&p, disc, &opts).unwrap();
        for level in &r.levels[1..] {
            assert!(level.fraction_exceeding <= 0.1, "{level:?}");
        }
    }
}
