//! Simultaneous root finding (Aberth–Ehrlich) and preimage solving.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Complex, Polynomial};

/// Angle offset of the initial guesses; keeps them off symmetry axes of `z^d - c`.
const GUESS_ANGLE_OFFSET: f64 = 0.618_033_988_749_894_9;

/// Roots of a polynomial, counted with multiplicity.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootSet {
    pub roots: Vec<Complex>,
    pub multiplicities: Vec<usize>,
    /// `|P(root)|` for each root.
    pub residuals: Vec<f64>,
}

impl RootSet {
    /// Roots with multiplicity one each and no residual information.
    pub fn simple(roots: Vec<Complex>) -> Self {
        let n = roots.len();
        Self {
            roots,
            multiplicities: vec![1; n],
            residuals: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Sum of multiplicities.
    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Complex, usize)> + '_ {
        self.roots.iter().copied().zip(self.multiplicities.iter().copied())
    }

    /// Every root repeated according to its multiplicity.
    pub fn expanded(&self) -> Vec<Complex> {
        self.iter()
            .flat_map(|(z, m)| core::iter::repeat(z).take(m))
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Relative residual tolerance.
    pub tol: f64,
    pub max_iter: usize,
    /// Absolute clustering radius; `None` uses `1e-6 (1 + max |root|)`.
    pub cluster_eps: Option<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 4000,
            cluster_eps: None,
        }
    }
}

/// All roots of `p` with multiplicity, clustered.
pub fn all_roots(p: &Polynomial, opts: &SolveOptions) -> Result<RootSet> {
    let raw = raw_roots(p, opts)?;
    let eps = opts.cluster_eps.unwrap_or_else(|| {
        1e-6 * (1.0 + raw.iter().map(|z| z.norm()).fold(0.0, f64::max))
    });
    let clustered = cluster(&RootSet::simple(raw), eps);
    Ok(with_residuals(p, clustered))
}

/// Unclustered roots, one per unit of degree.
pub fn raw_roots(p: &Polynomial, opts: &SolveOptions) -> Result<Vec<Complex>> {
    let d = p.degree();
    let a = p.coeffs();
    if d == 0 {
        return Err(Error::DegreeZero);
    }
    if a.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("non-finite coefficient"));
    }
    match d {
        1 => Ok(vec![-a[0] / a[1]]),
        2 => Ok(quadratic_roots(a[2], a[1], a[0]).to_vec()),
        _ => aberth(p, opts),
    }
}

/// Roots of `a z^2 + b z + c` without cancellation.
fn quadratic_roots(a: Complex, b: Complex, c: Complex) -> [Complex; 2] {
    let disc = (b * b - a * c * 4.0).sqrt();
    let plus = b + disc;
    let minus = b - disc;
    let q = if plus.norm() >= minus.norm() { plus } else { minus } * -0.5;
    if q.is_zero() {
        return [Complex::zero(); 2];
    }
    [q / a, c / q]
}

fn initial_radius(p: &Polynomial) -> f64 {
    let d = p.degree();
    let lead = p.leading().norm();
    let a = p.coeffs();
    let cauchy = 1.0
        + a[..d]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0, f64::max);
    // Fujiwara's bound is often much tighter than the Cauchy one.
    let fujiwara = 2.0
        * (1..=d)
            .map(|k| {
                let ratio = a[d - k].norm() / lead;
                if k == d {
                    (ratio / 2.0).powf(1.0 / k as f64)
                } else {
                    ratio.powf(1.0 / k as f64)
                }
            })
            .fold(0.0, f64::max);
    let r = cauchy.min(fujiwara);
    if r > 0.0 {
        r
    } else {
        1.0
    }
}

fn aberth(p: &Polynomial, opts: &SolveOptions) -> Result<Vec<Complex>> {
    let d = p.degree();
    let radius = initial_radius(p);
    let step = 2.0 * core::f64::consts::PI / d as f64;
    let mut z: Vec<Complex> = (0..d)
        .map(|k| Complex::from_polar(radius, step * k as f64 + GUESS_ANGLE_OFFSET))
        .collect();
    let mut frozen = vec![false; d];
    let rounding = 8.0 * f64::EPSILON;

    let mut iterations = 0;
    while iterations < opts.max_iter && frozen.iter().any(|f| !f) {
        iterations += 1;
        for i in 0..d {
            if frozen[i] {
                continue;
            }
            let zi = z[i];
            let (val, der) = p.eval_with_derivative(zi);
            if val.norm() <= rounding * p.abs_eval(zi) {
                frozen[i] = true;
                continue;
            }
            let repulsion: Complex = z
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &zj)| {
                    let diff = zi - zj;
                    if diff.is_zero() {
                        Complex::zero()
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let w = if der.is_zero() {
                if repulsion.is_zero() {
                    Complex::new(radius * 1e-3, radius * 1e-3)
                } else {
                    -repulsion.inv()
                }
            } else {
                let newton = val / der;
                newton / (Complex::new(1.0, 0.0) - newton * repulsion)
            };
            if !w.is_finite() {
                continue;
            }
            z[i] = zi - w;
            if w.norm() <= rounding * zi.norm() {
                frozen[i] = true;
            }
        }
    }

    let worst = worst_relative_residual(p, &z);
    if worst > opts.tol {
        let best = with_residuals(p, RootSet::simple(z));
        return Err(Error::NonConvergence {
            iterations,
            worst_residual: worst,
            best: Box::new(best),
        });
    }
    Ok(z)
}

/// Continues Aberth iteration on `z` with a caller-supplied `(f, f')`
/// evaluator, for functions whose expanded coefficients are ill-conditioned.
pub fn aberth_refine(z: &mut [Complex], eval: impl Fn(Complex) -> (Complex, Complex), max_iter: usize) {
    let d = z.len();
    let rounding = 8.0 * f64::EPSILON;
    let mut frozen = vec![false; d];
    for _ in 0..max_iter {
        if frozen.iter().all(|&f| f) {
            break;
        }
        for i in 0..d {
            if frozen[i] {
                continue;
            }
            let zi = z[i];
            let (val, der) = eval(zi);
            if val.is_zero() {
                frozen[i] = true;
                continue;
            }
            let repulsion: Complex = z
                .iter()
                .enumerate()
                .filter(|&(j, &zj)| j != i && zj != zi)
                .map(|(_, &zj)| (zi - zj).inv())
                .sum();
            if der.is_zero() {
                continue;
            }
            let newton = val / der;
            let w = newton / (Complex::new(1.0, 0.0) - newton * repulsion);
            if !w.is_finite() {
                continue;
            }
            z[i] = zi - w;
            if w.norm() <= rounding * (1.0 + zi.norm()) {
                frozen[i] = true;
            }
        }
    }
}

/// Largest `|P(z)| / max(scale, sum |a_k||z|^k)` over the candidates.
fn worst_relative_residual(p: &Polynomial, z: &[Complex]) -> f64 {
    let scale = p.scale();
    z.iter()
        .map(|&r| {
            let denom = scale.max(p.abs_eval(r));
            if denom == 0.0 {
                0.0
            } else {
                p.eval(r).norm() / denom
            }
        })
        .fold(0.0, f64::max)
}

fn with_residuals(p: &Polynomial, mut set: RootSet) -> RootSet {
    set.residuals = set.roots.iter().map(|&r| p.eval(r).norm()).collect();
    set
}

/// Merges roots closer than `eps`, transitively, into their weighted centroid.
pub fn cluster(set: &RootSet, eps: f64) -> RootSet {
    let groups = cluster_groups(&set.roots, |_| eps);
    let mut out = RootSet::default();
    for group in groups {
        let mult: usize = group.iter().map(|&i| set.multiplicities[i]).sum();
        let centroid = group
            .iter()
            .map(|&i| set.roots[i] * set.multiplicities[i] as f64)
            .sum::<Complex>()
            / mult as f64;
        let residual = group
            .iter()
            .map(|&i| set.residuals.get(i).copied().unwrap_or(0.0))
            .fold(0.0, f64::max);
        out.roots.push(centroid);
        out.multiplicities.push(mult);
        out.residuals.push(residual);
    }
    out
}

/// Groups of indices whose points are linked by chains of distance `<= tol(z)`.
///
/// Groups are ordered by their smallest index, and indices inside a group are
/// ascending, so the result does not depend on the sort used internally.
pub fn cluster_groups(points: &[Complex], tol: impl Fn(Complex) -> f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let tols: Vec<f64> = points.iter().map(|&z| tol(z)).collect();
    let max_tol = tols.iter().copied().fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| points[a].re.total_cmp(&points[b].re));
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if points[j].re - points[i].re > max_tol {
                break;
            }
            if (points[i] - points[j]).norm() <= tols[i].max(tols[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Solutions of `P(z) = w` with multiplicity; clustering radius `1e-6 (1 + |w|)`.
pub fn preimages(p: &Polynomial, w: Complex) -> Result<RootSet> {
    let opts = SolveOptions {
        cluster_eps: Some(1e-6 * (1.0 + w.norm())),
        ..SolveOptions::default()
    };
    preimages_with(p, w, &opts)
}

pub fn preimages_with(p: &Polynomial, w: Complex, opts: &SolveOptions) -> Result<RootSet> {
    let shifted = p.minus_constant(w);
    if shifted.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    let raw = raw_roots(&shifted, opts)?;
    let eps = opts.cluster_eps.unwrap_or(1e-6 * (1.0 + w.norm()));
    Ok(with_residuals(&shifted, cluster(&RootSet::simple(raw), eps)))
}
