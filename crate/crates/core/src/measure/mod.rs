//! Empirical measures on the sphere and the equilibrium-measure machinery:
//! pullbacks, preimage measures, Cesàro means, duality, equidistribution,
//! mixing and ergodicity statistics, and inverse-branch diameters.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Complex, SpherePoint};
use crate::roots::cluster_groups;

mod lyubich;
mod pullback;
mod stats;

pub use lyubich::{
    check_disc, lyubich_branch_diameters, lyubich_diameters, postcritical_points, summarize_lyubich, Disc,
    LyubichLevel, LyubichOptions, LyubichReport,
};
pub use pullback::{
    cesaro, cesaro_mass_gaps, duality_residual, mu_nx, mu_nx_task, preimage_levels, pullback,
    pushforward_fn, CesaroGap, SamplingOptions, DEFAULT_EXACT_BUDGET,
};
pub use stats::{
    ergodicity_check, mixing_correlation, weak_gap, ErgodicityReport, FunctionGap, WeakGapReport,
};

/// Relative tolerance used when two atoms are considered the same point.
pub const ATOM_MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub point: SpherePoint,
    pub weight: f64,
}

/// A finite positive combination of point masses.
///
/// Measures returned by the sampling routines are probability measures;
/// [`pullback`] returns mass `d` times the input mass.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmpiricalMeasure {
    atoms: Vec<Atom>,
}

impl EmpiricalMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.iter().any(|a| !(a.weight > 0.0) || !a.weight.is_finite()) {
            return Err(Error::InvalidInput("atom weights must be positive and finite"));
        }
        Ok(Self { atoms })
    }

    pub(crate) fn from_atoms_unchecked(atoms: Vec<Atom>) -> Self {
        Self { atoms }
    }

    pub fn dirac(point: SpherePoint) -> Self {
        Self {
            atoms: alloc::vec![Atom { point, weight: 1.0 }],
        }
    }

    /// Equal weights summing to one.
    pub fn uniform(points: impl IntoIterator<Item = Complex>) -> Self {
        let points: Vec<Complex> = points.into_iter().collect();
        let w = 1.0 / points.len() as f64;
        Self {
            atoms: points
                .into_iter()
                .map(|z| Atom {
                    point: SpherePoint::Finite(z),
                    weight: w,
                })
                .collect(),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn is_probability(&self) -> bool {
        (self.mass() - 1.0).abs() <= 1e-9
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    point: a.point,
                    weight: a.weight * factor,
                })
                .collect(),
        }
    }

    pub fn normalized(&self) -> Self {
        self.scaled(1.0 / self.mass())
    }

    /// Finite atom locations.
    pub fn finite_points(&self) -> impl Iterator<Item = Complex> + '_ {
        self.atoms.iter().filter_map(|a| a.point.finite())
    }

    /// Mass carried by the point at infinity.
    pub fn mass_at_infinity(&self) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.point.is_infinite())
            .map(|a| a.weight)
            .sum()
    }

    /// `sum_i weights[i] * measures[i]`.
    pub fn mixture(parts: &[(f64, &EmpiricalMeasure)]) -> Self {
        let mut atoms = Vec::new();
        for &(w, m) in parts {
            atoms.extend(m.atoms.iter().map(|a| Atom {
                point: a.point,
                weight: a.weight * w,
            }));
        }
        Self { atoms }
    }

    /// Concatenation of atom lists (sum of measures).
    pub fn concat(parts: impl IntoIterator<Item = EmpiricalMeasure>) -> Self {
        let mut atoms = Vec::new();
        for part in parts {
            atoms.extend(part.atoms);
        }
        Self { atoms }
    }

    /// Merges atoms closer than `tol (1 + |z|)`; infinity atoms merge together.
    pub fn merged(&self, tol: f64) -> Self {
        let signed = signed_merge(&[(1.0, self)], tol);
        Self {
            atoms: signed
                .into_iter()
                .map(|(point, weight)| Atom { point, weight })
                .collect(),
        }
    }

    /// Largest `|∫φ dself − ∫φ dother|` over a panel.
    pub fn panel_distance(&self, other: &Self, panel: &[TestFunction]) -> Result<f64> {
        let mut worst = 0.0f64;
        for phi in panel {
            worst = worst.max((integrate(self, phi)? - integrate(other, phi)?).norm());
        }
        Ok(worst)
    }
}

/// Total mass of `|a - b|` after matching atoms within `tol (1 + |z|)`.
pub fn total_variation(a: &EmpiricalMeasure, b: &EmpiricalMeasure, tol: f64) -> f64 {
    signed_merge(&[(1.0, a), (-1.0, b)], tol)
        .into_iter()
        .map(|(_, w)| w.abs())
        .sum()
}

/// Largest weight mismatch and the mass left unmatched between two measures.
pub fn atom_set_mismatch(a: &EmpiricalMeasure, b: &EmpiricalMeasure, tol: f64) -> f64 {
    signed_merge(&[(1.0, a), (-1.0, b)], tol)
        .into_iter()
        .map(|(_, w)| w.abs())
        .fold(0.0, f64::max)
}

fn signed_merge(parts: &[(f64, &EmpiricalMeasure)], tol: f64) -> Vec<(SpherePoint, f64)> {
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut at_infinity = 0.0;
    let mut has_infinity = false;
    for &(sign, m) in parts {
        for a in &m.atoms {
            match a.point {
                SpherePoint::Finite(z) => {
                    points.push(z);
                    weights.push(sign * a.weight);
                }
                SpherePoint::Infinity => {
                    has_infinity = true;
                    at_infinity += sign * a.weight;
                }
            }
        }
    }
    let groups = cluster_groups(&points, |z| tol * (1.0 + z.norm()));
    let mut out: Vec<(SpherePoint, f64)> = groups
        .into_iter()
        .map(|g| {
            let w: f64 = g.iter().map(|&i| weights[i]).sum();
            let abs: f64 = g.iter().map(|&i| weights[i].abs()).sum();
            let centroid = g.iter().map(|&i| points[i] * weights[i].abs()).sum::<Complex>() / abs;
            (SpherePoint::Finite(centroid), w)
        })
        .collect();
    if has_infinity {
        out.push((SpherePoint::Infinity, at_infinity));
    }
    out
}

type Evaluator = dyn Fn(SpherePoint) -> Option<Complex> + Send + Sync;

/// A bounded function on the sphere with a label.
///
/// Evaluation returns `None` where the function is undefined.
#[derive(Clone)]
pub struct TestFunction {
    pub label: String,
    evaluator: Arc<Evaluator>,
}

impl core::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("TestFunction").field("label", &self.label).finish()
    }
}

impl TestFunction {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(SpherePoint) -> Option<Complex> + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            evaluator: Arc::new(f),
        }
    }

    /// A function of the finite plane with a prescribed value at infinity.
    pub fn planar(
        label: impl Into<String>,
        at_infinity: Complex,
        f: impl Fn(Complex) -> Complex + Send + Sync + 'static,
    ) -> Self {
        Self::new(label, move |p| match p {
            SpherePoint::Finite(z) => Some(f(z)),
            SpherePoint::Infinity => Some(at_infinity),
        })
    }

    pub fn real(
        label: impl Into<String>,
        at_infinity: f64,
        f: impl Fn(Complex) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::planar(label, Complex::new(at_infinity, 0.0), move |z| {
            Complex::new(f(z), 0.0)
        })
    }

    /// Indicator of a set given by a predicate on finite points.
    pub fn indicator(
        label: impl Into<String>,
        contains_infinity: bool,
        pred: impl Fn(Complex) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self::real(label, f64::from(u8::from(contains_infinity)), move |z| {
            f64::from(u8::from(pred(z)))
        })
    }

    pub fn constant(value: f64) -> Self {
        Self::real("one", value, move |_| value)
    }

    pub fn eval(&self, p: SpherePoint) -> Option<Complex> {
        (self.evaluator)(p)
    }

    /// The default panel; see [`named`] for the convention at infinity.
    pub fn panel() -> Vec<TestFunction> {
        ["re", "im", "abs2", "bump", "re2", "im2"]
            .iter()
            .filter_map(|n| named(n))
            .collect()
    }
}

/// Panel functions by name.
///
/// Unbounded planar functions take at infinity the limit of
/// `φ(z) / (1 + |z|²)` along the positive real axis.
pub fn named(name: &str) -> Option<TestFunction> {
    let f = match name {
        "re" => TestFunction::real("re", 0.0, |z| z.re),
        "im" => TestFunction::real("im", 0.0, |z| z.im),
        "abs2" => TestFunction::real("abs2", 1.0, |z| z.norm_sqr()),
        "bump" => TestFunction::real("bump", 0.0, |z| 1.0 / (1.0 + z.norm_sqr())),
        "re2" => TestFunction::real("re2", 1.0, |z| (z * z).re),
        "im2" => TestFunction::real("im2", 0.0, |z| (z * z).im),
        "one" => TestFunction::constant(1.0),
        "upper" => TestFunction::indicator("upper", false, |z| z.im > 0.0),
        _ => return None,
    };
    Some(f)
}

/// `∫ φ dμ = Σ w_i φ(z_i)`.
pub fn integrate(mu: &EmpiricalMeasure, phi: &TestFunction) -> Result<Complex> {
    let mut acc = Complex::zero();
    for a in &mu.atoms {
        acc += phi.eval(a.point).ok_or(Error::UndefinedAtAtom)? * a.weight;
    }
    Ok(acc)
}
