use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Complex;
use crate::series::PowerSeries;

/// A holomorphic function on the unit disc given by evaluation and Taylor data.
pub trait Univalent {
    fn eval(&self, z: Complex) -> Complex;
    fn derivative(&self, z: Complex) -> Complex;
    fn taylor(&self, k: usize) -> Complex;
}

impl Univalent for PowerSeries {
    fn eval(&self, z: Complex) -> Complex {
        PowerSeries::eval(self, z)
    }

    fn derivative(&self, z: Complex) -> Complex {
        self.eval_derivative(z)
    }

    fn taylor(&self, k: usize) -> Complex {
        self.coeff(k)
    }
}

/// `k(z) = z/(1 − z)² = Σ n zⁿ`, evaluated in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KoebeFunction;

impl Univalent for KoebeFunction {
    fn eval(&self, z: Complex) -> Complex {
        let w = Complex::one() - z;
        z / (w * w)
    }

    fn derivative(&self, z: Complex) -> Complex {
        let w = Complex::one() - z;
        (Complex::one() + z) / (w * w * w)
    }

    fn taylor(&self, k: usize) -> Complex {
        Complex::new(k as f64, 0.0)
    }
}

impl KoebeFunction {
    pub fn truncated(order: usize) -> PowerSeries {
        let coeffs = (0..=order.max(1)).map(|k| KoebeFunction.taylor(k)).collect();
        PowerSeries::new(coeffs).expect("order >= 1")
    }
}

/// `g(z) = 1/z + Σ_{n≥0} b_n zⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentTail {
    pub b: Vec<Complex>,
}

impl LaurentTail {
    pub fn new(b: Vec<Complex>) -> Result<Self> {
        if b.len() < 2 {
            return Err(Error::InvalidInput("Laurent tail needs b_0 and b_1"));
        }
        Ok(Self { b })
    }

    pub fn eval(&self, z: Complex) -> Complex {
        z.inv() + self.b.iter().rev().fold(Complex::zero(), |acc, &c| acc * z + c)
    }

    /// `z² g'(z) = −1 + Σ n b_n z^{n+1}`, holomorphic on the disc.
    pub fn scaled_derivative(&self, z: Complex) -> Complex {
        let tail = self
            .b
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex::zero(), |acc, (n, &c)| acc * z + c * n as f64);
        tail * z * z - 1.0
    }
}

/// Number of turns of `γ(t) − w` around 0 for `t ∈ [0, 2π]`, with adaptive
/// refinement wherever consecutive samples turn by more than a quarter turn.
pub fn winding_number(curve: impl Fn(f64) -> Complex, w: Complex, samples: usize) -> i64 {
    fn turn(curve: &dyn Fn(f64) -> Complex, w: Complex, t0: f64, t1: f64, depth: u32) -> f64 {
        let a = curve(t0) - w;
        let b = curve(t1) - w;
        let d = (b / a).arg();
        if d.abs() <= PI / 2.0 || depth == 0 {
            return d;
        }
        let tm = 0.5 * (t0 + t1);
        turn(curve, w, t0, tm, depth - 1) + turn(curve, w, tm, t1, depth - 1)
    }
    let h = 2.0 * PI / samples as f64;
    let total: f64 = (0..samples)
        .map(|k| turn(&curve, w, k as f64 * h, (k + 1) as f64 * h, 30))
        .sum();
    (total / (2.0 * PI)).round() as i64
}

fn grid_points(count: usize, radius: f64) -> Vec<Complex> {
    // polar grid with roughly `count` points, radii in (0, radius)
    let rings = ((count as f64) / (2.0 * PI)).sqrt().ceil().max(1.0) as usize;
    let mut pts = Vec::with_capacity(count + rings);
    for i in 0..rings {
        let r = radius * (i as f64 + 0.5) / rings as f64;
        let m = ((2.0 * PI * (i as f64 + 0.5)).ceil() as usize).max(3);
        for j in 0..m {
            // stagger rings so no two points share an argument
            let t = 2.0 * PI * (j as f64 + 0.37 * i as f64) / m as f64;
            pts.push(Complex::from_polar(r, t));
        }
    }
    pts
}

fn pairwise_distinct(values: &[Complex], tol: f64) -> bool {
    values
        .iter()
        .enumerate()
        .all(|(i, a)| values[i + 1..].iter().all(|b| (a - b).norm() > tol))
}

/// Univalence spot check radius for derivative zero counts.
const CRITICAL_COUNT_RADIUS: f64 = 0.99;
const GRID_POINTS: usize = 1000;
const GRID_RADIUS: f64 = 0.99;
const GRID_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AreaReport {
    /// `Σ_{n ≤ N} n|b_n|²`.
    pub sum: f64,
    pub partial_sums: Vec<f64>,
    pub pass: bool,
    /// Grid injectivity and no critical points inside `|z| < 0.99`.
    pub univalent_on_grid: bool,
}

pub fn area_theorem_sum(g: &LaurentTail) -> AreaReport {
    let mut partial_sums = Vec::with_capacity(g.b.len());
    let mut sum = 0.0;
    for (n, b) in g.b.iter().enumerate() {
        sum += n as f64 * b.norm_sqr();
        partial_sums.push(sum);
    }
    let grid = grid_points(GRID_POINTS, GRID_RADIUS);
    let images: Vec<Complex> = grid.iter().map(|&z| g.eval(z)).collect();
    let critical = winding_number(
        |t| g.scaled_derivative(Complex::from_polar(CRITICAL_COUNT_RADIUS, t)),
        Complex::zero(),
        4096,
    );
    AreaReport {
        sum,
        partial_sums,
        pass: sum <= 1.0 + 1e-9,
        univalent_on_grid: critical == 0 && pairwise_distinct(&images, GRID_TOL),
    }
}

/// Radius of the circle whose image must wind once around the tested disc.
pub const KOEBE_CONTOUR_RADIUS: f64 = 0.999;
pub const KOEBE_TEST_RADIUS: f64 = 0.24;
pub const KOEBE_CONTOUR_SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct KoebeReport {
    pub a2: Complex,
    pub a2_pass: bool,
    pub grid_points: usize,
    /// Grid points of `|w| ≤ 0.24` whose winding number is not 1.
    pub uncovered: usize,
    pub coverage_pass: bool,
    pub univalent_on_grid: bool,
}

impl KoebeReport {
    pub fn pass(&self) -> bool {
        self.a2_pass && self.coverage_pass
    }
}

/// `|a₂| ≤ 2` and coverage of the `0.24`-disc by `f(|z| < 0.999)`, tested on a
/// square grid of `resolution × resolution` points.
pub fn koebe_quarter_check(f: &impl Univalent, resolution: usize) -> Result<KoebeReport> {
    if f.taylor(0).norm() > 1e-12 || (f.taylor(1) - Complex::one()).norm() > 1e-12 {
        return Err(Error::NotNormalized);
    }
    let a2 = f.taylor(2);
    let n = resolution.max(2);
    let mut grid_points = 0;
    let mut uncovered = 0;
    let contour = |t: f64| f.eval(Complex::from_polar(KOEBE_CONTOUR_RADIUS, t));
    for i in 0..n {
        for j in 0..n {
            let w = Complex::new(
                KOEBE_TEST_RADIUS * (2.0 * i as f64 / (n - 1) as f64 - 1.0),
                KOEBE_TEST_RADIUS * (2.0 * j as f64 / (n - 1) as f64 - 1.0),
            );
            if w.norm() > KOEBE_TEST_RADIUS {
                continue;
            }
            grid_points += 1;
            if winding_number(contour, w, KOEBE_CONTOUR_SAMPLES) != 1 {
                uncovered += 1;
            }
        }
    }
    let grid = grid_points_in_disc();
    let images: Vec<Complex> = grid.iter().map(|&z| f.eval(z)).collect();
    let critical = winding_number(
        |t| f.derivative(Complex::from_polar(CRITICAL_COUNT_RADIUS, t)),
        Complex::zero(),
        4096,
    );
    Ok(KoebeReport {
        a2,
        a2_pass: a2.norm() <= 2.0 + 1e-9,
        grid_points,
        uncovered,
        coverage_pass: uncovered == 0,
        univalent_on_grid: critical == 0 && pairwise_distinct(&images, GRID_TOL),
    })
}

fn grid_points_in_disc() -> Vec<Complex> {
    grid_points(GRID_POINTS, GRID_RADIUS)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// `∫∫_{|z|<1} |f'|² dA`, Gauss–Legendre in the radius and trapezoid in the angle.
pub fn image_area(f: &impl Univalent, radial: usize, angular: usize) -> f64 {
    let nodes = gauss_legendre(radial);
    let h = 2.0 * PI / angular as f64;
    let mut total = 0.0;
    for &(x, w) in &nodes {
        let rho = 0.5 * (x + 1.0);
        let ring: f64 = (0..angular)
            .map(|k| f.derivative(Complex::from_polar(rho, k as f64 * h)).norm_sqr())
            .sum();
        total += 0.5 * w * rho * ring * h;
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionReport {
    pub s: f64,
    /// `sup_{|z|,|w| ≤ s} |f(z) − f(w)|`, attained on `|z| = s`.
    pub diameter: f64,
    pub area: f64,
    pub ratio: f64,
}

/// `diam f(|z| ≤ s) / √Area f(Δ)`.
pub fn koebe_distortion_check(f: &impl Univalent, s: f64) -> Result<DistortionReport> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidInput("distortion radius must lie in (0, 1)"));
    }
    let m = 512;
    let boundary: Vec<Complex> = (0..m)
        .map(|k| f.eval(Complex::from_polar(s, 2.0 * PI * k as f64 / m as f64)))
        .collect();
    let mut diameter = 0.0f64;
    for (i, a) in boundary.iter().enumerate() {
        for b in &boundary[i + 1..] {
            diameter = diameter.max((a - b).norm());
        }
    }
    let area = image_area(f, 48, 512);
    Ok(DistortionReport {
        s,
        diameter,
        area,
        ratio: diameter / area.sqrt(),
    })
}
