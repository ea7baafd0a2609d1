use std::io::Write;
use std::path::PathBuf;

use rand::Rng;
use serde_json::{json, Value};

use cdyn_core::measure::{
    cesaro, cesaro_mass_gaps, duality_residual, integrate, mixing_correlation, named, weak_gap, Atom,
    Disc, EmpiricalMeasure, LyubichOptions, SamplingOptions, TestFunction, DEFAULT_EXACT_BUDGET,
};
use cdyn_core::orbits::default_basepoint;
use cdyn_core::sampling::task_rng;
use cdyn_core::{Complex, Polynomial, SpherePoint};

use super::{cjson, create, dynamical_polynomial, emit, require, ReportOut, Seeded};
use crate::error::{CliError, CliResult};
use crate::format::{parse_complex, write_measure_csv};
use crate::parallel;

const DEFAULT_POLY: &str = "0,0,1";

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Polynomial coefficients in ascending order.
    #[arg(short = 'p', long = "poly", value_name = "COEFFS", allow_hyphen_values = true, default_value = DEFAULT_POLY)]
    pub poly: String,
    /// Exact preimage tree when d^n is at most this; otherwise the number of samples.
    #[arg(long, visible_alias = "samples", default_value_t = DEFAULT_EXACT_BUDGET)]
    pub budget: usize,
    #[command(flatten)]
    pub seeded: Seeded,
    #[command(flatten)]
    pub out: ReportOut,
}

impl Common {
    fn polynomial(&self) -> CliResult<Polynomial> {
        dynamical_polynomial(&self.poly)
    }

    fn sampling(&self) -> SamplingOptions {
        SamplingOptions {
            budget: self.budget,
            rng_seed: self.seeded.seed,
            tasks: self.seeded.tasks(),
        }
    }

    fn params(&self, p: &Polynomial, exact: bool) -> serde_json::Map<String, Value> {
        let mut m = serde_json::Map::new();
        m.insert("polynomial".into(), json!(p.to_string()));
        m.insert("budget".into(), json!(self.budget));
        m.insert("mode".into(), json!(if exact { "exact" } else { "sampled" }));
        m.insert("seed".into(), json!(if exact { None } else { self.seeded.seed }));
        m.insert("tasks".into(), json!(self.seeded.tasks));
        m
    }
}

#[derive(Debug, clap::Subcommand)]
pub enum Cmd {
    /// Weak distance between the preimage measures of two basepoints.
    Gap(GapArgs),
    /// Correlations ∫φ·ψ∘Pⁿ dμ − ∫φ dμ ∫ψ dμ on a preimage measure.
    Mixing(MixingArgs),
    /// Cesàro mean of the preimage measures, written as a measure CSV.
    Cesaro(CesaroArgs),
    /// Total variation between consecutive Cesàro means against 2/(n+1).
    CesaroMassgap(MassGapArgs),
    /// Randomized check of ∫φ d(P*ν) = ∫(P_*φ) dν.
    Duality(DualityArgs),
    /// Diameters of inverse branches of a disc away from the postcritical set.
    Lyubich(LyubichArgs),
}

pub fn run(cmd: &Cmd) -> CliResult<()> {
    match cmd {
        Cmd::Gap(a) => gap(a),
        Cmd::Mixing(a) => mixing(a),
        Cmd::Cesaro(a) => run_cesaro(a),
        Cmd::CesaroMassgap(a) => mass_gap(a),
        Cmd::Duality(a) => duality(a),
        Cmd::Lyubich(a) => lyubich(a),
    }
}

fn panel(names: &Option<String>) -> CliResult<Vec<TestFunction>> {
    match names {
        None => Ok(TestFunction::panel()),
        Some(list) => list
            .split(',')
            .map(|n| named(n.trim()).ok_or_else(|| CliError::parse(format!("unknown test function {n:?}"))))
            .collect(),
    }
}

fn function(name: &str) -> CliResult<TestFunction> {
    named(name).ok_or_else(|| CliError::parse(format!("unknown test function {name:?}")))
}

fn basepoint(p: &Polynomial, text: &Option<String>) -> CliResult<Complex> {
    match text {
        Some(t) => parse_complex(t),
        None => Ok(default_basepoint(p)?),
    }
}

fn report(operation: &str, params: serde_json::Map<String, Value>, per_n: Vec<Value>, fitted: Value) -> Value {
    json!({
        "operation": operation,
        "params": params,
        "per_n": per_n,
        "fitted": fitted,
    })
}

#[derive(Debug, clap::Args)]
pub struct GapArgs {
    #[arg(short = 'x', long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(short = 'y', long, allow_hyphen_values = true)]
    pub y: String,
    /// Depth n.
    #[arg(short = 'n', long, default_value_t = 12)]
    pub n: usize,
    /// First depth reported; defaults to n.
    #[arg(long)]
    pub from: Option<usize>,
    /// Comma-separated panel: re, im, abs2, bump, re2, im2, one, upper.
    #[arg(long)]
    pub functions: Option<String>,
    /// Fail unless the gap at depth n is below this.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

fn gap(a: &GapArgs) -> CliResult<()> {
    let p = a.common.polynomial()?;
    let (x, y) = (parse_complex(&a.x)?, parse_complex(&a.y)?);
    let panel = panel(&a.functions)?;
    let opts = a.common.sampling();
    let from = a.from.unwrap_or(a.n).min(a.n);
    let mut per_n = Vec::new();
    let mut last = None;
    for n in from..=a.n {
        let r = weak_gap(&p, x, y, n, &panel, &opts)?;
        let worst = r
            .per_function
            .iter()
            .find(|f| f.gap == r.gap)
            .map(|f| f.label.clone());
        per_n.push(json!({"n": n, "value": r.gap, "stderr": r.stderr, "worst": worst}));
        last = Some(r);
    }
    let last = last.expect("at least one depth");
    let mut params = a.common.params(&p, opts.exact_for(p.degree(), a.n));
    params.insert("x".into(), cjson(x));
    params.insert("y".into(), cjson(y));
    params.insert("n".into(), json!(a.n));
    params.insert("functions".into(), json!(panel.iter().map(|f| f.label.clone()).collect::<Vec<_>>()));
    let pass = a.threshold.map(|t| last.gap < t);
    let fitted = json!({
        "gap": last.gap,
        "stderr": last.stderr,
        "per_function": last.per_function.iter().map(|f| json!({
            "function": f.label,
            "value_x": cjson(f.value_x),
            "value_y": cjson(f.value_y),
            "gap": f.gap,
            "stderr": f.stderr,
        })).collect::<Vec<_>>(),
        "threshold": a.threshold,
        "pass": pass,
    });
    emit(&a.common.out, &report("weak_gap", params, per_n, fitted))?;
    require(pass != Some(false), || format!("gap {} is not below the threshold", last.gap))
}

#[derive(Debug, clap::Args)]
pub struct MixingArgs {
    /// Basepoint of the preimage measure; defaults to the most repelling fixed point.
    #[arg(short = 'x', long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Depth of the preimage measure.
    #[arg(short = 'd', long, default_value_t = 12)]
    pub depth: usize,
    /// Largest lag n.
    #[arg(short = 'n', long = "lags", default_value_t = 6)]
    pub lags: usize,
    #[arg(long, default_value = "re")]
    pub phi: String,
    #[arg(long, default_value = "re")]
    pub psi: String,
    /// Fail unless every |C_n| is below this.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

fn mixing(a: &MixingArgs) -> CliResult<()> {
    let p = a.common.polynomial()?;
    let x = basepoint(&p, &a.x)?;
    let (phi, psi) = (function(&a.phi)?, function(&a.psi)?);
    let opts = a.common.sampling();
    let mu = parallel::mu_nx(&p, SpherePoint::Finite(x), a.depth, &opts)?;
    let mut per_n = Vec::with_capacity(a.lags);
    let mut worst = 0.0f64;
    for n in 1..=a.lags {
        let c = mixing_correlation(&p, &phi, &psi, n, &mu)?;
        worst = worst.max(c.norm());
        per_n.push(json!({"n": n, "value": c.norm(), "stderr": Value::Null, "correlation": cjson(c)}));
    }
    let mut params = a.common.params(&p, opts.exact_for(p.degree(), a.depth));
    params.insert("x".into(), cjson(x));
    params.insert("depth".into(), json!(a.depth));
    params.insert("phi".into(), json!(phi.label));
    params.insert("psi".into(), json!(psi.label));
    let pass = a.threshold.map(|t| worst < t);
    let fitted = json!({"max_abs_correlation": worst, "threshold": a.threshold, "pass": pass});
    emit(&a.common.out, &report("mixing_correlation", params, per_n, fitted))?;
    require(pass != Some(false), || format!("correlation {worst} is not below the threshold"))
}

#[derive(Debug, clap::Args)]
pub struct CesaroArgs {
    /// Basepoint; defaults to the most repelling fixed point.
    #[arg(short = 'x', long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(short = 'n', long, default_value_t = 8)]
    pub n: usize,
    /// Write the Cesàro mean as a measure CSV.
    #[arg(short = 'o', long = "out", value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

fn run_cesaro(a: &CesaroArgs) -> CliResult<()> {
    let p = a.common.polynomial()?;
    let x = basepoint(&p, &a.x)?;
    let opts = a.common.sampling();
    let lambda = cesaro(&p, SpherePoint::Finite(x), a.n, &opts)?;
    if let Some(path) = &a.csv {
        let mut f = create(path)?;
        write_measure_csv(&mut f, &lambda)?;
        f.flush()?;
    }
    let mut integrals = serde_json::Map::new();
    for phi in TestFunction::panel() {
        integrals.insert(phi.label.clone(), cjson(integrate(&lambda, &phi)?));
    }
    let mut params = a.common.params(&p, opts.exact_for(p.degree(), a.n));
    params.insert("x".into(), cjson(x));
    params.insert("n".into(), json!(a.n));
    let per_n = vec![json!({"n": a.n, "value": lambda.mass(), "stderr": Value::Null, "atoms": lambda.len()})];
    emit(&a.common.out, &report("cesaro", params, per_n, json!({"integrals": integrals})))
}

#[derive(Debug, clap::Args)]
pub struct MassGapArgs {
    /// Basepoint; defaults to the most repelling fixed point.
    #[arg(short = 'x', long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Largest n.
    #[arg(short = 'n', long, default_value_t = 4)]
    pub n: usize,
    #[command(flatten)]
    pub out: ReportOut,
    #[arg(short = 'p', long = "poly", value_name = "COEFFS", allow_hyphen_values = true, default_value = DEFAULT_POLY)]
    pub poly: String,
}

fn mass_gap(a: &MassGapArgs) -> CliResult<()> {
    let p = dynamical_polynomial(&a.poly)?;
    let x = basepoint(&p, &a.x)?;
    let gaps = cesaro_mass_gaps(&p, SpherePoint::Finite(x), a.n)?;
    let mut pass = true;
    let per_n: Vec<Value> = gaps
        .iter()
        .map(|g| {
            let ok = g.tv_consecutive <= g.bound + 1e-9;
            pass &= ok;
            json!({
                "n": g.n,
                "value": g.tv_consecutive,
                "stderr": 0.0,
                "tv_pullback": g.tv_pullback,
                "bound": g.bound,
                "pass": ok,
            })
        })
        .collect();
    let mut params = serde_json::Map::new();
    params.insert("polynomial".into(), json!(p.to_string()));
    params.insert("x".into(), cjson(x));
    params.insert("n".into(), json!(a.n));
    params.insert("mode".into(), json!("exact"));
    let worst = gaps.iter().map(|g| g.tv_consecutive / g.bound).fold(0.0, f64::max);
    let fitted = json!({"max_ratio_to_bound": worst, "pass": pass});
    emit(&a.out, &report("cesaro_mass_gap", params, per_n, fitted))?;
    require(pass, || "a Cesàro difference exceeds 2/(n+1)".to_string())
}

#[derive(Debug, clap::Args)]
pub struct DualityArgs {
    #[arg(long, default_value_t = 100)]
    pub cases: usize,
    /// Largest number of finite atoms of a random ν.
    #[arg(long, default_value_t = 8)]
    pub atoms: usize,
    /// Draw a random polynomial of degree 2 or 3 for each case instead of -p.
    #[arg(long)]
    pub random_poly: bool,
    #[arg(long, default_value_t = 1e-8)]
    pub threshold: f64,
    #[command(flatten)]
    pub common: Common,
}

fn random_complex<R: Rng>(rng: &mut R, radius: f64) -> Complex {
    Complex::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn duality(a: &DualityArgs) -> CliResult<()> {
    let seed = a.common.seeded.require_seed()?;
    let base = a.common.polynomial()?;
    let panel = TestFunction::panel();
    let mut rng = task_rng(seed, 0);
    let mut per_n = Vec::with_capacity(a.cases);
    let mut worst = 0.0f64;
    for case in 0..a.cases {
        let p = if a.random_poly {
            let d = rng.gen_range(2..=3);
            let mut c: Vec<Complex> = (0..d).map(|_| random_complex(&mut rng, 1.0)).collect();
            c.push(random_complex(&mut rng, 1.0) + Complex::new(0.5, 0.0));
            Polynomial::new(c)
        } else {
            base.clone()
        };
        let count = rng.gen_range(1..=a.atoms.max(1));
        let mut atoms: Vec<Atom> = (0..count)
            .map(|_| Atom {
                point: SpherePoint::Finite(random_complex(&mut rng, 3.0)),
                weight: rng.gen_range(0.1..1.0),
            })
            .collect();
        if rng.gen_bool(0.2) {
            atoms.push(Atom {
                point: SpherePoint::Infinity,
                weight: rng.gen_range(0.1..1.0),
            });
        }
        let nu = EmpiricalMeasure::new(atoms)?;
        let phi = &panel[case % panel.len()];
        let r = duality_residual(&p, phi, &nu)?;
        worst = worst.max(r);
        per_n.push(json!({
            "n": case,
            "value": r,
            "stderr": 0.0,
            "polynomial": p.to_string(),
            "function": phi.label,
        }));
    }
    let mut params = serde_json::Map::new();
    params.insert(
        "polynomial".into(),
        if a.random_poly { json!("random") } else { json!(base.to_string()) },
    );
    params.insert("cases".into(), json!(a.cases));
    params.insert("seed".into(), json!(seed));
    let pass = worst < a.threshold;
    let fitted = json!({"max_residual": worst, "threshold": a.threshold, "pass": pass});
    emit(&a.common.out, &report("duality_residual", params, per_n, fitted))?;
    require(pass, || format!("duality residual {worst:e} is not below {:e}", a.threshold))
}

#[derive(Debug, clap::Args)]
pub struct LyubichArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub center: String,
    #[arg(long)]
    pub radius: f64,
    #[arg(long, default_value_t = 12)]
    pub nmax: usize,
    #[arg(long, default_value_t = 2000)]
    pub branches: usize,
    /// Points tracked on the boundary circle.
    #[arg(long, default_value_t = 16)]
    pub boundary_samples: usize,
    /// Forward critical iterates the disc must avoid.
    #[arg(long, default_value_t = 20)]
    pub ell: usize,
    /// Allowed distance of the fitted slope from −ln(d)/2.
    #[arg(long, default_value_t = 0.15)]
    pub slope_tol: f64,
    #[command(flatten)]
    pub seeded: Seeded,
    #[command(flatten)]
    pub out: ReportOut,
    #[arg(short = 'p', long = "poly", value_name = "COEFFS", allow_hyphen_values = true, default_value = DEFAULT_POLY)]
    pub poly: String,
}

fn lyubich(a: &LyubichArgs) -> CliResult<()> {
    let p = dynamical_polynomial(&a.poly)?;
    let seed = a.seeded.require_seed()?;
    let disc = Disc {
        center: parse_complex(&a.center)?,
        radius: a.radius,
    };
    let opts = LyubichOptions {
        n_max: a.nmax,
        branches: a.branches,
        boundary_samples: a.boundary_samples,
        ell: a.ell,
        rng_seed: seed,
        tasks: a.seeded.tasks(),
    };
    let r = parallel::lyubich_diameters(&p, disc, &opts)?;
    let per_n = r
        .levels
        .iter()
        .map(|l| {
            json!({
                "n": l.n,
                "value": l.mean_log_diameter,
                "stderr": l.stderr,
                "max_diameter": l.max_diameter,
                "fraction_exceeding": l.fraction_exceeding,
            })
        })
        .collect();
    let mut params = serde_json::Map::new();
    params.insert("polynomial".into(), json!(p.to_string()));
    params.insert("center".into(), cjson(disc.center));
    params.insert("radius".into(), json!(disc.radius));
    params.insert("nmax".into(), json!(a.nmax));
    params.insert("branches".into(), json!(a.branches));
    params.insert("seed".into(), json!(seed));
    params.insert("tasks".into(), json!(a.seeded.tasks));
    let pass = (r.fitted_slope - r.reference_slope).abs() <= a.slope_tol;
    let fitted = json!({
        "slope": r.fitted_slope,
        "intercept": r.fitted_intercept,
        "c": r.fitted_c,
        "reference_slope": r.reference_slope,
        "slope_tolerance": a.slope_tol,
        "pass": pass,
    });
    emit(&a.out, &report("lyubich_diameters", params, per_n, fitted))?;
    require(pass, || {
        format!(
            "fitted slope {:.4} is not within {} of {:.4}",
            r.fitted_slope, a.slope_tol, r.reference_slope
        )
    })
}
