use rand::Rng;
use serde_json::{json, Value};

use cdyn_core::discmaps::{
    area_theorem_sum, denjoy_wolff, koebe_distortion_check, koebe_quarter_check, schwarz_pick, DiscMap,
    KoebeFunction, LaurentTail, Univalent, WolffKind,
};
use cdyn_core::orbits::rotation;
use cdyn_core::sampling::task_rng;
use cdyn_core::{Complex, PowerSeries};

use super::{cjson, emit, require, ReportOut, Seeded};
use crate::error::{CliError, CliResult};
use crate::format::{parse_complex, parse_complex_list, parse_polynomial};

#[derive(Debug, clap::Subcommand)]
pub enum Cmd {
    /// Limit of the iterates of a self-map of the disc.
    DenjoyWolff(WolffArgs),
    /// Largest contraction ratio of the Poincaré metric over point pairs.
    SchwarzPick(PickArgs),
    /// Area-theorem sum Σ n|b_n|² for g(z) = 1/z + Σ b_n zⁿ.
    Area(AreaArgs),
    /// Bound |a₂| ≤ 2 and covering of the 1/4-disc for a normalized univalent function.
    Koebe(KoebeArgs),
    /// Ratio diam f(|z| ≤ s) / √Area f(Δ).
    Distortion(DistortionArgs),
}

pub fn run(cmd: &Cmd) -> CliResult<()> {
    match cmd {
        Cmd::DenjoyWolff(a) => wolff(a),
        Cmd::SchwarzPick(a) => pick(a),
        Cmd::Area(a) => area(a),
        Cmd::Koebe(a) => koebe(a),
        Cmd::Distortion(a) => distortion(a),
    }
}

/// Exactly one of the map flags must be given.
#[derive(Debug, Clone, clap::Args)]
pub struct MapArgs {
    /// Möbius automorphism z ↦ (z + a)/(1 + ā z).
    #[arg(long, allow_hyphen_values = true, value_name = "A")]
    pub mobius: Option<String>,
    /// Finite Blaschke product with these zeros.
    #[arg(long, allow_hyphen_values = true, value_name = "A1,A2,...")]
    pub blaschke: Option<String>,
    /// Rotation e^{2πiθ} in front of the Blaschke product.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub rotation: f64,
    /// Polynomial self-map, ascending coefficients.
    #[arg(short = 'p', long = "poly", allow_hyphen_values = true, value_name = "COEFFS")]
    pub poly: Option<String>,
    /// Power-series self-map, ascending Taylor coefficients.
    #[arg(long, allow_hyphen_values = true, value_name = "COEFFS")]
    pub series: Option<String>,
}

impl MapArgs {
    fn build(&self) -> CliResult<(DiscMap, String)> {
        let given = [&self.mobius, &self.blaschke, &self.poly, &self.series]
            .iter()
            .filter(|o| o.is_some())
            .count();
        if given != 1 {
            return Err(CliError::parse(
                "give exactly one of --mobius, --blaschke, -p or --series",
            ));
        }
        if let Some(a) = &self.mobius {
            return Ok((DiscMap::mobius(parse_complex(a)?)?, format!("mobius({a})")));
        }
        if let Some(z) = &self.blaschke {
            let zeros = parse_complex_list(z)?;
            let desc = format!("blaschke(theta={}; {z})", self.rotation);
            return Ok((DiscMap::blaschke(rotation(self.rotation), zeros)?, desc));
        }
        if let Some(p) = &self.poly {
            return Ok((DiscMap::polynomial(parse_polynomial(p)?)?, format!("poly({p})")));
        }
        let s = self.series.as_ref().expect("one map flag");
        let series = PowerSeries::new(parse_complex_list(s)?)?;
        Ok((DiscMap::series(series)?, format!("series({s})")))
    }
}

fn check(name: &str, inputs: Value, statistic: f64, threshold: f64, pass: bool, details: Value) -> Value {
    json!({
        "check": name,
        "inputs": inputs,
        "statistic": statistic,
        "threshold": threshold,
        "pass": pass,
        "details": details,
    })
}

#[derive(Debug, clap::Args)]
pub struct WolffArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub z0: String,
    /// Stop once a step is shorter than this.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub nmax: usize,
    #[command(flatten)]
    pub out: ReportOut,
}

fn wolff(a: &WolffArgs) -> CliResult<()> {
    let (f, desc) = a.map.build()?;
    let z0 = parse_complex(&a.z0)?;
    let r = denjoy_wolff(&f, z0, a.tol, a.nmax)?;
    let pass = !matches!(r.kind, WolffKind::Undecided(_));
    let report = check(
        "denjoy-wolff",
        json!({"map": desc, "z0": cjson(z0), "tol": a.tol, "n_max": a.nmax}),
        r.iterations as f64,
        a.nmax as f64,
        pass,
        json!({
            "alpha": cjson(r.alpha),
            "kind": r.kind.name(),
            "iterations": r.iterations,
            "derivative_modulus": r.derivative_modulus,
        }),
    );
    emit(&a.out, &report)?;
    require(pass, || format!("iteration did not settle within {} steps", a.nmax))
}

#[derive(Debug, clap::Args)]
pub struct PickArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Number of random point pairs in |z| < 0.99 (needs --seed).
    #[arg(long, default_value_t = 1000)]
    pub pairs: usize,
    /// Explicit first point; use with -w instead of random pairs.
    #[arg(short = 'z', long, allow_hyphen_values = true, requires = "w")]
    pub z: Option<String>,
    #[arg(short = 'w', long, allow_hyphen_values = true, requires = "z")]
    pub w: Option<String>,
    #[command(flatten)]
    pub seeded: Seeded,
    #[command(flatten)]
    pub out: ReportOut,
}

fn pick(a: &PickArgs) -> CliResult<()> {
    let (f, desc) = a.map.build()?;
    let pairs: Vec<(Complex, Complex)> = match (&a.z, &a.w) {
        (Some(z), Some(w)) => vec![(parse_complex(z)?, parse_complex(w)?)],
        _ => {
            let mut rng = task_rng(a.seeded.require_seed()?, 0);
            let mut point = || Complex::from_polar(0.99 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
            (0..a.pairs).map(|_| (point(), point())).collect()
        }
    };
    let mut worst = 0.0f64;
    let mut strict = true;
    let mut automorphism = false;
    for &(z, w) in &pairs {
        if z == w {
            continue;
        }
        let r = schwarz_pick(&f, z, w)?;
        worst = worst.max(r.ratio);
        strict &= r.strict;
        automorphism = r.automorphism;
    }
    let threshold = 1.0 + 1e-10;
    let pass = worst <= threshold;
    let report = check(
        "schwarz-pick",
        json!({"map": desc, "pairs": pairs.len(), "seed": a.seeded.seed}),
        worst,
        threshold,
        pass,
        json!({"automorphism": automorphism, "strict": strict}),
    );
    emit(&a.out, &report)?;
    require(pass, || format!("Poincaré ratio {worst} exceeds 1"))
}

#[derive(Debug, clap::Args)]
pub struct AreaArgs {
    /// Coefficients b0,b1,... of the tail.
    #[arg(long, allow_hyphen_values = true, value_name = "B0,B1,...")]
    pub tail: String,
    #[command(flatten)]
    pub out: ReportOut,
}

fn area(a: &AreaArgs) -> CliResult<()> {
    let g = LaurentTail::new(parse_complex_list(&a.tail)?)?;
    let r = area_theorem_sum(&g);
    let report = check(
        "area-theorem",
        json!({"tail": a.tail}),
        r.sum,
        1.0 + 1e-9,
        r.pass,
        json!({"partial_sums": r.partial_sums, "univalent_on_grid": r.univalent_on_grid}),
    );
    emit(&a.out, &report)?;
    require(r.pass, || format!("area sum {} exceeds 1", r.sum))
}

enum Source {
    Koebe,
    Series(PowerSeries),
}

impl Univalent for Source {
    fn eval(&self, z: Complex) -> Complex {
        match self {
            Source::Koebe => KoebeFunction.eval(z),
            Source::Series(s) => Univalent::eval(s, z),
        }
    }

    fn derivative(&self, z: Complex) -> Complex {
        match self {
            Source::Koebe => KoebeFunction.derivative(z),
            Source::Series(s) => s.derivative(z),
        }
    }

    fn taylor(&self, k: usize) -> Complex {
        match self {
            Source::Koebe => KoebeFunction.taylor(k),
            Source::Series(s) => s.taylor(k),
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct UnivalentArgs {
    /// `koebe-function` (evaluated in closed form) or Taylor coefficients a0,a1,...
    #[arg(long, default_value = "koebe-function", allow_hyphen_values = true)]
    pub series: String,
    /// Truncation order of a coefficient series; for the Koebe function, the
    /// number of Taylor coefficients reported.
    #[arg(short = 'N', long)]
    pub order: Option<usize>,
}

impl UnivalentArgs {
    fn source(&self) -> CliResult<Source> {
        if self.series == "koebe-function" {
            return Ok(Source::Koebe);
        }
        let s = PowerSeries::new(parse_complex_list(&self.series)?)?;
        Ok(Source::Series(match self.order {
            Some(n) => s.truncate(n),
            None => s,
        }))
    }
}

#[derive(Debug, clap::Args)]
pub struct KoebeArgs {
    #[command(flatten)]
    pub f: UnivalentArgs,
    /// Side of the square test grid over the 1/4-disc.
    #[arg(long, default_value_t = 41)]
    pub resolution: usize,
    #[command(flatten)]
    pub out: ReportOut,
}

fn koebe(a: &KoebeArgs) -> CliResult<()> {
    let f = a.f.source()?;
    let r = koebe_quarter_check(&f, a.resolution)?;
    let shown = a.f.order.unwrap_or(30);
    let report = check(
        "koebe-quarter",
        json!({"series": a.f.series, "order": a.f.order, "resolution": a.resolution}),
        r.a2.norm(),
        2.0,
        r.pass(),
        json!({
            "a2": cjson(r.a2),
            "a2_pass": r.a2_pass,
            "grid_points": r.grid_points,
            "uncovered": r.uncovered,
            "coverage_pass": r.coverage_pass,
            "univalent_on_grid": r.univalent_on_grid,
            "coefficients": (0..=shown).map(|k| cjson(f.taylor(k))).collect::<Vec<_>>(),
        }),
    );
    emit(&a.out, &report)?;
    require(r.pass(), || "Koebe bound or quarter-disc covering failed".to_string())
}

#[derive(Debug, clap::Args)]
pub struct DistortionArgs {
    #[command(flatten)]
    pub f: UnivalentArgs,
    /// Radius s in (0, 1).
    #[arg(short = 's', long, default_value_t = 0.5)]
    pub s: f64,
    #[command(flatten)]
    pub out: ReportOut,
}

/// `2s / ((1 − s)² √π)`: growth bound on the diameter over the area bound `π`.
fn distortion_bound(s: f64) -> f64 {
    2.0 * s / ((1.0 - s).powi(2) * std::f64::consts::PI.sqrt())
}

fn distortion(a: &DistortionArgs) -> CliResult<()> {
    let f = a.f.source()?;
    let r = koebe_distortion_check(&f, a.s)?;
    let threshold = distortion_bound(a.s);
    let pass = r.ratio <= threshold;
    let report = check(
        "koebe-distortion",
        json!({"series": a.f.series, "order": a.f.order, "s": a.s}),
        r.ratio,
        threshold,
        pass,
        json!({"diameter": r.diameter, "area": r.area}),
    );
    emit(&a.out, &report)?;
    require(pass, || format!("distortion ratio {} exceeds {threshold}", r.ratio))
}
