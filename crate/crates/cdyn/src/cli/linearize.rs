use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Map, Value};

use cdyn_core::linearize::{
    boettcher_series, cremer_theta, diophantine_check, golden_mean, green_function, kam_schedule, koenigs,
    parabolic_petal, siegel_radius_bound, siegel_series, DiophantineParams, Linearization, Regime,
    DEFAULT_PETAL_MAX_STEPS, DEFAULT_PETAL_SAMPLES,
};
use cdyn_core::orbits::{periodic_points, rotation, DEFAULT_NEUTRAL_TOL};
use cdyn_core::poly::DEFAULT_DEGREE_CAP;
use cdyn_core::{Complex, Polynomial};

use super::{cjson, create, emit, require, ReportOut};
use crate::error::{CliError, CliResult};
use crate::format::{parse_complex, parse_list, parse_polynomial, write_series_csv};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Polynomial coefficients in ascending order; with --siegel, `quad` means λz + z².
    #[arg(short = 'p', long = "poly", value_name = "COEFFS", allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Fixed point to linearize at; defaults to the one with the smallest |λ|.
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<String>,
    /// Truncation order N (default 30, or 40 in Siegel mode).
    #[arg(short = 'N', long)]
    pub order: Option<usize>,
    /// Rotation number θ of a Siegel fixed point at 0, or `golden`.
    #[arg(long, value_name = "THETA")]
    pub siegel: Option<String>,
    /// Diophantine check `c,mu,nmax` of the rotation number from --siegel.
    #[arg(long, value_name = "C,MU,NMAX")]
    pub diophantine: Option<String>,
    /// Cremer certificate for θ = Σ 2^{-q_k}.
    #[arg(long, value_name = "Q1,Q2,...")]
    pub cremer: Option<String>,
    /// Degrees d for the growth condition of --cremer.
    #[arg(long, value_name = "D1,D2,...", default_value = "2")]
    pub cremer_degrees: String,
    /// KAM step schedule `r0,eta0,delta0,c0,mu,steps`.
    #[arg(long, value_name = "R0,ETA0,DELTA0,C0,MU,STEPS")]
    pub kam: Option<String>,
    /// Attracting petal of order k for P(z) = z + a z^{k+1} + ... at 0.
    #[arg(long, value_name = "K")]
    pub petal: Option<usize>,
    /// Petal size ε.
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Evaluate the Green function at this point and check G(P(z)) = d G(z).
    #[arg(long, allow_hyphen_values = true, value_name = "Z")]
    pub green: Option<String>,
    /// Write the series coefficients as CSV `k,re,im`.
    #[arg(short = 'o', long = "out", value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub out: ReportOut,
}

fn parse_theta(text: &str) -> CliResult<f64> {
    if text == "golden" {
        return Ok(golden_mean());
    }
    text.parse()
        .map_err(|_| CliError::parse(format!("invalid rotation number {text:?}")))
}

fn most_attracting_fixed_point(p: &Polynomial) -> CliResult<Complex> {
    let fixed = periodic_points(p, 1, DEFAULT_DEGREE_CAP)?;
    Ok(fixed
        .roots
        .iter()
        .copied()
        .min_by(|a, b| {
            let ma = p.eval_with_derivative(*a).1.norm();
            let mb = p.eval_with_derivative(*b).1.norm();
            ma.total_cmp(&mb)
        })
        .expect("degree >= 1 has a fixed point"))
}

fn series(a: &Args, theta: Option<f64>) -> CliResult<Linearization> {
    if let Some(theta) = theta {
        let lambda = rotation(theta);
        let p = match a.poly.as_deref() {
            None | Some("quad") => Polynomial::new(vec![Complex::new(0.0, 0.0), lambda, Complex::new(1.0, 0.0)]),
            Some(text) => {
                let p = parse_polynomial(text)?;
                match &a.z0 {
                    Some(z) => p.local_at(parse_complex(z)?),
                    None => p,
                }
            }
        };
        return Ok(siegel_series(lambda, &p, a.order.unwrap_or(40))?);
    }
    let text = a.poly.as_deref().ok_or_else(|| CliError::parse("linearize needs -p or --siegel"))?;
    let p = parse_polynomial(text)?;
    if p.degree() < 2 {
        return Err(CliError::parse("polynomial must have degree at least 2"));
    }
    let z0 = match &a.z0 {
        Some(z) => parse_complex(z)?,
        None => most_attracting_fixed_point(&p)?,
    };
    let order = a.order.unwrap_or(30);
    let lambda = p.eval_with_derivative(z0).1;
    let m = lambda.norm();
    Ok(if m < 1e-12 {
        boettcher_series(&p, z0, order)?
    } else if (m - 1.0).abs() <= DEFAULT_NEUTRAL_TOL {
        siegel_series(lambda, &p.local_at(z0), order)?
    } else {
        koenigs(&p, z0, order)?
    })
}

fn series_json(l: &Linearization) -> Value {
    let mut m = Map::new();
    m.insert("regime".into(), json!(l.regime.name()));
    m.insert("center".into(), cjson(l.center));
    m.insert("multiplier".into(), cjson(l.multiplier));
    m.insert("order".into(), json!(l.order()));
    m.insert("local_degree".into(), json!(l.local_degree));
    m.insert("gauge".into(), cjson(l.gauge));
    m.insert("radius_hint".into(), json!(l.radius_hint()));
    m.insert("residual".into(), json!(l.residual));
    m.insert("residual_radius".into(), json!(l.residual_radius));
    m.insert("denominators_min".into(), json!(l.denominators_min()));
    m.insert("max_inverse_denominator".into(), json!(l.max_inverse_denominator()));
    m.insert(
        "coefficients".into(),
        json!(l.series.coeffs().iter().map(|&c| cjson(c)).collect::<Vec<_>>()),
    );
    if l.regime == Regime::Siegel {
        m.insert(
            "small_denominators".into(),
            json!(l
                .denominators
                .iter()
                .map(|&(k, d)| json!({"k": k, "modulus": d}))
                .collect::<Vec<_>>()),
        );
        m.insert(
            "radius_lower_bound".into(),
            json!(siegel_radius_bound(l.multiplier, 2, l.order() as u32)),
        );
    }
    Value::Object(m)
}

pub fn run(a: &Args) -> CliResult<()> {
    let theta = a.siegel.as_deref().map(parse_theta).transpose()?;
    let wants_series = theta.is_some() || a.z0.is_some() || (a.poly.is_some() && a.petal.is_none() && a.green.is_none());
    if !wants_series && a.diophantine.is_none() && a.cremer.is_none() && a.kam.is_none() && a.petal.is_none() && a.green.is_none() {
        return Err(CliError::parse("nothing to do: give -p, --siegel, --diophantine, --cremer, --kam, --petal or --green"));
    }
    let mut report = Map::new();
    report.insert("command".into(), json!("linearize"));
    let mut failures = Vec::new();

    if wants_series {
        let l = series(a, theta)?;
        if let Some(path) = &a.csv {
            let mut f = create(path)?;
            write_series_csv(&mut f, &l.series)?;
            f.flush()?;
        }
        report.insert("theta".into(), json!(theta));
        report.insert("series".into(), series_json(&l));
    }

    if let Some(spec) = &a.diophantine {
        let theta = theta.ok_or_else(|| CliError::parse("--diophantine needs the rotation number from --siegel"))?;
        let v: Vec<f64> = parse_list(spec)?;
        let [c, mu, n_max] = v[..] else {
            return Err(CliError::parse("--diophantine takes c,mu,nmax"));
        };
        if !(n_max >= 1.0 && n_max.fract() == 0.0) {
            return Err(CliError::parse("--diophantine nmax must be a positive integer"));
        }
        let r = diophantine_check(theta, DiophantineParams { c, mu, n_max: n_max as u64 });
        if !r.pass {
            failures.push("diophantine".to_string());
        }
        report.insert(
            "diophantine".into(),
            json!({"theta": theta, "c": c, "mu": mu, "n_max": n_max as u64,
                   "margin": r.margin, "argmin": r.argmin, "pass": r.pass}),
        );
    }

    if let Some(spec) = &a.cremer {
        let q: Vec<u32> = parse_list(spec)?;
        let degrees: Vec<u32> = parse_list(&a.cremer_degrees)?;
        let r = cremer_theta(&q, &degrees)?;
        if !r.all_hold() {
            failures.push("cremer".to_string());
        }
        let terms: Vec<Value> = r
            .terms
            .iter()
            .map(|t| {
                json!({
                    "ell": t.ell,
                    "q": t.q,
                    "power": 2f64.powi(t.q as i32),
                    "distance": t.distance,
                    "bound": t.bound,
                    "pass": t.holds,
                    "growth": t.growth.iter().map(|g| json!({
                        "d": g.d,
                        "log_lhs": g.log_lhs,
                        "log_neg_log_rhs": g.log_neg_log_rhs,
                        "holds": g.holds,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        report.insert(
            "cremer".into(),
            json!({"q": q, "theta": r.theta, "terms": terms, "pass": r.all_hold()}),
        );
    }

    if let Some(spec) = &a.kam {
        let v: Vec<f64> = parse_list(spec)?;
        let [r0, eta0, delta0, c0, mu, steps] = v[..] else {
            return Err(CliError::parse("--kam takes r0,eta0,delta0,c0,mu,steps"));
        };
        if !(steps >= 0.0 && steps.fract() == 0.0) {
            return Err(CliError::parse("--kam steps must be a non-negative integer"));
        }
        let s = kam_schedule(r0, eta0, delta0, c0, mu, steps as usize)?;
        if !s.all_valid() {
            failures.push("kam".to_string());
        }
        report.insert(
            "kam".into(),
            json!({"r": s.r, "eta": s.eta, "delta": s.delta, "valid": s.valid,
                   "radius_ratio": s.radius_ratio(), "eta_sum": s.eta_sum(), "pass": s.all_valid()}),
        );
    }

    if let Some(k) = a.petal {
        let text = a.poly.as_deref().ok_or_else(|| CliError::parse("--petal needs -p"))?;
        let p = parse_polynomial(text)?;
        let r = parabolic_petal(&p, k, a.epsilon, DEFAULT_PETAL_SAMPLES, DEFAULT_PETAL_MAX_STEPS)?;
        let pass = r.boundary_maps_inside && r.steps_to_target.is_some();
        if !pass {
            failures.push("petal".to_string());
        }
        report.insert(
            "petal".into(),
            json!({
                "k": r.k,
                "leading": cjson(r.leading),
                "normalizer": cjson(r.normalizer),
                "epsilon": r.epsilon,
                "samples": r.samples,
                "epsilon_image": r.epsilon_image,
                "boundary_maps_inside": r.boundary_maps_inside,
                "target": r.target,
                "steps_to_target": r.steps_to_target,
                "fatou_errors": r.fatou_errors.iter().map(|&(w, e)| json!({"w": w, "error": e})).collect::<Vec<_>>(),
                "sector_coefficient": cjson(r.sector_coefficient),
                "pass": pass,
            }),
        );
    }

    if let Some(z) = &a.green {
        let text = a.poly.as_deref().ok_or_else(|| CliError::parse("--green needs -p"))?;
        let p = parse_polynomial(text)?;
        let z = parse_complex(z)?;
        let g = green_function(&p, z, 10_000)?;
        let g1 = green_function(&p, p.eval(z), 10_000)?;
        let residual = (g1.value - p.degree() as f64 * g.value).abs();
        let pass = residual < 1e-8;
        if !pass {
            failures.push("green".to_string());
        }
        report.insert(
            "green".into(),
            json!({"z": cjson(z), "value": g.value, "escaped": g.escaped, "iterations": g.iterations,
                   "value_at_image": g1.value, "residual": residual, "pass": pass}),
        );
    }

    emit(&a.out, &Value::Object(report))?;
    require(failures.is_empty(), || format!("failed checks: {}", failures.join(", ")))
}
