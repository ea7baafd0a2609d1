use serde_json::{json, Value};

use cdyn_core::orbits::{cycles_of_period, nonrepelling_census, Classification, PeriodicOrbit};

use super::{cjson, dynamical_polynomial, emit, require, ReportOut};
use crate::error::{CliError, CliResult};
use crate::format::complex_text;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Polynomial coefficients in ascending order.
    #[arg(short = 'p', long = "poly", value_name = "COEFFS", allow_hyphen_values = true)]
    pub poly: String,
    /// List every cycle whose exact period divides this; the census of
    /// non-repelling cycles covers all periods up to it.
    #[arg(short = 'm', long, default_value_t = 1)]
    pub period: usize,
    #[command(flatten)]
    pub out: ReportOut,
}

fn class_label(c: Classification) -> String {
    match c {
        Classification::RationallyNeutral(q) => format!("{}({q})", c.name()),
        _ => c.name().to_string(),
    }
}

fn orbit_json(o: &PeriodicOrbit) -> Value {
    let q = match o.class {
        Classification::RationallyNeutral(q) => Some(q),
        _ => None,
    };
    json!({
        "period": o.period,
        "class": o.class.name(),
        "root_of_unity_order": q,
        "multiplier": cjson(o.multiplier),
        "modulus": o.multiplier.norm(),
        "points": o.points.iter().map(|&z| cjson(z)).collect::<Vec<_>>(),
    })
}

pub fn run(a: &Args) -> CliResult<()> {
    let p = dynamical_polynomial(&a.poly)?;
    if a.period == 0 {
        return Err(CliError::parse("--period must be at least 1"));
    }
    let mut orbits = Vec::new();
    for k in (1..=a.period).filter(|k| a.period % k == 0) {
        orbits.extend(cycles_of_period(&p, k)?);
    }
    let census = nonrepelling_census(&p, a.period)?;

    eprintln!("{:<7} {:<28} {:<12} {:<22} points", "period", "multiplier", "|λ|", "class");
    for o in &orbits {
        let points: Vec<String> = o.points.iter().map(|&z| complex_text(z)).collect();
        eprintln!(
            "{:<7} {:<28} {:<12.6} {:<22} {}",
            o.period,
            complex_text(o.multiplier),
            o.multiplier.norm(),
            class_label(o.class),
            points.join(" ")
        );
    }
    eprintln!("∞       superattracting");
    eprintln!(
        "non-repelling cycles of period <= {}: {} (bound 3d-1 = {})",
        a.period, census.count, census.bound
    );

    let report = json!({
        "command": "classify",
        "polynomial": p.to_string(),
        "degree": p.degree(),
        "period": a.period,
        "orbits": orbits.iter().map(orbit_json).collect::<Vec<_>>(),
        "infinity": "superattracting",
        "census": {
            "max_period": a.period,
            "count": census.count,
            "bound": census.bound,
            "pass": census.within_bound(),
        },
    });
    emit(&a.out, &report)?;
    require(census.within_bound(), || {
        format!("{} non-repelling cycles exceed the bound {}", census.count, census.bound)
    })
}
