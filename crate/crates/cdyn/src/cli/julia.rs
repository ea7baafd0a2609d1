use std::io::Write;
use std::path::PathBuf;

use serde_json::json;

use cdyn_core::orbits::{default_basepoint, CloudOptions, DEFAULT_BURN_IN};
use cdyn_core::measure::DEFAULT_EXACT_BUDGET;

use super::{cjson, create, dynamical_polynomial, emit, ReportOut, Seeded};
use crate::error::CliResult;
use crate::format::{parse_complex, write_measure_csv, BoundingBox, Raster};
use crate::parallel;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Polynomial coefficients in ascending order.
    #[arg(short = 'p', long = "poly", value_name = "COEFFS", allow_hyphen_values = true)]
    pub poly: String,
    /// Backward depth n.
    #[arg(short = 'n', long = "depth", default_value_t = 12)]
    pub depth: usize,
    /// Exact preimage tree when d^n is at most this; otherwise the number of
    /// random backward walks.
    #[arg(long, visible_alias = "samples", default_value_t = DEFAULT_EXACT_BUDGET)]
    pub budget: usize,
    /// Minimum length of a random backward walk.
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    pub burn_in: usize,
    /// Start point; defaults to the most repelling fixed point.
    #[arg(long, allow_hyphen_values = true)]
    pub basepoint: Option<String>,
    /// Write the point-cloud CSV here; without it the CSV goes to standard
    /// output and the report is written only with --report.
    #[arg(short = 'o', long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Also write a PGM hit-count raster.
    #[arg(long, value_name = "PATH")]
    pub pgm: Option<PathBuf>,
    /// Raster window `xmin,xmax,ymin,ymax`; defaults to the escape-radius square.
    #[arg(long, allow_hyphen_values = true)]
    pub bbox: Option<String>,
    #[arg(long, default_value_t = 512)]
    pub width: usize,
    #[arg(long, default_value_t = 512)]
    pub height: usize,
    #[command(flatten)]
    pub seeded: Seeded,
    #[command(flatten)]
    pub report: ReportOut,
}

pub fn run(a: &Args) -> CliResult<()> {
    let p = dynamical_polynomial(&a.poly)?;
    let z = match &a.basepoint {
        Some(text) => parse_complex(text)?,
        None => default_basepoint(&p)?,
    };
    let opts = CloudOptions {
        budget: a.budget,
        rng_seed: a.seeded.seed,
        burn_in: a.burn_in,
        tasks: a.seeded.tasks(),
    };
    let exact = opts.exact_for(p.degree(), a.depth);
    if !exact {
        a.seeded.require_seed()?;
    }
    let bbox = match &a.bbox {
        Some(text) => Some(BoundingBox::parse(text)?),
        None => None,
    };
    let cloud = parallel::julia_cloud(&p, z, a.depth, &opts)?;

    match &a.out {
        Some(path) => {
            let mut f = create(path)?;
            write_measure_csv(&mut f, &cloud)?;
            f.flush()?;
        }
        None => write_measure_csv(std::io::stdout().lock(), &cloud)?,
    }
    let bbox = bbox.unwrap_or_else(|| BoundingBox::square(p.escape_radius()));
    if let Some(path) = &a.pgm {
        let mut raster = Raster::new(a.width, a.height, bbox)?;
        raster.add(cloud.finite_points());
        raster.write_pgm(create(path)?)?;
    }
    if a.out.is_some() || a.report.report.is_some() {
        let report = json!({
            "command": "julia",
            "polynomial": p.to_string(),
            "basepoint": cjson(z),
            "depth": a.depth,
            "mode": if exact { "exact" } else { "sampled" },
            "points": cloud.len(),
            "mass": cloud.mass(),
            "seed": if exact { None } else { a.seeded.seed },
            "tasks": a.seeded.tasks,
            "walk_length": if exact { a.depth } else { a.depth.max(a.burn_in) },
            "raster": a.pgm.as_ref().map(|_| json!({
                "width": a.width,
                "height": a.height,
                "bbox": [bbox.x_min, bbox.x_max, bbox.y_min, bbox.y_max],
            })),
        });
        emit(&a.report, &report)?;
    }
    Ok(())
}
