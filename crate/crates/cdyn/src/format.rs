//! Text and file formats.
//!
//! * complex numbers: `RE`, `RE±IMi`, `IMi`, `i`; U+2212 is accepted as a minus sign
//! * polynomials: comma-separated coefficients in ascending order
//! * measures: CSV `re,im,weight`, the atom at infinity as `inf,inf,w`
//! * series: CSV `k,re,im`
//! * rasters: binary PGM (`P5`, maxval 255)

use std::io::{Read, Write};

use cdyn_core::measure::{Atom, EmpiricalMeasure};
use cdyn_core::{Complex, Polynomial, PowerSeries, SpherePoint};

use crate::error::{CliError, CliResult};

fn normalize(s: &str) -> String {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .collect()
}

fn parse_real(s: &str, whole: &str) -> CliResult<f64> {
    s.parse::<f64>()
        .map_err(|_| CliError::parse(format!("invalid number {whole:?}")))
}

pub fn parse_complex(text: &str) -> CliResult<Complex> {
    let s = normalize(text);
    if s.is_empty() {
        return Err(CliError::parse("empty complex number"));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex::new(parse_real(&s, text)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k], text)?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other, text)?,
    };
    Ok(Complex::new(re, im))
}

pub fn parse_complex_list(text: &str) -> CliResult<Vec<Complex>> {
    normalize(text).split(',').map(parse_complex).collect()
}

pub fn parse_list<T: std::str::FromStr>(text: &str) -> CliResult<Vec<T>> {
    normalize(text)
        .split(',')
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| CliError::parse(format!("invalid list entry {s:?} in {text:?}")))
        })
        .collect()
}

/// Ascending coefficients; the result must have degree at least 1.
pub fn parse_polynomial(text: &str) -> CliResult<Polynomial> {
    let p = Polynomial::new(parse_complex_list(text)?);
    if p.degree() == 0 {
        return Err(CliError::parse(format!("polynomial {text:?} is constant")));
    }
    Ok(p)
}

pub fn complex_text(z: Complex) -> String {
    // adding 0.0 turns -0 into 0
    let z = Complex::new(z.re + 0.0, z.im + 0.0);
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn write_measure_csv<W: Write>(out: W, mu: &EmpiricalMeasure) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re", "im", "weight"])?;
    for a in mu.atoms() {
        let (re, im) = match a.point {
            SpherePoint::Finite(z) => (z.re.to_string(), z.im.to_string()),
            SpherePoint::Infinity => ("inf".into(), "inf".into()),
        };
        w.write_record([re, im, a.weight.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_measure_csv<R: Read>(input: R) -> CliResult<EmpiricalMeasure> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()? != vec!["re", "im", "weight"] {
        return Err(CliError::parse("measure CSV header must be re,im,weight"));
    }
    let mut atoms = Vec::new();
    for row in r.records() {
        let row = row?;
        let field = |k: usize| parse_real(&row[k], &row[k]);
        let point = if &row[0] == "inf" && &row[1] == "inf" {
            SpherePoint::Infinity
        } else {
            SpherePoint::Finite(Complex::new(field(0)?, field(1)?))
        };
        atoms.push(Atom {
            point,
            weight: field(2)?,
        });
    }
    Ok(EmpiricalMeasure::new(atoms)?)
}

pub fn write_series_csv<W: Write>(out: W, s: &PowerSeries) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "re", "im"])?;
    for (k, c) in s.coeffs().iter().enumerate() {
        w.write_record([k.to_string(), c.re.to_string(), c.im.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_series_csv<R: Read>(input: R) -> CliResult<PowerSeries> {
    let mut r = csv::Reader::from_reader(input);
    let mut coeffs = Vec::new();
    for (expected, row) in r.records().enumerate() {
        let row = row?;
        let k: usize = row[0]
            .parse()
            .map_err(|_| CliError::parse(format!("invalid index {:?}", &row[0])))?;
        if k != expected {
            return Err(CliError::parse("series rows must list k = 0, 1, 2, ... in order"));
        }
        coeffs.push(Complex::new(parse_real(&row[1], &row[1])?, parse_real(&row[2], &row[2])?));
    }
    Ok(PowerSeries::new(coeffs)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl BoundingBox {
    pub fn square(r: f64) -> Self {
        Self {
            x_min: -r,
            x_max: r,
            y_min: -r,
            y_max: r,
        }
    }

    /// `xmin,xmax,ymin,ymax`.
    pub fn parse(text: &str) -> CliResult<Self> {
        let v: Vec<f64> = parse_list(text)?;
        match v[..] {
            [x_min, x_max, y_min, y_max] if x_min < x_max && y_min < y_max => Ok(Self {
                x_min,
                x_max,
                y_min,
                y_max,
            }),
            _ => Err(CliError::parse(format!("bounding box {text:?} must be xmin,xmax,ymin,ymax with min < max"))),
        }
    }
}

/// Hit counts on a `width × height` grid; row 0 is the top edge `y_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub bbox: BoundingBox,
    pub counts: Vec<u64>,
}

impl Raster {
    pub fn new(width: usize, height: usize, bbox: BoundingBox) -> CliResult<Self> {
        if width == 0 || height == 0 {
            return Err(CliError::parse("raster dimensions must be positive"));
        }
        Ok(Self {
            width,
            height,
            bbox,
            counts: vec![0; width * height],
        })
    }

    fn cell(&self, z: Complex) -> Option<usize> {
        let b = &self.bbox;
        if !(z.re >= b.x_min && z.re <= b.x_max && z.im >= b.y_min && z.im <= b.y_max) {
            return None;
        }
        let col = ((z.re - b.x_min) / (b.x_max - b.x_min) * self.width as f64) as usize;
        let row = ((b.y_max - z.im) / (b.y_max - b.y_min) * self.height as f64) as usize;
        Some(row.min(self.height - 1) * self.width + col.min(self.width - 1))
    }

    pub fn add(&mut self, points: impl IntoIterator<Item = Complex>) {
        for z in points {
            if let Some(k) = self.cell(z) {
                self.counts[k] += 1;
            }
        }
    }

    /// Grey levels scaled linearly so the busiest pixel is 255.
    pub fn levels(&self) -> Vec<u8> {
        let max = self.counts.iter().copied().max().unwrap_or(0);
        self.counts
            .iter()
            .map(|&c| if max == 0 { 0 } else { ((c * 255 + max / 2) / max) as u8 })
            .collect()
    }

    pub fn write_pgm<W: Write>(&self, mut out: W) -> CliResult<()> {
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(&self.levels())?;
        out.flush()?;
        Ok(())
    }
}
