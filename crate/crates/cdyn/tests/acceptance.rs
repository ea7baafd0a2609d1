//! Acceptance criteria 1 to 14.
//!
//! Every criterion prints one `criterion N: PASS|FAIL` line to stderr
//! (uncaptured, so it shows in plain `cargo test` output) and then asserts.

use std::io::Write;
use std::process::Command;
use std::time::Instant;

use cdyn_core::discmaps::{
    area_theorem_sum, denjoy_wolff, koebe_quarter_check, schwarz_pick, DiscMap, KoebeFunction, LaurentTail,
    WolffKind,
};
use cdyn_core::linearize::{
    cremer_theta, golden_mean, green_function, koenigs, parabolic_petal, siegel_series, DEFAULT_PETAL_MAX_STEPS,
};
use cdyn_core::measure::{
    atom_set_mismatch, cesaro_mass_gaps, duality_residual, integrate, mixing_correlation, mu_nx, named, pullback,
    weak_gap, Atom, Disc, EmpiricalMeasure, LyubichOptions, SamplingOptions, TestFunction,
};
use cdyn_core::orbits::{default_basepoint, nonrepelling_census, rotation};
use cdyn_core::sampling::task_rng;
use cdyn_core::{Complex, Polynomial, PowerSeries, SpherePoint};
use rand::Rng;

fn verdict(n: u32, pass: bool, detail: String) {
    let line = format!("criterion {n:>2}: {} {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "criterion {n} failed: {detail}");
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn family() -> [(&'static str, Polynomial); 3] {
    [
        ("z^2", Polynomial::quadratic(c(0.0, 0.0))),
        ("z^2-1", Polynomial::quadratic(c(-1.0, 0.0))),
        ("z^2+i", Polynomial::quadratic(c(0.0, 1.0))),
    ]
}

fn z_squared() -> Polynomial {
    Polynomial::from_real(&[0.0, 0.0, 1.0])
}

fn random_disc_point<R: Rng>(rng: &mut R, radius: f64) -> Complex {
    Complex::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

#[test]
fn criterion_01_equidistribution() {
    let start = Instant::now();
    let r = weak_gap(&z_squared(), c(2.0, 0.0), c(3.0, 0.0), 12, &TestFunction::panel(), &SamplingOptions::default())
        .unwrap();
    let secs = start.elapsed().as_secs_f64();
    verdict(
        1,
        r.exact && r.gap < 0.02 && secs < 10.0,
        format!("exact={} panel gap {:.3e} < 0.02 in {secs:.2}s", r.exact, r.gap),
    );
}

#[test]
fn criterion_02_unit_circle_measure() {
    let p = z_squared();
    let x = SpherePoint::Finite(default_basepoint(&p).unwrap());
    let mu = mu_nx(&p, x, 12, &SamplingOptions::default()).unwrap();
    let re = integrate(&mu, &named("re").unwrap()).unwrap().norm();
    let abs2 = (integrate(&mu, &named("abs2").unwrap()).unwrap().re - 1.0).abs();
    verdict(
        2,
        re < 1e-9 && abs2 < 1e-6,
        format!("|∫Re z| = {re:.2e} < 1e-9, |∫|z|² − 1| = {abs2:.2e} < 1e-6"),
    );
}

#[test]
fn criterion_03_pullback_identity() {
    let opts = SamplingOptions::default();
    let mut worst = 0.0f64;
    for (_, p) in family() {
        let x = SpherePoint::Finite(default_basepoint(&p).unwrap());
        for n in 0..=8 {
            let lhs = pullback(&p, &mu_nx(&p, x, n, &opts).unwrap()).unwrap();
            let rhs = mu_nx(&p, x, n + 1, &opts).unwrap().scaled(2.0);
            worst = worst.max(atom_set_mismatch(&lhs, &rhs, 1e-8));
        }
    }
    verdict(3, worst < 1e-8, format!("max atom mismatch {worst:.2e} over n ≤ 8, c ∈ {{0, −1, i}}"));
}

#[test]
fn criterion_04_cesaro_mass_bound() {
    let mut worst = f64::NEG_INFINITY;
    for (_, p) in family() {
        let x = SpherePoint::Finite(default_basepoint(&p).unwrap());
        for g in cesaro_mass_gaps(&p, x, 10).unwrap() {
            worst = worst.max(g.tv_consecutive - g.bound);
        }
    }
    verdict(4, worst <= 1e-9, format!("max TV − 2/(n+1) = {worst:.3e} for n ≤ 10"));
}

#[test]
fn criterion_05_duality() {
    let mut rng = task_rng(5, 0);
    let panel = TestFunction::panel();
    let mut worst = 0.0f64;
    for case in 0..100 {
        let d = rng.gen_range(2..=3);
        let mut coeffs: Vec<Complex> = (0..d).map(|_| random_disc_point(&mut rng, 1.0)).collect();
        coeffs.push(random_disc_point(&mut rng, 0.5) + 1.0);
        let p = Polynomial::new(coeffs);
        let mut atoms: Vec<Atom> = (0..rng.gen_range(1..=8))
            .map(|_| Atom {
                point: SpherePoint::Finite(random_disc_point(&mut rng, 3.0)),
                weight: rng.gen_range(0.1..1.0),
            })
            .collect();
        if rng.gen_bool(0.2) {
            atoms.push(Atom {
                point: SpherePoint::Infinity,
                weight: rng.gen_range(0.1..1.0),
            });
        }
        let nu = EmpiricalMeasure::new(atoms).unwrap();
        worst = worst.max(duality_residual(&p, &panel[case % panel.len()], &nu).unwrap());
    }
    verdict(5, worst < 1e-8, format!("max residual {worst:.2e} < 1e-8 over 100 cases"));
}

#[test]
fn criterion_06_mixing() {
    let p = z_squared();
    let x = SpherePoint::Finite(default_basepoint(&p).unwrap());
    let mu = mu_nx(&p, x, 12, &SamplingOptions::default()).unwrap();
    let re = named("re").unwrap();
    let worst = (1..=6)
        .map(|n| mixing_correlation(&p, &re, &re, n, &mu).unwrap().norm())
        .fold(0.0, f64::max);
    verdict(6, worst < 0.02, format!("max |C_n| = {worst:.2e} < 0.02 for n = 1..6"));
}

#[test]
fn criterion_07_lyubich_scaling() {
    let start = Instant::now();
    let opts = LyubichOptions {
        n_max: 12,
        branches: 2000,
        rng_seed: 1,
        ..LyubichOptions::default()
    };
    let disc = Disc {
        center: c(3.0, 0.0),
        radius: 0.05,
    };
    let mut pass = true;
    let mut slopes = Vec::new();
    for (name, p) in [("z^2", z_squared()), ("z^2-1", Polynomial::quadratic(c(-1.0, 0.0)))] {
        let r = cdyn::parallel::lyubich_diameters(&p, disc, &opts).unwrap();
        pass &= (r.fitted_slope - r.reference_slope).abs() <= 0.15;
        slopes.push(format!("{name} slope {:.3} vs {:.3}", r.fitted_slope, r.reference_slope));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 30.0;
    verdict(7, pass, format!("{} (tolerance 0.15) in {secs:.2}s", slopes.join(", ")));
}

#[test]
fn criterion_08_census() {
    let mut rng = task_rng(8, 0);
    let mut worst = (0, 1);
    let mut ok = true;
    for k in 0..40 {
        let p = if k < 20 {
            Polynomial::quadratic(random_disc_point(&mut rng, 2.0))
        } else {
            Polynomial::new(vec![
                random_disc_point(&mut rng, 1.0),
                random_disc_point(&mut rng, 1.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
            ])
        };
        let census = nonrepelling_census(&p, 4).unwrap();
        ok &= census.within_bound();
        if census.count * worst.1 >= worst.0 * census.bound {
            worst = (census.count, census.bound);
        }
    }
    verdict(
        8,
        ok,
        format!("20 quadratics and 20 cubics, periods ≤ 4; worst count {} of bound {}", worst.0, worst.1),
    );
}

#[test]
fn criterion_09_koenigs() {
    let p = Polynomial::from_real(&[0.0, 0.5, 1.0]);
    let l = koenigs(&p, c(0.0, 0.0), 30).unwrap();
    let radius = 0.1 * l.radius_hint();
    let residual = (0..64)
        .map(|k| {
            let z = Complex::from_polar(radius, std::f64::consts::TAU * k as f64 / 64.0);
            (l.series.eval(p.eval(z)) - l.multiplier * l.series.eval(z)).norm()
        })
        .fold(0.0, f64::max);
    let a2 = (l.series.coeff(2) - 4.0).norm();
    verdict(
        9,
        residual < 1e-8 && a2 < 1e-10,
        format!("residual {residual:.2e} at |z| = {radius:.4}, |φ₂ − 4| = {a2:.1e}"),
    );
}

#[test]
fn criterion_10_green_function() {
    let mut rng = task_rng(10, 0);
    let mut worst = 0.0f64;
    for (_, p) in family() {
        let mut count = 0;
        while count < 100 {
            let z = random_disc_point(&mut rng, 6.0);
            let g = green_function(&p, z, 10_000).unwrap();
            if !g.escaped {
                continue;
            }
            let g1 = green_function(&p, p.eval(z), 10_000).unwrap();
            worst = worst.max((g1.value - 2.0 * g.value).abs());
            count += 1;
        }
    }
    let p = z_squared();
    let mut exact = 0.0f64;
    for k in 0..200 {
        let r = if k == 0 { 1.0 } else { rng.gen_range(1.0..10.0) };
        let z = Complex::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
        exact = exact.max((green_function(&p, z, 10_000).unwrap().value - r.ln()).abs());
    }
    verdict(
        10,
        worst < 1e-8 && exact < 1e-10,
        format!("max |G∘P − 2G| = {worst:.2e}, max |G − log|z|| = {exact:.2e} for z²"),
    );
}

#[test]
fn criterion_11_siegel_and_cremer() {
    let lambda = rotation(golden_mean());
    let quad = Polynomial::new(vec![c(0.0, 0.0), lambda, c(1.0, 0.0)]);
    let l = siegel_series(lambda, &quad, 40).unwrap();
    let mut certificates = Vec::new();
    let mut ok = l.residual < 1e-6 && l.residual_radius == 0.01;
    for q in [[2u32, 4], [2, 20]] {
        let r = cremer_theta(&q, &[2]).unwrap();
        let t = &r.terms[0];
        ok &= r.all_hold();
        certificates.push(format!("q={q:?}: {:.3e} ≤ {:.3e}", t.distance, t.bound));
    }
    verdict(
        11,
        ok,
        format!("Siegel residual {:.2e} at |z| = 0.01; {}", l.residual, certificates.join("; ")),
    );
}

#[test]
fn criterion_12_parabolic_petal() {
    let p = Polynomial::from_real(&[0.0, 1.0, 1.0]);
    let r = parabolic_petal(&p, 1, 0.05, 360, DEFAULT_PETAL_MAX_STEPS).unwrap();
    verdict(
        12,
        r.samples == 360 && r.boundary_maps_inside && r.steps_to_target.is_some(),
        format!(
            "max |F(w) + ε| = {:.4} ≤ ε on 360 samples; |z| < 1e-6 after {:?} steps",
            r.epsilon_image, r.steps_to_target
        ),
    );
}

fn random_self_map<R: Rng>(rng: &mut R) -> DiscMap {
    match rng.gen_range(0..4) {
        0 => {
            let zeros = (0..rng.gen_range(1..=3)).map(|_| random_disc_point(rng, 0.95)).collect();
            DiscMap::blaschke(rotation(rng.gen()), zeros).unwrap()
        }
        1 => DiscMap::mobius(random_disc_point(rng, 0.95)).unwrap(),
        2 => {
            let raw: Vec<Complex> = (0..4).map(|_| random_disc_point(rng, 1.0)).collect();
            let total: f64 = raw.iter().map(|z| z.norm()).sum();
            let scale = rng.gen_range(0.2..0.95) / total;
            DiscMap::polynomial(Polynomial::new(raw.iter().map(|z| z * scale).collect())).unwrap()
        }
        _ => {
            let raw: Vec<Complex> = (0..12).map(|k| random_disc_point(rng, 1.0) / (k + 1) as f64).collect();
            let total: f64 = raw.iter().map(|z| z.norm()).sum();
            let scale = rng.gen_range(0.2..0.95) / total;
            DiscMap::series(PowerSeries::new(raw.iter().map(|z| z * scale).collect()).unwrap()).unwrap()
        }
    }
}

#[test]
fn criterion_13_disc_geometry() {
    let mut rng = task_rng(13, 0);
    let mut ratio = 0.0f64;
    for _ in 0..1000 {
        let f = random_self_map(&mut rng);
        let (z, w) = (random_disc_point(&mut rng, 0.99), random_disc_point(&mut rng, 0.99));
        ratio = ratio.max(schwarz_pick(&f, z, w).unwrap().ratio);
    }
    let pick = ratio <= 1.0 + 1e-10;

    let dw = denjoy_wolff(&DiscMap::mobius(c(0.5, 0.0)).unwrap(), c(0.0, 0.0), 1e-12, 100_000).unwrap();
    let wolff = dw.kind == WolffKind::BoundaryPoint && (dw.alpha - 1.0).norm() < 1e-6;

    let mut corpus: Vec<Vec<Complex>> = vec![
        vec![c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(0.3, 0.0), c(0.0, 0.5)],
        vec![c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(0.1, 0.0)],
    ];
    for n in 2..=5 {
        let mut b = vec![c(0.0, 0.0); n + 1];
        b[n] = Complex::from_polar(0.9 / n as f64, n as f64);
        corpus.push(b);
    }
    for _ in 0..20 {
        let raw: Vec<Complex> = (0..6).map(|_| random_disc_point(&mut rng, 1.0)).collect();
        let weight: f64 = raw.iter().enumerate().map(|(n, b)| n as f64 * b.norm()).sum();
        let scale = rng.gen_range(0.1..1.0) / weight;
        corpus.push(raw.iter().map(|b| b * scale).collect());
    }
    let mut area = 0.0f64;
    let mut univalent = true;
    for b in &corpus {
        let r = area_theorem_sum(&LaurentTail::new(b.clone()).unwrap());
        area = area.max(r.sum);
        univalent &= r.univalent_on_grid;
    }
    let area_ok = area <= 1.0 + 1e-9 && univalent;

    let k = koebe_quarter_check(&KoebeFunction, 41).unwrap();
    let koebe = (k.a2.norm() - 2.0).abs() < 1e-12 && k.coverage_pass;

    verdict(
        13,
        pick && wolff && area_ok && koebe,
        format!(
            "Schwarz–Pick max ratio {ratio:.12}; Denjoy–Wolff α = {:.9} ({}); max area sum {area:.6} on {} univalent tails; |a₂| = {}, {} of {} grid points uncovered",
            dw.alpha.re,
            dw.kind.name(),
            corpus.len(),
            k.a2.norm(),
            k.uncovered,
            k.grid_points
        ),
    );
}

fn run_bytes(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_cdyn")).args(args).output().unwrap();
    (out.status.code(), out.stdout)
}

#[test]
fn criterion_14_determinism() {
    let seeded: Vec<Vec<&str>> = vec![
        vec!["julia", "-p", "-2,0,1", "-n", "14", "--samples", "10000", "--seed", "7"],
        vec!["julia", "-p", "-2,0,1", "-n", "14", "--samples", "10000", "--seed", "7", "--tasks", "4"],
        vec!["measure", "gap", "-p", "-1,0,1", "-x", "2", "-y", "3", "-n", "20", "--samples", "2000", "--seed", "2", "--tasks", "3"],
        vec!["measure", "mixing", "-p", "-1,0,1", "-d", "20", "--samples", "2000", "--seed", "4"],
        vec!["measure", "cesaro", "-p", "0,0,1", "-n", "20", "--samples", "500", "--seed", "6"],
        vec!["measure", "duality", "--random-poly", "--seed", "5"],
        vec!["measure", "lyubich", "-p", "-1,0,1", "--center", "3", "--radius", "0.05", "--branches", "200", "--seed", "1", "--tasks", "3"],
        vec!["disc", "schwarz-pick", "--blaschke", "0.5,-0.2+0.3i", "--seed", "9"],
    ];
    let mut failures = Vec::new();
    for args in &seeded {
        let first = run_bytes(args);
        let second = run_bytes(args);
        if first != second || first.1.is_empty() {
            failures.push(args.join(" "));
        }
    }
    let exact_one = run_bytes(&["julia", "-p", "-1,0,1", "-n", "12", "--tasks", "1"]);
    let exact_four = run_bytes(&["julia", "-p", "-1,0,1", "-n", "12", "--tasks", "4"]);
    if exact_one != exact_four {
        failures.push("exact julia across task counts".into());
    }
    verdict(
        14,
        failures.is_empty(),
        format!(
            "{} seeded commands byte-identical on rerun, exact mode identical across task counts{}",
            seeded.len(),
            if failures.is_empty() { String::new() } else { format!("; differing: {}", failures.join(" | ")) }
        ),
    );
}
