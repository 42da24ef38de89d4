//! Acceptance criteria, run in order. Prints one PASS/FAIL line per
//! criterion and exits non-zero when any fails.

use std::f64::consts::TAU;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use harmap::report::verify::{closed_form_deviation, random_seeds, wandering_drift_error};
use harmap::{
    analyze_components, bounded_component_check, check_containment, check_julia_union, classify_grid_with_threads,
    classify_orbit, classify_point, iterate_map, julia_compactness_check, max_modulus, orbit, order_estimate,
    polynomial_escape_radius, preset, BoundedComponentParams, ClassGrid, FatouMode, GridSpec, HarmonicMap,
    HolomorphicExpr, MembershipTag, OrbitBudget, OrbitTag, PRESETS,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use sha2::{Digest, Sha256};

type Outcome = Result<String, String>;

fn cz(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn agreement(a: &ClassGrid, b: &ClassGrid) -> (usize, usize) {
    let both =
        a.cells.iter().zip(&b.cells).filter(|(x, y)| {
            x.membership != MembershipTag::Undetermined && y.membership != MembershipTag::Undetermined
        });
    let (mut agree, mut total) = (0, 0);
    for (x, y) in both {
        total += 1;
        agree += usize::from(x.membership == y.membership);
    }
    (agree, total)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let p = preset("strict-containment").unwrap();
    let (f, b) = (p.map(), p.budget());
    let at = |z| classify_point(&f, z, &b);
    let one = at(cz(1.0, 0.0)).membership == MembershipTag::JuliaLike;
    let three_halves = at(cz(1.5, 0.0)).membership == MembershipTag::FatouLike;
    let origin = at(cz(0.0, 0.0)).membership == MembershipTag::FatouLike;
    let circle = (0..16)
        .filter(|k| {
            let v = at(Complex64::from_polar(2.0, TAU * *k as f64 / 16.0));
            v.membership == MembershipTag::FatouLike && v.mode == Some(FatouMode::CompactDivergence)
        })
        .count();
    let secs = start.elapsed().as_secs_f64();
    ensure(
        one && three_halves && origin && circle == 16 && secs < 5.0,
        format!("z=1 Julia {one}, z=1.5 Fatou {three_halves}, z=0 Fatou {origin}, |z|=2 common escape {circle}/16, {secs:.2}s < 5s"),
    )
}

struct Grids {
    f: ClassGrid,
    spec: GridSpec,
}

fn criterion_2(grids: &mut Option<Grids>) -> Outcome {
    let start = Instant::now();
    let p = preset("strict-containment").unwrap();
    let (f, b) = (p.map(), p.budget());
    let spec = GridSpec::centered(3.0, 512);
    let threads = Some(8);
    let gf = classify_grid_with_threads(&f, &spec, &b, threads).map_err(|e| e.to_string())?;
    let gh = classify_grid_with_threads(&HarmonicMap::holomorphic(f.h().clone()), &spec, &b, threads).unwrap();
    let gg = classify_grid_with_threads(&HarmonicMap::holomorphic(f.g().clone()), &spec, &b, threads).unwrap();
    let inc = check_containment(&gh, &gg, &gf).unwrap();
    let uni = check_julia_union(&gf, &gh, &gg).unwrap();
    let secs = start.elapsed().as_secs_f64();
    *grids = Some(Grids { f: gf, spec });
    ensure(
        inc.violation_fraction <= 0.005 && uni.violation_fraction <= 0.005 && secs < 60.0,
        format!(
            "F(h)∩F(g)⊆F(f) violations {:.5} <= 0.005, J(f)⊆J(h)∪J(g) violations {:.5} <= 0.005, {secs:.1}s < 60s",
            inc.violation_fraction, uni.violation_fraction
        ),
    )
}

fn criterion_3(grids: &Option<Grids>) -> Outcome {
    let g = grids.as_ref().ok_or("needs the criterion 2 grid")?;
    let p = preset("strict-containment").unwrap();
    let f2 = iterate_map(&p.map(), 2).unwrap();
    let g2 = classify_grid_with_threads(&f2, &g.spec, &p.budget(), Some(8)).unwrap();
    let (agree, total) = agreement(&g.f, &g2);
    let frac = agree as f64 / total.max(1) as f64;
    ensure(
        frac >= 0.99,
        format!("F(f) vs F(f^2) agree on {frac:.5} >= 0.99 of {total} pixels"),
    )
}

fn criterion_4() -> Outcome {
    let p = preset("wandering").unwrap();
    let f = p.map();
    let drift = wandering_drift_error().unwrap();
    let db = p.dynamics_budget();
    let class = classify_orbit(&orbit(&f, cz(0.0, 0.0), &db), &db).tag;
    let window = GridSpec::new(-1.0, 1.0, -1.0, 13.0, p.window.width, p.window.height);
    let grid = classify_grid_with_threads(&f, &window, &p.budget(), None).unwrap();
    let cmap = analyze_components(&f, &grid, &db).unwrap();
    let dynamics = cmap.label_of(cz(0.0, 0.0)).and_then(|l| cmap.dynamics[l as usize - 1]);
    ensure(
        drift < 1e-6 && class == OrbitTag::Escaping && dynamics == Some(harmap::ComponentDynamics::WanderingEscaping),
        format!("max|f^n(0) - 2nπi| = {drift:.2e} < 1e-6, orbit {class:?}, component of 0 {dynamics:?}"),
    )
}

fn criterion_5(grids: &Option<Grids>) -> Outcome {
    let g = grids.as_ref().ok_or("needs the criterion 2 grid")?;
    let f = preset("strict-containment").unwrap().map();
    let r = polynomial_escape_radius(f.h())
        .unwrap()
        .max(polynomial_escape_radius(f.g()).unwrap());
    let b = OrbitBudget {
        max_iter: 100,
        ..OrbitBudget::default()
    };
    let escaped = (0..64)
        .filter(|k| {
            let c = classify_orbit(&orbit(&f, Complex64::from_polar(2.1, TAU * *k as f64 / 64.0), &b), &b);
            c.tag == OrbitTag::Escaping && c.exit_index.is_some_and(|n| n <= 100)
        })
        .count();
    let compact = julia_compactness_check(&f, &g.f).unwrap();
    ensure(
        r == 2.0 && escaped == 64 && compact.all_inside,
        format!(
            "radius {r} = 2, {escaped}/64 escape within 100 steps, J compact inside radius {}",
            compact.all_inside
        ),
    )
}

fn criterion_6() -> Outcome {
    let p = preset("empty-julia").unwrap();
    let (f, b) = (p.map(), p.budget());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let escaping = (0..10_000)
        .filter(|_| {
            let m = 10f64.powf(rng.gen_range(-3.0..=1.0));
            let z = Complex64::from_polar(m, TAU * rng.gen::<f64>());
            classify_orbit(&orbit(&f, z, &b), &b).tag == OrbitTag::Escaping
        })
        .count();
    let report = harmap::report::run_suite(harmap::report::Suite::Polynomial, None).unwrap();
    let recorded = report.discrepancies.iter().any(|d| d.name == "empty_julia_origin");
    let origin = classify_point(&f, cz(0.0, 0.0), &b);
    ensure(
        escaping == 10_000 && recorded && report.passed(),
        format!(
            "{escaping}/10000 escape, z=0 is {:?} and recorded as a discrepancy {recorded}, suite passes {}",
            origin.membership,
            report.passed()
        ),
    )
}

fn criterion_7() -> Outcome {
    let seeds = random_seeds(99, 100, 0.5);
    let fc = preset("fatou-classic").unwrap().map();
    let t = closed_form_deviation(&fc, cz(1.0, 0.0), cz(0.0, TAU), &seeds).unwrap();
    let cube = HarmonicMap::parse("z^3", "z^3").unwrap();
    let n = closed_form_deviation(&cube, cz(-1.0, 0.0), cz(0.0, 0.0), &seeds).unwrap();
    ensure(
        t < 1e-8 && n < 1e-8,
        format!("max relative deviation {t:.2e} (a=1, b=2πi), {n:.2e} (a=-1, b=0), both < 1e-8"),
    )
}

fn criterion_8() -> Outcome {
    let exp: HolomorphicExpr = "exp(z)".parse().unwrap();
    let geometric: Vec<f64> = (0..12).map(|k| 10.0 * 1.5f64.powi(k)).collect();
    let rho_exp = order_estimate(&exp, &geometric).unwrap();
    let decades: Vec<f64> = (1..=12).map(|k| 10f64.powi(k)).collect();
    let rho_cube = order_estimate(&"z^3".parse().unwrap(), &decades).unwrap();
    let log_err = [2.0, 50.0, 500.0]
        .iter()
        .map(|&r| (max_modulus(&exp, r, 1024).unwrap() - r).abs())
        .fold(0.0, f64::max);
    let f = HarmonicMap::new(exp, HolomorphicExpr::zero());
    let rep = bounded_component_check(&f, &BoundedComponentParams::new(2.0, 1.5, 3)).unwrap();
    ensure(
        (0.95..=1.05).contains(&rho_exp) && rho_cube < 0.25 && log_err <= 1e-6 && rep.first_failing_k.is_some(),
        format!(
            "order(exp) {rho_exp:.4} in [0.95, 1.05], order(z^3) {rho_cube:.4} < 0.25, |log M(r) - r| {log_err:.1e} <= 1e-6, minimum-modulus condition fails at k = {:?}",
            rep.first_failing_k
        ),
    )
}

fn criterion_9() -> Outcome {
    let golden = include_str!("golden/render.sha256");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    let mut ok = true;
    for p in &PRESETS {
        let want = golden
            .lines()
            .find_map(|l| l.strip_suffix(p.name).map(str::trim))
            .ok_or(format!("no golden hash for {}", p.name))?;
        for threads in ["1", "2", "8"] {
            let out = dir.path().join(format!("{}-{threads}.ppm", p.name));
            let status = Command::new(env!("CARGO_BIN_EXE_harmap"))
                .args(["render", "--preset", p.name, "--threads", threads, "--out"])
                .arg(&out)
                .status()
                .map_err(|e| e.to_string())?;
            let got = hex(&Sha256::digest(
                std::fs::read(Path::new(&out)).map_err(|e| e.to_string())?,
            ));
            if !status.success() || got != want {
                ok = false;
                notes.push(format!("{} threads {threads}: {}", p.name, &got[..12]));
            }
        }
    }
    let detail = if ok {
        format!("{} presets x threads 1/2/8 match the golden SHA-256", PRESETS.len())
    } else {
        format!("mismatch: {}", notes.join(", "))
    };
    ensure(ok, detail)
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn main() -> ExitCode {
    let mut grids = None;
    let mut failed = 0;
    let mut report = |n: u32, outcome: Outcome, start: Instant| {
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS criterion {n}: {d} [{secs:.1}s]"),
            Err(d) => {
                failed += 1;
                println!("FAIL criterion {n}: {d} [{secs:.1}s]");
            }
        }
    };
    let t = Instant::now();
    report(1, criterion_1(), t);
    let t = Instant::now();
    report(2, criterion_2(&mut grids), t);
    let t = Instant::now();
    report(3, criterion_3(&grids), t);
    let t = Instant::now();
    report(4, criterion_4(), t);
    let t = Instant::now();
    report(5, criterion_5(&grids), t);
    let t = Instant::now();
    report(6, criterion_6(), t);
    let t = Instant::now();
    report(7, criterion_7(), t);
    let t = Instant::now();
    report(8, criterion_8(), t);
    let t = Instant::now();
    report(9, criterion_9(), t);
    if failed == 0 {
        println!("acceptance: 9/9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 9 criteria failed");
        ExitCode::FAILURE
    }
}
