//! Named verification suites. Each suite runs a list of numerical checks and
//! reports the measured value beside its threshold.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    check_attracting_fixed_point, check_permutable, classify_orbit, classify_point, closed_form_affine_orbit, orbit,
    polynomial_escape_radius, FatouMode, MembershipTag, OrbitBudget, OrbitTag,
};
use crate::expr::{HolomorphicExpr, Value};
use crate::grid::{
    analyze_components, check_containment, check_iterate_invariance, check_julia_union, classify_grid_with_threads,
    julia_compactness_check, ComponentDynamics, GridSpec,
};
use crate::growth::{bounded_component_check, max_modulus, order_estimate, BoundedComponentParams, DEFAULT_SAMPLES};
use crate::harmonic::{affine_image, HarmonicMap};
use crate::presets::preset;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Containment,
    Iterate,
    Permutable,
    Wandering,
    Polynomial,
    Growth,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = [
        "all",
        "containment",
        "iterate",
        "permutable",
        "wandering",
        "polynomial",
        "growth",
    ];
    const PARTS: [Suite; 6] = [
        Suite::Containment,
        Suite::Iterate,
        Suite::Permutable,
        Suite::Wandering,
        Suite::Polynomial,
        Suite::Growth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Containment => "containment",
            Suite::Iterate => "iterate",
            Suite::Permutable => "permutable",
            Suite::Wandering => "wandering",
            Suite::Polynomial => "polynomial",
            Suite::Growth => "growth",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::PARTS
            .iter()
            .chain([Suite::All].iter())
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown suite {s:?}; expected one of {}",
                    Suite::NAMES.join(", ")
                ))
            })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    /// Comparison and bound, e.g. `<= 0.005`.
    pub threshold: String,
    /// The mathematical statement under test.
    pub paper_ref: String,
}

/// A point where the computed answer and a stated claim disagree. Recorded,
/// never counted as a failure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub name: String,
    pub claim: String,
    pub observed: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub discrepancies: Vec<Discrepancy>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Collector {
    checks: Vec<Check>,
    discrepancies: Vec<Discrepancy>,
}

impl Collector {
    fn push(&mut self, name: &str, passed: bool, measured: f64, threshold: String, statement: &str) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            measured,
            threshold,
            paper_ref: statement.into(),
        });
    }

    fn le(&mut self, name: &str, measured: f64, bound: f64, statement: &str) {
        self.push(name, measured <= bound, measured, format!("<= {bound}"), statement);
    }

    fn lt(&mut self, name: &str, measured: f64, bound: f64, statement: &str) {
        self.push(name, measured < bound, measured, format!("< {bound}"), statement);
    }

    fn ge(&mut self, name: &str, measured: f64, bound: f64, statement: &str) {
        self.push(name, measured >= bound, measured, format!(">= {bound}"), statement);
    }

    fn within(&mut self, name: &str, measured: f64, lo: f64, hi: f64, statement: &str) {
        self.push(
            name,
            (lo..=hi).contains(&measured),
            measured,
            format!("in [{lo}, {hi}]"),
            statement,
        );
    }

    /// Boolean check; `measured` is 1 when the property holds.
    fn holds(&mut self, name: &str, ok: bool, statement: &str) {
        self.push(name, ok, if ok { 1.0 } else { 0.0 }, "== 1".into(), statement);
    }
}

pub fn run_suite(suite: Suite, threads: Option<usize>) -> Result<VerifyReport> {
    let mut c = Collector {
        checks: Vec::new(),
        discrepancies: Vec::new(),
    };
    let parts: &[Suite] = if suite == Suite::All {
        &Suite::PARTS
    } else {
        std::slice::from_ref(&suite)
    };
    for part in parts {
        match part {
            Suite::Containment => containment(&mut c, threads)?,
            Suite::Iterate => iterate(&mut c, threads)?,
            Suite::Permutable => permutable(&mut c)?,
            Suite::Wandering => wandering(&mut c, threads)?,
            Suite::Polynomial => polynomial(&mut c, threads)?,
            Suite::Growth => growth(&mut c)?,
            Suite::All => unreachable!("expanded above"),
        }
    }
    Ok(VerifyReport {
        suite: suite.name().into(),
        checks: c.checks,
        discrepancies: c.discrepancies,
    })
}

fn cz(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn containment(c: &mut Collector, threads: Option<usize>) -> Result<()> {
    let p = preset("strict-containment")?;
    let f = p.map();
    let b = p.budget();
    let tag = |z| classify_point(&f, z, &b);
    c.holds(
        "point_1_julia",
        tag(cz(1.0, 0.0)).membership == MembershipTag::JuliaLike,
        "1 ∈ J(f): the unit circle lies in J(f)",
    );
    c.holds(
        "point_1.5_fatou",
        tag(cz(1.5, 0.0)).membership == MembershipTag::FatouLike,
        "f(1) = 3/2 ∈ F(f)",
    );
    let origin = tag(cz(0.0, 0.0));
    c.holds(
        "point_0_fatou_convergent",
        origin.membership == MembershipTag::FatouLike && origin.mode == Some(FatouMode::ConvergentFamily),
        "0 ∈ F(f): both parts fix 0 with multiplier 0",
    );
    let circle = (0..16)
        .filter(|k| {
            let v = tag(Complex64::from_polar(2.0, TAU * *k as f64 / 16.0));
            v.membership == MembershipTag::FatouLike && v.mode == Some(FatouMode::CompactDivergence)
        })
        .count();
    c.ge(
        "radius_2_common_escape",
        circle as f64,
        16.0,
        "|z| = 2 ⊂ F(f): the iterates diverge compactly to ∞",
    );

    let spec = GridSpec::centered(3.0, 512);
    let gf = classify_grid_with_threads(&f, &spec, &b, threads)?;
    let gh = classify_grid_with_threads(&HarmonicMap::holomorphic(f.analytic.clone()), &spec, &b, threads)?;
    let gg = classify_grid_with_threads(&HarmonicMap::holomorphic(f.coanalytic.clone()), &spec, &b, threads)?;
    let inc = check_containment(&gh, &gg, &gf)?;
    c.le(
        "containment_violation_fraction",
        inc.violation_fraction,
        0.005,
        "F(h) ∩ F(g) ⊆ F(f)",
    );
    c.ge(
        "containment_strict_witnesses",
        inc.witness_pixels.len() as f64,
        1.0,
        "the inclusion F(h) ∩ F(g) ⊆ F(f) can be strict",
    );
    let uni = check_julia_union(&gf, &gh, &gg)?;
    c.le(
        "julia_union_violation_fraction",
        uni.violation_fraction,
        0.005,
        "J(f) ⊆ J(h) ∪ J(g)",
    );
    let diag = spec.pixel_diagonal();
    let worst = (0..spec.height)
        .flat_map(|j| (0..spec.width).map(move |i| (i, j)))
        .filter(|&(i, j)| gf.cell(i, j).membership == MembershipTag::JuliaLike)
        .map(|(i, j)| (spec.center(i, j).norm() - 1.0).abs())
        .fold(0.0, f64::max);
    c.lt(
        "julia_distance_to_unit_circle_in_diagonals",
        worst / diag,
        4.0,
        "J(f) is the unit circle",
    );
    Ok(())
}

fn iterate(c: &mut Collector, threads: Option<usize>) -> Result<()> {
    let p = preset("strict-containment")?;
    let f = p.map();
    let b = p.budget();
    let spec = GridSpec::centered(3.0, 512);
    let a = classify_grid_with_threads(&f, &spec, &b, threads)?;
    let f2 = crate::harmonic::iterate_map(&f, 2)?;
    let a2 = classify_grid_with_threads(&f2, &spec, &b, threads)?;
    let r = crate::grid::compare_grids("F(f^2) = F(f)", &a, &a2)?;
    c.ge(
        "iterate_p2_agreement",
        r.agreement(),
        0.99,
        "F(f^p) = F(f) for every p ≥ 1",
    );
    let r3 = check_iterate_invariance(&f, 3, &GridSpec::centered(3.0, 128), &b)?;
    c.ge(
        "iterate_p3_agreement",
        r3.agreement(),
        0.99,
        "F(f^p) = F(f) for every p ≥ 1",
    );
    let e = preset("empty-julia")?;
    // Window offset so that no pixel centre lies near the fixed point 0.
    let away = GridSpec::new(0.25, 2.0, -2.0, 2.0, 56, 128);
    let r = check_iterate_invariance(&e.map(), 2, &away, &e.budget())?;
    c.ge(
        "iterate_empty_julia_agreement",
        r.agreement(),
        0.99,
        "F(f^p) = F(f) for every p ≥ 1",
    );
    Ok(())
}

fn random_disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>())
}

fn relative_deviation(a: Value, b: Value) -> f64 {
    match (a, b) {
        (Value::Finite(x), Value::Finite(y)) => {
            let d = (x - y).norm();
            if d == 0.0 {
                0.0
            } else {
                d / y.norm()
            }
        }
        _ => f64::INFINITY,
    }
}

/// Largest relative gap between the closed form for `a f1 + b` and direct
/// iteration of that map over `seeds` and `n <= 10`.
pub fn closed_form_deviation(f1: &HarmonicMap, a: Complex64, b: Complex64, seeds: &[Complex64]) -> Result<f64> {
    let f2 = affine_image(f1, a, b);
    let budget = OrbitBudget {
        max_iter: 10,
        ..OrbitBudget::default()
    };
    let mut worst: f64 = 0.0;
    for &z in seeds {
        let o = orbit(&f2, z, &budget);
        for n in 0..=10u32 {
            let cf = closed_form_affine_orbit(f1, a, b, n, z)?;
            worst = worst.max(relative_deviation(cf, o.f_track[n as usize]));
        }
    }
    Ok(worst)
}

pub fn random_seeds(seed: u64, count: usize, radius: f64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_disc(&mut rng, radius)).collect()
}

fn permutable(c: &mut Collector) -> Result<()> {
    let samples: Vec<Complex64> = (0..12)
        .map(|k| Complex64::from_polar(0.3 + 0.1 * k as f64, 0.7 * k as f64))
        .collect();
    let sq = HarmonicMap::parse("z^2", "z^2")?;
    c.holds(
        "self_permutable",
        check_permutable(&sq, &sq, &samples, 1e-12),
        "every map is permutable with itself",
    );
    let f1 = HarmonicMap::parse("z - 1 + exp(-z)", "z")?;
    let f2 = HarmonicMap::parse("z - 1 + exp(-z) + 2*pi*i", "z")?;
    c.holds(
        "period_translation_permutable",
        check_permutable(&f1, &f2, &samples, 1e-9),
        "2πi is a period of h₁",
    );
    let a = HarmonicMap::parse("z^2", "z")?;
    let b = HarmonicMap::parse("z^2 + 1", "z")?;
    c.holds(
        "square_and_shift_not_permutable",
        !check_permutable(&a, &b, &[cz(1.0, 0.0)], 1e-9),
        "h₁∘h₂ ≠ h₂∘h₁",
    );

    let seeds = random_seeds(7, 100, 0.5);
    let fc = preset("fatou-classic")?.map();
    let dev = closed_form_deviation(&fc, cz(1.0, 0.0), cz(0.0, TAU), &seeds)?;
    c.lt(
        "closed_form_translation",
        dev,
        1e-8,
        "f₂^n = a^n h₁^n + b(a^(n-1) + ... + 1) + conj(conj(a)^n g₁^n)",
    );
    let cube = HarmonicMap::parse("z^3", "z^3")?;
    let dev = closed_form_deviation(&cube, cz(-1.0, 0.0), cz(0.0, 0.0), &seeds)?;
    c.lt(
        "closed_form_negation",
        dev,
        1e-8,
        "f₂^n = a^n h₁^n + b(a^(n-1) + ... + 1) + conj(conj(a)^n g₁^n)",
    );
    Ok(())
}

/// `max_{n <= 20} |f^n(0) - 2nπi|` for the wandering preset.
pub fn wandering_drift_error() -> Result<f64> {
    let p = preset("wandering")?;
    let mut b = p.dynamics_budget();
    b.max_iter = 20;
    let o = orbit(&p.map(), cz(0.0, 0.0), &b);
    Ok((0..=20)
        .map(|n| match o.f_track.get(n) {
            Some(Value::Finite(w)) => (w - cz(0.0, 2.0 * PI * n as f64)).norm(),
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max))
}

fn wandering(c: &mut Collector, threads: Option<usize>) -> Result<()> {
    let p = preset("wandering")?;
    let f = p.map();
    c.lt(
        "orbit_of_0_is_2n_pi_i",
        wandering_drift_error()?,
        1e-6,
        "f₂(2mπi) = 2(m+1)πi",
    );
    let db = p.dynamics_budget();
    let class = classify_orbit(&orbit(&f, cz(0.0, 0.0), &db), &db);
    c.holds("orbit_of_0_escaping", class.tag == OrbitTag::Escaping, "f₂^n(0) → ∞");
    let g1 = check_attracting_fixed_point(&f.coanalytic, cz(0.0, 0.0));
    c.holds(
        "g1_attracting_at_0",
        g1.attracting,
        "0 is an attracting fixed point of g₁",
    );
    let h1 = check_attracting_fixed_point(&preset("fatou-classic")?.map().analytic, cz(0.0, TAU));
    c.holds(
        "h1_superattracting_at_2pi_i",
        h1.attracting && h1.multiplier_modulus < 1e-12,
        "h₁'(2πi) = 0",
    );
    let grid = classify_grid_with_threads(&f, &p.window, &p.budget(), threads)?;
    let cmap = analyze_components(&f, &grid, &db)?;
    let dynamics = cmap.label_of(cz(0.0, 0.0)).and_then(|l| cmap.dynamics[l as usize - 1]);
    c.holds(
        "component_of_0_wandering_escaping",
        dynamics == Some(ComponentDynamics::WanderingEscaping),
        "the Fatou component containing 0 is an escaping wandering domain",
    );
    Ok(())
}

fn polynomial(c: &mut Collector, threads: Option<usize>) -> Result<()> {
    let p = preset("strict-containment")?;
    let f = p.map();
    let r = polynomial_escape_radius(&f.analytic)?.max(polynomial_escape_radius(&f.coanalytic)?);
    c.le(
        "escape_radius_abs_error",
        (r - 2.0).abs(),
        1e-12,
        "|z| > r = max{r₁, r₂} implies escape",
    );
    let b = OrbitBudget {
        max_iter: 100,
        ..OrbitBudget::default()
    };
    let escaped = (0..64)
        .filter(|k| {
            let o = orbit(&f, Complex64::from_polar(2.1, TAU * *k as f64 / 64.0), &b);
            let class = classify_orbit(&o, &b);
            class.tag == OrbitTag::Escaping && class.exit_index.is_some_and(|n| n <= 100)
        })
        .count();
    c.ge(
        "radius_2.1_all_escape",
        escaped as f64,
        64.0,
        "|z| > r = max{r₁, r₂} implies escape",
    );
    let grid = classify_grid_with_threads(&f, &GridSpec::centered(3.0, 256), &p.budget(), threads)?;
    let cr = julia_compactness_check(&f, &grid)?;
    c.holds(
        "julia_set_compact",
        cr.all_inside,
        "J(f) is a compact subset of ℂ, inside |z| ≤ r",
    );

    let e = preset("empty-julia")?;
    let ef = e.map();
    let eb = e.budget();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let escaping = (0..10_000)
        .filter(|_| {
            // log-uniform modulus so that every scale in [1e-3, 10] is visited
            let m = 10f64.powf(rng.gen_range(-3.0..=1.0));
            let z = Complex64::from_polar(m, TAU * rng.gen::<f64>());
            classify_orbit(&orbit(&ef, z, &eb), &eb).tag == OrbitTag::Escaping
        })
        .count();
    c.ge(
        "empty_julia_random_points_escape",
        escaping as f64,
        10_000.0,
        "f^n(z) → ∞ for z ≠ 0",
    );
    let origin = classify_point(&ef, cz(0.0, 0.0), &eb);
    c.discrepancies.push(Discrepancy {
        name: "empty_julia_origin".into(),
        claim: "F(f) = ℂ, so J(f) = ∅".into(),
        observed: format!(
            "z = 0 is fixed by both parts while nearby orbits escape; classified {:?} with orbit class {:?}",
            origin.membership, origin.orbit_class
        ),
    });
    Ok(())
}

fn growth(c: &mut Collector) -> Result<()> {
    let exp: HolomorphicExpr = "exp(z)".parse()?;
    let geometric: Vec<f64> = (0..12).map(|k| 10.0 * 1.5f64.powi(k)).collect();
    c.within("order_exp", order_estimate(&exp, &geometric)?, 0.95, 1.05, "ρ(e^z) = 1");
    let decades: Vec<f64> = (1..=12).map(|k| 10f64.powi(k)).collect();
    c.lt(
        "order_cube",
        order_estimate(&"z^3".parse()?, &decades)?,
        0.25,
        "polynomials have order 0",
    );
    for r in [2.0, 50.0, 500.0] {
        let l = max_modulus(&exp, r, DEFAULT_SAMPLES)?;
        c.le(
            &format!("log_max_modulus_exp_r{r}"),
            (l - r).abs(),
            1e-6,
            "log M(r, e^z) = r",
        );
    }
    let f = HarmonicMap::new(exp, HolomorphicExpr::zero());
    let mut params = BoundedComponentParams::new(2.0, 1.5, 3);
    params.sample_points = random_seeds(3, 8, 1.0);
    params.n_max = 8;
    let rep = bounded_component_check(&f, &params)?;
    c.holds("exp_dominance_holds", rep.condition3_holds, "|g^n(z)| ≤ |h^n(z)|");
    c.holds(
        "exp_minimum_modulus_fails_at_k0",
        rep.first_failing_k == Some(0),
        "m(σ_k, h) > r_{k+1}^s fails for e^z since m(r, e^z) = e^{-r}",
    );
    let poly = HolomorphicExpr::pow(HolomorphicExpr::var(), 2);
    let not_t = bounded_component_check(&HarmonicMap::holomorphic(poly), &params);
    c.holds(
        "polynomial_rejected",
        matches!(not_t, Err(Error::NotTranscendental)),
        "the growth conditions need transcendental h",
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for n in Suite::NAMES {
            assert_eq!(n.parse::<Suite>().unwrap().name(), n);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn permutable_and_growth_suites_pass() {
        for s in [Suite::Permutable, Suite::Growth] {
            let r = run_suite(s, None).unwrap();
            assert!(r.passed(), "{r:#?}");
            assert!(r.discrepancies.is_empty());
        }
    }
}
