use std::f64::consts::TAU;

use harmap::{
    affine_image, classify_grid_with_threads, classify_orbit, classify_point, closed_form_affine_orbit, derivative,
    eval_harmonic, eval_holo, iterate_map, max_modulus, min_modulus, orbit, parse_expr, polynomial_escape_radius,
    preset, GridSpec, HarmonicMap, HolomorphicExpr, MagnitudeGuard, MembershipTag, OrbitBudget, OrbitTag, Value,
    PRESETS,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn disc(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..TAU).prop_map(move |(u, t)| Complex64::from_polar(radius * u.sqrt(), t))
}

fn guard() -> MagnitudeGuard {
    MagnitudeGuard::default()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    let d = (a - b).norm();
    if d == 0.0 {
        0.0
    } else {
        d / b.norm().max(1e-300)
    }
}

fn all_expressions() -> Vec<HolomorphicExpr> {
    PRESETS
        .iter()
        .flat_map(|p| [parse_expr(p.h).unwrap(), parse_expr(p.g).unwrap()])
        .collect()
}

#[test]
fn print_parse_round_trip_for_presets() {
    for e in all_expressions() {
        let again = parse_expr(&e.to_string()).unwrap();
        assert_eq!(again, e, "{e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugation_symmetry(z in disc(3.0)) {
        for p in PRESETS.iter().filter(|p| p.map().has_only_real_constants()) {
            let f = p.map();
            let a = eval_harmonic(&f, z.conj(), &guard()).finite().unwrap();
            let b = eval_harmonic(&f, z, &guard()).finite().unwrap().conj();
            prop_assert!(rel(a, b) < 1e-12, "{} at {z}: {a} vs {b}", p.name);
        }
    }

    #[test]
    fn derivative_matches_central_difference(z in disc(2.0)) {
        let step = 1e-5;
        for e in all_expressions() {
            let d = derivative(&e);
            let exact = eval_holo(&d, z, &guard()).finite().unwrap();
            let at = |w| eval_holo(&e, w, &guard()).finite().unwrap();
            let fd = (at(z + step) - at(z - step)) / (2.0 * step);
            let err = (exact - fd).norm() / exact.norm().max(1.0);
            prop_assert!(err < 1e-6, "{e} at {z}: {exact} vs {fd}");
        }
    }

    #[test]
    fn iterate_map_matches_orbit(z in disc(1.5), p in 1u32..=4) {
        for name in ["strict-containment", "empty-julia", "fatou-classic"] {
            let f = preset(name).unwrap().map();
            let fp = iterate_map(&f, p).unwrap();
            let b = OrbitBudget {
                max_iter: p,
                ..OrbitBudget::default()
            };
            let o = orbit(&f, z, &b);
            if let (Value::Finite(direct), Value::Finite(step)) =
                (eval_harmonic(&fp, z, &guard()), o.f_track[p as usize])
            {
                if step.norm() < 1e100 {
                    prop_assert!(rel(direct, step) < 1e-9, "{name} p={p} z={z}");
                }
            }
        }
    }

    #[test]
    fn track_identity(z in disc(2.0)) {
        for p in &PRESETS {
            let f = p.map();
            let b = p.dynamics_budget();
            let o = orbit(&f, z, &b);
            prop_assert_eq!(o.f_track[0], Value::Finite(z));
            for n in 1..o.len() {
                let sum = harmap::harmonic::combine_parts(o.h_track[n], o.g_track[n], &b.guard);
                prop_assert_eq!(o.f_track[n], sum);
                prop_assert_eq!(
                    o.h_track[n],
                    harmap::expr::eval_value(f.h(), o.h_track[n - 1], &b.guard)
                );
            }
        }
    }

    #[test]
    fn subsampling_identity(z in disc(0.9), p in 2u32..=3) {
        for name in ["strict-containment", "fatou-classic"] {
            let f = preset(name).unwrap().map();
            let fp = iterate_map(&f, p).unwrap();
            let mut b = OrbitBudget {
                max_iter: 5 * p,
                ..OrbitBudget::default()
            };
            let long = orbit(&f, z, &b);
            b.max_iter = 5;
            let short = orbit(&fp, z, &b);
            for n in 0..=5usize {
                if let (Value::Finite(a), Value::Finite(c)) = (short.f_track[n], long.f_track[p as usize * n]) {
                    let scale = c.norm().max(1e-12);
                    prop_assert!((a - c).norm() / scale < 1e-9, "{name} p={p} n={n} z={z}: {a} vs {c}");
                }
            }
        }
    }

    #[test]
    fn closed_form_equivalence(z in disc(0.5)) {
        let cases = [
            (preset("fatou-classic").unwrap().map(), Complex64::new(1.0, 0.0), Complex64::new(0.0, TAU)),
            (HarmonicMap::parse("z^3", "z^3").unwrap(), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)),
        ];
        for (f1, a, b) in &cases {
            let f2 = affine_image(f1, *a, *b);
            let budget = OrbitBudget {
                max_iter: 10,
                ..OrbitBudget::default()
            };
            let o = orbit(&f2, z, &budget);
            for n in 0..=10u32 {
                let cf = closed_form_affine_orbit(f1, *a, *b, n, z).unwrap().finite().unwrap();
                let direct = o.f_track[n as usize].finite().unwrap();
                prop_assert!((cf - direct).norm() <= 1e-8 * direct.norm().max(1e-12), "n={n} z={z}");
            }
        }
    }

    #[test]
    fn min_modulus_never_exceeds_max(r in 0.1f64..40.0) {
        for e in all_expressions() {
            if e.as_const().is_some() {
                continue;
            }
            let lo = min_modulus(&e, r, 256).unwrap();
            let hi = max_modulus(&e, r, 256).unwrap();
            prop_assert!(lo <= hi, "{e} at r={r}");
        }
    }

    #[test]
    fn max_modulus_grows_with_radius(r in 0.5f64..40.0, factor in 1.05f64..3.0) {
        for e in all_expressions() {
            if e.as_const().is_some() {
                continue;
            }
            let a = max_modulus(&e, r, 512).unwrap();
            let b = max_modulus(&e, r * factor, 512).unwrap();
            prop_assert!(b > a, "{e}: M({r}) = {a}, M({}) = {b}", r * factor);
        }
    }
}

#[test]
fn escape_radius_is_sound_for_polynomial_presets() {
    let b = OrbitBudget {
        max_iter: 100,
        ..OrbitBudget::default()
    };
    for p in PRESETS
        .iter()
        .filter(|p| !p.map().h().contains_exp() && !p.map().g().contains_exp())
    {
        let f = p.map();
        let r = polynomial_escape_radius(f.h())
            .unwrap()
            .max(polynomial_escape_radius(f.g()).unwrap())
            + 0.1;
        for k in 0..64 {
            let o = orbit(&f, Complex64::from_polar(r, TAU * k as f64 / 64.0), &b);
            assert_eq!(
                classify_orbit(&o, &b).tag,
                OrbitTag::Escaping,
                "{} at angle {k}",
                p.name
            );
        }
    }
}

#[test]
fn membership_stable_when_budget_doubles() {
    for p in &PRESETS {
        let f = p.map();
        let base = p.budget();
        let mut doubled = base.clone();
        doubled.max_iter *= 2;
        let spec = GridSpec::new(p.window.re_min, p.window.re_max, p.window.im_min, p.window.im_max, 9, 9);
        for j in 0..spec.height {
            for i in 0..spec.width {
                let z = spec.center(i, j);
                if classify_point(&f, z, &base).membership == MembershipTag::JuliaLike {
                    assert_ne!(
                        classify_point(&f, z, &doubled).membership,
                        MembershipTag::FatouLike,
                        "{} at {z}",
                        p.name
                    );
                }
            }
        }
    }
}

#[test]
fn grid_is_identical_across_thread_counts() {
    for p in &PRESETS {
        let f = p.map();
        let spec = GridSpec::new(
            p.window.re_min,
            p.window.re_max,
            p.window.im_min,
            p.window.im_max,
            24,
            24,
        );
        let one = classify_grid_with_threads(&f, &spec, &p.budget(), Some(1)).unwrap();
        for t in [2, 8] {
            let many = classify_grid_with_threads(&f, &spec, &p.budget(), Some(t)).unwrap();
            assert_eq!(many.cells, one.cells, "{} with {t} threads", p.name);
        }
    }
}

#[test]
fn grid_cells_equal_pointwise_calls() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let p = preset("strict-containment").unwrap();
    let f = p.map();
    let spec = GridSpec::centered(3.0, 64);
    let grid = classify_grid_with_threads(&f, &spec, &p.budget(), None).unwrap();
    for _ in 0..50 {
        let (i, j) = (rng.gen_range(0..spec.width), rng.gen_range(0..spec.height));
        assert_eq!(
            *grid.cell(i, j),
            classify_point(&f, spec.center(i, j), &p.budget()),
            "pixel ({i}, {j})"
        );
    }
}

#[test]
fn real_maps_give_mirror_symmetric_grids() {
    for name in ["strict-containment", "empty-julia"] {
        let p = preset(name).unwrap();
        let spec = GridSpec::centered(2.5, 48);
        let grid = classify_grid_with_threads(&p.map(), &spec, &p.budget(), None).unwrap();
        for j in 0..spec.height {
            for i in 0..spec.width {
                assert_eq!(grid.cell(i, j), grid.cell(i, spec.height - 1 - j), "{name} ({i}, {j})");
            }
        }
    }
}
