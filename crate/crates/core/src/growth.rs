//! Growth of entire functions: maximum and minimum modulus on circles, order
//! and type estimates, and a numerical audit of the growth hypotheses that
//! force bounded Fatou components.
//!
//! Every modulus is carried as a natural logarithm. `M(r, exp)` is `e^r`, which
//! leaves double precision at `r ≈ 710`, while its logarithm stays small.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::advance;
use crate::expr::{derivative, CompiledExpr, HolomorphicExpr, MagnitudeGuard, Value};
use crate::harmonic::HarmonicMap;
use crate::{Error, Result};

/// Circle samples used when the caller does not choose.
pub const DEFAULT_SAMPLES: usize = 1024;
/// Fewest circle samples accepted.
pub const MIN_SAMPLES: usize = 64;
/// Largest `log r` for which the circle `|z| = r` can still be sampled.
pub const MAX_LOG_RADIUS: f64 = 690.0;
/// Candidate radii tried per step when searching for `σ_k`.
pub const SIGMA_CANDIDATES: usize = 64;

fn check_circle(r: f64, samples: usize) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::Precondition(format!(
            "at least {MIN_SAMPLES} circle samples are needed, got {samples}"
        )));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Precondition(format!(
            "radius must be positive and finite, got {r}"
        )));
    }
    Ok(())
}

/// `k`-th of `n` equally spaced points on `|z| = r`, starting on the positive
/// real axis. Doubling `n` reproduces every previous point bit for bit.
fn circle_point(r: f64, k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(r, TAU * k as f64 / n as f64)
}

/// `log|h|` on the circle, sample by sample.
fn circle_logs(h: &CompiledExpr, r: f64, samples: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
    let guard = MagnitudeGuard::default();
    (0..samples).map(move |k| (k, h.eval(Value::Finite(circle_point(r, k, samples)), &guard).log_abs()))
}

fn log_max(h: &CompiledExpr, r: f64, samples: usize) -> f64 {
    circle_logs(h, r, samples)
        .map(|(_, l)| l)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `log M(r, h)`: the largest `log|h|` over `samples` equally spaced points of
/// `|z| = r`. By the maximum principle this is the maximum over the disc.
pub fn max_modulus(h: &HolomorphicExpr, r: f64, samples: usize) -> Result<f64> {
    check_circle(r, samples)?;
    Ok(log_max(&CompiledExpr::new(h), r, samples))
}

/// `log m(r, h)`: the smallest `log|h|` over the sampled circle.
pub fn min_modulus(h: &HolomorphicExpr, r: f64, samples: usize) -> Result<f64> {
    Ok(min_modulus_detail(h, r, samples)?.log_min)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinModulus {
    pub log_min: f64,
    /// Sample attaining the minimum.
    pub at: Complex64,
    /// A zero of `h` may lie within one sample spacing of `at`: the Newton
    /// distance `|h|/|h'|` there is below the arc length between samples.
    pub near_zero: bool,
}

pub fn min_modulus_detail(h: &HolomorphicExpr, r: f64, samples: usize) -> Result<MinModulus> {
    check_circle(r, samples)?;
    let compiled = CompiledExpr::new(h);
    let (k, log_min) =
        circle_logs(&compiled, r, samples).fold(
            (0, f64::INFINITY),
            |best, cur| {
                if cur.1 < best.1 {
                    cur
                } else {
                    best
                }
            },
        );
    let at = circle_point(r, k, samples);
    let guard = MagnitudeGuard::default();
    let log_slope = CompiledExpr::new(&derivative(h))
        .eval(Value::Finite(at), &guard)
        .log_abs();
    let spacing = TAU * r / samples as f64;
    let near_zero = log_min == f64::NEG_INFINITY || log_min < log_slope + spacing.ln();
    Ok(MinModulus { log_min, at, near_zero })
}

fn check_radii(radii: &[f64], min_len: usize) -> Result<()> {
    if radii.len() < min_len {
        return Err(Error::Precondition(format!(
            "need at least {min_len} radii, got {}",
            radii.len()
        )));
    }
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::Precondition("radii must be positive and finite".into()));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("radii must be strictly increasing".into()));
    }
    Ok(())
}

fn order_from_logs(radii: &[f64], log_max: &[f64]) -> Result<f64> {
    if let Some((r, l)) = radii.iter().zip(log_max).find(|(_, l)| !(**l > 1.0)) {
        return Err(Error::Domain(format!(
            "log log M(r) is undefined at r = {r}: log M = {l} is not above 1"
        )));
    }
    let start = radii.len() / 2;
    Ok(radii[start..]
        .iter()
        .zip(&log_max[start..])
        .map(|(r, l)| l.ln() / r.ln())
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Finite-radius stand-in for `limsup log log M(r) / log r`: the largest
/// ratio over the last half of `radii`.
pub fn order_estimate(h: &HolomorphicExpr, radii: &[f64]) -> Result<f64> {
    check_radii(radii, 5)?;
    let compiled = CompiledExpr::new(h);
    let logs: Vec<f64> = radii.iter().map(|&r| log_max(&compiled, r, DEFAULT_SAMPLES)).collect();
    order_from_logs(radii, &logs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimalTypeCheck {
    /// `log M(r) / r^order` at every radius.
    pub ratio_tail: Vec<f64>,
    /// The ratios decrease strictly and the last is below half the first.
    pub trending_to_zero: bool,
}

fn type_ratios(radii: &[f64], log_max: &[f64], order: f64) -> MinimalTypeCheck {
    let ratio_tail: Vec<f64> = radii
        .iter()
        .zip(log_max)
        .map(|(r, l)| l * (-order * r.ln()).exp())
        .collect();
    let decreasing = ratio_tail.windows(2).all(|w| w[1] < w[0]);
    let trending_to_zero = match (ratio_tail.first(), ratio_tail.last()) {
        (Some(first), Some(last)) if ratio_tail.len() >= 2 => decreasing && *last < 0.5 * first,
        _ => false,
    };
    MinimalTypeCheck {
        ratio_tail,
        trending_to_zero,
    }
}

/// Minimal type means `log M(r) / r^ρ → 0`.
pub fn minimal_type_check(h: &HolomorphicExpr, order: f64, radii: &[f64]) -> Result<MinimalTypeCheck> {
    if !(order.is_finite() && order > 0.0) {
        return Err(Error::Precondition(format!(
            "type is only defined for positive order, got {order}"
        )));
    }
    check_radii(radii, 2)?;
    let compiled = CompiledExpr::new(h);
    let logs: Vec<f64> = radii.iter().map(|&r| log_max(&compiled, r, DEFAULT_SAMPLES)).collect();
    Ok(type_ratios(radii, &logs, order))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub expression: String,
    pub radii: Vec<f64>,
    pub log_max_modulus: Vec<f64>,
    pub log_min_modulus: Vec<f64>,
    pub order_estimate: f64,
    /// `log M(r) / r^order` over the last half of the radii; empty when the
    /// estimated order is not positive.
    pub type_ratio_tail: Vec<f64>,
    pub trending_to_zero: Option<bool>,
}

pub fn growth_profile(h: &HolomorphicExpr, radii: &[f64], samples: usize) -> Result<GrowthProfile> {
    check_radii(radii, 5)?;
    check_circle(radii[0], samples)?;
    let compiled = CompiledExpr::new(h);
    let log_max_modulus: Vec<f64> = radii.iter().map(|&r| log_max(&compiled, r, samples)).collect();
    let log_min_modulus = radii
        .iter()
        .map(|&r| {
            circle_logs(&compiled, r, samples)
                .map(|(_, l)| l)
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let order = order_from_logs(radii, &log_max_modulus)?;
    let (type_ratio_tail, trending_to_zero) = if order > 0.0 {
        let start = radii.len() / 2;
        let t = type_ratios(&radii[start..], &log_max_modulus[start..], order);
        (t.ratio_tail, Some(t.trending_to_zero))
    } else {
        (Vec::new(), None)
    };
    Ok(GrowthProfile {
        expression: h.to_string(),
        radii: radii.to_vec(),
        log_max_modulus,
        log_min_modulus,
        order_estimate: order,
        type_ratio_tail,
        trending_to_zero,
    })
}

/// Inputs for [`bounded_component_check`]. `s` is the constant exponent used
/// for every step of the radius sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundedComponentParams {
    pub r0: f64,
    pub s: f64,
    pub k_max: u32,
    pub sample_points: Vec<Complex64>,
    pub n_max: u32,
    pub circle_samples: usize,
    /// Forward invariance of the Fatou and Julia sets; not decidable here.
    pub forward_invariance_asserted: bool,
    /// The Julia set has at least two points; not decidable here.
    pub julia_two_points_asserted: bool,
}

impl BoundedComponentParams {
    pub fn new(r0: f64, s: f64, k_max: u32) -> Self {
        BoundedComponentParams {
            r0,
            s,
            k_max,
            sample_points: Vec::new(),
            n_max: 0,
            circle_samples: DEFAULT_SAMPLES,
            forward_invariance_asserted: false,
            julia_two_points_asserted: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceCounterexample {
    pub point: Complex64,
    pub n: u32,
    pub log_abs_g: f64,
    pub log_abs_h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundedComponentReport {
    pub expression_h: String,
    pub expression_g: String,
    pub s_value: f64,
    /// `log r_k` with `r_{k+1} = M(r_k, h)`.
    pub log_r_sequence: Vec<f64>,
    /// Set when the sequence stopped before `k_max` because `r_k` left the
    /// range that can be sampled.
    pub sequence_truncated: bool,
    /// Per `k`: the smallest sampled `log σ_k` in `[log r_k, s log r_k]` with
    /// `log m(σ_k, h) > s log r_{k+1}`.
    pub log_sigma_found: Vec<Option<f64>>,
    /// Best `log m(σ, h) - s log r_{k+1}` seen per `k` (positive when found).
    pub sigma_margin: Vec<f64>,
    /// `|g^n(z)| <= |h^n(z)|` at every sample point for `1 <= n <= n_max`.
    pub condition3_holds: bool,
    pub condition3_counterexample: Option<DominanceCounterexample>,
    pub first_failing_k: Option<u32>,
    /// Largest `k` such that a `σ_j` was found for every `j <= k` and the
    /// dominance condition holds.
    pub all_conditions_met_up_to_k: Option<u32>,
    pub forward_invariance_asserted: bool,
    pub julia_two_points_asserted: bool,
}

/// Numerical audit of the growth conditions
/// `M(r_k, h) = r_{k+1}`, `r_k <= σ_k <= r_k^s`, `m(σ_k, h) > r_{k+1}^s`
/// and `|g^n| <= |h^n|` for a transcendental `h`.
pub fn bounded_component_check(f: &HarmonicMap, params: &BoundedComponentParams) -> Result<BoundedComponentReport> {
    let h = &f.analytic;
    if !h.contains_exp() {
        return Err(Error::NotTranscendental);
    }
    let p = params;
    if !(p.r0.is_finite() && p.r0 > 1.0) {
        return Err(Error::Precondition(format!("r0 must exceed 1, got {}", p.r0)));
    }
    if !(p.s.is_finite() && p.s > 1.0) {
        return Err(Error::Precondition(format!("s must exceed 1, got {}", p.s)));
    }
    check_circle(p.r0, p.circle_samples)?;

    let compiled = CompiledExpr::new(h);
    let mut log_r = vec![p.r0.ln()];
    let mut truncated = false;
    while log_r.len() <= p.k_max as usize {
        let last = *log_r.last().unwrap();
        if last > MAX_LOG_RADIUS {
            truncated = true;
            break;
        }
        log_r.push(log_max(&compiled, last.exp(), p.circle_samples));
    }

    let mut log_sigma_found = Vec::new();
    let mut sigma_margin = Vec::new();
    for k in 0..log_r.len() - 1 {
        let (lo, target) = (log_r[k], p.s * log_r[k + 1]);
        let hi = p.s * lo;
        let mut found = None;
        let mut best = f64::NEG_INFINITY;
        for j in 0..SIGMA_CANDIDATES {
            let ls = lo + (hi - lo) * j as f64 / (SIGMA_CANDIDATES - 1) as f64;
            if ls > MAX_LOG_RADIUS {
                break;
            }
            let m = circle_logs(&compiled, ls.exp(), p.circle_samples)
                .map(|(_, l)| l)
                .fold(f64::INFINITY, f64::min);
            best = best.max(m - target);
            if m > target {
                found = Some(ls);
                break;
            }
        }
        log_sigma_found.push(found);
        sigma_margin.push(best);
    }

    let counterexample = dominance_counterexample(f, &p.sample_points, p.n_max);
    let condition3_holds = counterexample.is_none();
    let first_failing_k = log_sigma_found.iter().position(Option::is_none).map(|k| k as u32);
    let found_through = first_failing_k.unwrap_or(log_sigma_found.len() as u32);
    let all_conditions_met_up_to_k = (condition3_holds && found_through > 0).then(|| found_through - 1);

    Ok(BoundedComponentReport {
        expression_h: h.to_string(),
        expression_g: f.coanalytic.to_string(),
        s_value: p.s,
        log_r_sequence: log_r,
        sequence_truncated: truncated,
        log_sigma_found,
        sigma_margin,
        condition3_holds,
        condition3_counterexample: counterexample,
        first_failing_k,
        all_conditions_met_up_to_k,
        forward_invariance_asserted: p.forward_invariance_asserted,
        julia_two_points_asserted: p.julia_two_points_asserted,
    })
}

fn dominance_counterexample(f: &HarmonicMap, points: &[Complex64], n_max: u32) -> Option<DominanceCounterexample> {
    let guard = MagnitudeGuard::default();
    let (hc, gc) = (CompiledExpr::new(&f.analytic), CompiledExpr::new(&f.coanalytic));
    points.iter().find_map(|&z| {
        let (mut hv, mut gv) = (Value::Finite(z), Value::Finite(z));
        (1..=n_max).find_map(|n| {
            hv = advance(&hc, hv, &guard);
            gv = advance(&gc, gv, &guard);
            let (lg, lh) = (gv.log_abs(), hv.log_abs());
            (!(lg <= lh)).then_some(DominanceCounterexample {
                point: z,
                n,
                log_abs_g: lg,
                log_abs_h: lh,
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expr(s: &str) -> HolomorphicExpr {
        s.parse().unwrap()
    }

    fn dense_log_max(h: &HolomorphicExpr, r: f64, n: usize) -> f64 {
        let guard = MagnitudeGuard::default();
        (0..n)
            .map(|k| crate::eval_holo(h, circle_point(r, k, n), &guard).log_abs())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn max_modulus_examples() {
        assert!((max_modulus(&expr("z^2"), 3.0, 64).unwrap() - 9f64.ln()).abs() < 1e-14);
        assert!((max_modulus(&expr("exp(z)"), 2.0, 64).unwrap() - 2.0).abs() < 1e-6);
        let h = expr("z - 1 + exp(-z)");
        let got = max_modulus(&h, 1.0, 1024).unwrap();
        let oracle = dense_log_max(&h, 1.0, 100_000);
        assert!(((got - oracle) / oracle).abs() < 1e-4);
    }

    #[test]
    fn min_modulus_examples() {
        assert!((min_modulus(&expr("z^2"), 3.0, 64).unwrap() - 9f64.ln()).abs() < 1e-14);
        assert!((min_modulus(&expr("exp(z)"), 2.0, 64).unwrap() + 2.0).abs() < 1e-6);
        let d = min_modulus_detail(&expr("z - 1 + exp(-z)"), 8.0, 1024).unwrap();
        assert!(d.log_min.is_finite());
    }

    #[test]
    fn near_zero_flags_a_root_on_the_circle() {
        let d = min_modulus_detail(&expr("z - 2"), 2.0, 64).unwrap();
        assert!(d.near_zero);
        let d = min_modulus_detail(&expr("z - 2"), 4.0, 64).unwrap();
        assert!(!d.near_zero);
    }

    #[test]
    fn too_few_samples() {
        assert!(max_modulus(&expr("z"), 1.0, 63).is_err());
        assert!(min_modulus(&expr("z"), 0.0, 64).is_err());
    }

    #[test]
    fn order_of_exponentials() {
        let radii: Vec<f64> = (0..8).map(|k| 10f64 * 1.9f64.powi(k)).collect();
        assert!((order_estimate(&expr("exp(z)"), &radii).unwrap() - 1.0).abs() < 0.05);
        let radii: Vec<f64> = (0..8).map(|k| 10.0 + 90.0 * k as f64 / 7.0).collect();
        assert!((order_estimate(&expr("exp(z^2)"), &radii).unwrap() - 2.0).abs() < 0.1);
    }

    #[test]
    fn order_of_cube_matches_formula_and_falls() {
        let radii: Vec<f64> = (1..=6).map(|k| 10f64.powi(k)).collect();
        let got = order_estimate(&expr("z^3"), &radii).unwrap();
        let formula = radii[3..]
            .iter()
            .map(|r| (3.0 * r.ln()).ln() / r.ln())
            .fold(0.0, f64::max);
        assert!((got - formula).abs() < 1e-12);
        let far: Vec<f64> = (7..=12).map(|k| 10f64.powi(k)).collect();
        let later = order_estimate(&expr("z^3"), &far).unwrap();
        assert!(later < got);
    }

    #[test]
    fn order_needs_large_modulus() {
        let radii = [1.0, 1.1, 1.2, 1.3, 1.4];
        assert!(matches!(order_estimate(&expr("z"), &radii), Err(Error::Domain(_))));
        assert!(order_estimate(&expr("z"), &[2.0, 3.0]).is_err());
    }

    #[test]
    fn minimal_type_examples() {
        let radii: Vec<f64> = (1..=6).map(|k| 10f64.powi(k)).collect();
        let e = minimal_type_check(&expr("exp(z)"), 1.0, &radii).unwrap();
        assert!(e.ratio_tail.iter().all(|r| (r - 1.0).abs() < 1e-12));
        assert!(!e.trending_to_zero);
        let c = minimal_type_check(&expr("z^3"), 1.0, &radii).unwrap();
        for (r, q) in radii.iter().zip(&c.ratio_tail) {
            assert!((q - 3.0 * r.ln() / r).abs() < 1e-12 * q);
        }
        assert!(c.trending_to_zero);
        assert!(minimal_type_check(&expr("5"), 0.0, &radii).is_err());
    }

    #[test]
    fn exp_fails_the_minimum_modulus_condition_at_first_step() {
        let f = HarmonicMap::new(expr("exp(z)"), HolomorphicExpr::zero());
        let mut p = BoundedComponentParams::new(2.0, 1.5, 3);
        p.sample_points = vec![Complex64::new(0.5, 0.5), Complex64::new(-1.0, 0.2)];
        p.n_max = 6;
        let rep = bounded_component_check(&f, &p).unwrap();
        assert!(rep.condition3_holds);
        assert_eq!(rep.first_failing_k, Some(0));
        assert_eq!(rep.all_conditions_met_up_to_k, None);
        assert!((rep.log_r_sequence[1] - 2.0).abs() < 1e-9);
        assert!(rep.sigma_margin[0] < 0.0);
    }

    #[test]
    fn polynomial_is_rejected() {
        let f = HarmonicMap::parse("z^2", "0").unwrap();
        let p = BoundedComponentParams::new(2.0, 1.5, 3);
        assert!(matches!(bounded_component_check(&f, &p), Err(Error::NotTranscendental)));
    }

    #[test]
    fn radius_sequence_matches_dense_oracle() {
        let h = expr("z - 1 + exp(-z)");
        let f = HarmonicMap::new(h.clone(), HolomorphicExpr::zero());
        let rep = bounded_component_check(&f, &BoundedComponentParams::new(4.0, 1.2, 3)).unwrap();
        assert_eq!(rep.log_r_sequence.len(), 4);
        let mut lr = 4f64.ln();
        for k in 1..4 {
            let next = dense_log_max(&h, lr.exp(), 100_000);
            assert!(((rep.log_r_sequence[k] - next) / next).abs() < 1e-3, "k = {k}");
            lr = rep.log_r_sequence[k];
        }
    }

    #[test]
    fn dominance_failure_is_reported() {
        let f = HarmonicMap::parse("exp(z)", "2*z").unwrap();
        let mut p = BoundedComponentParams::new(2.0, 1.5, 1);
        p.sample_points = vec![Complex64::new(-3.0, 0.0)];
        p.n_max = 3;
        let rep = bounded_component_check(&f, &p).unwrap();
        assert!(!rep.condition3_holds);
        assert_eq!(rep.condition3_counterexample.unwrap().n, 1);
        assert_eq!(rep.all_conditions_met_up_to_k, None);
    }
}
