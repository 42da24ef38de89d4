//! Algebraic identities that can be checked pointwise: fixed points and their
//! multipliers, permutability, the closed form for affine images, and escape
//! radii of polynomials.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::expr::{derivative, eval_holo, HolomorphicExpr, MagnitudeGuard, Polynomial, Value};
use crate::harmonic::{combine_parts, CompiledMap, HarmonicMap};
use crate::{Error, Result};

use super::orbit::advance;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointCheck {
    pub is_fixed: bool,
    pub multiplier_modulus: f64,
    pub attracting: bool,
}

pub fn check_attracting_fixed_point(expr: &HolomorphicExpr, z_star: Complex64) -> FixedPointCheck {
    let guard = MagnitudeGuard::default();
    let is_fixed = match eval_holo(expr, z_star, &guard) {
        Value::Finite(w) => (w - z_star).norm() < 1e-9,
        Value::Overflow(_) => false,
    };
    let multiplier_modulus = eval_holo(&derivative(expr), z_star, &guard).abs();
    FixedPointCheck {
        is_fixed,
        multiplier_modulus,
        attracting: is_fixed && multiplier_modulus < 1.0,
    }
}

/// Whether `h1∘h2 = h2∘h1` and `g1∘g2 = g2∘g1` to within `tol` at every
/// sample. An overflow at any sample counts as a failure.
pub fn check_permutable(f1: &HarmonicMap, f2: &HarmonicMap, samples: &[Complex64], tol: f64) -> bool {
    let guard = MagnitudeGuard::default();
    let pairs = [(&f1.analytic, &f2.analytic), (&f1.coanalytic, &f2.coanalytic)];
    pairs.iter().all(|(p, q)| {
        let pq = HolomorphicExpr::compose((*p).clone(), (*q).clone());
        let qp = HolomorphicExpr::compose((*q).clone(), (*p).clone());
        samples
            .iter()
            .all(|&z| match (eval_holo(&pq, z, &guard), eval_holo(&qp, z, &guard)) {
                (Value::Finite(a), Value::Finite(b)) => (a - b).norm() <= tol,
                _ => false,
            })
    })
}

/// `f2^n(z)` for `f2 = a·f1 + b` with `|a| = 1`, through the closed form
/// `a^n h1^n(z) + b(a^(n-1) + ... + 1) + conj(conj(a)^n g1^n(z))` for
/// `n >= 1`; `n = 0` gives `z`.
pub fn closed_form_affine_orbit(f1: &HarmonicMap, a: Complex64, b: Complex64, n: u32, z: Complex64) -> Result<Value> {
    if (a.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!("|a| must be 1, got {}", a.norm())));
    }
    if n == 0 {
        return Ok(Value::Finite(z));
    }
    let guard = MagnitudeGuard::default();
    let map = CompiledMap::new(f1);
    let mut h = Value::Finite(z);
    let mut g = Value::Finite(z);
    for _ in 0..n {
        h = advance(&map.h, h, &guard);
        g = advance(&map.g, g, &guard);
    }
    let an = a.powu(n);
    let geometric: Complex64 = (0..n).map(|k| a.powu(k)).sum();
    let scale = |v: Value, s: Complex64| match v {
        Value::Finite(w) => Value::Finite(w * s),
        // |s| = 1, so only the phase moves.
        Value::Overflow(mut lp) => {
            lp.arg = lp.arg.map(|t| t + s.arg());
            Value::Overflow(lp)
        }
    };
    let hn = scale(h, an);
    let gn = scale(g, an.conj());
    let shifted = match hn {
        Value::Finite(w) => Value::Finite(w + b * geometric),
        other => other,
    };
    Ok(combine_parts(shifted, gn, &guard))
}

/// Radius beyond which the orbit of `p` escapes monotonically, from the
/// coefficient bound on the expanded polynomial.
pub fn polynomial_escape_radius(p: &HolomorphicExpr) -> Result<f64> {
    let poly = Polynomial::from_expr(p)?;
    let d = poly.degree();
    let coeffs = poly.coeffs();
    let lead = poly.leading().norm();
    match d {
        0 => Err(Error::Domain("constant polynomial has no escaping orbits".into())),
        1 => {
            if lead <= 1.0 {
                Err(Error::Domain(format!(
                    "degree-1 polynomial with |a_1| = {lead} <= 1 has no escape radius"
                )))
            } else {
                Ok(((1.0 + coeffs[0].norm()) / (lead - 1.0)).max(2.0))
            }
        }
        _ => {
            let lower: f64 = coeffs[..d].iter().map(|c| c.norm()).sum();
            Ok(((1.0 + lower) / lead).max(2.0))
        }
    }
}
