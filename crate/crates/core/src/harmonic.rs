//! Harmonic maps `f = h + conj(g)` and the operations that build new maps
//! from old ones.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::expr::eval::{add_values, from_finite};
use crate::expr::{CompiledExpr, HolomorphicExpr, LogPolar, MagnitudeGuard, Value};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicMap {
    pub analytic: HolomorphicExpr,
    pub coanalytic: HolomorphicExpr,
}

impl HarmonicMap {
    pub fn new(analytic: HolomorphicExpr, coanalytic: HolomorphicExpr) -> Self {
        HarmonicMap { analytic, coanalytic }
    }

    pub fn parse(h: &str, g: &str) -> Result<Self> {
        Ok(HarmonicMap::new(h.parse()?, g.parse()?))
    }

    /// `h` with a zero co-analytic part.
    pub fn holomorphic(h: HolomorphicExpr) -> Self {
        HarmonicMap::new(h, HolomorphicExpr::zero())
    }

    pub fn h(&self) -> &HolomorphicExpr {
        &self.analytic
    }

    pub fn g(&self) -> &HolomorphicExpr {
        &self.coanalytic
    }

    pub fn has_only_real_constants(&self) -> bool {
        self.analytic.has_only_real_constants() && self.coanalytic.has_only_real_constants()
    }
}

impl fmt::Display for HarmonicMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h = {}, g = {}", self.analytic, self.coanalytic)
    }
}

#[derive(Serialize, Deserialize)]
struct MapText {
    h: String,
    g: String,
}

impl Serialize for HarmonicMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapText {
            h: self.analytic.to_string(),
            g: self.coanalytic.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HarmonicMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = MapText::deserialize(d)?;
        HarmonicMap::parse(&t.h, &t.g).map_err(serde::de::Error::custom)
    }
}

/// `h + conj(g)` from already evaluated parts. Overflow in either part makes
/// the sum an overflow.
pub fn combine_parts(h: Value, g: Value, guard: &MagnitudeGuard) -> Value {
    match (h, g) {
        (Value::Finite(a), Value::Finite(b)) => from_finite(a + b.conj(), guard),
        _ => match add_values(h, g.conj(), guard) {
            v @ Value::Overflow(_) => v,
            Value::Finite(_) => Value::Overflow(LogPolar {
                log_abs: guard.log_threshold(),
                arg: None,
            }),
        },
    }
}

pub fn eval_harmonic(f: &HarmonicMap, z: Complex64, guard: &MagnitudeGuard) -> Value {
    let h = crate::expr::eval_holo(&f.analytic, z, guard);
    let g = crate::expr::eval_holo(&f.coanalytic, z, guard);
    combine_parts(h, g, guard)
}

/// The `p`-th direct-composition iterate `(h^p, g^p)`, as nested `Compose`
/// nodes.
pub fn iterate_map(f: &HarmonicMap, p: u32) -> Result<HarmonicMap> {
    if p == 0 {
        return Err(Error::Precondition("iterate_map needs p >= 1".into()));
    }
    let nest = |e: &HolomorphicExpr| {
        let mut acc = e.clone();
        for _ in 1..p {
            acc = HolomorphicExpr::compose(e.clone(), acc);
        }
        acc
    };
    Ok(HarmonicMap::new(nest(&f.analytic), nest(&f.coanalytic)))
}

/// One cross-composition step: `(h∘g, g∘h)`.
pub fn cross_compose_step(f: &HarmonicMap) -> HarmonicMap {
    HarmonicMap::new(
        HolomorphicExpr::compose(f.analytic.clone(), f.coanalytic.clone()),
        HolomorphicExpr::compose(f.coanalytic.clone(), f.analytic.clone()),
    )
}

/// `a·f + b` written as a harmonic map: `(a·h + b, conj(a)·g)`.
pub fn affine_image(f: &HarmonicMap, a: Complex64, b: Complex64) -> HarmonicMap {
    let h = HolomorphicExpr::add(
        HolomorphicExpr::mul(HolomorphicExpr::Const(a), f.analytic.clone()),
        HolomorphicExpr::Const(b),
    );
    let g = HolomorphicExpr::mul(HolomorphicExpr::Const(a.conj()), f.coanalytic.clone());
    HarmonicMap::new(h, g)
}

/// Both parts compiled for repeated evaluation.
#[derive(Debug)]
pub struct CompiledMap {
    pub h: CompiledExpr,
    pub g: CompiledExpr,
}

impl CompiledMap {
    pub fn new(f: &HarmonicMap) -> Self {
        CompiledMap {
            h: CompiledExpr::new(&f.analytic),
            g: CompiledExpr::new(&f.coanalytic),
        }
    }
}
