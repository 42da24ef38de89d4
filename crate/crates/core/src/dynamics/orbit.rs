//! Orbits under direct composition. The analytic and co-analytic parts are
//! iterated as separate tracks and only summed for output; `f` is never fed
//! back into itself.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::budget::OrbitBudget;
use crate::expr::{modulus, CompiledExpr, HolomorphicExpr, LogPolar, MagnitudeGuard, Value};
use crate::harmonic::{combine_parts, CompiledMap, HarmonicMap};

#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    pub seed: Complex64,
    pub h_track: Vec<Value>,
    pub g_track: Vec<Value>,
    pub f_track: Vec<Value>,
}

impl Orbit {
    /// Number of recorded iterates, including the seed at index 0.
    pub fn len(&self) -> usize {
        self.f_track.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f_track.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitTag {
    Escaping,
    OrbitallyBounded,
    Oscillating,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitClass {
    pub tag: OrbitTag,
    pub exit_index: Option<u32>,
    pub evidence: String,
}

/// One step of a single track. An overflowed track never comes back to a
/// finite value: past the guard threshold the absolute position is lost, so
/// any finite image would be noise. The log-magnitude estimate keeps being
/// refined while it stays meaningful.
#[inline]
pub(crate) fn advance(expr: &CompiledExpr, cur: Value, guard: &MagnitudeGuard) -> Value {
    match cur {
        Value::Finite(_) => expr.eval(cur, guard),
        Value::Overflow(lp) => match expr.eval(cur, guard) {
            v @ Value::Overflow(_) => v,
            Value::Finite(_) => Value::Overflow(LogPolar {
                log_abs: lp.log_abs,
                arg: None,
            }),
        },
    }
}

/// Incremental form of [`classify_orbit`]: feed `|f_n|` for n = 0, 1, ...
#[derive(Clone, Debug)]
pub(crate) struct ClassAcc {
    escape: f64,
    bounded: f64,
    n: u32,
    exit: Option<u32>,
    above_bounded_before_exit: bool,
    later_below: bool,
    later_at_or_below: bool,
}

impl ClassAcc {
    pub(crate) fn new(budget: &OrbitBudget) -> Self {
        ClassAcc {
            escape: budget.escape_radius,
            bounded: budget.bounded_radius,
            n: 0,
            exit: None,
            above_bounded_before_exit: false,
            later_below: false,
            later_at_or_below: false,
        }
    }

    #[inline]
    pub(crate) fn push(&mut self, abs: f64) {
        match self.exit {
            None => {
                if abs > self.escape {
                    self.exit = Some(self.n);
                } else if abs > self.bounded {
                    self.above_bounded_before_exit = true;
                }
            }
            Some(_) => {
                if abs < self.bounded {
                    self.later_below = true;
                }
                if abs <= self.bounded {
                    self.later_at_or_below = true;
                }
            }
        }
        self.n += 1;
    }

    /// Same as pushing `abs` `count` times. Two pushes of one value leave the
    /// state fixed, so the rest only advances the counter.
    pub(crate) fn push_repeat(&mut self, abs: f64, count: u32) {
        for _ in 0..count.min(2) {
            self.push(abs);
        }
        self.n += count.saturating_sub(2);
    }

    pub(crate) fn exit(&self) -> Option<u32> {
        self.exit
    }

    pub(crate) fn tag(&self) -> OrbitTag {
        match self.exit {
            None if !self.above_bounded_before_exit => OrbitTag::OrbitallyBounded,
            None => OrbitTag::Undetermined,
            Some(_) if !self.later_at_or_below => OrbitTag::Escaping,
            Some(_) if self.later_below => OrbitTag::Oscillating,
            Some(_) => OrbitTag::Undetermined,
        }
    }
}

pub(crate) fn orbit_compiled(map: &CompiledMap, z0: Complex64, budget: &OrbitBudget) -> Orbit {
    let guard = &budget.guard;
    let cap = budget.max_iter as usize + 1;
    let mut h_track = Vec::with_capacity(cap);
    let mut g_track = Vec::with_capacity(cap);
    let mut f_track = Vec::with_capacity(cap);
    let mut h = Value::Finite(z0);
    let mut g = Value::Finite(z0);
    let (mut h_fixed, mut g_fixed) = (false, false);
    for n in 0..=budget.max_iter {
        h_track.push(h);
        g_track.push(g);
        // f^0 is the identity; the sum of the parts only describes n >= 1.
        f_track.push(if n == 0 {
            Value::Finite(z0)
        } else {
            combine_parts(h, g, guard)
        });
        if n == budget.max_iter || (h.is_overflow() && g.is_overflow()) {
            break;
        }
        if !h_fixed {
            let next = advance(&map.h, h, guard);
            h_fixed = next == h && !h.is_overflow();
            h = next;
        }
        if !g_fixed {
            let next = advance(&map.g, g, guard);
            g_fixed = next == g && !g.is_overflow();
            g = next;
        }
    }
    Orbit {
        seed: z0,
        h_track,
        g_track,
        f_track,
    }
}

/// Iterates `h` and `g` separately from `z0` for up to `budget.max_iter`
/// steps, stopping early once both tracks have overflowed.
pub fn orbit(f: &HarmonicMap, z0: Complex64, budget: &OrbitBudget) -> Orbit {
    orbit_compiled(&CompiledMap::new(f), z0, budget)
}

pub fn classify_orbit(o: &Orbit, budget: &OrbitBudget) -> OrbitClass {
    let mut acc = ClassAcc::new(budget);
    let mut peak = 0.0f64;
    for v in &o.f_track {
        let a = v.abs();
        peak = peak.max(a);
        acc.push(a);
    }
    let tag = acc.tag();
    let exit = acc.exit();
    let last = o.f_track.last().map_or(0.0, |v| v.abs());
    let evidence = match (tag, exit) {
        (OrbitTag::Escaping, Some(e)) => format!(
            "|f_n| > {} from n = {e}; stays above {} through n = {}",
            budget.escape_radius,
            budget.bounded_radius,
            o.len() - 1
        ),
        (OrbitTag::Oscillating, Some(e)) => format!(
            "|f_n| > {} at n = {e}, later back below {}",
            budget.escape_radius, budget.bounded_radius
        ),
        (OrbitTag::OrbitallyBounded, _) => format!(
            "max |f_n| = {peak} <= {} over {} iterates; last |f_n| = {last}",
            budget.bounded_radius,
            o.len()
        ),
        _ => format!(
            "max |f_n| = {peak}; neither bounded by {} nor escaping past {} for good",
            budget.bounded_radius, budget.escape_radius
        ),
    };
    OrbitClass {
        tag,
        exit_index: exit,
        evidence,
    }
}

/// Whether the orbit of `z` under `g` alone stays within `bounded_radius` for
/// `max_iter` steps (membership in the filled set K(g)).
pub fn in_filled_set(g: &HolomorphicExpr, z: Complex64, budget: &OrbitBudget) -> bool {
    let ce = CompiledExpr::new(g);
    let guard = &budget.guard;
    let mut w = Value::Finite(z);
    for n in 0..=budget.max_iter {
        if w.abs() > budget.bounded_radius {
            return false;
        }
        if n == budget.max_iter {
            break;
        }
        let next = advance(&ce, w, guard);
        if next == w {
            return true;
        }
        w = next;
    }
    true
}

/// First index at which `f_n` is within `tol` of the final recorded value.
/// `None` when the final value is an overflow.
pub fn settle_index(f_track: &[Value], tol: f64) -> Option<u32> {
    let last = f_track.last()?.finite()?;
    f_track
        .iter()
        .position(|v| v.finite().is_some_and(|w| modulus(w - last) < tol))
        .map(|p| p as u32)
}
