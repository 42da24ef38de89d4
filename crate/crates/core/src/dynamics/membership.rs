//! Pointwise Fatou/Julia verdicts from a ladder of shrinking neighbourhoods.
//!
//! Normality is a limit statement, so the verdict is a proxy: sample circles
//! of radius δ around the point, iterate every sample, and ask whether the
//! iterates stay together (convergent family), all run off to infinity
//! together (compact divergence), or come apart at every scale.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::budget::OrbitBudget;
use super::orbit::{advance, ClassAcc, OrbitTag};
use crate::expr::{modulus, Value};
use crate::harmonic::{combine_parts, CompiledMap, HarmonicMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MembershipTag {
    FatouLike,
    JuliaLike,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FatouMode {
    ConvergentFamily,
    CompactDivergence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub tag: MembershipTag,
    pub mode: Option<FatouMode>,
    /// `sup_n |f^n(z_j) - f^n(z0)|` over the samples of each rung, in ladder
    /// order. Infinite when either orbit overflows.
    pub max_separation_per_delta: Vec<f64>,
}

/// Everything the grid keeps about a pixel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointVerdict {
    pub membership: MembershipTag,
    pub mode: Option<FatouMode>,
    pub orbit_class: OrbitTag,
    pub exit_index: Option<u32>,
    pub settle_index: Option<u32>,
}

pub(crate) const SETTLE_TOLERANCE: f64 = 1e-3;

/// Streams `f_n` for one seed, with `f_0` the seed itself. A track stops being evaluated once it has
/// overflowed or reached an exact fixed point. After either track overflows
/// `f` is an overflow for good, and once both are fixed `f` is constant, so
/// the rest of the orbit is known without further evaluation.
struct Stepper<'a> {
    map: &'a CompiledMap,
    budget: &'a OrbitBudget,
    seed: Complex64,
    at_seed: bool,
    h: Value,
    g: Value,
    h_fixed: bool,
    g_fixed: bool,
}

impl<'a> Stepper<'a> {
    fn new(map: &'a CompiledMap, z: Complex64, budget: &'a OrbitBudget) -> Self {
        Stepper {
            map,
            budget,
            seed: z,
            at_seed: true,
            h: Value::Finite(z),
            g: Value::Finite(z),
            h_fixed: false,
            g_fixed: false,
        }
    }

    /// Current `f_n`, `None` for an overflow.
    #[inline]
    fn current(&self) -> Option<Complex64> {
        if self.at_seed {
            return Some(self.seed);
        }
        if self.h.is_overflow() || self.g.is_overflow() {
            return None;
        }
        combine_parts(self.h, self.g, &self.budget.guard).finite()
    }

    #[inline]
    fn settled(&self) -> bool {
        self.h.is_overflow() || self.g.is_overflow() || (self.h_fixed && self.g_fixed)
    }

    #[inline]
    fn step(&mut self) {
        self.at_seed = false;
        let guard = &self.budget.guard;
        if !self.h_fixed {
            let next = advance(&self.map.h, self.h, guard);
            self.h_fixed = next == self.h;
            self.h = next;
        }
        if !self.g_fixed {
            let next = advance(&self.map.g, self.g, guard);
            self.g_fixed = next == self.g;
            self.g = next;
        }
    }
}

#[inline]
fn magnitude(f: Option<Complex64>) -> f64 {
    f.map_or(f64::INFINITY, modulus)
}

#[inline]
fn distance(a: Option<Complex64>, b: Option<Complex64>) -> f64 {
    match (a, b) {
        (Some(x), Some(y)) => modulus(x - y),
        _ => f64::INFINITY,
    }
}

struct Center {
    /// `f_n` for n = 0..=max_iter.
    f: Vec<Option<Complex64>>,
    /// Index from which `f` is constant.
    constant_from: usize,
    tag: OrbitTag,
    exit: Option<u32>,
}

fn center(map: &CompiledMap, z0: Complex64, budget: &OrbitBudget) -> Center {
    let max_iter = budget.max_iter as usize;
    let mut s = Stepper::new(map, z0, budget);
    let mut f = Vec::with_capacity(max_iter + 1);
    let mut acc = ClassAcc::new(budget);
    let constant_from = loop {
        let v = s.current();
        f.push(v);
        acc.push(magnitude(v));
        if f.len() > max_iter {
            break max_iter;
        }
        if s.settled() {
            let at = f.len() - 1;
            acc.push_repeat(magnitude(v), (max_iter - at) as u32);
            f.resize(max_iter + 1, v);
            break at;
        }
        s.step();
    };
    Center {
        f,
        constant_from,
        tag: acc.tag(),
        exit: acc.exit(),
    }
}

/// Class of one sample orbit and its separation from the centre orbit.
fn sample(map: &CompiledMap, z: Complex64, budget: &OrbitBudget, center: &Center) -> (OrbitTag, f64) {
    let max_iter = budget.max_iter;
    let mut acc = ClassAcc::new(budget);
    let mut sep = 0.0f64;
    let mut s = Stepper::new(map, z, budget);
    let mut n = 0u32;
    loop {
        let f = s.current();
        acc.push(magnitude(f));
        sep = sep.max(distance(f, center.f[n as usize]));
        if n == max_iter {
            break;
        }
        if s.settled() {
            acc.push_repeat(magnitude(f), max_iter - n);
            if sep.is_finite() {
                // Both orbits are constant past `tail`.
                let next = n as usize + 1;
                let tail = center.constant_from.max(next);
                for c in &center.f[next..=tail.min(max_iter as usize)] {
                    sep = sep.max(distance(f, *c));
                }
            }
            break;
        }
        s.step();
        n += 1;
    }
    (acc.tag(), sep)
}

fn circle_point(z0: Complex64, delta: f64, k: u32, count: u32) -> Complex64 {
    z0 + Complex64::from_polar(delta, TAU * k as f64 / count as f64)
}

/// Shared core. With `exhaustive` every sample is run and the separations
/// are exact; without it sampling stops as soon as the tag is decided, and
/// the separations are partial.
fn classify(map: &CompiledMap, z0: Complex64, budget: &OrbitBudget, exhaustive: bool) -> (Membership, Center) {
    let c = center(map, z0, budget);
    let eps = budget.separation_epsilon;
    let ladder = &budget.delta_ladder;
    let mut seps = vec![0.0; ladder.len()];
    let mut all_escaping = c.tag == OrbitTag::Escaping;
    let mut all_bounded = c.tag == OrbitTag::OrbitallyBounded;
    // Convergent family also needs a small separation on the smallest rung.
    let mut convergent_possible = all_bounded;
    let mut julia_possible = true;
    let mut decided_early = false;

    // Smallest rung first: it decides the convergent-family case.
    'rungs: for (r, &delta) in ladder.iter().enumerate().rev() {
        let smallest = r + 1 == ladder.len();
        let mut sep = 0.0f64;
        let mut mixed = false;
        for k in 0..budget.sample_count {
            if !exhaustive {
                let rung_done = sep > eps && (mixed || sep > 2.0 * delta);
                if !all_escaping && !convergent_possible {
                    if !julia_possible {
                        decided_early = true;
                        break 'rungs;
                    }
                    if rung_done {
                        break;
                    }
                }
            }
            let z = circle_point(z0, delta, k, budget.sample_count);
            let (tag, s) = sample(map, z, budget, &c);
            sep = sep.max(s);
            all_escaping &= tag == OrbitTag::Escaping;
            all_bounded &= tag == OrbitTag::OrbitallyBounded;
            convergent_possible &= tag == OrbitTag::OrbitallyBounded;
            if smallest && sep > eps {
                convergent_possible = false;
            }
            mixed |= (c.tag == OrbitTag::OrbitallyBounded && tag == OrbitTag::Escaping)
                || (c.tag == OrbitTag::Escaping && tag == OrbitTag::OrbitallyBounded);
        }
        seps[r] = sep;
        julia_possible &= sep > eps && (mixed || sep > 2.0 * delta);
    }

    let (tag, mode) = if decided_early {
        (MembershipTag::Undetermined, None)
    } else if all_escaping {
        (MembershipTag::FatouLike, Some(FatouMode::CompactDivergence))
    } else if all_bounded && convergent_possible && seps[ladder.len() - 1] <= eps {
        (MembershipTag::FatouLike, Some(FatouMode::ConvergentFamily))
    } else if julia_possible {
        (MembershipTag::JuliaLike, None)
    } else {
        (MembershipTag::Undetermined, None)
    };
    (
        Membership {
            tag,
            mode,
            max_separation_per_delta: seps,
        },
        c,
    )
}

pub fn fatou_membership(f: &HarmonicMap, z0: Complex64, budget: &OrbitBudget) -> Membership {
    classify(&CompiledMap::new(f), z0, budget, true).0
}

/// The grid's per-pixel work: the membership tag (identical to
/// [`fatou_membership`]) plus the centre orbit's class and indices.
pub(crate) fn point_verdict(map: &CompiledMap, z0: Complex64, budget: &OrbitBudget) -> PointVerdict {
    let (m, c) = classify(map, z0, budget, false);
    let last = c.f.last().copied().flatten();
    let settle = last.and_then(|l| {
        c.f.iter()
            .position(|v| v.is_some_and(|w| modulus(w - l) < SETTLE_TOLERANCE))
            .map(|p| p as u32)
    });
    PointVerdict {
        membership: m.tag,
        mode: m.mode,
        orbit_class: c.tag,
        exit_index: c.exit,
        settle_index: settle,
    }
}

/// [`point_verdict`] for a map that has not been compiled yet.
pub fn classify_point(f: &HarmonicMap, z0: Complex64, budget: &OrbitBudget) -> PointVerdict {
    point_verdict(&CompiledMap::new(f), z0, budget)
}
