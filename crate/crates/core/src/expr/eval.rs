//! Evaluation with magnitude guarding.
//!
//! Iterating `z^2` reaches `2^(2^n)` within a handful of steps, so values past
//! the guard threshold are carried in log-polar form (`log|w|`, `arg w`) rather
//! than as floating point infinities. Evaluation first runs a plain `Complex64`
//! closure; only when that result is non-finite or past the threshold does the
//! slower log-aware tree walk run.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::HolomorphicExpr;

/// `log|e^w|` beyond which the phase of `e^w` is meaningless in double precision.
const PHASE_LIMIT: f64 = 1e15;
/// Relative size below which the smaller summand cannot affect the larger one.
const NEGLIGIBLE_LOG_RATIO: f64 = -60.0;
/// Largest exponent for which `f64::exp` is finite.
const EXP_LIMIT: f64 = 709.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MagnitudeGuard {
    pub overflow_threshold: f64,
    pub log_mode: bool,
}

impl Default for MagnitudeGuard {
    fn default() -> Self {
        MagnitudeGuard {
            overflow_threshold: 1e150,
            log_mode: true,
        }
    }
}

impl MagnitudeGuard {
    pub fn validate(&self) -> crate::Result<()> {
        let t = self.overflow_threshold;
        if !(t.is_finite() && t > 1.0 && t <= 1e300) {
            return Err(crate::Error::Precondition(format!(
                "overflow_threshold must lie in (1, 1e300], got {t}"
            )));
        }
        Ok(())
    }

    pub fn log_threshold(&self) -> f64 {
        self.overflow_threshold.ln()
    }

    #[inline]
    fn accepts(&self, c: Complex64) -> bool {
        let t = self.overflow_threshold;
        let lim = t * t;
        if lim.is_finite() {
            c.norm_sqr() <= lim
        } else {
            c.re.is_finite() && c.im.is_finite() && c.norm() <= t
        }
    }
}

/// A value too large for the guard, as `log|w|` and (when still meaningful)
/// `arg w` in `(-π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogPolar {
    pub log_abs: f64,
    pub arg: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Finite(Complex64),
    Overflow(LogPolar),
}

impl Value {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            Value::Finite(c) => Some(c),
            Value::Overflow(_) => None,
        }
    }

    pub fn is_overflow(self) -> bool {
        matches!(self, Value::Overflow(_))
    }

    /// `|w|`, reported as `+∞` for overflowed values.
    pub fn abs(self) -> f64 {
        match self {
            Value::Finite(c) => modulus(c),
            Value::Overflow(_) => f64::INFINITY,
        }
    }

    pub fn log_abs(self) -> f64 {
        match self {
            Value::Finite(c) => c.norm().ln(),
            Value::Overflow(lp) => lp.log_abs,
        }
    }

    pub fn conj(self) -> Value {
        match self {
            Value::Finite(c) => Value::Finite(c.conj()),
            Value::Overflow(lp) => Value::Overflow(LogPolar {
                log_abs: lp.log_abs,
                arg: lp.arg.map(|a| -a),
            }),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(c) => write!(f, "{} {:+}i", c.re, c.im),
            Value::Overflow(lp) => write!(f, "overflow(log|w| = {})", lp.log_abs),
        }
    }
}

/// `|w|` without the cost of `hypot` when the squared norm is representable.
#[inline]
pub fn modulus(w: Complex64) -> f64 {
    let s = w.norm_sqr();
    if s.is_finite() && s > 1e-290 {
        s.sqrt()
    } else {
        w.norm()
    }
}

/// Non-negative integer power by repeated squaring. Both evaluation paths use
/// this so that they agree bit for bit.
#[inline]
pub(crate) fn powu(base: Complex64, exp: u32) -> Complex64 {
    match exp {
        0 => Complex64::new(1.0, 0.0),
        1 => base,
        2 => base * base,
        _ => {
            let mut result = Complex64::new(1.0, 0.0);
            let mut b = base;
            let mut e = exp;
            while e > 0 {
                if e & 1 == 1 {
                    result *= b;
                }
                e >>= 1;
                if e > 0 {
                    b = b * b;
                }
            }
            result
        }
    }
}

fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > std::f64::consts::PI {
        r - TAU
    } else {
        r
    }
}

fn clamp_log(l: f64) -> f64 {
    if l.is_nan() {
        f64::MAX
    } else {
        l.min(f64::MAX)
    }
}

pub(crate) fn from_finite(c: Complex64, guard: &MagnitudeGuard) -> Value {
    if guard.accepts(c) {
        Value::Finite(c)
    } else {
        Value::Overflow(LogPolar {
            log_abs: clamp_log(c.norm().ln()),
            arg: Some(c.arg()),
        })
    }
}

fn from_log_polar(log_abs: f64, arg: Option<f64>, guard: &MagnitudeGuard) -> Value {
    let lt = guard.log_threshold();
    match arg {
        Some(a) if log_abs <= lt => Value::Finite(Complex64::from_polar(log_abs.exp(), a)),
        Some(a) => Value::Overflow(LogPolar {
            log_abs: clamp_log(log_abs),
            arg: Some(wrap_angle(a)),
        }),
        // Without a phase the value cannot be rebuilt; it stays flagged with a
        // magnitude estimate of at least the threshold.
        None => Value::Overflow(LogPolar {
            log_abs: clamp_log(log_abs.max(lt)),
            arg: None,
        }),
    }
}

fn polar_parts(v: Value) -> (f64, Option<f64>) {
    match v {
        Value::Finite(c) => (c.norm().ln(), Some(c.arg())),
        Value::Overflow(lp) => (lp.log_abs, lp.arg),
    }
}

fn is_zero(v: Value) -> bool {
    matches!(v, Value::Finite(c) if c.re == 0.0 && c.im == 0.0)
}

fn larger(a: Value, b: Value) -> Value {
    if a.log_abs() >= b.log_abs() {
        a
    } else {
        b
    }
}

pub(crate) fn add_values(a: Value, b: Value, guard: &MagnitudeGuard) -> Value {
    if let (Value::Finite(x), Value::Finite(y)) = (a, b) {
        return from_finite(x + y, guard);
    }
    if !guard.log_mode {
        return larger(a, b);
    }
    if is_zero(a) {
        return b;
    }
    if is_zero(b) {
        return a;
    }
    let (big, small) = if a.log_abs() >= b.log_abs() { (a, b) } else { (b, a) };
    let (lb, ab) = polar_parts(big);
    let (ls, as_) = polar_parts(small);
    let d = ls - lb;
    if d < NEGLIGIBLE_LOG_RATIO {
        return big;
    }
    match (ab, as_) {
        (Some(pb), Some(ps)) => {
            let ratio = Complex64::from_polar(d.exp(), ps - pb);
            let s = Complex64::new(1.0, 0.0) + ratio;
            if s.re == 0.0 && s.im == 0.0 {
                return Value::Finite(Complex64::new(0.0, 0.0));
            }
            from_log_polar(lb + s.norm().ln(), Some(pb + s.arg()), guard)
        }
        _ => {
            // |a + b| >= |a| - |b|; equal magnitudes with unknown phases give
            // no bound at all, so fall back to the larger magnitude.
            let lower = if d < 0.0 { lb + (-d.exp()).ln_1p() } else { lb };
            from_log_polar(lower, None, guard)
        }
    }
}

fn mul_values(a: Value, b: Value, guard: &MagnitudeGuard) -> Value {
    if is_zero(a) || is_zero(b) {
        return Value::Finite(Complex64::new(0.0, 0.0));
    }
    if let (Value::Finite(x), Value::Finite(y)) = (a, b) {
        let l = x.norm().ln() + y.norm().ln();
        if l <= guard.log_threshold() {
            return from_finite(x * y, guard);
        }
        return from_log_polar(l, Some(x.arg() + y.arg()), guard);
    }
    if !guard.log_mode {
        return larger(a, b);
    }
    let (la, pa) = polar_parts(a);
    let (lb, pb) = polar_parts(b);
    let arg = match (pa, pb) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    };
    from_log_polar(la + lb, arg, guard)
}

fn pow_value(base: Value, n: u32, guard: &MagnitudeGuard) -> Value {
    if n == 0 {
        return Value::Finite(Complex64::new(1.0, 0.0));
    }
    match base {
        Value::Finite(c) => {
            if c.re == 0.0 && c.im == 0.0 {
                return base;
            }
            let l = n as f64 * c.norm().ln();
            if l <= guard.log_threshold() {
                from_finite(powu(c, n), guard)
            } else {
                from_log_polar(l, Some(n as f64 * c.arg()), guard)
            }
        }
        Value::Overflow(lp) => {
            if !guard.log_mode {
                return base;
            }
            from_log_polar(n as f64 * lp.log_abs, lp.arg.map(|a| n as f64 * a), guard)
        }
    }
}

fn exp_of_finite(w: Complex64, guard: &MagnitudeGuard) -> Value {
    if w.re > guard.log_threshold() {
        let arg = (w.im.abs() < PHASE_LIMIT).then(|| wrap_angle(w.im));
        from_log_polar(w.re, arg, guard)
    } else {
        from_finite(w.exp(), guard)
    }
}

fn exp_value(x: Value, guard: &MagnitudeGuard) -> Value {
    match x {
        Value::Finite(w) => exp_of_finite(w, guard),
        Value::Overflow(lp) => {
            if !guard.log_mode {
                return x;
            }
            let lt = guard.log_threshold();
            match lp.arg {
                None => from_log_polar(lt, None, guard),
                Some(t) if lp.log_abs > EXP_LIMIT => {
                    let c = t.cos();
                    if c > 0.0 {
                        from_log_polar(f64::MAX, None, guard)
                    } else if c < 0.0 {
                        Value::Finite(Complex64::new(0.0, 0.0))
                    } else {
                        from_log_polar(lt, None, guard)
                    }
                }
                Some(t) => {
                    let w = Complex64::from_polar(lp.log_abs.exp(), t);
                    exp_of_finite(w, guard)
                }
            }
        }
    }
}

/// Log-aware evaluation at an arbitrary (possibly overflowed) argument.
pub fn eval_value(expr: &HolomorphicExpr, z: Value, guard: &MagnitudeGuard) -> Value {
    use HolomorphicExpr::*;
    match expr {
        Const(c) => Value::Finite(*c),
        Var => z,
        Add(a, b) => add_values(eval_value(a, z, guard), eval_value(b, z, guard), guard),
        Mul(a, b) => mul_values(eval_value(a, z, guard), eval_value(b, z, guard), guard),
        IntPow(b, n) => pow_value(eval_value(b, z, guard), *n, guard),
        Exp(a) => exp_value(eval_value(a, z, guard), guard),
        Compose(outer, inner) => eval_value(outer, eval_value(inner, z, guard), guard),
    }
}

/// Evaluates `expr` at `z`. Never returns a non-finite number: anything past
/// the guard threshold comes back as [`Value::Overflow`].
pub fn eval_holo(expr: &HolomorphicExpr, z: Complex64, guard: &MagnitudeGuard) -> Value {
    let direct = eval_plain(expr, z);
    if guard.accepts(direct) {
        Value::Finite(direct)
    } else {
        eval_value(expr, Value::Finite(z), guard)
    }
}

fn eval_plain(expr: &HolomorphicExpr, z: Complex64) -> Complex64 {
    use HolomorphicExpr::*;
    match expr {
        Const(c) => *c,
        Var => z,
        Add(a, b) => eval_plain(a, z) + eval_plain(b, z),
        Mul(a, b) => eval_plain(a, z) * eval_plain(b, z),
        IntPow(b, n) => powu(eval_plain(b, z), *n),
        Exp(a) => eval_plain(a, z).exp(),
        Compose(outer, inner) => eval_plain(outer, eval_plain(inner, z)),
    }
}

type PlainFn = Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

fn build_plain(expr: &HolomorphicExpr) -> PlainFn {
    use HolomorphicExpr::*;
    match expr {
        Const(c) => {
            let c = *c;
            Box::new(move |_| c)
        }
        Var => Box::new(|z| z),
        Add(a, b) => match (&**a, b.as_const()) {
            (Var, Some(c)) => Box::new(move |z| z + c),
            _ => {
                let (fa, fb) = (build_plain(a), build_plain(b));
                Box::new(move |z| fa(z) + fb(z))
            }
        },
        Mul(a, b) => match (a.as_const(), &**b) {
            (Some(c), Var) => Box::new(move |z| c * z),
            _ => {
                let (fa, fb) = (build_plain(a), build_plain(b));
                Box::new(move |z| fa(z) * fb(z))
            }
        },
        IntPow(b, n) => {
            let n = *n;
            if matches!(**b, Var) {
                Box::new(move |z| powu(z, n))
            } else {
                let fb = build_plain(b);
                Box::new(move |z| powu(fb(z), n))
            }
        }
        Exp(a) => {
            let fa = build_plain(a);
            Box::new(move |z| fa(z).exp())
        }
        Compose(outer, inner) => {
            let (fo, fi) = (build_plain(outer), build_plain(inner));
            Box::new(move |z| fo(fi(z)))
        }
    }
}

/// An expression prepared for repeated evaluation: a closure tree for the
/// common finite case plus the original tree for the log-aware fallback.
/// Produces exactly the same values as [`eval_holo`] / [`eval_value`].
pub struct CompiledExpr {
    expr: HolomorphicExpr,
    plain: PlainFn,
}

impl CompiledExpr {
    pub fn new(expr: &HolomorphicExpr) -> Self {
        CompiledExpr {
            expr: expr.clone(),
            plain: build_plain(expr),
        }
    }

    pub fn expr(&self) -> &HolomorphicExpr {
        &self.expr
    }

    #[inline]
    pub fn eval(&self, z: Value, guard: &MagnitudeGuard) -> Value {
        match z {
            Value::Finite(c) => {
                let direct = (self.plain)(c);
                if guard.accepts(direct) {
                    Value::Finite(direct)
                } else {
                    eval_value(&self.expr, z, guard)
                }
            }
            Value::Overflow(_) => eval_value(&self.expr, z, guard),
        }
    }
}

impl fmt::Debug for CompiledExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CompiledExpr").field("expr", &self.expr).finish()
    }
}
