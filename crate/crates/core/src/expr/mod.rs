//! Expression trees for entire functions of one complex variable.
//!
//! The node set is closed: constants, the variable `z`, sums, products,
//! non-negative integer powers, `exp` and composition. Every tree therefore
//! denotes an entire function, which is what the direct-composition iteration
//! needs (no poles, no branch cuts).

mod diff;
pub(crate) mod eval;
mod parse;
mod poly;

use std::fmt;

use num_complex::Complex64;

pub use diff::derivative;
pub use eval::{eval_holo, eval_value, modulus, CompiledExpr, LogPolar, MagnitudeGuard, Value};
pub use parse::parse_expr;
pub use poly::Polynomial;

#[derive(Clone, Debug, PartialEq)]
pub enum HolomorphicExpr {
    Const(Complex64),
    Var,
    Add(Box<HolomorphicExpr>, Box<HolomorphicExpr>),
    Mul(Box<HolomorphicExpr>, Box<HolomorphicExpr>),
    IntPow(Box<HolomorphicExpr>, u32),
    Exp(Box<HolomorphicExpr>),
    /// `Compose(outer, inner)` is `outer(inner(z))`.
    Compose(Box<HolomorphicExpr>, Box<HolomorphicExpr>),
}

// Folding constructors; the operator traits would hide the folding.
#[allow(clippy::should_implement_trait)]
impl HolomorphicExpr {
    pub fn constant(c: Complex64) -> Self {
        HolomorphicExpr::Const(c)
    }

    pub fn real(x: f64) -> Self {
        HolomorphicExpr::Const(Complex64::new(x, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn var() -> Self {
        HolomorphicExpr::Var
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self {
            HolomorphicExpr::Const(c) => Some(*c),
            _ => None,
        }
    }

    // The constructors below fold constants and drop additive/multiplicative
    // identities. That is the only simplification the crate performs.

    pub fn add(a: Self, b: Self) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Self::Const(x + y),
            (Some(x), None) if x == Complex64::new(0.0, 0.0) => b,
            (None, Some(y)) if y == Complex64::new(0.0, 0.0) => a,
            _ => HolomorphicExpr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Self, b: Self) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Self::Const(x * y),
            (Some(x), None) if x == zero => Self::Const(zero),
            (None, Some(y)) if y == zero => Self::Const(zero),
            (Some(x), None) if x == one => b,
            (None, Some(y)) if y == one => a,
            _ => HolomorphicExpr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn neg(a: Self) -> Self {
        match a {
            HolomorphicExpr::Const(c) => HolomorphicExpr::Const(-c),
            other => HolomorphicExpr::Mul(Box::new(Self::real(-1.0)), Box::new(other)),
        }
    }

    pub fn pow(base: Self, exponent: u32) -> Self {
        match (exponent, base.as_const()) {
            (0, _) => Self::real(1.0),
            (1, _) => base,
            (n, Some(c)) => Self::Const(eval::powu(c, n)),
            (n, None) => HolomorphicExpr::IntPow(Box::new(base), n),
        }
    }

    pub fn exp(inner: Self) -> Self {
        HolomorphicExpr::Exp(Box::new(inner))
    }

    /// `outer ∘ inner`. Composition with the identity or of a constant is
    /// resolved immediately; everything else becomes a `Compose` node so that
    /// iterates never expand.
    pub fn compose(outer: Self, inner: Self) -> Self {
        match (&outer, &inner) {
            (HolomorphicExpr::Var, _) => inner,
            (_, HolomorphicExpr::Var) => outer,
            (HolomorphicExpr::Const(_), _) => outer,
            _ => HolomorphicExpr::Compose(Box::new(outer), Box::new(inner)),
        }
    }

    pub fn contains_exp(&self) -> bool {
        use HolomorphicExpr::*;
        match self {
            Const(_) | Var => false,
            Exp(_) => true,
            IntPow(b, _) => b.contains_exp(),
            Add(a, b) | Mul(a, b) | Compose(a, b) => a.contains_exp() || b.contains_exp(),
        }
    }

    pub fn has_only_real_constants(&self) -> bool {
        use HolomorphicExpr::*;
        match self {
            Const(c) => c.im == 0.0,
            Var => true,
            Exp(a) | IntPow(a, _) => a.has_only_real_constants(),
            Add(a, b) | Mul(a, b) | Compose(a, b) => a.has_only_real_constants() && b.has_only_real_constants(),
        }
    }

    pub fn node_count(&self) -> usize {
        use HolomorphicExpr::*;
        match self {
            Const(_) | Var => 1,
            Exp(a) | IntPow(a, _) => 1 + a.node_count(),
            Add(a, b) | Mul(a, b) | Compose(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    fn write_into(&self, out: &mut String, var: &str) {
        use HolomorphicExpr::*;
        match self {
            Const(c) => out.push_str(&format_const(*c)),
            Var => out.push_str(var),
            Add(a, b) => {
                out.push('(');
                a.write_into(out, var);
                out.push_str(" + ");
                b.write_into(out, var);
                out.push(')');
            }
            Mul(a, b) => {
                out.push('(');
                a.write_into(out, var);
                out.push_str(" * ");
                b.write_into(out, var);
                out.push(')');
            }
            IntPow(b, n) => {
                // `z^2^3` would re-parse right-associatively, so nested powers
                // keep their parentheses.
                let bare = matches!(**b, Var | Exp(_) | Add(..) | Mul(..));
                if bare {
                    b.write_into(out, var);
                } else {
                    out.push('(');
                    b.write_into(out, var);
                    out.push(')');
                }
                out.push('^');
                out.push_str(&n.to_string());
            }
            Exp(a) => {
                out.push_str("exp(");
                a.write_into(out, var);
                out.push(')');
            }
            Compose(outer, inner) => {
                let mut sub = String::new();
                inner.write_into(&mut sub, var);
                if !matches!(**inner, Var | Exp(_) | Add(..) | Mul(..)) {
                    sub = format!("({sub})");
                }
                outer.write_into(out, &sub);
            }
        }
    }
}

fn format_real(x: f64) -> String {
    let s = format!("{x:?}");
    match s.strip_suffix(".0") {
        Some(t) => t.to_string(),
        None => s,
    }
}

fn format_const(c: Complex64) -> String {
    if c.im == 0.0 {
        if c.re.is_sign_negative() {
            format!("({})", format_real(c.re))
        } else {
            format_real(c.re)
        }
    } else if c.re == 0.0 && !c.re.is_sign_negative() {
        if c.im < 0.0 {
            format!("({}i)", format_real(c.im))
        } else {
            format!("{}i", format_real(c.im))
        }
    } else {
        let sign = if c.im < 0.0 { '-' } else { '+' };
        format!("({}{}{}i)", format_real(c.re), sign, format_real(c.im.abs()))
    }
}

/// Prints in the input grammar. Composition nodes are written by textual
/// substitution, so the output of an iterate re-parses to an equal function
/// but not to an identical tree.
impl fmt::Display for HolomorphicExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_into(&mut s, "z");
        f.write_str(&s)
    }
}

impl std::str::FromStr for HolomorphicExpr {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_folding_in_constructors() {
        let e = HolomorphicExpr::add(HolomorphicExpr::real(1.0), HolomorphicExpr::real(2.0));
        assert_eq!(e, HolomorphicExpr::real(3.0));
        let e = HolomorphicExpr::mul(HolomorphicExpr::real(1.0), HolomorphicExpr::Var);
        assert_eq!(e, HolomorphicExpr::Var);
        let e = HolomorphicExpr::pow(HolomorphicExpr::real(2.0), 10);
        assert_eq!(e, HolomorphicExpr::real(1024.0));
    }

    #[test]
    fn const_formatting() {
        assert_eq!(format_const(Complex64::new(2.0, 0.0)), "2");
        assert_eq!(format_const(Complex64::new(-1.0, 0.0)), "(-1)");
        assert_eq!(format_const(Complex64::new(0.0, -2.5)), "(-2.5i)");
        assert_eq!(format_const(Complex64::new(1.0, -2.0)), "(1-2i)");
        assert_eq!(format_const(Complex64::new(1e300, 0.0)), "1e300");
    }

    #[test]
    fn display_compose_substitutes() {
        let sq = HolomorphicExpr::pow(HolomorphicExpr::Var, 2);
        let c = HolomorphicExpr::compose(sq.clone(), sq);
        assert_eq!(c.to_string(), "(z^2)^2");
    }
}
