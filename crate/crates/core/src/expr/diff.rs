use num_complex::Complex64;

use super::HolomorphicExpr;

/// Symbolic derivative with respect to `z`.
pub fn derivative(expr: &HolomorphicExpr) -> HolomorphicExpr {
    use HolomorphicExpr as E;
    match expr {
        E::Const(_) => E::zero(),
        E::Var => E::real(1.0),
        E::Add(a, b) => E::add(derivative(a), derivative(b)),
        E::Mul(a, b) => E::add(
            E::mul(derivative(a), (**b).clone()),
            E::mul((**a).clone(), derivative(b)),
        ),
        E::IntPow(b, n) => match n {
            0 => E::zero(),
            _ => E::mul(
                E::mul(E::Const(Complex64::new(*n as f64, 0.0)), E::pow((**b).clone(), n - 1)),
                derivative(b),
            ),
        },
        E::Exp(a) => E::mul(expr.clone(), derivative(a)),
        E::Compose(outer, inner) => E::mul(E::compose(derivative(outer), (**inner).clone()), derivative(inner)),
    }
}
