use num_complex::Complex64;

use super::HolomorphicExpr;
use crate::{Error, Result};

/// Expansion cap; `(z^2)` composed with itself twelve times already has
/// degree 4096.
pub const MAX_DEGREE: usize = 4096;

/// Dense coefficient form, lowest degree first, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == Complex64::new(0.0, 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn identity() -> Self {
        Polynomial::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).copied().unwrap_or(zero) + other.coeffs.get(k).copied().unwrap_or(zero))
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        let deg = self.degree() + other.degree();
        check_degree(deg)?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(Polynomial::new(coeffs))
    }

    pub fn pow(&self, n: u32) -> Result<Polynomial> {
        check_degree(self.degree().saturating_mul(n as usize))?;
        let mut result = Polynomial::constant(Complex64::new(1.0, 0.0));
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// `self ∘ inner` by Horner's scheme.
    pub fn compose(&self, inner: &Polynomial) -> Result<Polynomial> {
        check_degree(self.degree().saturating_mul(inner.degree()))?;
        let mut acc = Polynomial::constant(self.leading());
        for &c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(inner)?.add(&Polynomial::constant(c));
        }
        Ok(acc)
    }

    /// Expands an exp-free tree.
    pub fn from_expr(expr: &HolomorphicExpr) -> Result<Polynomial> {
        use HolomorphicExpr as E;
        match expr {
            E::Const(c) => Ok(Polynomial::constant(*c)),
            E::Var => Ok(Polynomial::identity()),
            E::Add(a, b) => Ok(Polynomial::from_expr(a)?.add(&Polynomial::from_expr(b)?)),
            E::Mul(a, b) => Polynomial::from_expr(a)?.mul(&Polynomial::from_expr(b)?),
            E::IntPow(b, n) => Polynomial::from_expr(b)?.pow(*n),
            E::Exp(_) => Err(Error::NotPolynomial),
            E::Compose(o, i) => Polynomial::from_expr(o)?.compose(&Polynomial::from_expr(i)?),
        }
    }
}

fn check_degree(d: usize) -> Result<()> {
    if d > MAX_DEGREE {
        Err(Error::Domain(format!(
            "polynomial expansion would reach degree {d}, above the cap of {MAX_DEGREE}"
        )))
    } else {
        Ok(())
    }
}
