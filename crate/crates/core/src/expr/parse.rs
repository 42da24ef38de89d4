//! Recursive descent parser for the expression grammar.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = primary [ "^" unary ] ;
//! primary = number | "z" | "i" | "pi" | "e" | "exp" "(" expr ")"
//!         | "(" expr ")" | "{" expr "}" ;
//! ```
//!
//! `e^X` is read as `exp(X)`. Exponents must fold to a non-negative integer
//! constant and divisors to a non-zero constant.

use num_complex::Complex64;

use super::HolomorphicExpr;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Complex64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(_) => "number".into(),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

fn domain(position: usize, message: impl Into<String>) -> Error {
    Error::ExprDomain {
        position,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b'0'..=b'9' | b'.' => {
                let (tok, end) = lex_number(text, start)?;
                out.push((tok, start));
                i = end;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character '{ch}'")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn lex_number(text: &str, start: usize) -> Result<(Tok, usize)> {
    let bytes = text.as_bytes();
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    let mut i = digits(start);
    let int_len = i - start;
    let mut frac_len = 0;
    if i < bytes.len() && bytes[i] == b'.' {
        let j = digits(i + 1);
        frac_len = j - i - 1;
        i = j;
    }
    if int_len == 0 && frac_len == 0 {
        return Err(syntax(start, "malformed number"));
    }
    // An exponent marker only counts when digits follow; otherwise `2e` is
    // left for the parser to reject as implicit multiplication.
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            i = digits(j);
        }
    }
    let value: f64 = text[start..i].parse().map_err(|_| syntax(start, "malformed number"))?;
    if !value.is_finite() {
        return Err(domain(start, "number literal is out of range"));
    }
    let imaginary = i < bytes.len()
        && bytes[i] == b'i'
        && !bytes
            .get(i + 1)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
    if imaginary {
        Ok((Tok::Num(Complex64::new(0.0, value)), i + 1))
    } else {
        Ok((Tok::Num(Complex64::new(value, 0.0)), i))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.offset(),
                format!("expected {}, found {}", want.describe(), self.peek().describe()),
            ))
        }
    }

    fn expr(&mut self) -> Result<HolomorphicExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = HolomorphicExpr::add(lhs, rhs);
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = HolomorphicExpr::add(lhs, HolomorphicExpr::neg(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<HolomorphicExpr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = HolomorphicExpr::mul(lhs, rhs);
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.offset();
                    let rhs = self.unary()?;
                    let c = rhs.as_const().ok_or_else(|| domain(at, "divisor must be a constant"))?;
                    if c == Complex64::new(0.0, 0.0) {
                        return Err(domain(at, "division by zero"));
                    }
                    lhs = HolomorphicExpr::mul(lhs, HolomorphicExpr::Const(c.inv()));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<HolomorphicExpr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.unary()?;
            return Ok(HolomorphicExpr::neg(inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<HolomorphicExpr> {
        let euler = matches!(self.peek(), Tok::Ident(s) if s == "e");
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exponent = self.unary()?;
        if euler {
            return Ok(HolomorphicExpr::exp(exponent));
        }
        let n = integer_exponent(&exponent)
            .ok_or_else(|| domain(at, "exponent must be a non-negative integer constant"))?;
        Ok(HolomorphicExpr::pow(base, n))
    }

    fn primary(&mut self) -> Result<HolomorphicExpr> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num(c) => Ok(HolomorphicExpr::Const(c)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBrace => {
                let e = self.expr()?;
                self.expect(Tok::RBrace)?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "z" => Ok(HolomorphicExpr::Var),
                "i" => Ok(HolomorphicExpr::Const(Complex64::new(0.0, 1.0))),
                "pi" => Ok(HolomorphicExpr::real(std::f64::consts::PI)),
                "e" => Ok(HolomorphicExpr::real(std::f64::consts::E)),
                "exp" => {
                    self.expect(Tok::LParen)?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(HolomorphicExpr::exp(e))
                }
                _ => Err(syntax(at, format!("unknown identifier '{name}'"))),
            },
            other => Err(syntax(at, format!("expected operand, found {}", other.describe()))),
        }
    }
}

fn integer_exponent(e: &HolomorphicExpr) -> Option<u32> {
    let c = e.as_const()?;
    let x = c.re;
    (c.im == 0.0 && x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64).then_some(x as u32)
}

pub fn parse_expr(text: &str) -> Result<HolomorphicExpr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(
            p.offset(),
            format!("unexpected {} after expression", p.peek().describe()),
        ));
    }
    Ok(e)
}
