//! Closed-form generating-function expressions such as `1/(1-x)` or `(1+x)^3`.
//!
//! Grammar (whitespace is ignored, implicit multiplication is not allowed):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' int)?
//! atom   := number | 'x' | '-' atom | '(' expr ')'
//! int    := '-'? digits
//! number := digits ('.' digits)?
//! ```
//!
//! Note that `-x^2` parses as `(-x)^2`, because negation belongs to `atom`.

use alloc::{boxed::Box, format, string::String, vec::Vec};
use core::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::fps::{Rational, Series, SeriesError};

/// Largest accepted `|k|` in `e^k`.
pub const MAX_EXPONENT: i32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GfExpr {
    Num(Rational),
    X,
    Neg(Box<GfExpr>),
    Add(Box<GfExpr>, Box<GfExpr>),
    Sub(Box<GfExpr>, Box<GfExpr>),
    Mul(Box<GfExpr>, Box<GfExpr>),
    Div(Box<GfExpr>, Box<GfExpr>),
    Pow(Box<GfExpr>, i32),
}

#[allow(clippy::should_implement_trait)]
impl GfExpr {
    pub fn num(n: i64) -> Self {
        GfExpr::Num(Rational::from_integer(BigInt::from(n)))
    }

    pub fn neg(e: GfExpr) -> Self {
        GfExpr::Neg(Box::new(e))
    }

    pub fn add(a: GfExpr, b: GfExpr) -> Self {
        GfExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: GfExpr, b: GfExpr) -> Self {
        GfExpr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: GfExpr, b: GfExpr) -> Self {
        GfExpr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: GfExpr, b: GfExpr) -> Self {
        GfExpr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: GfExpr, k: i32) -> Self {
        GfExpr::Pow(Box::new(a), k)
    }

    /// Binding strength used by the printer: sums 0, products 1, powers 2, atoms 3.
    fn level(&self) -> u8 {
        match self {
            GfExpr::Add(..) | GfExpr::Sub(..) => 0,
            GfExpr::Mul(..) | GfExpr::Div(..) => 1,
            GfExpr::Pow(..) => 2,
            GfExpr::Num(q) if !q.is_integer() => 1,
            _ => 3,
        }
    }

    fn render_at(&self, min_level: u8, out: &mut String) {
        if self.level() < min_level {
            out.push('(');
            self.render_at(0, out);
            out.push(')');
            return;
        }
        match self {
            GfExpr::Num(q) => {
                if q.is_negative() {
                    out.push('-');
                    GfExpr::Num(-q).render_at(3, out);
                } else if q.is_integer() {
                    out.push_str(&format!("{}", q.numer()));
                } else {
                    out.push_str(&format!("{}/{}", q.numer(), q.denom()));
                }
            }
            GfExpr::X => out.push('x'),
            GfExpr::Neg(a) => {
                out.push('-');
                a.render_at(3, out);
            }
            GfExpr::Add(a, b) | GfExpr::Sub(a, b) => {
                a.render_at(0, out);
                out.push(if matches!(self, GfExpr::Add(..)) {
                    '+'
                } else {
                    '-'
                });
                b.render_at(1, out);
            }
            GfExpr::Mul(a, b) | GfExpr::Div(a, b) => {
                a.render_at(1, out);
                out.push(if matches!(self, GfExpr::Mul(..)) {
                    '*'
                } else {
                    '/'
                });
                b.render_at(2, out);
            }
            GfExpr::Pow(a, k) => {
                a.render_at(3, out);
                out.push_str(&format!("^{k}"));
            }
        }
    }
}

/// Canonical text form; `parse(render(e))` evaluates exactly like `e`.
pub fn render(e: &GfExpr) -> String {
    let mut out = String::new();
    e.render_at(0, &mut out);
    out
}

impl fmt::Display for GfExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("exponent {exponent} at offset {offset} exceeds the limit of {MAX_EXPONENT}")]
    ExponentTooLarge { offset: usize, exponent: i64 },
    #[error("quotient is not a power series (denominator valuation {denominator} exceeds numerator valuation {numerator})")]
    NotRepresentable {
        numerator: usize,
        denominator: usize,
    },
    #[error("division by a zero series")]
    DivisionByZero,
    #[error("negative exponent applied to a series with zero constant term")]
    NegativePowerOfNonUnit,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, GfError> {
        Err(GfError::Syntax {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn unexpected<T>(&mut self, wanted: &str) -> Result<T, GfError> {
        match self.peek() {
            Some(c) => self.syntax(format!("expected {wanted}, found {c:?}")),
            None => self.syntax(format!("expected {wanted}, found end of input")),
        }
    }

    fn expr(&mut self) -> Result<GfExpr, GfError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    lhs = GfExpr::add(lhs, self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    lhs = GfExpr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<GfExpr, GfError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    lhs = GfExpr::mul(lhs, self.factor()?);
                }
                Some('/') => {
                    self.pos += 1;
                    lhs = GfExpr::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<GfExpr, GfError> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let start = {
            self.skip_ws();
            self.pos
        };
        let negative = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let digits = self.digits();
        if digits.is_empty() {
            return self.unexpected("an integer exponent");
        }
        let magnitude: i64 = digits.parse().unwrap_or(i64::MAX);
        let exponent = if negative { -magnitude } else { magnitude };
        if magnitude > MAX_EXPONENT as i64 {
            return Err(GfError::ExponentTooLarge {
                offset: start,
                exponent,
            });
        }
        Ok(GfExpr::pow(base, exponent as i32))
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_ascii_digit() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        s
    }

    fn atom(&mut self) -> Result<GfExpr, GfError> {
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                Ok(GfExpr::X)
            }
            Some('-') => {
                self.pos += 1;
                Ok(GfExpr::neg(self.atom()?))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return self.unexpected("')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            _ => self.unexpected("a number, 'x', '-' or '('"),
        }
    }

    fn number(&mut self) -> Result<GfExpr, GfError> {
        let int_part = self.digits();
        let mut value = Rational::from_integer(int_part.parse::<BigInt>().unwrap_or_default());
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            let frac_part = self.digits();
            if frac_part.is_empty() {
                return self.syntax("expected digits after '.'");
            }
            let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
            let numer: BigInt = frac_part.parse().unwrap_or_default();
            value += Rational::new(numer, scale);
        }
        Ok(GfExpr::Num(value))
    }
}

/// Parses an expression; error offsets count characters from 0.
pub fn parse(text: &str) -> Result<GfExpr, GfError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    if p.peek().is_none() {
        return Err(GfError::Empty);
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.unexpected("an operator or end of input");
    }
    Ok(e)
}

/// Expands `e` as a power series truncated at order `n`.
///
/// A quotient is accepted when the denominator is a unit or when the
/// numerator's valuation is at least the denominator's; both are then
/// divided by `x^v` before the unit division.
pub fn eval(e: &GfExpr, n: usize) -> Result<Series, GfError> {
    eval_at(e, n)
}

/// Parses and expands in one step.
pub fn eval_str(text: &str, n: usize) -> Result<Series, GfError> {
    eval(&parse(text)?, n)
}

fn eval_at(e: &GfExpr, n: usize) -> Result<Series, GfError> {
    Ok(match e {
        GfExpr::Num(q) => Series::constant(q.clone(), n),
        GfExpr::X => Series::x(n),
        GfExpr::Neg(a) => eval_at(a, n)?.neg(),
        GfExpr::Add(a, b) => eval_at(a, n)?.add(&eval_at(b, n)?)?,
        GfExpr::Sub(a, b) => eval_at(a, n)?.sub(&eval_at(b, n)?)?,
        GfExpr::Mul(a, b) => eval_at(a, n)?.mul(&eval_at(b, n)?)?,
        GfExpr::Div(a, b) => eval_quotient(a, b, n)?,
        GfExpr::Pow(a, k) => {
            let base = eval_at(a, n)?;
            if *k >= 0 {
                base.pow(*k as u32)
            } else if base.is_unit() {
                base.recip()?.pow(k.unsigned_abs())
            } else {
                return Err(GfError::NegativePowerOfNonUnit);
            }
        }
    })
}

fn eval_quotient(num: &GfExpr, den: &GfExpr, n: usize) -> Result<Series, GfError> {
    // The denominator may vanish to order n yet be nonzero further out;
    // widen the window a few times before giving up.
    let mut window = n;
    let mut shift = None;
    for _ in 0..4 {
        if let Some(v) = eval_at(den, window)?.valuation() {
            shift = Some(v);
            break;
        }
        window = 2 * window + 8;
    }
    let v = shift.ok_or(GfError::DivisionByZero)?;
    let den = eval_at(den, n + v)?;
    let num = eval_at(num, n + v)?;
    if v == 0 {
        return Ok(num.div(&den)?);
    }
    match num.valuation() {
        None => Ok(Series::zero(n)),
        Some(u) if u < v => Err(GfError::NotRepresentable {
            numerator: u,
            denominator: v,
        }),
        Some(_) => Ok(num.shift_down(v).div(&den.shift_down(v))?),
    }
}
