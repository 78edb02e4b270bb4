//! Truncated formal power series with exact rational coefficients.
//!
//! A [`Series`] carries its truncation order explicitly: it holds the
//! coefficients `c_0, …, c_N` and nothing beyond. Binary operations require
//! both operands to share `N`; they never silently re-truncate.

use alloc::{string::String, string::ToString, vec, vec::Vec};
use core::{fmt, str::FromStr};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The reduced fraction `n/d`. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"` (surrounding whitespace ignored).
pub fn parse_rational(text: &str) -> Result<Rational, SeriesError> {
    let t = text.trim();
    t.parse::<Rational>()
        .map_err(|_| SeriesError::BadRational(t.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },
    #[error("divisor has zero constant term")]
    NonUnitDivisor,
    #[error("inner series of a composition must have zero constant term")]
    NonZeroConstant,
    #[error("compositional inverse needs zero constant term and nonzero linear term")]
    NotOrderOne,
    #[error("coefficient index {index} beyond truncation order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("a series needs at least one coefficient")]
    Empty,
    #[error("invalid rational {0:?}")]
    BadRational(String),
}

/// A power series `c_0 + c_1 x + … + c_N x^N + O(x^{N+1})`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Series { coeffs })
    }

    /// Convenience constructor for integer coefficients. Panics on an empty slice.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least one coefficient"
        );
        Series {
            coeffs: coeffs.iter().map(|&c| int(c)).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c·x^k`; the zero series when `k` exceeds the order.
    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The series `x` (which is `0` at order 0).
    pub fn x(order: usize) -> Self {
        Self::monomial(Rational::one(), 1, order)
    }

    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// `[x^k]` of the series.
    pub fn coeff(&self, k: usize) -> Result<&Rational, SeriesError> {
        self.coeffs.get(k).ok_or(SeriesError::IndexOutOfRange {
            index: k,
            order: self.trunc_order(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// Drops every coefficient above `order`.
    pub fn truncate(&self, order: usize) -> Result<Series, SeriesError> {
        if order > self.trunc_order() {
            return Err(SeriesError::IndexOutOfRange {
                index: order,
                order: self.trunc_order(),
            });
        }
        Ok(Series {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    /// Raises the order, filling the new coefficients with zero.
    pub(crate) fn zero_extend(&self, order: usize) -> Series {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order.max(self.trunc_order()) + 1, Rational::zero());
        Series { coeffs }
    }

    /// Divides by `x^k`, losing `k` orders of precision. The low coefficients must vanish.
    pub(crate) fn shift_down(&self, k: usize) -> Series {
        debug_assert!(k <= self.trunc_order());
        debug_assert!(self.coeffs[..k].iter().all(Zero::is_zero));
        Series {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Multiplies by `x^k` at the same order.
    pub fn shift_up(&self, k: usize) -> Series {
        let n = self.trunc_order();
        let mut out = Self::zero(n);
        for i in k..=n {
            out.coeffs[i] = self.coeffs[i - k].clone();
        }
        out
    }

    fn check_order(&self, other: &Series) -> Result<(), SeriesError> {
        if self.trunc_order() != other.trunc_order() {
            return Err(SeriesError::OrderMismatch {
                left: self.trunc_order(),
                right: other.trunc_order(),
            });
        }
        Ok(())
    }

    pub fn neg(&self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_order(other)?;
        Ok(Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_order(other)?;
        Ok(Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Cauchy product truncated at the shared order.
    pub fn mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_order(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Series) -> Series {
        let n = self.trunc_order();
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Series { coeffs: out }
    }

    /// The quotient `q` with `q·other = self`; `other` must be a unit.
    pub fn div(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_order(other)?;
        if !other.is_unit() {
            return Err(SeriesError::NonUnitDivisor);
        }
        let n = self.trunc_order();
        let inv_b0 = other.coeffs[0].recip();
        let mut q: Vec<Rational> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                if !other.coeffs[j].is_zero() {
                    acc -= &other.coeffs[j] * &q[k - j];
                }
            }
            q.push(acc * &inv_b0);
        }
        Ok(Series { coeffs: q })
    }

    pub fn recip(&self) -> Result<Series, SeriesError> {
        Series::one(self.trunc_order()).div(self)
    }

    /// `self ∘ inner`, evaluated by Horner's rule in the truncated ring.
    pub fn compose(&self, inner: &Series) -> Result<Series, SeriesError> {
        self.check_order(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonZeroConstant);
        }
        let n = self.trunc_order();
        let mut acc = Series::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul_unchecked(inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// The series `b` with `self ∘ b = b ∘ self = x`.
    ///
    /// Coefficients are found one at a time: with `b_k` unset, `[x^k](self ∘ b)`
    /// equals `a_1 b_k` plus terms of lower index, so `b_k` is read off directly.
    pub fn comp_inverse(&self) -> Result<Series, SeriesError> {
        let n = self.trunc_order();
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NotOrderOne);
        }
        if n == 0 {
            return Ok(Series::zero(0));
        }
        if self.coeffs[1].is_zero() {
            return Err(SeriesError::NotOrderOne);
        }
        let inv_a1 = self.coeffs[1].recip();
        let mut b = Series::zero(n);
        b.coeffs[1] = inv_a1.clone();
        for k in 2..=n {
            let a_k = self.truncate(k)?;
            let b_k = b.truncate(k)?;
            let partial = a_k.compose(&b_k)?;
            b.coeffs[k] = -(&partial.coeffs[k]) * &inv_a1;
        }
        Ok(b)
    }

    /// The `k`-fold Cauchy power; `pow(0)` is `1`.
    pub fn pow(&self, k: u32) -> Series {
        let mut result = Series::one(self.trunc_order());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[{self}]")
    }
}

/// Comma-separated coefficients, `c_0` first: `1,1/2,-3`.
impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Series {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Err(SeriesError::Empty);
        }
        let coeffs = s
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()?;
        Series::new(coeffs)
    }
}
