//! Truncated Riordan matrices.
//!
//! A [`RiordanMatrix`] of order `n` is the `(n+1)×(n+1)` lower-triangular
//! matrix with entries `[x^i] d(x)·h(x)^j`. The defining pair `(d, h)` is
//! kept next to the materialized entries; the entries decide equality.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::fps::{Rational, Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RiordanError {
    #[error("d has zero constant term (d0 = 0)")]
    ZeroD0,
    #[error("h has nonzero constant term (h0 != 0)")]
    NonZeroH0,
    #[error("h has zero linear term (h1 = 0)")]
    ZeroH1,
    #[error("orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },
    #[error("operation needs order at least 1")]
    OrderZero,
    #[error("row {row} must have {expected} entries")]
    BadShape { row: usize, expected: usize },
    #[error("entry ({row},{col}) does not match any Riordan pair")]
    NotRiordan { row: usize, col: usize },
    #[error("f and g must both have nonzero constant terms")]
    NonUnitFg,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A matrix in the `T(f|g)` notation: entries `[x^i] x^j f(x) / g(x)^{j+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgPair {
    pub f: Series,
    pub g: Series,
}

#[derive(Clone)]
pub struct RiordanMatrix {
    d: Series,
    h: Series,
    rows: Vec<Vec<Rational>>,
}

impl PartialEq for RiordanMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl Eq for RiordanMatrix {}

impl fmt::Debug for RiordanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RiordanMatrix")
            .field("d", &self.d)
            .field("h", &self.h)
            .finish()
    }
}

/// One row per line, entries separated by single spaces.
impl fmt::Display for RiordanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

/// Ordinary product of two lower-triangular matrices of equal size.
pub fn triangular_product(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    (0..a.len())
        .map(|i| {
            (0..=i)
                .map(|j| (j..=i).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn check_same_order(a: usize, b: usize) -> Result<(), RiordanError> {
    if a != b {
        return Err(RiordanError::OrderMismatch { left: a, right: b });
    }
    Ok(())
}

impl RiordanMatrix {
    pub fn from_dh(d: Series, h: Series) -> Result<Self, RiordanError> {
        let n = d.trunc_order();
        check_same_order(n, h.trunc_order())?;
        if d.coeffs()[0].is_zero() {
            return Err(RiordanError::ZeroD0);
        }
        if !h.coeffs()[0].is_zero() {
            return Err(RiordanError::NonZeroH0);
        }
        if n >= 1 && h.coeffs()[1].is_zero() {
            return Err(RiordanError::ZeroH1);
        }
        let mut rows: Vec<Vec<Rational>> = (0..=n).map(|i| Vec::with_capacity(i + 1)).collect();
        let mut column = d.clone();
        for j in 0..=n {
            for (i, row) in rows.iter_mut().enumerate().skip(j) {
                row.push(column.coeffs()[i].clone());
            }
            if j < n {
                column = column.mul(&h)?;
            }
        }
        Ok(RiordanMatrix { d, h, rows })
    }

    pub fn from_fg(p: &FgPair) -> Result<Self, RiordanError> {
        check_same_order(p.f.trunc_order(), p.g.trunc_order())?;
        if !p.f.is_unit() || !p.g.is_unit() {
            return Err(RiordanError::NonUnitFg);
        }
        let d = p.f.div(&p.g)?;
        let h = p.g.recip()?.shift_up(1);
        Self::from_dh(d, h)
    }

    /// Recovers `(d, h)` from the entries and checks that every entry agrees.
    ///
    /// `d` is column 0 and `h` is column 1 divided by `d`.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, RiordanError> {
        if rows.is_empty() {
            return Err(RiordanError::BadShape {
                row: 0,
                expected: 1,
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != i + 1 {
                return Err(RiordanError::BadShape {
                    row: i,
                    expected: i + 1,
                });
            }
        }
        let d = Series::new(rows.iter().map(|r| r[0].clone()).collect())?;
        if d.coeffs()[0].is_zero() {
            return Err(RiordanError::ZeroD0);
        }
        let col1 = Series::new(
            rows.iter()
                .map(|r| r.get(1).cloned().unwrap_or_default())
                .collect(),
        )?;
        let h = col1.div(&d)?;
        let m = Self::from_dh(d, h)?;
        for (i, (got, want)) in m.rows.iter().zip(&rows).enumerate() {
            if let Some(j) = (0..=i).find(|&j| got[j] != want[j]) {
                return Err(RiordanError::NotRiordan { row: i, col: j });
            }
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(Rational::one(), Rational::one(), n)
    }

    /// The diagonal matrix `(d0, h1·x)`.
    pub fn diagonal(d0: Rational, h1: Rational, n: usize) -> Self {
        let d = Series::constant(d0, n);
        let h = if n == 0 {
            Series::zero(0)
        } else {
            Series::monomial(h1, 1, n)
        };
        Self::from_dh(d, h).expect("diagonal entries must be nonzero")
    }

    /// Pascal's triangle `(1/(1−x), x/(1−x))`.
    pub fn pascal(n: usize) -> Self {
        let one_minus_x = Series::one(n).sub(&Series::x(n)).expect("same order");
        let d = one_minus_x.recip().expect("unit");
        let h = d.shift_up(1);
        Self::from_dh(d, h).expect("Pascal is Riordan")
    }

    pub fn order(&self) -> usize {
        self.d.trunc_order()
    }

    pub fn d(&self) -> &Series {
        &self.d
    }

    pub fn h(&self) -> &Series {
        &self.h
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&Rational> {
        self.rows.get(i).and_then(|r| r.get(j))
    }

    pub fn d0(&self) -> &Rational {
        &self.d.coeffs()[0]
    }

    /// The linear coefficient of `h`, taken as `1` at order 0 where it does
    /// not exist.
    pub fn h1(&self) -> Rational {
        self.h
            .coeffs()
            .get(1)
            .cloned()
            .unwrap_or_else(Rational::one)
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
        })
    }

    pub fn to_fg(&self) -> FgPair {
        let n = self.order();
        let g = if n == 0 {
            Series::one(0)
        } else {
            self.h
                .shift_down(1)
                .recip()
                .expect("h1 is nonzero")
                .zero_extend(n)
        };
        let f = self.d.mul(&g).expect("same order");
        FgPair { f, g }
    }

    pub fn mul(&self, other: &RiordanMatrix) -> Result<RiordanMatrix, RiordanError> {
        check_same_order(self.order(), other.order())?;
        let d = self.d.mul(&other.d.compose(&self.h)?)?;
        let h = other.h.compose(&self.h)?;
        let out = Self::from_dh(d, h)?;
        debug_assert_eq!(out.rows, triangular_product(&self.rows, &other.rows));
        Ok(out)
    }

    pub fn inverse(&self) -> RiordanMatrix {
        let hbar = self.h.comp_inverse().expect("h has order one");
        let d = self
            .d
            .compose(&hbar)
            .and_then(|s| s.recip())
            .expect("d(hbar) is a unit");
        Self::from_dh(d, hbar).expect("inverse of a Riordan matrix is Riordan")
    }

    /// Deletes the last row and column.
    pub fn project(&self) -> Result<RiordanMatrix, RiordanError> {
        let n = self.order();
        if n == 0 {
            return Err(RiordanError::OrderZero);
        }
        Ok(RiordanMatrix {
            d: self.d.truncate(n - 1)?,
            h: self.h.truncate(n - 1)?,
            rows: self.rows[..n].to_vec(),
        })
    }

    /// Projects down to order `k ≤ n`.
    pub fn project_to(&self, k: usize) -> Result<RiordanMatrix, RiordanError> {
        if k > self.order() {
            return Err(RiordanError::OrderMismatch {
                left: self.order(),
                right: k,
            });
        }
        Ok(RiordanMatrix {
            d: self.d.truncate(k)?,
            h: self.h.truncate(k)?,
            rows: self.rows[..=k].to_vec(),
        })
    }

    /// The A-sequence `a_0, …, a_{n−1}` with
    /// `d_{i,j} = Σ_k a_k d_{i−1,j−1+k}`.
    ///
    /// Column 1 alone determines it: row `i` gives `a_{i−1}` once
    /// `a_0, …, a_{i−2}` are known, because `d_{i−1,i−1} ≠ 0`.
    pub fn a_sequence(&self) -> Result<Series, RiordanError> {
        let n = self.order();
        if n == 0 {
            return Err(RiordanError::OrderZero);
        }
        let mut a: Vec<Rational> = Vec::with_capacity(n);
        for i in 1..=n {
            let prev = &self.rows[i - 1];
            let mut acc = self.rows[i][1].clone();
            for (k, ak) in a.iter().enumerate() {
                acc -= ak * &prev[k];
            }
            a.push(acc / &prev[i - 1]);
        }
        Ok(Series::new(a)?)
    }

    /// Checks `d_{i,j} = Σ_k g_k d_{i+1−k,j+1}` for every applicable entry,
    /// with `g` from [`to_fg`](Self::to_fg).
    pub fn vertical_check(&self) -> bool {
        let n = self.order();
        let g = self.to_fg().g;
        let g = g.coeffs();
        (0..n).all(|i| {
            (0..=i).all(|j| {
                let sum = (0..=i - j).fold(Rational::zero(), |acc, k| {
                    acc + &g[k] * &self.rows[i + 1 - k][j + 1]
                });
                sum == self.rows[i][j]
            })
        })
    }

    /// The action `(d, h)·s = d·(s∘h)`.
    pub fn act(&self, s: &Series) -> Result<Series, RiordanError> {
        check_same_order(self.order(), s.trunc_order())?;
        let out = self.d.mul(&s.compose(&self.h)?)?;
        debug_assert!(self.rows.iter().enumerate().all(|(i, row)| {
            let v = row
                .iter()
                .zip(s.coeffs())
                .fold(Rational::zero(), |acc, (m, c)| acc + m * c);
            v == out.coeffs()[i]
        }));
        Ok(out)
    }

    /// `M = U·D` with `U = (d/d0, h/h1)` unit-diagonal and `D = (d0, h1·x)`.
    pub fn unit_diagonal_split(&self) -> (RiordanMatrix, RiordanMatrix) {
        let d0 = self.d0().clone();
        let h1 = self.h1();
        let u = Self::from_dh(self.d.scale(&d0.recip()), self.h.scale(&h1.recip()))
            .expect("scaling keeps the Riordan conditions");
        (u, Self::diagonal(d0, h1, self.order()))
    }

    /// `h_2² = h_1·h_3`; vacuous below order 3.
    pub fn is_omega0(&self) -> bool {
        let h = self.h.coeffs();
        if h.len() < 4 {
            return true;
        }
        &h[2] * &h[2] == &h[1] * &h[3]
    }
}
