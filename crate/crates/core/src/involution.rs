//! Riordan involutions: construction from free parameters, recognition, and
//! the Klein four-group of diagonal involutions.
//!
//! A nontrivial involution of order `n` is fixed by its corner sign `d_{0,0}`
//! and the free entries `d_{2i+1,0} = α_{2i}`, `d_{2i+2,1} = α_{2i+1}`. Every
//! other entry follows row by row from the involution equations and the
//! A-sequence recursion.

use alloc::vec::Vec;
use core::{fmt, str::FromStr};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::affine::{LinExpr, NonlinearProduct};
use crate::fps::{int, Rational, Series};
use crate::riordan::{RiordanError, RiordanMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> Rational {
        match self {
            Sign::Plus => int(1),
            Sign::Minus => int(-1),
        }
    }

    pub fn of(r: &Rational) -> Option<Sign> {
        if r.is_one() {
            Some(Sign::Plus)
        } else if *r == int(-1) {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("sign must be '+' or '-', got {0:?}")]
pub struct BadSign(pub alloc::string::String);

impl FromStr for Sign {
    type Err = BadSign;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "+" | "+1" | "1" => Ok(Sign::Plus),
            "-" | "-1" => Ok(Sign::Minus),
            other => Err(BadSign(other.into())),
        }
    }
}

/// Sign and free parameters of a nontrivial involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionSpec {
    pub sign: Sign,
    /// `α_0, α_1, …`; order `n` needs `α_0, …, α_{n−1}`.
    pub alpha: Series,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvolutionError {
    #[error("order {order} needs {needed} alpha coefficients, got {available}")]
    InsufficientAlpha {
        order: usize,
        needed: usize,
        available: usize,
    },
    #[error("matrix is not an involution")]
    NotInvolution,
    #[error("matrix is a trivial involution (identity or its negative)")]
    Trivial,
}

/// Entry type for the row-by-row construction: plain rationals, or affine
/// expressions when some free entries are still unknown.
pub(crate) trait Entry: Clone {
    fn constant(c: Rational) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn scaled(&self, k: &Rational) -> Self;
    fn times(&self, other: &Self) -> Result<Self, NonlinearProduct>;
}

impl Entry for Rational {
    fn constant(c: Rational) -> Self {
        c
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn scaled(&self, k: &Rational) -> Self {
        self * k
    }
    fn times(&self, other: &Self) -> Result<Self, NonlinearProduct> {
        Ok(self * other)
    }
}

impl Entry for LinExpr {
    fn constant(c: Rational) -> Self {
        LinExpr::constant(c)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn scaled(&self, k: &Rational) -> Self {
        self.scale(k)
    }
    fn times(&self, other: &Self) -> Result<Self, NonlinearProduct> {
        self.mul(other)
    }
}

pub(crate) fn dot<T: Entry>(pairs: impl Iterator<Item = (T, T)>) -> Result<T, NonlinearProduct> {
    let mut acc = T::constant(Rational::zero());
    for (a, b) in pairs {
        acc = acc.plus(&a.times(&b)?);
    }
    Ok(acc)
}

/// Grows a nontrivial involution one row at a time.
///
/// The diagonal is forced to `sign·(−1)^j`, so every division in the
/// involution equations is by a known rational.
#[derive(Debug, Clone)]
pub(crate) struct RowBuilder<T> {
    sign: Rational,
    rows: Vec<Vec<T>>,
    a: Vec<T>,
}

impl<T: Entry> RowBuilder<T> {
    pub fn new(sign: Sign) -> Self {
        let sign = sign.value();
        RowBuilder {
            rows: alloc::vec![alloc::vec![T::constant(sign.clone())]],
            sign,
            a: Vec::new(),
        }
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn a_seq(&self) -> &[T] {
        &self.a
    }

    /// Index of the next row to be added.
    pub fn next_row(&self) -> usize {
        self.rows.len()
    }

    fn diag(&self, j: usize) -> Rational {
        if j.is_multiple_of(2) {
            self.sign.clone()
        } else {
            -self.sign.clone()
        }
    }

    fn row_from_a(&self, m: usize, from: usize) -> Result<Vec<T>, NonlinearProduct> {
        let prev = &self.rows[m - 1];
        (from..=m)
            .map(|j| dot((0..=m - j).map(|k| (self.a[k].clone(), prev[j - 1 + k].clone()))))
            .collect()
    }

    /// `d_{m,0}` from `Σ_k d_{m,k} d_{k,0} = 0` at even `m`.
    fn eq_col0(&self, row: &[T], m: usize) -> Result<T, NonlinearProduct> {
        let s = dot((1..m).map(|k| (row[k].clone(), self.rows[k][0].clone())))?;
        Ok(s.scaled(&-(int(2) * &self.sign).recip()))
    }

    /// Adds row `m`, using `free` as `d_{m,0}` for odd `m` and as `d_{m,1}`
    /// for even `m`; the A-sequence grows by one term.
    pub fn push_free(&mut self, free: T) -> Result<(), NonlinearProduct> {
        let m = self.next_row();
        if m == 1 {
            self.rows
                .push(alloc::vec![free, T::constant(-self.sign.clone())]);
            self.a.push(T::constant(int(-1)));
            return Ok(());
        }
        // placeholders for columns 0 and 1, filled below
        let mut row = alloc::vec![T::constant(Rational::zero()); 2];
        row.extend(self.row_from_a(m, 2)?);
        row[1] = if m.is_multiple_of(2) {
            free.clone()
        } else {
            let s = dot((2..m).map(|k| (row[k].clone(), self.rows[k][1].clone())))?;
            s.scaled(&-(int(2) * self.diag(1)).recip())
        };
        let prev = &self.rows[m - 1];
        let known = dot((0..m - 1).map(|k| (self.a[k].clone(), prev[k].clone())))?;
        let a_next = row[1].minus(&known).scaled(&self.diag(m - 1).recip());
        row[0] = if m % 2 == 1 {
            free
        } else {
            self.eq_col0(&row, m)?
        };
        self.a.push(a_next);
        self.rows.push(row);
        Ok(())
    }

    /// Adds row `m` when the A-sequence is already known: `a_next` is
    /// `a_{m−1}`, and `free` is `d_{m,0}` for odd `m` (ignored for even `m`).
    pub fn push_with_a(&mut self, a_next: T, free: T) -> Result<(), NonlinearProduct> {
        let m = self.next_row();
        self.a.push(a_next);
        let mut row = alloc::vec![T::constant(Rational::zero())];
        row.extend(self.row_from_a(m, 1)?);
        row[0] = if m % 2 == 1 {
            free
        } else {
            self.eq_col0(&row, m)?
        };
        self.rows.push(row);
        Ok(())
    }

    /// Applies `f` to every stored entry.
    pub fn map_entries(&mut self, mut f: impl FnMut(&T) -> T) {
        for row in &mut self.rows {
            for v in row.iter_mut() {
                *v = f(v);
            }
        }
        for v in &mut self.a {
            *v = f(v);
        }
    }
}

impl RowBuilder<Rational> {
    pub fn into_matrix(self) -> Result<RiordanMatrix, RiordanError> {
        RiordanMatrix::from_rows(self.rows)
    }
}

pub fn build_involution(spec: &InvolutionSpec, n: usize) -> Result<RiordanMatrix, InvolutionError> {
    let available = spec.alpha.coeffs().len();
    if available < n {
        return Err(InvolutionError::InsufficientAlpha {
            order: n,
            needed: n,
            available,
        });
    }
    let mut b = RowBuilder::<Rational>::new(spec.sign);
    for m in 1..=n {
        b.push_free(spec.alpha.coeffs()[m - 1].clone())
            .expect("rational entries multiply freely");
    }
    Ok(b.into_matrix()
        .expect("involution rows form a Riordan matrix"))
}

pub fn is_involution(m: &RiordanMatrix) -> bool {
    m.mul(m).expect("same order").is_identity()
}

pub fn read_spec(m: &RiordanMatrix) -> Result<InvolutionSpec, InvolutionError> {
    if !is_involution(m) {
        return Err(InvolutionError::NotInvolution);
    }
    if m.order() == 0 || m.h1().is_one() {
        return Err(InvolutionError::Trivial);
    }
    let sign = Sign::of(m.d0()).ok_or(InvolutionError::NotInvolution)?;
    let rows = m.rows();
    let alpha = (1..=m.order())
        .map(|r| rows[r][if r % 2 == 1 { 0 } else { 1 }].clone())
        .collect();
    Ok(InvolutionSpec {
        sign,
        alpha: Series::new(alpha).expect("order is at least 1"),
    })
}

/// The four diagonal involutions `(±1, ±x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KleinElement {
    I,
    NegI,
    IPlus0,
    IMinus0,
}

impl KleinElement {
    pub const ALL: [KleinElement; 4] = [
        KleinElement::I,
        KleinElement::NegI,
        KleinElement::IPlus0,
        KleinElement::IMinus0,
    ];

    /// `(d_0, h_1)`.
    pub fn signs(self) -> (Sign, Sign) {
        match self {
            KleinElement::I => (Sign::Plus, Sign::Plus),
            KleinElement::NegI => (Sign::Minus, Sign::Plus),
            KleinElement::IPlus0 => (Sign::Plus, Sign::Minus),
            KleinElement::IMinus0 => (Sign::Minus, Sign::Minus),
        }
    }

    pub fn from_signs(d0: Sign, h1: Sign) -> Self {
        match (d0, h1) {
            (Sign::Plus, Sign::Plus) => KleinElement::I,
            (Sign::Minus, Sign::Plus) => KleinElement::NegI,
            (Sign::Plus, Sign::Minus) => KleinElement::IPlus0,
            (Sign::Minus, Sign::Minus) => KleinElement::IMinus0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            KleinElement::I => "I",
            KleinElement::NegI => "NEG_I",
            KleinElement::IPlus0 => "IPLUS0",
            KleinElement::IMinus0 => "IMINUS0",
        }
    }
}

impl fmt::Display for KleinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown Klein tag {0:?} (expected I, NEG_I, IPLUS0 or IMINUS0)")]
pub struct BadKleinTag(pub alloc::string::String);

impl FromStr for KleinElement {
    type Err = BadKleinTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        KleinElement::ALL
            .into_iter()
            .find(|k| k.tag().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| BadKleinTag(s.into()))
    }
}

pub fn klein(which: KleinElement, n: usize) -> RiordanMatrix {
    let (d0, h1) = which.signs();
    RiordanMatrix::diagonal(d0.value(), h1.value(), n)
}
