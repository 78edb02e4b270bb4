//! Three-involution factorization of matrices with `d0 = 1`, `h1 = −1` in `Ω₀`.
//!
//! The factors are `W1 = (δ1, ω1)`, `W2 = (δ2, ω2)` and `W3 = (1, ω3)`, so
//! the target splits into `h = ω3∘ω2∘ω1` and `d = δ1·δ2(ω1)`. Both parts are
//! solved level by level: each new row of every factor is written in terms
//! of a few fresh unknowns, the matching row of the product is asserted equal
//! to the target, and the unknowns of an even row are fixed once the next
//! odd row has been asserted.
//!
//! The `h` part introduces `a, b, c` at entry `(e, 1)` of `(1, ω1)`,
//! `(1, ω2)`, `(1, ω3)` for even `e ≥ 4`, after seeding row 2 with
//! `a = 1`, `b = 0`, `c = h2 − 1`. The `d` part uses the A-sequences found
//! for `ω1` and `ω2`, and introduces `u, v` at entry `(o, 0)` of `W1`, `W2`
//! for odd `o ≥ 3`. Row 1 of the `d` part is solved in closed form from
//! rows 1 and 2 of the target.

use alloc::{collections::BTreeMap, format, vec::Vec};

use num_traits::Zero;

use super::{DecomposeError, FactorizationCertificate, InternalFailure};
use crate::affine::{LinExpr, LinSystem, NonlinearProduct, Outcome, UnknownId};
use crate::fps::{int, Rational, Series};
use crate::involution::{dot, Entry, RowBuilder, Sign};
use crate::riordan::RiordanMatrix;

fn internal(row: usize, failure: InternalFailure) -> DecomposeError {
    DecomposeError::Internal { row, failure }
}

fn nonlinear(row: usize) -> impl Fn(NonlinearProduct) -> DecomposeError {
    move |_| internal(row, InternalFailure::Nonlinear)
}

/// Row `r` of `A·B`, given row `r` of `A` and rows `0..=r` of `B`.
fn product_row<T: Entry>(a: &[T], b: &[Vec<T>]) -> Result<Vec<T>, NonlinearProduct> {
    let r = a.len() - 1;
    (0..=r)
        .map(|c| dot((c..=r).map(|k| (a[k].clone(), b[k][c].clone()))))
        .collect()
}

fn triple_row(
    m: usize,
    w1: &[Vec<LinExpr>],
    w2: &[Vec<LinExpr>],
    w3: &[Vec<LinExpr>],
) -> Result<Vec<LinExpr>, DecomposeError> {
    let ab = product_row(&w1[m], w2).map_err(nonlinear(m))?;
    product_row(&ab, w3).map_err(nonlinear(m))
}

struct Level {
    sys: LinSystem,
    pending: Vec<UnknownId>,
}

impl Level {
    fn new() -> Self {
        Level {
            sys: LinSystem::new(),
            pending: Vec::new(),
        }
    }

    fn unknown(&mut self, label: alloc::string::String) -> LinExpr {
        let id = self.sys.new_unknown(label);
        self.pending.push(id);
        LinExpr::unknown(id)
    }

    fn assert_row(
        &mut self,
        m: usize,
        lhs: &[LinExpr],
        rhs: &[Rational],
    ) -> Result<(), DecomposeError> {
        for (l, r) in lhs.iter().zip(rhs) {
            if self.sys.assert_eq(l, &LinExpr::constant(r.clone())) == Outcome::Inconsistent {
                return Err(internal(m, InternalFailure::Inconsistent));
            }
        }
        Ok(())
    }

    /// Fixes every pending unknown (free ones to zero) and substitutes the
    /// values into the given factors.
    fn settle(
        &mut self,
        m: usize,
        factors: &mut [&mut RowBuilder<LinExpr>],
    ) -> Result<(), DecomposeError> {
        if self.pending.is_empty() {
            return Ok(());
        }
        let values = self
            .sys
            .fix(&self.pending, &BTreeMap::new())
            .ok_or(internal(m, InternalFailure::Unresolved))?;
        for f in factors.iter_mut() {
            f.map_entries(|e| e.substitute(&values));
        }
        self.pending.clear();
        Ok(())
    }
}

fn numeric(e: &LinExpr, row: usize) -> Result<Rational, DecomposeError> {
    e.as_constant()
        .cloned()
        .ok_or(internal(row, InternalFailure::Unresolved))
}

fn numeric_rows(b: &RowBuilder<LinExpr>) -> Result<Vec<Vec<Rational>>, DecomposeError> {
    b.rows()
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().map(|e| numeric(e, i)).collect())
        .collect()
}

const OMEGA_NAMES: [&str; 3] = ["a", "b", "c"];

/// Finds involutions `(1, ω1)`, `(1, ω2)`, `(1, ω3)` whose product is `(1, h)`.
fn solve_h_part(
    target: &RiordanMatrix,
    seeds: &[Rational; 3],
) -> Result<[RowBuilder<LinExpr>; 3], DecomposeError> {
    let n = target.order();
    let mut level = Level::new();
    let mut ws: [RowBuilder<LinExpr>; 3] = core::array::from_fn(|_| RowBuilder::new(Sign::Plus));
    for m in 1..=n {
        for (i, w) in ws.iter_mut().enumerate() {
            let free = if m % 2 == 1 {
                LinExpr::zero()
            } else if m == 2 {
                LinExpr::constant(seeds[i].clone())
            } else {
                level.unknown(format!("{}[{m},1]", OMEGA_NAMES[i]))
            };
            w.push_free(free).map_err(nonlinear(m))?;
        }
        let row = triple_row(m, ws[0].rows(), ws[1].rows(), ws[2].rows())?;
        level.assert_row(m, &row, &target.rows()[m])?;
        if m % 2 == 1 || m == n {
            let [w1, w2, w3] = &mut ws;
            level.settle(m, &mut [w1, w2, w3])?;
        }
    }
    Ok(ws)
}

/// Finds `δ1`, `δ2` with `δ1·δ2(ω1) = d`, given the `h` part.
fn solve_d_part(
    target: &RiordanMatrix,
    omegas: &[RowBuilder<LinExpr>; 3],
    seeds: &[Rational; 3],
) -> Result<[RowBuilder<LinExpr>; 2], DecomposeError> {
    let n = target.order();
    let d = target.d().coeffs();
    // rows 1 and 2 of the target give u - v = d1 and
    // -a·u + (2a - b)·v = 2·d2 - d1², with a, b the row-2 seeds of ω1, ω2
    let (u10, v10) = if n >= 2 {
        let (a, b) = (&seeds[0], &seeds[1]);
        let v = (int(2) * &d[2] - &d[1] * &d[1] + a * &d[1]) / (a - b);
        (&d[1] + &v, v)
    } else if n == 1 {
        (d[1].clone(), Rational::zero())
    } else {
        (Rational::zero(), Rational::zero())
    };
    let w3 = omegas[2].rows();
    let mut level = Level::new();
    let mut w1 = RowBuilder::<LinExpr>::new(Sign::Plus);
    let mut w2 = RowBuilder::<LinExpr>::new(Sign::Plus);
    for m in 1..=n {
        let (fu, fv) = if m == 1 {
            (
                LinExpr::constant(u10.clone()),
                LinExpr::constant(v10.clone()),
            )
        } else if m % 2 == 1 {
            (
                level.unknown(format!("u[{m},0]")),
                level.unknown(format!("v[{m},0]")),
            )
        } else {
            (LinExpr::zero(), LinExpr::zero())
        };
        w1.push_with_a(omegas[0].a_seq()[m - 1].clone(), fu)
            .map_err(nonlinear(m))?;
        w2.push_with_a(omegas[1].a_seq()[m - 1].clone(), fv)
            .map_err(nonlinear(m))?;
        let row = triple_row(m, w1.rows(), w2.rows(), w3)?;
        level.assert_row(m, &row, &target.rows()[m])?;
        if m % 2 == 0 || m == n {
            level.settle(m, &mut [&mut w1, &mut w2])?;
        }
    }
    Ok([w1, w2])
}

/// Three involutions `W1·W2·W3 = M` for `M` with `d0 = 1`, `h1 = −1` and
/// `h2² = h1·h3`.
pub fn factor_three(m: &RiordanMatrix) -> Result<FactorizationCertificate, DecomposeError> {
    if !num_traits::One::is_one(m.d0()) {
        return Err(DecomposeError::D0NotOne);
    }
    if m.h1() != int(-1) {
        return Err(DecomposeError::H1NotMinusOne);
    }
    if !m.is_omega0() {
        return Err(DecomposeError::NotOmega0);
    }
    let n = m.order();
    let h2 = m.h().coeffs().get(2).cloned().unwrap_or_default();
    let seeds = [int(1), int(0), h2 - int(1)];

    let h_target = RiordanMatrix::from_dh(Series::one(n), m.h().clone())?;
    let omegas = solve_h_part(&h_target, &seeds)?;
    let [w1, w2] = solve_d_part(m, &omegas, &seeds)?;

    let factors = [&w1, &w2, &omegas[2]]
        .into_iter()
        .map(|b| {
            let rows = numeric_rows(b)?;
            RiordanMatrix::from_rows(rows).map_err(|_| internal(n, InternalFailure::Verification))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cert = FactorizationCertificate::new(m.clone(), factors);
    if !cert.verified {
        return Err(internal(n, InternalFailure::Verification));
    }
    Ok(cert)
}
