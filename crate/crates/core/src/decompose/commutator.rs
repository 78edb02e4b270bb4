use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::DecomposeError;
use crate::fps::{Rational, Series};
use crate::riordan::{RiordanError, RiordanMatrix};

/// Writes a unit-diagonal `M` as `A·B·A⁻¹·B⁻¹` with `A = (1, r·x)`.
///
/// `B = (l, m)` solves `(1, h)·m = (1/r, r·x)·m` and `(d, h)·l = (1, r·x)·l`
/// coefficient by coefficient, starting from `m_1 = 1` and `l_0 = 1`.
pub fn commutator_decompose(
    m: &RiordanMatrix,
    r: &Rational,
) -> Result<(RiordanMatrix, RiordanMatrix), DecomposeError> {
    let n = m.order();
    if !m.d0().is_one() || !m.h1().is_one() {
        return Err(DecomposeError::NotUnitDiagonal);
    }
    if r.is_zero() {
        return Err(DecomposeError::ZeroR);
    }
    let mut powers: Vec<Rational> = Vec::with_capacity(n + 1);
    powers.push(Rational::one());
    for k in 1..=n {
        let p = &powers[k - 1] * r;
        if p.is_one() {
            return Err(DecomposeError::RootOfUnity { k });
        }
        powers.push(p);
    }

    // [x^i] h^k is entry (i, k) of (1, h)
    let hk = RiordanMatrix::from_dh(Series::one(n), m.h().clone())?;
    let hk = hk.rows();
    let mut mc = alloc::vec![Rational::zero(); n + 1];
    if n >= 1 {
        mc[1] = Rational::one();
    }
    for i in 2..=n {
        let s = (1..i).fold(Rational::zero(), |acc, k| acc + &hk[i][k] * &mc[k]);
        mc[i] = s / (&powers[i - 1] - Rational::one());
    }

    let d = m.rows();
    let mut lc = alloc::vec![Rational::zero(); n + 1];
    lc[0] = Rational::one();
    for i in 1..=n {
        let s = (0..i).fold(Rational::zero(), |acc, k| acc + &d[i][k] * &lc[k]);
        lc[i] = s / (&powers[i] - Rational::one());
    }

    let a = RiordanMatrix::diagonal(Rational::one(), r.clone(), n);
    let b = RiordanMatrix::from_dh(
        Series::new(lc).map_err(RiordanError::from)?,
        Series::new(mc).map_err(RiordanError::from)?,
    )?;
    Ok((a, b))
}

/// `A·B·A⁻¹·B⁻¹`.
pub fn commutator(a: &RiordanMatrix, b: &RiordanMatrix) -> Result<RiordanMatrix, DecomposeError> {
    Ok(a.mul(b)?.mul(&a.inverse())?.mul(&b.inverse())?)
}
