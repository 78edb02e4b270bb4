//! Decompositions inside the Riordan group: single commutators, products of
//! involutions, and the split of the involution-generated subgroup as a
//! semidirect product with the Klein four-group.

mod commutator;
mod factor;
mod width;

use alloc::vec::Vec;

use thiserror::Error;

pub use crate::involution::KleinElement;
use crate::involution::{is_involution, klein, Sign};
use crate::riordan::{RiordanError, RiordanMatrix};

pub use commutator::{commutator, commutator_decompose};
pub use factor::factor_three;
pub use width::{r2_width_oracle, r2_width_witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InternalFailure {
    /// A product of two pending unknowns appeared.
    Nonlinear,
    /// The constraint system at this row has no solution.
    Inconsistent,
    /// An unknown could not be reduced to a number.
    Unresolved,
    /// The assembled factors do not reproduce the target.
    Verification,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("matrix must have unit diagonal (d0 = h1 = 1)")]
    NotUnitDiagonal,
    #[error("r must be nonzero")]
    ZeroR,
    #[error("r^{k} = 1, so r is a root of unity within the order")]
    RootOfUnity { k: usize },
    #[error("diagonal signs must be +1 or -1 (d0 and h1)")]
    NotKleinPattern,
    #[error("not in the group generated by involutions")]
    NotInGroup,
    #[error("three-involution factorization needs d0 = 1")]
    D0NotOne,
    #[error("three-involution factorization needs h1 = -1")]
    H1NotMinusOne,
    #[error("h2^2 != h1*h3, so the matrix is outside Omega0")]
    NotOmega0,
    #[error("expected order {expected}, found {found}")]
    WrongOrder { expected: usize, found: usize },
    #[error("internal contract failure at row {row}: {failure:?}")]
    Internal {
        row: usize,
        failure: InternalFailure,
    },
    #[error(transparent)]
    Riordan(#[from] RiordanError),
}

impl DecomposeError {
    pub fn is_internal(&self) -> bool {
        matches!(self, DecomposeError::Internal { .. })
    }
}

/// Involutions whose ordered product is the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationCertificate {
    pub target: RiordanMatrix,
    pub factors: Vec<RiordanMatrix>,
    pub verified: bool,
}

impl FactorizationCertificate {
    /// Builds a certificate and checks it: the product must equal the target
    /// and every factor must square to the identity.
    pub fn new(target: RiordanMatrix, factors: Vec<RiordanMatrix>) -> Self {
        let mut cert = FactorizationCertificate {
            target,
            factors,
            verified: false,
        };
        cert.verified = cert.check();
        cert
    }

    pub fn width(&self) -> usize {
        self.factors.len()
    }

    pub fn product(&self) -> Result<RiordanMatrix, RiordanError> {
        self.factors
            .iter()
            .try_fold(RiordanMatrix::identity(self.target.order()), |acc, f| {
                acc.mul(f)
            })
    }

    /// Recomputes the product and the involution checks from scratch.
    pub fn check(&self) -> bool {
        self.factors
            .iter()
            .all(|f| f.order() == self.target.order() && is_involution(f))
            && self.product().is_ok_and(|p| p == self.target)
    }
}

pub fn klein_component(m: &RiordanMatrix) -> Result<KleinElement, DecomposeError> {
    let d0 = Sign::of(m.d0()).ok_or(DecomposeError::NotKleinPattern)?;
    let h1 = Sign::of(&m.h1()).ok_or(DecomposeError::NotKleinPattern)?;
    Ok(KleinElement::from_signs(d0, h1))
}

pub fn in_generated_by_involutions(m: &RiordanMatrix) -> bool {
    klein_component(m).is_ok() && m.is_omega0()
}

/// `M = C·K` with `C` unit-diagonal in `Ω₀` and `K` a Klein element.
pub fn semidirect_decompose(
    m: &RiordanMatrix,
) -> Result<(RiordanMatrix, KleinElement), DecomposeError> {
    if !in_generated_by_involutions(m) {
        return Err(DecomposeError::NotInGroup);
    }
    let k = klein_component(m)?;
    // Klein elements are their own inverses
    let c = m.mul(&klein(k, m.order()))?;
    Ok((c, k))
}

/// Writes `m` as a product of at most four involutions.
pub fn factor_involutions(m: &RiordanMatrix) -> Result<FactorizationCertificate, DecomposeError> {
    if !in_generated_by_involutions(m) {
        return Err(DecomposeError::NotInGroup);
    }
    if m.is_identity() {
        return Ok(FactorizationCertificate::new(m.clone(), Vec::new()));
    }
    if is_involution(m) {
        return Ok(FactorizationCertificate::new(
            m.clone(),
            alloc::vec![m.clone()],
        ));
    }
    let pattern = klein_component(m)?;
    if pattern == KleinElement::IPlus0 {
        return factor_three(m);
    }
    // M·K has d0 = 1 and h1 = -1, and M = (M·K)·K
    let (d0, h1) = pattern.signs();
    let flip = |s: Sign| match s {
        Sign::Plus => Sign::Minus,
        Sign::Minus => Sign::Plus,
    };
    let fix = KleinElement::from_signs(d0, flip(h1));
    let fix = klein(fix, m.order());
    let three = factor_three(&m.mul(&fix)?)?;
    let mut factors = three.factors;
    factors.push(fix);
    let cert = FactorizationCertificate::new(m.clone(), factors);
    if !cert.verified {
        return Err(DecomposeError::Internal {
            row: m.order(),
            failure: InternalFailure::Verification,
        });
    }
    Ok(cert)
}
