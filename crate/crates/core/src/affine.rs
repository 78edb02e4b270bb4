//! Affine expressions in named unknowns and an incremental exact solver.
//!
//! [`LinExpr`] is `c + Σ k_i·u_i`. Multiplying two expressions is allowed
//! only when one of them is constant; anything else is reported as
//! [`NonlinearProduct`]. The factorization code relies on this: if a product
//! of two pending unknowns ever shows up, the elimination schedule is wrong.

use alloc::{collections::BTreeMap, string::String, vec::Vec};
use core::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::fps::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnknownId(pub usize);

impl fmt::Display for UnknownId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("product of two non-constant affine expressions")]
pub struct NonlinearProduct;

/// `constant + Σ terms[id]·id`, with no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinExpr {
    constant: Rational,
    terms: BTreeMap<UnknownId, Rational>,
}

impl LinExpr {
    pub fn constant(c: Rational) -> Self {
        LinExpr {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unknown(id: UnknownId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(id, Rational::one());
        LinExpr {
            constant: Rational::zero(),
            terms,
        }
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn coeff(&self, id: UnknownId) -> Rational {
        self.terms.get(&id).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (UnknownId, &Rational)> {
        self.terms.iter().map(|(id, c)| (*id, c))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        self.is_constant().then_some(&self.constant)
    }

    fn add_term(&mut self, id: UnknownId, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(id).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&id);
        }
    }

    pub fn add(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (id, c) in &other.terms {
            out.add_term(*id, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LinExpr {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, k: &Rational) -> LinExpr {
        if k.is_zero() {
            return LinExpr::zero();
        }
        LinExpr {
            constant: &self.constant * k,
            terms: self.terms.iter().map(|(id, c)| (*id, c * k)).collect(),
        }
    }

    /// Product, defined only when at least one side is constant.
    pub fn mul(&self, other: &LinExpr) -> Result<LinExpr, NonlinearProduct> {
        match (self.as_constant(), other.as_constant()) {
            (Some(k), _) => Ok(other.scale(k)),
            (_, Some(k)) => Ok(self.scale(k)),
            _ => Err(NonlinearProduct),
        }
    }

    /// Replaces every unknown that has a value in `values`.
    pub fn substitute(&self, values: &BTreeMap<UnknownId, Rational>) -> LinExpr {
        let mut out = LinExpr::constant(self.constant.clone());
        for (id, c) in &self.terms {
            match values.get(id) {
                Some(v) => out.constant += c * v,
                None => out.add_term(*id, c.clone()),
            }
        }
        out
    }

    /// Replaces unknowns by expressions.
    fn substitute_exprs(&self, bindings: &BTreeMap<UnknownId, LinExpr>) -> LinExpr {
        let mut out = LinExpr::constant(self.constant.clone());
        for (id, c) in &self.terms {
            match bindings.get(id) {
                Some(e) => out = out.add(&e.scale(c)),
                None => out.add_term(*id, c.clone()),
            }
        }
        out
    }
}

impl From<Rational> for LinExpr {
    fn from(c: Rational) -> Self {
        LinExpr::constant(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// The equation fixed these unknowns (the pivot) in terms of the free ones.
    Bound(Vec<UnknownId>),
    /// The equation reduced to `0 = 0`.
    Dependent,
    /// The equation reduced to `0 = c` with `c ≠ 0`.
    Inconsistent,
}

/// A system of affine equations kept in reduced echelon form.
///
/// Every bound unknown maps to an expression in the free unknowns only, so
/// reading a value never needs further back-substitution.
#[derive(Debug, Clone, Default)]
pub struct LinSystem {
    labels: Vec<String>,
    bindings: BTreeMap<UnknownId, LinExpr>,
    equations: Vec<LinExpr>,
}

impl LinSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn new_unknown(&mut self, label: impl Into<String>) -> UnknownId {
        self.labels.push(label.into());
        UnknownId(self.labels.len() - 1)
    }

    pub fn label(&self, id: UnknownId) -> Option<&str> {
        self.labels.get(id.0).map(String::as_str)
    }

    pub fn unknown_count(&self) -> usize {
        self.labels.len()
    }

    pub fn is_bound(&self, id: UnknownId) -> bool {
        self.bindings.contains_key(&id)
    }

    /// Current value of `id` as an expression in the free unknowns.
    pub fn value(&self, id: UnknownId) -> LinExpr {
        self.bindings
            .get(&id)
            .cloned()
            .unwrap_or_else(|| LinExpr::unknown(id))
    }

    /// Rewrites `e` in terms of free unknowns only.
    pub fn reduce(&self, e: &LinExpr) -> LinExpr {
        e.substitute_exprs(&self.bindings)
    }

    /// Adds `lhs = rhs` and performs one elimination step.
    ///
    /// The pivot is the first unknown (by id) with a nonzero coefficient.
    pub fn assert_eq(&mut self, lhs: &LinExpr, rhs: &LinExpr) -> Outcome {
        let residual = lhs.sub(rhs);
        self.equations.push(residual.clone());
        let reduced = self.reduce(&residual);
        let Some((pivot, coeff)) = reduced.terms().next().map(|(id, c)| (id, c.clone())) else {
            return if reduced.constant.is_zero() {
                Outcome::Dependent
            } else {
                Outcome::Inconsistent
            };
        };
        // pivot = -(reduced - coeff·pivot) / coeff
        let mut rest = reduced;
        rest.terms.remove(&pivot);
        let solved = rest.scale(&-coeff.recip());
        let single = BTreeMap::from([(pivot, solved.clone())]);
        for expr in self.bindings.values_mut() {
            if !expr.coeff(pivot).is_zero() {
                *expr = expr.substitute_exprs(&single);
            }
        }
        self.bindings.insert(pivot, solved);
        Outcome::Bound(alloc::vec![pivot])
    }

    /// Assigns every unknown a value: free ones from `defaults` (zero when
    /// absent), bound ones by evaluating their binding.
    pub fn resolve(
        &self,
        defaults: &BTreeMap<UnknownId, Rational>,
    ) -> BTreeMap<UnknownId, Rational> {
        let free: BTreeMap<UnknownId, Rational> = (0..self.labels.len())
            .map(UnknownId)
            .filter(|id| !self.is_bound(*id))
            .map(|id| (id, defaults.get(&id).cloned().unwrap_or_default()))
            .collect();
        let mut out = free.clone();
        for (id, expr) in &self.bindings {
            let v = expr.substitute(&free);
            debug_assert!(v.is_constant());
            out.insert(*id, v.constant);
        }
        out
    }

    /// Fixes the free unknowns among `ids` to their defaults (zero when
    /// absent) and returns the numeric values of all of `ids`.
    ///
    /// Returns `None` if some requested unknown still depends on a free
    /// unknown outside `ids`.
    pub fn fix(
        &mut self,
        ids: &[UnknownId],
        defaults: &BTreeMap<UnknownId, Rational>,
    ) -> Option<BTreeMap<UnknownId, Rational>> {
        for id in ids {
            if !self.is_bound(*id) {
                let v = defaults.get(id).cloned().unwrap_or_default();
                self.assert_eq(&LinExpr::unknown(*id), &LinExpr::constant(v));
            }
        }
        ids.iter()
            .map(|id| self.value(*id).as_constant().map(|v| (*id, v.clone())))
            .collect()
    }

    /// Residuals `lhs - rhs` of every asserted equation, in assertion order.
    pub fn equations(&self) -> &[LinExpr] {
        &self.equations
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fps::int;
    use alloc::vec;
    use proptest::prelude::*;

    fn var(id: UnknownId) -> LinExpr {
        LinExpr::unknown(id)
    }

    fn k(n: i64) -> LinExpr {
        LinExpr::constant(int(n))
    }

    #[test]
    fn unknown_ids_and_labels() {
        let mut sys = LinSystem::new();
        let a = sys.new_unknown("a[4,1]");
        let b = sys.new_unknown("b[4,1]");
        assert_eq!(a, UnknownId(0));
        assert_ne!(a, b);
        assert_eq!(sys.label(a), Some("a[4,1]"));
        assert_eq!(sys.label(b), Some("b[4,1]"));
        assert_eq!(sys.label(UnknownId(7)), None);
    }

    #[test]
    fn affine_arithmetic() {
        let x = var(UnknownId(0));
        let y = var(UnknownId(1));
        assert_eq!(
            k(3).mul(&x.add(&k(1))).unwrap(),
            x.scale(&int(3)).add(&k(3))
        );
        assert_eq!(x.mul(&y), Err(NonlinearProduct));
        assert_eq!(x.add(&k(1)).add(&x.neg()), k(1));
        assert!(x.add(&k(1)).add(&x.neg()).is_constant());
        assert_eq!(x.scale(&int(0)), LinExpr::zero());
    }

    #[test]
    fn elimination_examples() {
        let mut sys = LinSystem::new();
        let x = sys.new_unknown("x");
        let y = sys.new_unknown("y");
        assert_eq!(
            sys.assert_eq(&var(x).sub(&var(y)), &k(1)),
            Outcome::Bound(vec![x])
        );
        assert_eq!(
            sys.assert_eq(&var(x).add(&var(y)), &k(3)),
            Outcome::Bound(vec![y])
        );
        let sol = sys.resolve(&BTreeMap::new());
        assert_eq!(sol[&x], int(2));
        assert_eq!(sol[&y], int(1));

        let mut sys = LinSystem::new();
        let x = sys.new_unknown("x");
        let y = sys.new_unknown("y");
        sys.assert_eq(&var(x).sub(&var(y)), &k(1));
        let twice = var(x).scale(&int(2)).sub(&var(y).scale(&int(2)));
        assert_eq!(sys.assert_eq(&twice, &k(2)), Outcome::Dependent);

        let mut sys = LinSystem::new();
        let x = sys.new_unknown("x");
        sys.assert_eq(&var(x), &k(1));
        assert_eq!(sys.assert_eq(&var(x), &k(2)), Outcome::Inconsistent);
    }

    #[test]
    fn resolve_examples() {
        let mut sys = LinSystem::new();
        let x = sys.new_unknown("x");
        let y = sys.new_unknown("y");
        sys.assert_eq(&var(x).sub(&var(y)), &k(1));
        let sol = sys.resolve(&BTreeMap::new());
        assert_eq!((sol[&x].clone(), sol[&y].clone()), (int(1), int(0)));

        sys.assert_eq(&var(y), &k(5));
        let sol = sys.resolve(&BTreeMap::from([(y, int(100))]));
        assert_eq!((sol[&x].clone(), sol[&y].clone()), (int(6), int(5)));

        let mut sys = LinSystem::new();
        let z = sys.new_unknown("z");
        assert_eq!(sys.resolve(&BTreeMap::new())[&z], int(0));
    }

    #[test]
    fn fix_pins_free_unknowns() {
        let mut sys = LinSystem::new();
        let a = sys.new_unknown("a");
        let b = sys.new_unknown("b");
        let c = sys.new_unknown("c");
        sys.assert_eq(&var(a).sub(&var(b)).add(&var(c)), &k(4));
        let vals = sys.fix(&[a, b, c], &BTreeMap::from([(c, int(1))])).unwrap();
        assert_eq!(vals[&a], int(3));
        assert_eq!(vals[&b], int(0));
        assert_eq!(vals[&c], int(1));
        assert!(sys.value(a).is_constant());

        let mut sys = LinSystem::new();
        let a = sys.new_unknown("a");
        let b = sys.new_unknown("b");
        sys.assert_eq(&var(a), &var(b));
        // `a` depends on `b`, which is not being fixed
        assert_eq!(sys.fix(&[a], &BTreeMap::new()), None);
    }

    /// Small random systems with a known solution `x = (1, -2, 3, 0, 5)`.
    fn system_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, 5), 1..6)
    }

    const SOLUTION: [i64; 5] = [1, -2, 3, 0, 5];

    fn build(rows: &[Vec<i64>]) -> (LinSystem, Vec<LinExpr>, Vec<Rational>) {
        let mut sys = LinSystem::new();
        let ids: Vec<UnknownId> = (0..5)
            .map(|i| sys.new_unknown(alloc::format!("x{i}")))
            .collect();
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        for row in rows {
            let e = row.iter().zip(&ids).fold(LinExpr::zero(), |acc, (c, id)| {
                acc.add(&var(*id).scale(&int(*c)))
            });
            let r: i64 = row.iter().zip(SOLUTION).map(|(c, s)| c * s).sum();
            lhs.push(e);
            rhs.push(int(r));
        }
        (sys, lhs, rhs)
    }

    proptest! {
        #[test]
        fn resolved_values_satisfy_every_equation(rows in system_strategy(), defaults in proptest::collection::vec(-4i64..=4, 5)) {
            let (mut sys, lhs, rhs) = build(&rows);
            for (l, r) in lhs.iter().zip(&rhs) {
                prop_assert_ne!(sys.assert_eq(l, &LinExpr::constant(r.clone())), Outcome::Inconsistent);
            }
            let defaults: BTreeMap<_, _> = defaults.iter().enumerate().map(|(i, v)| (UnknownId(i), int(*v))).collect();
            let sol = sys.resolve(&defaults);
            for residual in sys.equations() {
                prop_assert!(residual.substitute(&sol).as_constant().unwrap().is_zero());
            }
        }

        #[test]
        fn assertion_order_preserves_solution_set(rows in system_strategy(), seed in any::<u64>()) {
            let (mut forward, lhs, rhs) = build(&rows);
            let mut order: Vec<usize> = (0..lhs.len()).collect();
            // deterministic shuffle
            let mut s = seed;
            for i in (1..order.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            let (mut permuted, _, _) = build(&rows);
            for (l, r) in lhs.iter().zip(&rhs) {
                forward.assert_eq(l, &LinExpr::constant(r.clone()));
            }
            for &i in &order {
                permuted.assert_eq(&lhs[i], &LinExpr::constant(rhs[i].clone()));
            }
            // same rank, and each system's solutions satisfy the other's equations
            let bound = |s: &LinSystem| (0..5).filter(|i| s.is_bound(UnknownId(*i))).count();
            prop_assert_eq!(bound(&forward), bound(&permuted));
            let a = forward.resolve(&BTreeMap::new());
            let b = permuted.resolve(&BTreeMap::new());
            for residual in permuted.equations() {
                prop_assert!(residual.substitute(&a).as_constant().unwrap().is_zero());
            }
            for residual in forward.equations() {
                prop_assert!(residual.substitute(&b).as_constant().unwrap().is_zero());
            }
        }
    }
}
