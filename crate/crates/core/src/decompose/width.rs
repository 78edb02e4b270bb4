//! Exact involution width in the order-2 truncation.
//!
//! Besides `±I`, every involution of order 2 has the form
//!
//! ```text
//! N(s, p, q) =  s
//!               p        -s
//!               -pq/(2s)  q   s
//! ```
//!
//! with `s = ±1`. Since `−N(s, p, q) = N(−s, −p, −q)` and `−I` is central,
//! a product of at most `k` involutions is `I`, `−I`, or a product of `j ≤ k`
//! matrices `N`. For each choice of signs, entries `(1,0)` and `(2,1)` of
//! the product are affine in the `p`s and in the `q`s respectively, and
//! entry `(2,0)` is a sum of terms `p·q`. Eliminating one `p` and one `q`
//! leaves a single bilinear equation, which has a rational solution exactly
//! when it is not a nonzero constant.

use alloc::{collections::BTreeMap, vec, vec::Vec};

use num_traits::{One, Zero};

use super::DecomposeError;
use crate::fps::{frac, Rational};
use crate::involution::klein;
use crate::involution::KleinElement;
use crate::riordan::RiordanMatrix;

/// Polynomial over the rationals; a monomial is its sorted list of variables.
#[derive(Debug, Clone, Default, PartialEq)]
struct Poly(BTreeMap<Vec<usize>, Rational>);

impl Poly {
    fn constant(c: Rational) -> Self {
        let mut p = Poly::default();
        p.add_term(Vec::new(), c);
        p
    }

    fn var(i: usize) -> Self {
        let mut p = Poly::default();
        p.add_term(vec![i], Rational::one());
        p
    }

    fn add_term(&mut self, mono: Vec<usize>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(mono.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&mono);
        }
    }

    fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn scale(&self, k: &Rational) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.0 {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                let mut m: Vec<usize> = m1.iter().chain(m2).copied().collect();
                m.sort_unstable();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    fn as_constant(&self) -> Option<Rational> {
        match self.0.len() {
            0 => Some(Rational::zero()),
            1 => self.0.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    fn degree_in(&self, x: usize) -> usize {
        self.0
            .keys()
            .map(|m| m.iter().filter(|v| **v == x).count())
            .max()
            .unwrap_or(0)
    }

    fn vars(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.0.keys().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Splits `self = x·q + r` for `x` of degree at most one.
    fn split(&self, x: usize) -> (Poly, Poly) {
        let mut q = Poly::default();
        let mut r = Poly::default();
        for (m, c) in &self.0 {
            match m.iter().position(|v| *v == x) {
                Some(i) => {
                    let mut rest = m.clone();
                    rest.remove(i);
                    q.add_term(rest, c.clone());
                }
                None => r.add_term(m.clone(), c.clone()),
            }
        }
        (q, r)
    }

    fn substitute(&self, x: usize, value: &Poly) -> Poly {
        let (q, r) = self.split(x);
        debug_assert!(q.degree_in(x) == 0);
        q.mul(value).add(&r)
    }

    fn eval(&self, point: &BTreeMap<usize, Rational>) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, (m, c)| {
            acc + m.iter().fold(c.clone(), |t, v| t * &point[v])
        })
    }
}

type PolyRows = Vec<Vec<Poly>>;

fn involution_rows(s: &Rational, p: usize, q: usize) -> PolyRows {
    let (pp, qq) = (Poly::var(p), Poly::var(q));
    vec![
        vec![Poly::constant(s.clone())],
        vec![pp.clone(), Poly::constant(-s.clone())],
        vec![
            pp.mul(&qq).scale(&-(frac(1, 2) / s)),
            qq,
            Poly::constant(s.clone()),
        ],
    ]
}

fn mul_rows(a: &PolyRows, b: &PolyRows) -> PolyRows {
    (0..3)
        .map(|i| {
            (0..=i)
                .map(|j| (j..=i).fold(Poly::default(), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

/// Solves `e = 0` for some variable of degree one, returning it and its value.
fn eliminate(e: &Poly) -> Option<(usize, Poly)> {
    let x = e.vars().into_iter().find(|x| {
        let (q, _) = e.split(*x);
        e.degree_in(*x) == 1 && q.as_constant().is_some()
    })?;
    let (q, r) = e.split(x);
    let q = q.as_constant().expect("checked above");
    Some((x, r.scale(&-q.recip())))
}

/// Every sign vector of length `j` with the given product.
fn sign_choices(j: usize, product: &Rational) -> Vec<Vec<Rational>> {
    (0..1u32 << j)
        .map(|bits| {
            (0..j)
                .map(|i| {
                    if bits >> i & 1 == 1 {
                        -Rational::one()
                    } else {
                        Rational::one()
                    }
                })
                .collect::<Vec<_>>()
        })
        .filter(|s| s.iter().fold(Rational::one(), |acc, v| acc * v) == *product)
        .collect()
}

fn solve_case(target: &RiordanMatrix, signs: &[Rational]) -> Option<Vec<RiordanMatrix>> {
    let j = signs.len();
    let factors: Vec<PolyRows> = signs
        .iter()
        .enumerate()
        .map(|(i, s)| involution_rows(s, i, j + i))
        .collect();
    let prod = factors[1..]
        .iter()
        .fold(factors[0].clone(), |acc, f| mul_rows(&acc, f));
    let t = target.rows();
    for i in 0..3 {
        if prod[i][i].as_constant()? != t[i][i] {
            return None;
        }
    }
    let residual = |i: usize, c: usize| prod[i][c].add(&Poly::constant(-t[i][c].clone()));
    let mut bindings: Vec<(usize, Poly)> = Vec::new();
    let mut rest = residual(2, 0);
    for eq in [residual(1, 0), residual(2, 1)] {
        let eq = bindings.iter().fold(eq, |e, (x, v)| e.substitute(*x, v));
        match eq.as_constant() {
            Some(c) if c.is_zero() => continue,
            Some(_) => return None,
            None => {}
        }
        let (x, value) = eliminate(&eq).expect("entries (1,0) and (2,1) are affine");
        rest = rest.substitute(x, &value);
        bindings.push((x, value));
    }

    let mut point: BTreeMap<usize, Rational> = (0..2 * j).map(|v| (v, Rational::zero())).collect();
    match rest.as_constant() {
        Some(c) if !c.is_zero() => return None,
        Some(_) => {}
        None => {
            let x = rest
                .vars()
                .into_iter()
                .find(|x| rest.degree_in(*x) == 1)
                .expect("entry (2,0) is bilinear");
            let (q, r) = rest.split(x);
            // a nonzero multilinear polynomial is nonzero somewhere on {0,1}^m
            let others = q.vars();
            let found = (0..1u32 << others.len()).find_map(|bits| {
                for (i, v) in others.iter().enumerate() {
                    point.insert(
                        *v,
                        if bits >> i & 1 == 1 {
                            Rational::one()
                        } else {
                            Rational::zero()
                        },
                    );
                }
                let qv = q.eval(&point);
                (!qv.is_zero()).then(|| -r.eval(&point) / qv)
            })?;
            point.insert(x, found);
        }
    }
    for (x, value) in bindings.iter().rev() {
        let v = value.eval(&point);
        point.insert(*x, v);
    }

    let witness: Vec<RiordanMatrix> = signs
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let (p, q) = (point[&i].clone(), point[&(j + i)].clone());
            let rows = vec![
                vec![s.clone()],
                vec![p.clone(), -s.clone()],
                vec![
                    -(&p * &q) / (Rational::from_integer(2.into()) * s),
                    q,
                    s.clone(),
                ],
            ];
            RiordanMatrix::from_rows(rows).expect("involution rows are Riordan")
        })
        .collect();
    let product = witness[1..]
        .iter()
        .fold(witness[0].clone(), |acc, f| acc.mul(f).expect("same order"));
    (product == *target).then_some(witness)
}

/// A product of at most `k` involutions equal to `target`, if one exists.
pub fn r2_width_witness(
    target: &RiordanMatrix,
    k: usize,
) -> Result<Option<Vec<RiordanMatrix>>, DecomposeError> {
    if target.order() != 2 {
        return Err(DecomposeError::WrongOrder {
            expected: 2,
            found: target.order(),
        });
    }
    if target.is_identity() {
        return Ok(Some(Vec::new()));
    }
    let neg = klein(KleinElement::NegI, 2);
    if *target == neg {
        return Ok((k >= 1).then(|| vec![neg]));
    }
    let corner = target.d0().clone();
    for j in 1..=k {
        for signs in sign_choices(j, &corner) {
            if let Some(w) = solve_case(target, &signs) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Whether `target` is a product of at most `k` involutions of order 2.
pub fn r2_width_oracle(target: &RiordanMatrix, k: usize) -> Result<bool, DecomposeError> {
    Ok(r2_width_witness(target, k)?.is_some())
}
