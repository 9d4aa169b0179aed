//! Differential Laurent polynomials: finitely many invertible symbols
//! `z_1, ..., z_n` with integer exponents, together with their derivatives
//! `z_i^{(k)}` (`k >= 1`, positive exponents only). The relation
//! `(1/z)' = -z'/z^2` is built into the derivation, so no explicit inverse
//! variable is needed.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::poly::DiffPoly;
use crate::rat::RatFunc;
use crate::var::{Monomial, VarName};

/// A Laurent power product: exponent map keyed by `(symbol, order)`.
/// Order-0 exponents may be negative; derivative factors are positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct LaurentMono {
    factors: BTreeMap<(VarName, u32), i64>,
}

impl LaurentMono {
    pub fn one() -> Self {
        LaurentMono::default()
    }

    pub fn symbol(name: VarName, exp: i64) -> Self {
        LaurentMono::from_factors([((name, 0), exp)])
    }

    pub fn deriv(name: VarName, order: u32, mult: u32) -> Self {
        assert!(order >= 1);
        LaurentMono::from_factors([((name, order), mult as i64)])
    }

    pub fn from_factors(factors: impl IntoIterator<Item = ((VarName, u32), i64)>) -> Self {
        let mut map: BTreeMap<(VarName, u32), i64> = BTreeMap::new();
        for (k, e) in factors {
            let slot = map.entry(k).or_insert(0);
            *slot += e;
            if *slot == 0 {
                map.remove(&k);
            }
        }
        for ((_, order), e) in &map {
            assert!(*order == 0 || *e > 0, "derivative factors need positive exponents");
        }
        LaurentMono { factors: map }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&(VarName, u32), &i64)> {
        self.factors.iter()
    }

    pub fn exponent(&self, name: VarName, order: u32) -> i64 {
        self.factors.get(&(name, order)).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &LaurentMono) -> LaurentMono {
        LaurentMono::from_factors(
            self.factors
                .iter()
                .chain(other.factors.iter())
                .map(|(k, e)| (*k, *e)),
        )
    }

    /// Inverse, defined when no derivative factor is present.
    pub fn inv(&self) -> Option<LaurentMono> {
        if self.factors.keys().any(|(_, o)| *o > 0) {
            return None;
        }
        Some(LaurentMono::from_factors(
            self.factors.iter().map(|(k, e)| (*k, -e)),
        ))
    }

    /// True when only order-0 symbols occur.
    pub fn is_derivative_free(&self) -> bool {
        self.factors.keys().all(|(_, o)| *o == 0)
    }
}

impl fmt::Display for LaurentMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for ((name, order), e) in &self.factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            match order {
                0 => write!(f, "{}", name)?,
                1 => write!(f, "{}'", name)?,
                o => write!(f, "{}^({})", name, o)?,
            }
            if *e != 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Sparse Laurent differential polynomial over `K`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<LaurentMono, RatFunc>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::term(RatFunc::one(), LaurentMono::one())
    }

    pub fn constant(c: RatFunc) -> Self {
        LaurentPoly::term(c, LaurentMono::one())
    }

    pub fn term(coeff: RatFunc, mono: LaurentMono) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        LaurentPoly { terms }
    }

    pub fn symbol(name: VarName, exp: i64) -> Self {
        LaurentPoly::term(RatFunc::one(), LaurentMono::symbol(name, exp))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (LaurentMono, RatFunc)>) -> Self {
        let mut out = LaurentPoly::zero();
        for (m, c) in terms {
            out.add_term(&m, &c);
        }
        out
    }

    fn add_term(&mut self, mono: &LaurentMono, coeff: &RatFunc) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(mono) {
            Some(c) => {
                let s = c.add(coeff);
                if s.is_zero() {
                    self.terms.remove(mono);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(mono.clone(), coeff.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LaurentMono, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, mono: &LaurentMono) -> RatFunc {
        self.terms.get(mono).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(&m1.mul(m2), &c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.mul(c)))
                .collect(),
        }
    }

    /// Leibniz derivation; `d(z^e) = e z^{e-1} z'` for every integer `e`.
    pub fn derive(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (mono, coeff) in &self.terms {
            let dc = coeff.derive();
            if !dc.is_zero() {
                out.add_term(mono, &dc);
            }
            for ((name, order), e) in mono.factors() {
                // replace one factor ∂^order name by ∂^{order+1} name
                let m = LaurentMono::from_factors(
                    mono.factors()
                        .map(|(k, v)| (*k, *v))
                        .chain([((*name, *order), -1), ((*name, order + 1), 1)]),
                );
                out.add_term(&m, &coeff.scale(&crate::rat::rat_int(*e)));
            }
        }
        out
    }

    pub fn derive_times(&self, n: u32) -> LaurentPoly {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.derive();
        }
        out
    }

    /// Evaluates every symbol at a non-zero element of `K` (derivatives at
    /// the corresponding derivatives). `None` on a missing assignment.
    pub fn evaluate(&self, assign: &BTreeMap<VarName, RatFunc>) -> Option<RatFunc> {
        let mut out = RatFunc::zero();
        for (mono, coeff) in &self.terms {
            let mut acc = coeff.clone();
            for ((name, order), e) in mono.factors() {
                let base = assign.get(name)?;
                let val = base.derive_times(*order);
                acc = acc.mul(&val.pow(*e));
            }
            out = out.add(&acc);
        }
        Some(out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{}", c)?;
            } else if c.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", c, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// The logarithmic derivative `f'/f` of a single Laurent monomial with unit
/// coefficient and no derivative factors: `lambda(prod z_i^{e_i}) =
/// sum e_i z_i' z_i^{-1}`. `None` outside that domain.
pub fn log_derivative(p: &LaurentPoly) -> Option<LaurentPoly> {
    let mut it = p.iter();
    let (mono, coeff) = it.next()?;
    if it.next().is_some() || !coeff.is_one() {
        return None;
    }
    let inv = mono.inv()?;
    Some(p.derive().mul(&LaurentPoly::term(RatFunc::one(), inv)))
}

/// `lambda` applied to one symbol: `z' * z^{-1}`.
pub fn log_derivative_symbol(name: VarName) -> LaurentPoly {
    log_derivative(&LaurentPoly::symbol(name, 1)).unwrap()
}

/// An element of `P tensor K{z, 1/z}` (more generally with several torus
/// symbols on the right): module monomials on the left, Laurent monomials
/// on the right.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GmTensor {
    terms: BTreeMap<(Monomial, LaurentMono), RatFunc>,
}

impl GmTensor {
    pub fn zero() -> Self {
        GmTensor::default()
    }

    pub fn tensor(left: &DiffPoly, right: &LaurentPoly) -> Self {
        let mut out = GmTensor::zero();
        for (lm, lc) in left.iter() {
            for (rm, rc) in right.iter() {
                out.add_term(lm.clone(), rm.clone(), &lc.mul(rc));
            }
        }
        out
    }

    fn add_term(&mut self, left: Monomial, right: LaurentMono, coeff: &RatFunc) {
        if coeff.is_zero() {
            return;
        }
        let key = (left, right);
        match self.terms.get_mut(&key) {
            Some(c) => {
                let s = c.add(coeff);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(key, coeff.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Monomial, LaurentMono), &RatFunc)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &GmTensor) -> GmTensor {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &GmTensor) -> GmTensor {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GmTensor {
        GmTensor {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &GmTensor) -> GmTensor {
        let mut out = GmTensor::zero();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &other.terms {
                out.add_term(l1.mul(l2), r1.mul(r2), &c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> GmTensor {
        if c.is_zero() {
            return GmTensor::zero();
        }
        GmTensor {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v.mul(c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> GmTensor {
        let mut out = GmTensor::tensor(&DiffPoly::one(), &LaurentPoly::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Leibniz derivation across both tensor slots.
    pub fn derive(&self) -> GmTensor {
        let mut out = GmTensor::zero();
        for ((left, right), coeff) in &self.terms {
            let lp = DiffPoly::term(coeff.clone(), left.clone());
            let rp = LaurentPoly::term(RatFunc::one(), right.clone());
            // d(c * l ⊗ r) = (c l)' ⊗ r + c l ⊗ r'
            out = out.add(&GmTensor::tensor(&lp.derive(), &rp));
            out = out.add(&GmTensor::tensor(&lp, &rp.derive()));
        }
        out
    }

    /// Groups the tensor by left (module) monomial: returns each module
    /// monomial with its right-factor Laurent coefficient.
    pub fn collect_left(&self) -> Vec<(Monomial, LaurentPoly)> {
        let mut map: BTreeMap<Monomial, LaurentPoly> = BTreeMap::new();
        for ((l, r), c) in &self.terms {
            let entry = map.entry(l.clone()).or_insert_with(LaurentPoly::zero);
            *entry = entry.add(&LaurentPoly::term(c.clone(), r.clone()));
        }
        map.into_iter().collect()
    }

    /// Evaluates the right factor at `K`-points.
    pub fn evaluate_right(&self, assign: &BTreeMap<VarName, RatFunc>) -> Option<DiffPoly> {
        let mut out = DiffPoly::zero();
        for ((l, r), c) in &self.terms {
            let v = LaurentPoly::term(c.clone(), r.clone()).evaluate(assign)?;
            out = out.add(&DiffPoly::term(v, l.clone()));
        }
        Some(out)
    }
}

impl fmt::Debug for GmTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((l, r), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*{}(x){}", c, l, r)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;


    fn z() -> VarName {
        VarName::new("z")
    }

    #[test]
    fn inverse_cancels() {
        let p = LaurentPoly::symbol(z(), 3).mul(&LaurentPoly::symbol(z(), -3));
        assert_eq!(p, LaurentPoly::one());
    }

    #[test]
    fn derive_negative_power() {
        // (1/z)' = -z'/z^2
        let p = LaurentPoly::symbol(z(), -1);
        let want = LaurentPoly::term(
            RatFunc::from_int(-1),
            LaurentMono::from_factors([((z(), 0), -2), ((z(), 1), 1)]),
        );
        assert_eq!(p.derive(), want);
    }

    #[test]
    fn derive_is_leibniz() {
        let a = LaurentPoly::symbol(z(), 2).add(&LaurentPoly::constant(RatFunc::t()));
        let b = LaurentPoly::symbol(z(), -1).add(&LaurentPoly::symbol(z(), 1));
        let lhs = a.mul(&b).derive();
        let rhs = a.derive().mul(&b).add(&a.mul(&b.derive()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn second_derivative_handles_derivative_factors() {
        // z'' shows up and older factors are consumed without panicking
        let p = LaurentPoly::symbol(z(), -1);
        let d2 = p.derive().derive();
        // (1/z)'' = -z''/z^2 + 2(z')^2/z^3
        let want = LaurentPoly::from_terms([
            (
                LaurentMono::from_factors([((z(), 0), -2), ((z(), 2), 1)]),
                RatFunc::from_int(-1),
            ),
            (
                LaurentMono::from_factors([((z(), 0), -3), ((z(), 1), 2)]),
                RatFunc::from_int(2),
            ),
        ]);
        assert_eq!(d2, want);
    }

    #[test]
    fn evaluation_matches_symbolic_derivation() {
        // evaluate z -> t^2: (z')^2 * z^{-1} becomes (2t)^2 / t^2 = 4
        let p = LaurentPoly::term(
            RatFunc::one(),
            LaurentMono::from_factors([((z(), 0), -1), ((z(), 1), 2)]),
        );
        let mut assign = BTreeMap::new();
        assign.insert(z(), RatFunc::t().mul(&RatFunc::t()));
        assert_eq!(p.evaluate(&assign).unwrap(), RatFunc::from_int(4));
        // evaluation commutes with derivation
        let q = LaurentPoly::symbol(z(), -2);
        let a = q.derive().evaluate(&assign).unwrap();
        let b = q.evaluate(&assign).unwrap().derive();
        assert_eq!(a, b);
    }

    #[test]
    fn log_derivative_examples() {
        // lambda(z) = z' z^{-1}
        let lam = log_derivative_symbol(z());
        let want = LaurentPoly::term(
            RatFunc::one(),
            LaurentMono::from_factors([((z(), 0), -1), ((z(), 1), 1)]),
        );
        assert_eq!(lam, want);
        // lambda on a constant is 0
        assert!(log_derivative(&LaurentPoly::one()).unwrap().is_zero());
        // additivity: lambda(u*v) = lambda(u) + lambda(v)
        let u = VarName::new("u");
        let v = VarName::new("v");
        let prod = LaurentPoly::term(
            RatFunc::one(),
            LaurentMono::symbol(u, 1).mul(&LaurentMono::symbol(v, 1)),
        );
        let lhs = log_derivative(&prod).unwrap();
        let rhs = log_derivative_symbol(u).add(&log_derivative_symbol(v));
        assert_eq!(lhs, rhs);
        // non-monomials are outside the domain
        assert!(log_derivative(&LaurentPoly::symbol(z(), 1).add(&LaurentPoly::one())).is_none());
    }

    #[test]
    fn tensor_derivation_and_evaluation() {
        use crate::var::names::x;
        // x ⊗ z, derived: x' ⊗ z + x ⊗ z'
        let t = GmTensor::tensor(&DiffPoly::var(x(0)), &LaurentPoly::symbol(z(), 1));
        let d = t.derive();
        let mut assign = BTreeMap::new();
        assign.insert(z(), RatFunc::t());
        // at z = t: x' t + x
        let got = d.evaluate_right(&assign).unwrap();
        let want = DiffPoly::var(x(1))
            .scale(&RatFunc::t())
            .add(&DiffPoly::var(x(0)));
        assert_eq!(got, want);
    }
}
