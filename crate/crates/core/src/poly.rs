//! Sparse differential polynomials with exact `Q(t)` coefficients.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::rat::RatFunc;
use crate::var::{DerivVar, Monomial, Term, VarGroup, VarName};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PolyError {
    /// `substitute` met a variable without an image.
    MissingImage(DerivVar),
    /// Weight of the zero polynomial is undefined.
    ZeroPolynomial,
    /// Weight and `d(h)` are only defined over the module variables.
    NonModuleVariable(DerivVar),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::MissingImage(v) => write!(f, "no substitution image for {}", v),
            PolyError::ZeroPolynomial => write!(f, "operation undefined on the zero polynomial"),
            PolyError::NonModuleVariable(v) => {
                write!(f, "expected a module variable, found {}", v)
            }
        }
    }
}

/// A differential polynomial in canonical form: strictly sorted monomials,
/// no zero coefficients. Two polynomials are equal iff their term maps are.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, RatFunc>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        DiffPoly::constant(RatFunc::one())
    }

    pub fn constant(c: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        DiffPoly { terms }
    }

    pub fn var(v: DerivVar) -> Self {
        DiffPoly::term(RatFunc::one(), Monomial::var(v))
    }

    pub fn term(coeff: RatFunc, mono: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        DiffPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, RatFunc)>) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in terms {
            out.add_term(&m, &c);
        }
        out
    }

    fn add_term(&mut self, mono: &Monomial, coeff: &RatFunc) {
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

    /// The canonical term list `M(f)`, sorted by monomial.
    pub fn term_set(&self) -> Vec<Term> {
        self.terms
            .iter()
            .map(|(m, c)| Term::new(c.clone(), m.clone()))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, mono: &Monomial) -> RatFunc {
        self.terms.get(mono).cloned().unwrap_or_else(RatFunc::zero)
    }

    /// The coefficient of the constant monomial.
    pub fn constant_part(&self) -> RatFunc {
        self.coeff_of(&Monomial::one())
    }

    pub fn add(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn sub(&self, other: &DiffPoly) -> DiffPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(&m1.mul(m2), &c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.mul(c)))
                .collect(),
        }
    }

    pub fn mul_mono(&self, mono: &Monomial) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        let mut out = DiffPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Leibniz extension of the derivation: coefficients are differentiated
    /// in `K`, each factor `∂^p v` is raised to `∂^{p+1} v`, and auxiliary
    /// constants are killed.
    pub fn derive(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (mono, coeff) in &self.terms {
            let dc = coeff.derive();
            if !dc.is_zero() {
                out.add_term(mono, &dc);
            }
            for (v, m) in mono.factors() {
                let Some(dv) = v.derived() else { continue };
                // replace one factor v by v', multiply by the multiplicity
                let mut reduced = mono.div(&Monomial::var(*v)).unwrap();
                reduced = reduced.mul(&Monomial::var(dv));
                out.add_term(&reduced, &coeff.scale(&crate::rat::rat_int(*m as i64)));
            }
        }
        out
    }

    pub fn derive_times(&self, n: u32) -> DiffPoly {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.derive();
        }
        out
    }

    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(|m| m.max_order()).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// True when every term is homogeneous of the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.total_degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// The homogeneous component of total degree `d`.
    pub fn homogeneous_component(&self, d: u32) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &DerivVar> {
        self.terms.keys().flat_map(|m| m.vars())
    }

    /// Moves every variable of `from` into group `to`, keeping names/orders.
    pub fn retag_group(&self, from: VarGroup, to: VarGroup) -> DiffPoly {
        let map = |m: &Monomial| {
            Monomial::from_factors(m.factors().map(|(v, k)| {
                let v2 = if v.group == from {
                    DerivVar {
                        group: to,
                        name: v.name,
                        order: v.order,
                    }
                } else {
                    *v
                };
                (v2, *k)
            }))
        };
        DiffPoly::from_terms(self.terms.iter().map(|(m, c)| (map(m), c.clone())))
    }

    /// Differential-homomorphism substitution. Every base variable occurring
    /// in `self` must have an image keyed by `(group, name)`; `∂^p v` is sent
    /// to the `p`-th derivative of the image of `v`.
    pub fn substitute(
        &self,
        images: &BTreeMap<(VarGroup, VarName), DiffPoly>,
    ) -> Result<DiffPoly, PolyError> {
        self.substitute_inner(|v| match images.get(&(v.group, v.name)) {
            Some(p) => Ok(Some(p.clone())),
            None => Err(PolyError::MissingImage(*v)),
        })
    }

    /// Like [`substitute`](Self::substitute), but only variables in `group`
    /// are replaced; the rest map to themselves.
    pub fn substitute_in_group(
        &self,
        group: VarGroup,
        images: &BTreeMap<VarName, DiffPoly>,
    ) -> Result<DiffPoly, PolyError> {
        self.substitute_inner(|v| {
            if v.group != group {
                return Ok(None);
            }
            match images.get(&v.name) {
                Some(p) => Ok(Some(p.clone())),
                None => Err(PolyError::MissingImage(*v)),
            }
        })
    }

    fn substitute_inner(
        &self,
        image_of: impl Fn(&DerivVar) -> Result<Option<DiffPoly>, PolyError>,
    ) -> Result<DiffPoly, PolyError> {
        // cache of derivative towers per base variable
        let mut cache: BTreeMap<(VarGroup, VarName), Vec<DiffPoly>> = BTreeMap::new();
        let mut out = DiffPoly::zero();
        for (mono, coeff) in &self.terms {
            let mut acc = DiffPoly::constant(coeff.clone());
            for (v, mult) in mono.factors() {
                let factor = match image_of(v)? {
                    None => DiffPoly::var(*v),
                    Some(base_image) => {
                        let tower = cache.entry((v.group, v.name)).or_insert_with(|| {
                            let mut t = Vec::new();
                            t.push(base_image.clone());
                            t
                        });
                        while tower.len() <= v.order as usize {
                            let next = tower.last().unwrap().derive();
                            tower.push(next);
                        }
                        tower[v.order as usize].clone()
                    }
                };
                acc = acc.mul(&factor.pow(*mult));
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Weight of a polynomial over the module variables: the maximum of the
    /// term weights, where a term `(x^{(p1)})^{m1}...(y^{(qt)})^{nt}` weighs
    /// `Σ p_i m_i + Σ q_j n_j`.
    pub fn weight(&self) -> Result<u32, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut best = 0;
        for mono in self.terms.keys() {
            best = best.max(mono_weight(mono)?);
        }
        Ok(best)
    }
}

/// Weight of a single term over module variables.
pub fn term_weight(t: &Term) -> Result<u32, PolyError> {
    mono_weight(&t.mono)
}

fn mono_weight(mono: &Monomial) -> Result<u32, PolyError> {
    let mut w = 0;
    for (v, m) in mono.factors() {
        if v.group != VarGroup::Module {
            return Err(PolyError::NonModuleVariable(*v));
        }
        w += v.order * m;
    }
    Ok(w)
}

/// `d(h)`: total `x`-multiplicity minus total `y`-multiplicity of a term.
pub fn dvalue(t: &Term) -> Result<i64, PolyError> {
    let mut d: i64 = 0;
    for (v, m) in t.mono.factors() {
        if v.group != VarGroup::Module {
            return Err(PolyError::NonModuleVariable(*v));
        }
        if v.name == VarName::new("x") {
            d += *m as i64;
        } else {
            d -= *m as i64;
        }
    }
    Ok(d)
}

impl fmt::Display for DiffPoly {
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
            write!(f, "{}", Term::new(c.clone(), m.clone()))?;
        }
        Ok(())
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::RatFunc;
    use crate::var::names::{x, y};

    fn xp(order: u32) -> DiffPoly {
        DiffPoly::var(x(order))
    }

    fn yp(order: u32) -> DiffPoly {
        DiffPoly::var(y(order))
    }

    #[test]
    fn arith_examples() {
        // (x + y) + (x - y) = 2x
        let sum = xp(0).add(&yp(0)).add(&xp(0).sub(&yp(0)));
        assert_eq!(sum, xp(0).scale(&RatFunc::from_int(2)));
        // x * x' is a single term with multiplicity map {x:1, x':1}
        let p = xp(0).mul(&xp(1));
        assert_eq!(p.num_terms(), 1);
        let t = &p.term_set()[0];
        assert_eq!(t.mono.multiplicity(&x(0)), 1);
        assert_eq!(t.mono.multiplicity(&x(1)), 1);
        // (x + y)(x - y) = x^2 - y^2
        let prod = xp(0).add(&yp(0)).mul(&xp(0).sub(&yp(0)));
        assert_eq!(prod, xp(0).pow(2).sub(&yp(0).pow(2)));
    }

    #[test]
    fn derive_examples() {
        // x^2 -> 2 x x'
        assert_eq!(
            xp(0).pow(2).derive(),
            xp(0).mul(&xp(1)).scale(&RatFunc::from_int(2))
        );
        // t*x -> x + t x'
        let tx = xp(0).scale(&RatFunc::t());
        assert_eq!(tx.derive(), xp(0).add(&xp(1).scale(&RatFunc::t())));
        // (x'y - xy')' = x''y - xy''
        let wronskian = xp(1).mul(&yp(0)).sub(&xp(0).mul(&yp(1)));
        assert_eq!(wronskian.derive(), xp(2).mul(&yp(0)).sub(&xp(0).mul(&yp(2))));
    }

    #[test]
    fn aux_constants_are_killed() {
        let beta = DiffPoly::var(DerivVar::base(VarGroup::AuxConst, "beta"));
        assert!(beta.derive().is_zero());
        let p = beta.mul(&xp(0));
        assert_eq!(p.derive(), beta.mul(&xp(1)));
    }

    #[test]
    fn substitute_examples() {
        // x' with x -> t*x gives x + t x'
        let mut images = BTreeMap::new();
        images.insert(
            (VarGroup::Module, VarName::new("x")),
            xp(0).scale(&RatFunc::t()),
        );
        let got = xp(1).substitute(&images).unwrap();
        assert_eq!(got, xp(0).add(&xp(1).scale(&RatFunc::t())));

        // identity substitution
        let mut id = BTreeMap::new();
        id.insert((VarGroup::Module, VarName::new("x")), xp(0));
        assert_eq!(xp(0).substitute(&id).unwrap(), xp(0));

        // x*y with x -> x, y -> beta*x gives beta*x^2
        let beta = DiffPoly::var(DerivVar::base(VarGroup::AuxConst, "beta"));
        let mut phi = BTreeMap::new();
        phi.insert((VarGroup::Module, VarName::new("x")), xp(0));
        phi.insert((VarGroup::Module, VarName::new("y")), beta.mul(&xp(0)));
        let got = xp(0).mul(&yp(0)).substitute(&phi).unwrap();
        assert_eq!(got, beta.mul(&xp(0).pow(2)));

        // missing image errors
        assert!(matches!(
            xp(0).mul(&yp(0)).substitute(&images),
            Err(PolyError::MissingImage(_))
        ));
    }

    #[test]
    fn substitute_commutes_with_derive() {
        let mut images = BTreeMap::new();
        images.insert(
            (VarGroup::Module, VarName::new("x")),
            xp(0).scale(&RatFunc::t()).add(&yp(1)),
        );
        images.insert((VarGroup::Module, VarName::new("y")), xp(0).add(&yp(0)));
        let f = xp(1).mul(&yp(0)).add(&xp(0).pow(2));
        let a = f.derive().substitute(&images).unwrap();
        let b = f.substitute(&images).unwrap().derive();
        assert_eq!(a, b);
    }

    #[test]
    fn weight_examples() {
        // x''*y*(y')^2 -> 4
        let h = xp(2).mul(&yp(0)).mul(&yp(1).pow(2));
        assert_eq!(h.weight().unwrap(), 4);
        // x^d -> 0
        assert_eq!(xp(0).pow(5).weight().unwrap(), 0);
        // x'y - xy' -> 1
        let w = xp(1).mul(&yp(0)).sub(&xp(0).mul(&yp(1)));
        assert_eq!(w.weight().unwrap(), 1);
        assert!(matches!(
            DiffPoly::zero().weight(),
            Err(PolyError::ZeroPolynomial)
        ));
    }

    #[test]
    fn dvalue_examples() {
        let h = xp(2).mul(&yp(0)).mul(&yp(1).pow(2));
        assert_eq!(dvalue(&h.term_set()[0]).unwrap(), -2);
        let p = xp(0).pow(3);
        assert_eq!(dvalue(&p.term_set()[0]).unwrap(), 3);
        let q = xp(1).mul(&yp(0));
        assert_eq!(dvalue(&q.term_set()[0]).unwrap(), 0);
    }

    #[test]
    fn term_set_examples() {
        let p = xp(0).pow(2).add(&xp(0).mul(&yp(0)).scale(&RatFunc::from_int(2)));
        let ts = p.term_set();
        assert_eq!(ts.len(), 2);
        assert!(DiffPoly::zero().term_set().is_empty());
    }

    #[test]
    fn leibniz_on_products() {
        let f = xp(1).mul(&yp(0)).add(&xp(0).pow(2).scale(&RatFunc::t()));
        let g = yp(2).sub(&xp(0));
        let lhs = f.mul(&g).derive();
        let rhs = f.derive().mul(&g).add(&f.mul(&g.derive()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn weight_additive_on_term_products() {
        let a = xp(3).pow(2); // weight 6
        let b = yp(1).mul(&yp(0)); // weight 1
        assert_eq!(
            a.mul(&b).weight().unwrap(),
            a.weight().unwrap() + b.weight().unwrap()
        );
    }
}
