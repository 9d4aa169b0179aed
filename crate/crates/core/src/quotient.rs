//! Arithmetic and equality in `C = K{c_ij}`, `A = C/[det-1]` and
//! `B = C/[det]` via Ritt pseudo-reduction.
//!
//! The defining chains are `{g, g', g'', ...}` with `g = det - 1` (ring `A`)
//! or `g = det` (ring `B`). Every `g^{(k)}` is linear in its leader
//! `c22^{(k)}` with initial `c11`, so pseudo-division terminates and the
//! normal form is free of every `c22^{(k)}`. The pair `(nf, shift)` encodes
//! `c11^shift * f = nf` in the quotient, with all possible `c11` factors
//! cancelled, which makes the pair canonical per residue class.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::poly::DiffPoly;
use crate::rat::{RatFunc, Rational};
use crate::var::{names, DerivVar, Monomial, VarGroup, VarName};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QuotRing {
    /// `A = C/[det-1]`, the coordinate ring of SL2.
    A,
    /// `B = C/[det]`, the coordinate ring of singular matrices.
    B,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QuotError {
    /// Reduction needed a derivative order beyond the configured cap.
    OrderCapExceeded(u32),
    /// Degree of the zero element is undefined.
    ZeroElement,
    /// `project_homogeneous` was asked for a degree below the representative.
    DegreeTooLarge,
    /// Evaluation in an `A`-context requires a determinant-one matrix.
    NotUnimodular,
}

impl fmt::Display for QuotError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotError::OrderCapExceeded(k) => {
                write!(f, "derivative order {} exceeds the configured cap", k)
            }
            QuotError::ZeroElement => write!(f, "degree of zero is undefined"),
            QuotError::DegreeTooLarge => write!(f, "no representative of the requested degree"),
            QuotError::NotUnimodular => write!(f, "matrix must have determinant 1"),
        }
    }
}

/// `det = c11*c22 - c12*c21` in the given variable-group copy.
pub fn det_poly(group: VarGroup) -> DiffPoly {
    let c = |i, j| DiffPoly::var(names::c_in(group, i, j, 0));
    c(1, 1).mul(&c(2, 2)).sub(&c(1, 2).mul(&c(2, 1)))
}

/// The chain generator `g` of the ring.
pub fn chain_generator(ring: QuotRing, group: VarGroup) -> DiffPoly {
    match ring {
        QuotRing::A => det_poly(group).sub(&DiffPoly::one()),
        QuotRing::B => det_poly(group),
    }
}

/// `T_k` with `c11 * c22^{(k)} = T_k` modulo the chain: the reduction image
/// of the leader monomial.
fn leader_image(ring: QuotRing, group: VarGroup, k: u32) -> DiffPoly {
    let g_k = chain_generator(ring, group).derive_times(k);
    let c11 = DiffPoly::var(names::c_in(group, 1, 1, 0));
    let leader = DiffPoly::var(names::c_in(group, 2, 2, k));
    c11.mul(&leader).sub(&g_k)
}

fn max_leader_order(f: &DiffPoly, group: VarGroup) -> Option<u32> {
    let c22 = VarName::new("c22");
    f.vars()
        .filter(|v| v.group == group && v.name == c22)
        .map(|v| v.order)
        .max()
}

/// Splits `f` as `sum_j f_j * leader^j`, returning the `f_j` by power.
fn split_by_leader(f: &DiffPoly, leader: DerivVar) -> Vec<DiffPoly> {
    let mut parts: Vec<DiffPoly> = Vec::new();
    for (mono, coeff) in f.iter() {
        let j = mono.multiplicity(&leader) as usize;
        let rest = mono
            .div(&Monomial::from_factors([(leader, j as u32)]))
            .unwrap();
        if parts.len() <= j {
            parts.resize(j + 1, DiffPoly::zero());
        }
        parts[j] = parts[j].add(&DiffPoly::term(coeff.clone(), rest));
    }
    parts
}

fn divisible_by_c11(f: &DiffPoly, group: VarGroup) -> bool {
    let c11 = names::c_in(group, 1, 1, 0);
    !f.is_zero() && f.iter().all(|(m, _)| m.multiplicity(&c11) >= 1)
}

fn divide_by_c11(f: &DiffPoly, group: VarGroup) -> DiffPoly {
    let c11 = Monomial::var(names::c_in(group, 1, 1, 0));
    DiffPoly::from_terms(f.iter().map(|(m, c)| (m.div(&c11).unwrap(), c.clone())))
}

/// Ritt pseudo-reduction of `f` against the chain of `ring` in the given
/// variable-group copy. Returns `(nf, e)` with `c11^e * f = nf` modulo the
/// differential ideal; `nf` contains no `c22^{(k)}` and has every possible
/// `c11` factor cancelled. Membership test: `f` is in the ideal iff `nf = 0`
/// (complete on the saturation by `c11`).
pub fn ritt_reduce_in(
    f: &DiffPoly,
    ring: QuotRing,
    group: VarGroup,
) -> Result<(DiffPoly, u32), QuotError> {
    let cap = crate::order_cap();
    let mut work = f.clone();
    let mut shift: u32 = 0;
    while let Some(k) = max_leader_order(&work, group) {
        if k > cap {
            return Err(QuotError::OrderCapExceeded(k));
        }
        let leader = names::c_in(group, 2, 2, k);
        let parts = split_by_leader(&work, leader);
        let m = (parts.len() - 1) as u32;
        let image = leader_image(ring, group, k);
        let c11 = DiffPoly::var(names::c_in(group, 1, 1, 0));
        let mut acc = DiffPoly::zero();
        let mut image_pow = DiffPoly::one();
        for (j, part) in parts.iter().enumerate() {
            let scaled = part.mul(&image_pow).mul(&c11.pow(m - j as u32));
            acc = acc.add(&scaled);
            image_pow = image_pow.mul(&image);
        }
        work = acc;
        shift += m;
    }
    if work.is_zero() {
        return Ok((work, 0));
    }
    while shift > 0 && divisible_by_c11(&work, group) {
        work = divide_by_c11(&work, group);
        shift -= 1;
    }
    Ok((work, shift))
}

/// Reduction in the canonical (left) copy of the group coordinates.
pub fn ritt_reduce(f: &DiffPoly, ring: QuotRing) -> Result<(DiffPoly, u32), QuotError> {
    ritt_reduce_in(f, ring, VarGroup::GroupLeft)
}

/// Reduces a tensor element modulo both the left and the right chain;
/// used for identities in `A ⊗ A`.
pub fn ritt_reduce_tensor(f: &DiffPoly, ring: QuotRing) -> Result<DiffPoly, QuotError> {
    let (left, _) = ritt_reduce_in(f, ring, VarGroup::GroupLeft)?;
    let (both, _) = ritt_reduce_in(&left, ring, VarGroup::GroupRight)?;
    Ok(both)
}

/// Element of `A` or `B`: a representative plus its cached canonical form.
#[derive(Clone)]
pub struct QuotElem {
    ring: QuotRing,
    rep: DiffPoly,
    nf: DiffPoly,
    shift: u32,
}

impl QuotElem {
    pub fn new(ring: QuotRing, rep: DiffPoly) -> Result<Self, QuotError> {
        let (nf, shift) = ritt_reduce(&rep, ring)?;
        Ok(QuotElem {
            ring,
            rep,
            nf,
            shift,
        })
    }

    pub fn zero(ring: QuotRing) -> Self {
        QuotElem::new(ring, DiffPoly::zero()).unwrap()
    }

    pub fn one(ring: QuotRing) -> Self {
        QuotElem::new(ring, DiffPoly::one()).unwrap()
    }

    pub fn ring(&self) -> QuotRing {
        self.ring
    }

    pub fn rep(&self) -> &DiffPoly {
        &self.rep
    }

    /// Canonical pseudo-normal form; `c11^shift * self = nf`.
    pub fn nf(&self) -> &DiffPoly {
        &self.nf
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.nf.is_zero()
    }

    pub fn add(&self, other: &QuotElem) -> QuotElem {
        assert_eq!(self.ring, other.ring);
        QuotElem::new(self.ring, self.rep.add(&other.rep)).unwrap()
    }

    pub fn sub(&self, other: &QuotElem) -> QuotElem {
        assert_eq!(self.ring, other.ring);
        QuotElem::new(self.ring, self.rep.sub(&other.rep)).unwrap()
    }

    pub fn mul(&self, other: &QuotElem) -> QuotElem {
        assert_eq!(self.ring, other.ring);
        // multiply the cached forms to keep representatives small
        let prod = self.nf.mul(&other.nf);
        let (nf, extra) = ritt_reduce(&prod, self.ring).unwrap();
        let (nf, shift) = cancel(nf, extra + self.shift + other.shift);
        QuotElem {
            ring: self.ring,
            rep: self.rep.mul(&other.rep),
            nf,
            shift,
        }
    }

    pub fn neg(&self) -> QuotElem {
        QuotElem {
            ring: self.ring,
            rep: self.rep.neg(),
            nf: self.nf.neg(),
            shift: self.shift,
        }
    }

    pub fn scale(&self, c: &RatFunc) -> QuotElem {
        if c.is_zero() {
            return QuotElem::zero(self.ring);
        }
        QuotElem {
            ring: self.ring,
            rep: self.rep.scale(c),
            nf: self.nf.scale(c),
            shift: self.shift,
        }
    }

    /// Derivation of the quotient ring (well defined: the ideal is
    /// differential).
    pub fn derive(&self) -> QuotElem {
        QuotElem::new(self.ring, self.rep.derive()).unwrap()
    }
}

fn cancel(mut nf: DiffPoly, mut shift: u32) -> (DiffPoly, u32) {
    if nf.is_zero() {
        return (nf, 0);
    }
    while shift > 0 && divisible_by_c11(&nf, VarGroup::GroupLeft) {
        nf = divide_by_c11(&nf, VarGroup::GroupLeft);
        shift -= 1;
    }
    (nf, shift)
}

impl PartialEq for QuotElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && quot_equal(self, other)
    }
}

impl Eq for QuotElem {}

impl fmt::Debug for QuotElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.ring {
            QuotRing::A => "A",
            QuotRing::B => "B",
        };
        if self.shift == 0 {
            write!(f, "[{}] {}", tag, self.nf)
        } else {
            write!(f, "[{}] ({}) / c11^{}", tag, self.nf, self.shift)
        }
    }
}

impl fmt::Display for QuotElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// Equality in the quotient: the difference of representatives reduces
/// to zero.
pub fn quot_equal(f: &QuotElem, g: &QuotElem) -> bool {
    assert_eq!(f.ring(), g.ring(), "quot_equal requires the same ring");
    let (nf, _) = ritt_reduce(&f.rep.sub(&g.rep), f.ring).unwrap();
    nf.is_zero()
}

/// Result of the dual-route equality check: Ritt pseudo-reduction plus the
/// truncated Groebner membership fallback. The two verdicts are reported
/// separately so a disagreement is visible to the caller.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EqualityReport {
    pub ritt: bool,
    pub groebner: bool,
}

impl EqualityReport {
    pub fn agree(&self) -> bool {
        self.ritt == self.groebner
    }
}

/// Equality re-checked in the truncated polynomial ring generated by
/// `g, g', ..., g^{(q)}` with `q = (max order in the difference) + 2`.
pub fn quot_equal_with_fallback(f: &QuotElem, g: &QuotElem) -> EqualityReport {
    let diff = f.rep.sub(&g.rep);
    let (nf, _) = ritt_reduce(&diff, f.ring).unwrap();
    let ritt = nf.is_zero();
    let groebner = crate::groebner::truncated_membership(&diff, f.ring);
    EqualityReport { ritt, groebner }
}

/// Degree of a non-zero element: total degree of the canonical form,
/// corrected for the cancelled `c11` denominator power.
pub fn deg_quot(f: &QuotElem) -> Result<u32, QuotError> {
    if f.is_zero() {
        return Err(QuotError::ZeroElement);
    }
    Ok(f.nf.total_degree().saturating_sub(f.shift))
}

/// The `G`-equivariant morphism `α_d : A_{<=d} -> B`: lift to a
/// representative of degree at most `d`, project on the degree-`d`
/// homogeneous component, reduce in `B`. Kernel is `A_{<=d-1}`.
pub fn project_homogeneous(f: &QuotElem, d: u32) -> Result<QuotElem, QuotError> {
    assert_eq!(f.ring(), QuotRing::A);
    let rep = if f.shift == 0 && f.nf.total_degree() <= d {
        f.nf.clone()
    } else if f.rep.total_degree() <= d {
        f.rep.clone()
    } else {
        return Err(QuotError::DegreeTooLarge);
    };
    QuotElem::new(QuotRing::B, rep.homogeneous_component(d))
}

/// The antipode of `A`: the adjugate substitution `S(c11) = c22`,
/// `S(c12) = -c12`, `S(c21) = -c21`, `S(c22) = c11`, commuting with the
/// derivation.
pub fn antipode(f: &QuotElem) -> QuotElem {
    assert_eq!(f.ring(), QuotRing::A);
    QuotElem::new(QuotRing::A, antipode_poly(&f.rep, VarGroup::GroupLeft)).unwrap()
}

/// The antipode substitution on a plain representative.
pub fn antipode_poly(f: &DiffPoly, group: VarGroup) -> DiffPoly {
    let c11 = VarName::new("c11");
    let c12 = VarName::new("c12");
    let c21 = VarName::new("c21");
    let c22 = VarName::new("c22");
    DiffPoly::from_terms(f.iter().map(|(mono, coeff)| {
        let mut sign_flips = 0u32;
        let mapped = Monomial::from_factors(mono.factors().map(|(v, m)| {
            if v.group != group {
                return (*v, *m);
            }
            let name = if v.name == c11 {
                c22
            } else if v.name == c22 {
                c11
            } else {
                if v.name == c12 || v.name == c21 {
                    sign_flips += m;
                }
                v.name
            };
            (
                DerivVar {
                    group: v.group,
                    name,
                    order: v.order,
                },
                *m,
            )
        }));
        let c = if sign_flips % 2 == 1 {
            coeff.neg()
        } else {
            coeff.clone()
        };
        (mapped, c)
    }))
}

/// The differential ring homomorphism `B -> K{x,y}` of the embedding lemma:
/// `c11 -> x`, `c12 -> y`, `c21 -> beta*x`, `c22 -> beta*y`.
pub fn specialize_to_p(f: &QuotElem, beta: &RatFunc) -> DiffPoly {
    assert_eq!(f.ring(), QuotRing::B);
    let x = DiffPoly::var(names::x(0));
    let y = DiffPoly::var(names::y(0));
    let mut images = BTreeMap::new();
    images.insert(VarName::new("c11"), x.clone());
    images.insert(VarName::new("c12"), y.clone());
    images.insert(VarName::new("c21"), x.scale(beta));
    images.insert(VarName::new("c22"), y.scale(beta));
    f.rep
        .substitute_in_group(VarGroup::GroupLeft, &images)
        .unwrap()
}

/// Evaluates a representative at a constant matrix: `c_ij` goes to `g_ij`
/// and every proper derivative of `c_ij` goes to zero.
pub fn evaluate_at_constant_matrix(f: &DiffPoly, g: &[[Rational; 2]; 2]) -> RatFunc {
    let mut out = RatFunc::zero();
    'term: for (mono, coeff) in f.iter() {
        let mut acc = coeff.clone();
        for (v, m) in mono.factors() {
            if v.group == VarGroup::AuxConst {
                // constants of the ambient ring are left alone by callers
                // that never mix them in; treat presence as zero
                continue 'term;
            }
            if v.order > 0 {
                continue 'term;
            }
            let val = match v.name.as_str() {
                "c11" => g[0][0].clone(),
                "c12" => g[0][1].clone(),
                "c21" => g[1][0].clone(),
                "c22" => g[1][1].clone(),
                _ => continue 'term,
            };
            if val == Rational::from_integer(0.into()) {
                continue 'term;
            }
            let mut p = RatFunc::one();
            for _ in 0..*m {
                p = p.mul(&RatFunc::from_rational(val.clone()));
            }
            acc = acc.mul(&p);
        }
        out = out.add(&acc);
    }
    out
}

/// Evaluation of an `A`-element at a constant point of SL2(Q).
pub fn evaluate_at_matrix(f: &QuotElem, g: &[[Rational; 2]; 2]) -> Result<RatFunc, QuotError> {
    if f.ring() == QuotRing::A {
        let det = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
        if det != Rational::from_integer(1.into()) {
            return Err(QuotError::NotUnimodular);
        }
    }
    Ok(evaluate_at_constant_matrix(&f.rep, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use crate::var::names::c;

    fn cp(i: usize, j: usize, order: u32) -> DiffPoly {
        DiffPoly::var(c(i, j, order))
    }

    fn elem_a(p: DiffPoly) -> QuotElem {
        QuotElem::new(QuotRing::A, p).unwrap()
    }

    fn elem_b(p: DiffPoly) -> QuotElem {
        QuotElem::new(QuotRing::B, p).unwrap()
    }

    #[test]
    fn generator_reduces_to_zero() {
        let g = chain_generator(QuotRing::A, VarGroup::GroupLeft);
        let (nf, e) = ritt_reduce(&g, QuotRing::A).unwrap();
        assert!(nf.is_zero());
        assert_eq!(e, 0);
        // derivatives of the generator reduce to zero as well
        for k in 1..=5 {
            let (nf, _) = ritt_reduce(&g.derive_times(k), QuotRing::A).unwrap();
            assert!(nf.is_zero(), "det^({}) did not reduce to zero", k);
        }
    }

    #[test]
    fn no_leader_is_fixed() {
        let (nf, e) = ritt_reduce(&cp(1, 1, 0), QuotRing::A).unwrap();
        assert_eq!(nf, cp(1, 1, 0));
        assert_eq!(e, 0);
    }

    #[test]
    fn example_reg_xy_row_identity() {
        // raw substitution coefficient equals the displayed A-element
        // 2(c11'c22 - c12'c21)
        let raw = cp(1, 1, 1)
            .mul(&cp(2, 2, 0))
            .add(&cp(1, 2, 0).mul(&cp(2, 1, 1)))
            .sub(&cp(1, 1, 0).mul(&cp(2, 2, 1)))
            .sub(&cp(1, 2, 1).mul(&cp(2, 1, 0)));
        let displayed = cp(1, 1, 1)
            .mul(&cp(2, 2, 0))
            .sub(&cp(1, 2, 1).mul(&cp(2, 1, 0)))
            .scale(&RatFunc::from_int(2));
        let diff = raw.sub(&displayed);
        let (nf, _) = ritt_reduce(&diff, QuotRing::A).unwrap();
        assert!(nf.is_zero());
    }

    #[test]
    fn quot_equal_examples() {
        // c11 c22 = 1 + c12 c21 in A
        let lhs = elem_a(cp(1, 1, 0).mul(&cp(2, 2, 0)));
        let rhs = elem_a(DiffPoly::one().add(&cp(1, 2, 0).mul(&cp(2, 1, 0))));
        assert!(quot_equal(&lhs, &rhs));

        // c11 != c22 in A; confirmed by evaluation at diag(2, 1/2)
        let f = elem_a(cp(1, 1, 0));
        let g = elem_a(cp(2, 2, 0));
        assert!(!quot_equal(&f, &g));
        let m = [
            [rat_int(2), rat_int(0)],
            [rat_int(0), rat(1, 2)],
        ];
        assert_ne!(
            evaluate_at_matrix(&f, &m).unwrap(),
            evaluate_at_matrix(&g, &m).unwrap()
        );

        // c11 c22 = c12 c21 in B
        let lhs = elem_b(cp(1, 1, 0).mul(&cp(2, 2, 0)));
        let rhs = elem_b(cp(1, 2, 0).mul(&cp(2, 1, 0)));
        assert!(quot_equal(&lhs, &rhs));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(deg_quot(&elem_a(cp(1, 1, 0).pow(2))).unwrap(), 2);
        // (det - 1) + c11 has normal form c11
        let g = chain_generator(QuotRing::A, VarGroup::GroupLeft);
        let f = elem_a(g.add(&cp(1, 1, 0)));
        assert_eq!(f.nf(), &cp(1, 1, 0));
        assert_eq!(deg_quot(&f).unwrap(), 1);
        // a degree-2 element from the first-row image
        let w = cp(1, 1, 1).mul(&cp(1, 2, 0)).sub(&cp(1, 1, 0).mul(&cp(1, 2, 1)));
        assert_eq!(deg_quot(&elem_a(w)).unwrap(), 2);
        assert!(matches!(
            deg_quot(&QuotElem::zero(QuotRing::A)),
            Err(QuotError::ZeroElement)
        ));
    }

    #[test]
    fn projection_examples() {
        let f = elem_a(cp(1, 1, 0).pow(2));
        let p = project_homogeneous(&f, 2).unwrap();
        assert!(quot_equal(&p, &elem_b(cp(1, 1, 0).pow(2))));

        let f = elem_a(DiffPoly::one().add(&cp(1, 1, 0).pow(2)));
        let p = project_homogeneous(&f, 2).unwrap();
        assert!(quot_equal(&p, &elem_b(cp(1, 1, 0).pow(2))));

        // degree-1 input lands in the kernel
        let f = elem_a(cp(1, 2, 0));
        let p = project_homogeneous(&f, 2).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn antipode_examples() {
        let s_c11 = antipode(&elem_a(cp(1, 1, 0)));
        assert!(quot_equal(&s_c11, &elem_a(cp(2, 2, 0))));
        // S fixes det
        let det = det_poly(VarGroup::GroupLeft);
        assert!(quot_equal(&antipode(&elem_a(det.clone())), &elem_a(det)));
        // S commutes with the derivation
        let s_c11p = antipode(&elem_a(cp(1, 1, 1)));
        assert!(quot_equal(&s_c11p, &elem_a(cp(2, 2, 1))));
    }

    #[test]
    fn antipode_is_involutive() {
        let f = elem_a(
            cp(1, 1, 1)
                .mul(&cp(2, 2, 0))
                .add(&cp(1, 2, 0).pow(2))
                .sub(&cp(2, 1, 0).scale(&RatFunc::t())),
        );
        assert!(quot_equal(&antipode(&antipode(&f)), &f));
    }

    #[test]
    fn specialization_examples() {
        use crate::var::names::{x, y};
        // c11*c22 with beta = 1 -> x*y
        let f = elem_b(cp(1, 1, 0).mul(&cp(2, 2, 0)));
        let got = specialize_to_p(&f, &RatFunc::one());
        assert_eq!(got, DiffPoly::var(x(0)).mul(&DiffPoly::var(y(0))));
        // det -> 0
        let got = specialize_to_p(&elem_b(det_poly(VarGroup::GroupLeft)), &RatFunc::t());
        assert!(got.is_zero());
        // c21' with beta = t -> x + t x'
        let got = specialize_to_p(&elem_b(cp(2, 1, 1)), &RatFunc::t());
        assert_eq!(
            got,
            DiffPoly::var(x(0)).add(&DiffPoly::var(x(1)).scale(&RatFunc::t()))
        );
    }

    #[test]
    fn specialization_kills_the_chain() {
        let det = det_poly(VarGroup::GroupLeft);
        for k in 0..=5 {
            let f = elem_b(det.derive_times(k));
            assert!(specialize_to_p(&f, &RatFunc::t()).is_zero());
        }
    }

    #[test]
    fn evaluation_examples() {
        let id = [
            [rat_int(1), rat_int(0)],
            [rat_int(0), rat_int(1)],
        ];
        assert_eq!(
            evaluate_at_matrix(&elem_a(cp(1, 1, 0)), &id).unwrap(),
            RatFunc::one()
        );
        let g = chain_generator(QuotRing::A, VarGroup::GroupLeft);
        assert!(evaluate_at_matrix(&elem_a(g), &id).unwrap().is_zero());
        // derivatives vanish on constants
        let f = elem_a(cp(1, 1, 1).mul(&cp(1, 2, 0)));
        assert!(evaluate_at_matrix(&f, &id).unwrap().is_zero());
        // non-unimodular matrices are rejected in A-contexts
        let bad = [
            [rat_int(2), rat_int(0)],
            [rat_int(0), rat_int(2)],
        ];
        assert!(matches!(
            evaluate_at_matrix(&elem_a(cp(1, 1, 0)), &bad),
            Err(QuotError::NotUnimodular)
        ));
    }

    #[test]
    fn equality_is_a_congruence() {
        let f = elem_a(cp(1, 1, 0).mul(&cp(2, 2, 0)));
        let g = elem_a(DiffPoly::one().add(&cp(1, 2, 0).mul(&cp(2, 1, 0))));
        let h = elem_a(cp(2, 2, 1).add(&cp(1, 2, 0)));
        assert!(quot_equal(&f.add(&h), &g.add(&h)));
        assert!(quot_equal(&f.mul(&h), &g.mul(&h)));
    }
}
