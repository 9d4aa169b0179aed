//! Term orders: the total order on terms of `K{x,y}` through sequence
//! pairs, and graded reverse lexicographic comparison for the Groebner
//! engine.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::var::{DerivVar, Monomial, Term, VarName};
use crate::poly::PolyError;

/// Pair of multiplicity sequences `(u, v)`: `u_i` is the multiplicity of
/// `x^{(i)}`, `v_i` of `y^{(i)}`. Trailing zeros are normalized away and
/// comparison acts as if both sequences were zero-padded.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeqPair {
    pub u: Vec<u32>,
    pub v: Vec<u32>,
}

/// Comparison outcome for terms; `Equivalent` means equal up to a non-zero
/// coefficient from `K`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TermOrdering {
    Less,
    Greater,
    Equivalent,
}

fn normalize(mut s: Vec<u32>) -> Vec<u32> {
    while s.last() == Some(&0) {
        s.pop();
    }
    s
}

/// Reads the multiplicity sequences of a term over the module variables.
pub fn seq_of_term(h: &Term) -> Result<SeqPair, PolyError> {
    let x = VarName::new("x");
    let y = VarName::new("y");
    let mut u = Vec::new();
    let mut v = Vec::new();
    for (var, mult) in h.mono.factors() {
        if var.group != crate::var::VarGroup::Module {
            return Err(PolyError::NonModuleVariable(*var));
        }
        let target = if var.name == x {
            &mut u
        } else if var.name == y {
            &mut v
        } else {
            return Err(PolyError::NonModuleVariable(*var));
        };
        let idx = var.order as usize;
        if target.len() <= idx {
            target.resize(idx + 1, 0);
        }
        target[idx] = *mult;
    }
    Ok(SeqPair {
        u: normalize(u),
        v: normalize(v),
    })
}

/// The order on `S`: `u < v` iff at the maximal index where they differ,
/// `u` has the smaller entry.
fn compare_seq(u: &[u32], v: &[u32]) -> Ordering {
    let n = u.len().max(v.len());
    for i in (0..n).rev() {
        let a = u.get(i).copied().unwrap_or(0);
        let b = v.get(i).copied().unwrap_or(0);
        match a.cmp(&b) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    Ordering::Equal
}

impl SeqPair {
    /// The order on `S x S`: compare the `v`-components first.
    pub fn compare(&self, other: &SeqPair) -> Ordering {
        match compare_seq(&self.v, &other.v) {
            Ordering::Equal => compare_seq(&self.u, &other.u),
            o => o,
        }
    }
}

/// Total preorder on terms of `K{x,y}`; coefficients are ignored.
pub fn compare_terms(h: &Term, f: &Term) -> Result<TermOrdering, PolyError> {
    let a = seq_of_term(h)?;
    let b = seq_of_term(f)?;
    Ok(match a.compare(&b) {
        Ordering::Less => TermOrdering::Less,
        Ordering::Greater => TermOrdering::Greater,
        Ordering::Equal => TermOrdering::Equivalent,
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OrderError {
    UnknownVariable(DerivVar),
}

impl core::fmt::Display for OrderError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OrderError::UnknownVariable(v) => write!(f, "variable {} not in the order list", v),
        }
    }
}

/// Graded reverse lexicographic comparison. `var_order` lists the variables
/// from largest to smallest; ties in total degree are broken by the smallest
/// variable with differing exponent, where the monomial carrying more of it
/// is the smaller one.
pub fn grevlex_compare(
    m1: &Monomial,
    m2: &Monomial,
    var_order: &[DerivVar],
) -> Result<Ordering, OrderError> {
    for v in m1.vars().chain(m2.vars()) {
        if !var_order.contains(v) {
            return Err(OrderError::UnknownVariable(*v));
        }
    }
    let d1 = m1.total_degree();
    let d2 = m2.total_degree();
    if d1 != d2 {
        return Ok(d1.cmp(&d2));
    }
    for v in var_order.iter().rev() {
        let a = m1.multiplicity(v);
        let b = m2.multiplicity(v);
        if a != b {
            // more of the smallest differing variable means smaller
            return Ok(b.cmp(&a));
        }
    }
    Ok(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::DiffPoly;
    use crate::rat::RatFunc;
    use crate::var::names::{c, x, y};
    use crate::var::{Monomial, Term};

    fn term_of(p: DiffPoly) -> Term {
        let ts = p.term_set();
        assert_eq!(ts.len(), 1);
        ts.into_iter().next().unwrap()
    }

    #[test]
    fn seq_examples() {
        // x'y -> u=(0,1), v=(1)
        let t = term_of(DiffPoly::var(x(1)).mul(&DiffPoly::var(y(0))));
        let s = seq_of_term(&t).unwrap();
        assert_eq!(s.u, vec![0, 1]);
        assert_eq!(s.v, vec![1]);
        // x^2 -> u=(2), v=()
        let t = term_of(DiffPoly::var(x(0)).pow(2));
        let s = seq_of_term(&t).unwrap();
        assert_eq!(s.u, vec![2]);
        assert!(s.v.is_empty());
        // (y')^3 -> u=(), v=(0,3)
        let t = term_of(DiffPoly::var(y(1)).pow(3));
        let s = seq_of_term(&t).unwrap();
        assert!(s.u.is_empty());
        assert_eq!(s.v, vec![0, 3]);
    }

    #[test]
    fn compare_examples() {
        let x1 = term_of(DiffPoly::var(x(1)));
        let x2 = term_of(DiffPoly::var(x(0)).pow(2));
        assert_eq!(compare_terms(&x1, &x2).unwrap(), TermOrdering::Greater);

        let tx = term_of(DiffPoly::var(x(0)));
        let ty = term_of(DiffPoly::var(y(0)));
        assert_eq!(compare_terms(&tx, &ty).unwrap(), TermOrdering::Less);

        let xpp = term_of(DiffPoly::var(x(2)));
        let xp3 = term_of(DiffPoly::var(x(1)).pow(3));
        assert_eq!(compare_terms(&xpp, &xp3).unwrap(), TermOrdering::Greater);
    }

    #[test]
    fn equivalence_ignores_coefficients() {
        let h = term_of(DiffPoly::var(x(1)).mul(&DiffPoly::var(y(0))));
        let ah = Term::new(RatFunc::t(), h.mono.clone());
        assert_eq!(compare_terms(&h, &ah).unwrap(), TermOrdering::Equivalent);
    }

    #[test]
    fn grevlex_examples() {
        // order: c22 > c21 > c12 > c11
        let order = vec![c(2, 2, 0), c(2, 1, 0), c(1, 2, 0), c(1, 1, 0)];
        let m_diag = Monomial::var(c(1, 1, 0)).mul(&Monomial::var(c(2, 2, 0)));
        let m_anti = Monomial::var(c(1, 2, 0)).mul(&Monomial::var(c(2, 1, 0)));
        // the monomial containing the smallest variable (c11) is smaller
        assert_eq!(
            grevlex_compare(&m_diag, &m_anti, &order).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            grevlex_compare(&m_diag, &m_diag, &order).unwrap(),
            Ordering::Equal
        );
        // graded: lower total degree is smaller
        let m2 = Monomial::var(c(1, 1, 0)).mul(&Monomial::var(c(1, 2, 0)));
        let m3 = m2.mul(&Monomial::var(c(2, 2, 0)));
        assert_eq!(grevlex_compare(&m2, &m3, &order).unwrap(), Ordering::Less);
        // unknown variable errors
        let bad = Monomial::var(x(0));
        assert!(grevlex_compare(&bad, &m2, &order).is_err());
    }
}
