//! Coactions of SL2, Gm and Ga^n on differential polynomial rings.
//!
//! Tensors `V ⊗ K{G}` are realized inside one polynomial engine: the left
//! factor lives in the `Module` variable group, the right factor in the
//! group-coordinate groups (or in Laurent symbols for the torus). A
//! [`TensorPoly`] is therefore just a [`DiffPoly`] whose monomials mix the
//! two groups.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::laurent::{GmTensor, LaurentPoly};
use crate::matrix::Mat;
use crate::ordering::{compare_terms, TermOrdering};
use crate::poly::DiffPoly;
use crate::rat::{rat_int, RatFunc};
use crate::var::{names, DerivVar, Monomial, Term, VarGroup, VarName};

/// A `DiffPoly` over two disjoint variable groups, read as an element of a
/// tensor product: module factors on the left, group factors on the right.
pub type TensorPoly = DiffPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionError {
    /// `gm_evaluate` requires a non-zero scalar.
    ZeroScalar,
    /// The witness construction needs positive weight.
    ZeroWeight,
    /// The witness construction needs `a' != 0`.
    NonConstantRequired,
    /// A matrix in a nilpotent array fails to be nilpotent.
    NotNilpotent(usize, u32),
    /// Two matrices in a nilpotent array fail to commute.
    NotCommuting((usize, u32), (usize, u32)),
    /// A matrix has the wrong shape for the array dimension.
    BadDimension(usize, u32),
    /// A symbol index lies outside `1..=n`.
    BadIndex(usize),
}

impl fmt::Display for ActionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionError::ZeroScalar => write!(f, "scalar must be non-zero"),
            ActionError::ZeroWeight => write!(f, "term must have positive weight"),
            ActionError::NonConstantRequired => {
                write!(f, "scalar must have non-zero derivative")
            }
            ActionError::NotNilpotent(i, j) => {
                write!(f, "matrix at index ({}, {}) is not nilpotent", i, j)
            }
            ActionError::NotCommuting(a, b) => write!(
                f,
                "matrices at ({}, {}) and ({}, {}) do not commute",
                a.0, a.1, b.0, b.1
            ),
            ActionError::BadDimension(i, j) => {
                write!(f, "matrix at ({}, {}) has the wrong shape", i, j)
            }
            ActionError::BadIndex(i) => write!(f, "symbol index {} out of range", i),
        }
    }
}

/// The SL2 coaction on `P = K{x, y}`: the differential substitution
/// `x -> x*c11 + y*c21`, `y -> x*c12 + y*c22` (column comodule convention,
/// so the basis `{x, y}` has coaction matrix `(c_ij)`).
pub fn sl2_coaction(f: &DiffPoly) -> TensorPoly {
    let c = |i, j| DiffPoly::var(names::c(i, j, 0));
    let x = DiffPoly::var(names::x(0));
    let y = DiffPoly::var(names::y(0));
    let mut images = BTreeMap::new();
    images.insert(VarName::new("x"), x.mul(&c(1, 1)).add(&y.mul(&c(2, 1))));
    images.insert(VarName::new("y"), x.mul(&c(1, 2)).add(&y.mul(&c(2, 2))));
    f.substitute_in_group(VarGroup::Module, &images)
        .expect("module input expected")
}

/// Splits a tensor by its module part: each module monomial with its
/// group-coordinate coefficient polynomial.
pub fn collect_module(f: &TensorPoly) -> Vec<(Monomial, DiffPoly)> {
    let mut map: BTreeMap<Monomial, DiffPoly> = BTreeMap::new();
    for (mono, coeff) in f.iter() {
        let (module, rest) = mono.split_group(VarGroup::Module);
        let entry = map.entry(module).or_insert_with(DiffPoly::zero);
        *entry = entry.add(&DiffPoly::term(coeff.clone(), rest));
    }
    map.into_iter().collect()
}

/// Comultiplication of `C`: `Δ(c_ij) = Σ_k c_ik ⊗ c_kj`, with the left copy
/// in `GroupLeft` and the right copy in `GroupRight`.
pub fn comultiply_c(f: &DiffPoly) -> TensorPoly {
    let mut images = BTreeMap::new();
    for i in 1..=2usize {
        for j in 1..=2usize {
            let mut img = DiffPoly::zero();
            for k in 1..=2usize {
                img = img.add(
                    &DiffPoly::var(names::c(i, k, 0))
                        .mul(&DiffPoly::var(names::c_in(VarGroup::GroupRight, k, j, 0))),
                );
            }
            let name = match (i, j) {
                (1, 1) => "c11",
                (1, 2) => "c12",
                (2, 1) => "c21",
                (2, 2) => "c22",
                _ => unreachable!(),
            };
            images.insert(VarName::new(name), img);
        }
    }
    f.substitute_in_group(VarGroup::GroupLeft, &images)
        .expect("group-coordinate input expected")
}

/// The torus symbol `z` used by [`gm_coaction`].
pub fn gm_symbol() -> VarName {
    VarName::new("z")
}

/// The Gm coaction on `P`: `x -> x ⊗ z`, `y -> y ⊗ 1/z`, extended as a
/// differential ring homomorphism.
pub fn gm_coaction(f: &DiffPoly) -> GmTensor {
    let z = gm_symbol();
    let base_x = GmTensor::tensor(&DiffPoly::var(names::x(0)), &LaurentPoly::symbol(z, 1));
    let base_y = GmTensor::tensor(&DiffPoly::var(names::y(0)), &LaurentPoly::symbol(z, -1));
    let mut towers: BTreeMap<VarName, Vec<GmTensor>> = BTreeMap::new();
    towers.insert(VarName::new("x"), alloc::vec![base_x]);
    towers.insert(VarName::new("y"), alloc::vec![base_y]);
    let mut out = GmTensor::zero();
    for (mono, coeff) in f.iter() {
        let mut acc = GmTensor::tensor(&DiffPoly::constant(coeff.clone()), &LaurentPoly::one());
        for (v, m) in mono.factors() {
            assert!(v.group == VarGroup::Module, "module input expected");
            let tower = towers.get_mut(&v.name).expect("variables must be x or y");
            while tower.len() <= v.order as usize {
                let next = tower.last().unwrap().derive();
                tower.push(next);
            }
            acc = acc.mul(&tower[v.order as usize].pow(*m));
        }
        out = out.add(&acc);
    }
    out
}

/// Evaluation of the Gm coaction at `a ∈ K*`: the differential substitution
/// `x -> a*x`, `y -> a^{-1}*y`.
pub fn gm_evaluate(f: &DiffPoly, a: &RatFunc) -> Result<DiffPoly, ActionError> {
    if a.is_zero() {
        return Err(ActionError::ZeroScalar);
    }
    let mut images = BTreeMap::new();
    images.insert(VarName::new("x"), DiffPoly::var(names::x(0)).scale(a));
    images.insert(VarName::new("y"), DiffPoly::var(names::y(0)).scale(&a.inv()));
    Ok(f
        .substitute_in_group(VarGroup::Module, &images)
        .expect("module input expected"))
}

/// Output of [`lemma_max_witness`]: the weight-dropped remainder of the
/// twisted term and its maximal term.
#[derive(Clone, Debug)]
pub struct MaxWitness {
    /// `gm_evaluate(h, a) - a^{d(h)} h`; weight exactly `wt(h) - 1`.
    pub residual: DiffPoly,
    /// The constructed maximal term of the residual.
    pub htilde: Term,
}

/// For a term `h` of positive weight and `a ∈ K` with `a' != 0`, the
/// difference `gm_evaluate(h, a) - a^{d(h)} h` has weight `wt(h) - 1`, and
/// its maximal term arises by lowering the smallest positive derivative
/// order (on the `x` side if one exists, otherwise on the `y` side).
/// All of these facts are asserted before returning.
pub fn lemma_max_witness(h: &Term, a: &RatFunc) -> Result<MaxWitness, ActionError> {
    if a.is_zero() {
        return Err(ActionError::ZeroScalar);
    }
    if a.derive().is_zero() {
        return Err(ActionError::NonConstantRequired);
    }
    let hpoly = DiffPoly::term(h.coeff.clone(), h.mono.clone());
    let w = hpoly.weight().expect("module term expected");
    if w == 0 {
        return Err(ActionError::ZeroWeight);
    }
    let d = crate::poly::dvalue(h).expect("module term expected");

    // smallest positive derivative order, x side preferred
    let pick = |name: &str| -> Option<DerivVar> {
        h.mono
            .vars()
            .filter(|v| v.name == VarName::new(name) && v.order > 0)
            .min_by_key(|v| v.order)
            .copied()
    };
    let (v, sign) = match pick("x") {
        Some(v) => (v, 1i64),
        None => (pick("y").expect("positive weight needs a derivative"), -1i64),
    };
    let m = h.mono.multiplicity(&v);
    let lowered = DerivVar {
        group: v.group,
        name: v.name,
        order: v.order - 1,
    };
    let htilde_mono = h
        .mono
        .div(&Monomial::var(v))
        .unwrap()
        .mul(&Monomial::var(lowered));
    let scalar = a
        .pow(d - 1)
        .mul(&a.derive())
        .scale(&rat_int(sign * m as i64 * v.order as i64));
    let htilde = Term::new(h.coeff.mul(&scalar), htilde_mono.clone());

    let residual = gm_evaluate(&hpoly, a)?.sub(&hpoly.scale(&a.pow(d)));

    // asserted postconditions from the construction
    assert_eq!(residual.weight().expect("non-zero residual"), w - 1);
    assert_eq!(residual.coeff_of(&htilde_mono), htilde.coeff);
    assert_eq!(compare_terms(&htilde, h).unwrap(), TermOrdering::Less);
    for t in residual.term_set() {
        assert_ne!(
            compare_terms(&t, &htilde).unwrap(),
            TermOrdering::Greater,
            "residual term above the constructed witness"
        );
    }
    Ok(MaxWitness { residual, htilde })
}

/// An array of mutually commuting nilpotent `r x r` matrices over `K`,
/// indexed by `(symbol index i, derivative order j)`.
#[derive(Clone, Debug)]
pub struct NilArray {
    n: usize,
    r: usize,
    entries: BTreeMap<(usize, u32), Mat>,
}

impl NilArray {
    pub fn new(
        n: usize,
        r: usize,
        entries: impl IntoIterator<Item = ((usize, u32), Mat)>,
    ) -> Result<Self, ActionError> {
        let mut map: BTreeMap<(usize, u32), Mat> = BTreeMap::new();
        for ((i, j), m) in entries {
            if i < 1 || i > n {
                return Err(ActionError::BadIndex(i));
            }
            if m.rows() != r || m.cols() != r {
                return Err(ActionError::BadDimension(i, j));
            }
            if !m.is_nilpotent() {
                return Err(ActionError::NotNilpotent(i, j));
            }
            map.insert((i, j), m);
        }
        let keys: Vec<(usize, u32)> = map.keys().copied().collect();
        for (a, ka) in keys.iter().enumerate() {
            for kb in keys.iter().take(a) {
                let ma = &map[ka];
                let mb = &map[kb];
                if ma.mul(mb) != mb.mul(ma) {
                    return Err(ActionError::NotCommuting(*kb, *ka));
                }
            }
        }
        Ok(NilArray { n, r, entries: map })
    }

    pub fn empty(n: usize, r: usize) -> Self {
        NilArray {
            n,
            r,
            entries: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, u32), &Mat)> {
        self.entries.iter()
    }
}

/// The symbol `x_i` (1-based) of the Ga^n coordinate ring, as a module
/// variable `x1, x2, ...`.
pub fn ga_var(i: usize, order: u32) -> DerivVar {
    assert!(i >= 1 && i <= 99);
    let mut buf = [0u8; 3];
    buf[0] = b'x';
    let s = if i < 10 {
        buf[1] = b'0' + i as u8;
        core::str::from_utf8(&buf[..2]).unwrap()
    } else {
        buf[1] = b'0' + (i / 10) as u8;
        buf[2] = b'0' + (i % 10) as u8;
        core::str::from_utf8(&buf[..3]).unwrap()
    };
    DerivVar::new(VarGroup::Module, s, order)
}

fn polymat_identity(r: usize) -> Vec<Vec<DiffPoly>> {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { DiffPoly::one() } else { DiffPoly::zero() })
                .collect()
        })
        .collect()
}

fn polymat_mul(a: &[Vec<DiffPoly>], b: &[Vec<DiffPoly>]) -> Vec<Vec<DiffPoly>> {
    let r = a.len();
    let c = b[0].len();
    let k = b.len();
    (0..r)
        .map(|i| {
            (0..c)
                .map(|j| {
                    let mut acc = DiffPoly::zero();
                    for l in 0..k {
                        acc = acc.add(&a[i][l].mul(&b[l][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn polymat_is_zero(a: &[Vec<DiffPoly>]) -> bool {
    a.iter().all(|row| row.iter().all(|p| p.is_zero()))
}

fn polymat_add(a: &[Vec<DiffPoly>], b: &[Vec<DiffPoly>]) -> Vec<Vec<DiffPoly>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.add(y)).collect())
        .collect()
}

fn polymat_scale(a: &[Vec<DiffPoly>], c: &RatFunc) -> Vec<Vec<DiffPoly>> {
    a.iter()
        .map(|row| row.iter().map(|p| p.scale(c)).collect())
        .collect()
}

/// The unipotent differential representation of `Ga^n` attached to a
/// nilpotent array: `(x_1, ..., x_n) -> exp(Σ_{i,j} N_{i,j} ∂^j x_i)`.
/// Nilpotency truncates the exponential to a finite sum of matrices of
/// differential polynomials.
pub fn ga_rep(array: &NilArray) -> Vec<Vec<DiffPoly>> {
    let r = array.dim();
    // the nilpotent argument matrix Σ N_{i,j} x_i^{(j)}
    let mut arg = alloc::vec![alloc::vec![DiffPoly::zero(); r]; r];
    for ((i, j), m) in array.entries() {
        let v = DiffPoly::var(ga_var(*i, *j));
        for a in 0..r {
            for b in 0..r {
                let c = m.get(a, b);
                if !c.is_zero() {
                    arg[a][b] = arg[a][b].add(&v.scale(c));
                }
            }
        }
    }
    let mut out = polymat_identity(r);
    let mut term = polymat_identity(r);
    let cap = array.entries().count() * r + r + 1;
    let mut k: i64 = 1;
    loop {
        term = polymat_mul(&term, &arg);
        term = polymat_scale(
            &term,
            &RatFunc::from_rational(crate::rat::Rational::new(1.into(), k.into())),
        );
        if polymat_is_zero(&term) {
            return out;
        }
        out = polymat_add(&out, &term);
        assert!(
            (k as usize) <= cap,
            "exponential of a commuting nilpotent family must terminate"
        );
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::{quot_equal, QuotElem, QuotRing};
    use crate::var::names::{c, x, y};

    fn xp(o: u32) -> DiffPoly {
        DiffPoly::var(x(o))
    }

    fn yp(o: u32) -> DiffPoly {
        DiffPoly::var(y(o))
    }

    fn cp(i: usize, j: usize, o: u32) -> DiffPoly {
        DiffPoly::var(c(i, j, o))
    }

    #[test]
    fn sl2_on_generators() {
        let got = sl2_coaction(&xp(0));
        let want = xp(0).mul(&cp(1, 1, 0)).add(&yp(0).mul(&cp(2, 1, 0)));
        assert_eq!(got, want);
    }

    #[test]
    fn sl2_on_y_squared() {
        let got = sl2_coaction(&yp(0).pow(2));
        let want = xp(0)
            .pow(2)
            .mul(&cp(1, 2, 0).pow(2))
            .add(
                &xp(0)
                    .mul(&yp(0))
                    .mul(&cp(1, 2, 0))
                    .mul(&cp(2, 2, 0))
                    .scale(&RatFunc::from_int(2)),
            )
            .add(&yp(0).pow(2).mul(&cp(2, 2, 0).pow(2)));
        assert_eq!(got, want);
    }

    #[test]
    fn sl2_on_wronskian() {
        let w = xp(1).mul(&yp(0)).sub(&xp(0).mul(&yp(1)));
        let img = sl2_coaction(&w);
        let coeffs: BTreeMap<Monomial, DiffPoly> = collect_module(&img).into_iter().collect();
        // coefficient of x'y is det, i.e. 1 in A
        let key = Monomial::var(x(1)).mul(&Monomial::var(y(0)));
        let det_c = coeffs.get(&key).unwrap();
        let one = QuotElem::one(QuotRing::A);
        assert!(quot_equal(
            &QuotElem::new(QuotRing::A, det_c.clone()).unwrap(),
            &one
        ));
        // coefficient of x^2 is c11'c12 - c11 c12'
        let key = Monomial::var(x(0)).mul(&Monomial::var(x(0)));
        let got = coeffs.get(&key).unwrap();
        let want = cp(1, 1, 1).mul(&cp(1, 2, 0)).sub(&cp(1, 1, 0).mul(&cp(1, 2, 1)));
        assert_eq!(got, &want);
    }

    #[test]
    fn sl2_is_a_differential_homomorphism() {
        let f = xp(1).mul(&yp(0)).add(&xp(0).pow(2).scale(&RatFunc::t()));
        assert_eq!(sl2_coaction(&f.derive()), sl2_coaction(&f).derive());
        let g = yp(2).sub(&xp(0));
        assert_eq!(sl2_coaction(&f.mul(&g)), sl2_coaction(&f).mul(&sl2_coaction(&g)));
    }

    #[test]
    fn comultiplication_on_generators() {
        let got = comultiply_c(&cp(1, 1, 0));
        let r = |i, j| DiffPoly::var(names::c_in(VarGroup::GroupRight, i, j, 0));
        let want = cp(1, 1, 0).mul(&r(1, 1)).add(&cp(1, 2, 0).mul(&r(2, 1)));
        assert_eq!(got, want);
        assert_eq!(comultiply_c(&DiffPoly::one()), DiffPoly::one());
    }

    #[test]
    fn comultiplication_is_multiplicative_on_det() {
        let det = crate::quotient::det_poly(VarGroup::GroupLeft);
        let det_r = crate::quotient::det_poly(VarGroup::GroupRight);
        assert_eq!(comultiply_c(&det), det.mul(&det_r));
    }

    #[test]
    fn gm_coaction_examples() {
        let z = gm_symbol();
        let got = gm_coaction(&xp(0));
        assert_eq!(got, GmTensor::tensor(&xp(0), &LaurentPoly::symbol(z, 1)));
        // xy -> xy ⊗ 1
        let got = gm_coaction(&xp(0).mul(&yp(0)));
        assert_eq!(
            got,
            GmTensor::tensor(&xp(0).mul(&yp(0)), &LaurentPoly::one())
        );
        // x' -> x' ⊗ z + x ⊗ z'
        let got = gm_coaction(&xp(1));
        let want = GmTensor::tensor(&xp(1), &LaurentPoly::symbol(z, 1)).add(&GmTensor::tensor(
            &xp(0),
            &LaurentPoly::term(
                RatFunc::one(),
                crate::laurent::LaurentMono::deriv(z, 1, 1),
            ),
        ));
        assert_eq!(got, want);
    }

    #[test]
    fn gm_coaction_specializes_to_evaluation() {
        let f = xp(2).mul(&yp(0)).add(&xp(0).pow(3).scale(&RatFunc::t()));
        let a = RatFunc::t();
        let mut assign = BTreeMap::new();
        assign.insert(gm_symbol(), a.clone());
        let via_tensor = gm_coaction(&f).evaluate_right(&assign).unwrap();
        let direct = gm_evaluate(&f, &a).unwrap();
        assert_eq!(via_tensor, direct);
    }

    #[test]
    fn gm_evaluate_examples() {
        // x^3 at the constant 2 -> 8 x^3
        let got = gm_evaluate(&xp(0).pow(3), &RatFunc::from_int(2)).unwrap();
        assert_eq!(got, xp(0).pow(3).scale(&RatFunc::from_int(8)));
        // x' at t -> x + t x'
        let got = gm_evaluate(&xp(1), &RatFunc::t()).unwrap();
        assert_eq!(got, xp(0).add(&xp(1).scale(&RatFunc::t())));
        // x''y at t -> x''y + 2 t^{-1} x'y
        let got = gm_evaluate(&xp(2).mul(&yp(0)), &RatFunc::t()).unwrap();
        let want = xp(2)
            .mul(&yp(0))
            .add(&xp(1).mul(&yp(0)).scale(&RatFunc::t().inv()).scale(&RatFunc::from_int(2)));
        assert_eq!(got, want);
        assert!(matches!(
            gm_evaluate(&xp(0), &RatFunc::zero()),
            Err(ActionError::ZeroScalar)
        ));
    }

    #[test]
    fn gm_evaluation_group_law() {
        let f = xp(1).pow(2).mul(&yp(2)).add(&xp(0).mul(&yp(0)));
        let a = RatFunc::t();
        let b = RatFunc::t().add(&RatFunc::one());
        let lhs = gm_evaluate(&gm_evaluate(&f, &b).unwrap(), &a).unwrap();
        let rhs = gm_evaluate(&f, &a.mul(&b)).unwrap();
        assert_eq!(lhs, rhs);
    }

    fn term_of(p: DiffPoly) -> Term {
        let ts = p.term_set();
        assert_eq!(ts.len(), 1);
        ts.into_iter().next().unwrap()
    }

    #[test]
    fn max_witness_examples() {
        let t = RatFunc::t();
        // h = x': residual = x
        let w = lemma_max_witness(&term_of(xp(1)), &t).unwrap();
        assert_eq!(w.residual, xp(0));
        assert_eq!(DiffPoly::term(w.htilde.coeff, w.htilde.mono), xp(0));
        // h = x''y: residual = 2 t^{-1} x'y
        let w = lemma_max_witness(&term_of(xp(2).mul(&yp(0))), &t).unwrap();
        let want = xp(1)
            .mul(&yp(0))
            .scale(&t.inv())
            .scale(&RatFunc::from_int(2));
        assert_eq!(w.residual, want);
        // h = y': residual = -t^{-2} y, witness carries the y factor
        let w = lemma_max_witness(&term_of(yp(1)), &t).unwrap();
        assert_eq!(w.residual, yp(0).scale(&t.mul(&t).inv().neg()));
        assert_eq!(w.htilde.mono, Monomial::var(y(0)));
    }

    #[test]
    fn max_witness_errors() {
        let t = RatFunc::t();
        assert!(matches!(
            lemma_max_witness(&term_of(xp(0).pow(2)), &t),
            Err(ActionError::ZeroWeight)
        ));
        assert!(matches!(
            lemma_max_witness(&term_of(xp(1)), &RatFunc::from_int(5)),
            Err(ActionError::NonConstantRequired)
        ));
    }

    fn nil(entries: &[&[i64]]) -> Mat {
        Mat::from_rows(
            entries
                .iter()
                .map(|r| r.iter().map(|&v| RatFunc::from_int(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn nilarray_validation() {
        let n01 = nil(&[&[0, 1], &[0, 0]]);
        assert!(NilArray::new(1, 2, [((1, 0), n01.clone())]).is_ok());
        // non-nilpotent rejected
        let id = nil(&[&[1, 0], &[0, 1]]);
        assert!(matches!(
            NilArray::new(1, 2, [((1, 0), id)]),
            Err(ActionError::NotNilpotent(1, 0))
        ));
        // non-commuting pair rejected
        let e = nil(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        let f = nil(&[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert!(matches!(
            NilArray::new(1, 3, [((1, 0), e), ((1, 1), f)]),
            Err(ActionError::NotCommuting(_, _))
        ));
    }

    #[test]
    fn ga_rep_examples() {
        let n01 = nil(&[&[0, 1], &[0, 0]]);
        // N_{1,0} -> [[1, x1],[0,1]]
        let arr = NilArray::new(1, 2, [((1, 0), n01.clone())]).unwrap();
        let rep = ga_rep(&arr);
        assert_eq!(rep[0][0], DiffPoly::one());
        assert_eq!(rep[0][1], DiffPoly::var(ga_var(1, 0)));
        assert_eq!(rep[1][0], DiffPoly::zero());
        assert_eq!(rep[1][1], DiffPoly::one());
        // N_{1,1} -> [[1, x1'],[0,1]]
        let arr = NilArray::new(1, 2, [((1, 1), n01)]).unwrap();
        let rep = ga_rep(&arr);
        assert_eq!(rep[0][1], DiffPoly::var(ga_var(1, 1)));
        // empty array -> identity
        let rep = ga_rep(&NilArray::empty(2, 3));
        assert_eq!(rep, polymat_identity(3));
    }

    #[test]
    fn ga_rep_is_a_homomorphism() {
        // third-order nilpotent with two derivative slots
        let a = nil(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let b = a.mul(&a);
        let arr = NilArray::new(1, 3, [((1, 0), a), ((1, 1), b)]).unwrap();
        let rep = ga_rep(&arr);
        // substitute x1 -> u + v with disjoint symbols u, v
        let u = DiffPoly::var(DerivVar::base(VarGroup::Module, "u"));
        let v = DiffPoly::var(DerivVar::base(VarGroup::Module, "v"));
        let subst = |target: &DiffPoly| {
            let mut images = BTreeMap::new();
            images.insert(ga_var(1, 0).name, target.clone());
            images
        };
        let at = |rep: &Vec<Vec<DiffPoly>>, images: &BTreeMap<VarName, DiffPoly>| -> Vec<Vec<DiffPoly>> {
            rep.iter()
                .map(|row| {
                    row.iter()
                        .map(|p| p.substitute_in_group(VarGroup::Module, images).unwrap())
                        .collect()
                })
                .collect()
        };
        let sum = at(&rep, &subst(&u.add(&v)));
        let left = at(&rep, &subst(&u));
        let right = at(&rep, &subst(&v));
        assert_eq!(sum, polymat_mul(&left, &right));
    }
}
