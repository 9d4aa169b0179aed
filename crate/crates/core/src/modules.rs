//! Finite-dimensional differential SL2-modules (comodules over `A`):
//! coaction matrices, canonical constructions, categorical operations and
//! structural analysis.
//!
//! Conventions. A module of dimension `n` is given by its coaction matrix
//! `(a_ij)` with the column convention `ρ(e_j) = Σ_i e_i ⊗ a_ij`; a morphism
//! `T` over `K` is equivariant iff `T·A_1 = A_2·T`. When a module comes with
//! an embedded basis in `P = K{x, y}`, the matrix is the matrix of the SL2
//! coaction in that basis.
//!
//! Linear algebra over `A` is reduced to linear algebra over `K` by lifting
//! a whole family of elements to polynomial representatives with one common
//! `c11`-denominator power and expanding over the joint monomial support;
//! the common factor makes `K`-linear relations of the lifts equivalent to
//! relations of the elements themselves.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::actions::{collect_module, comultiply_c, sl2_coaction};
use crate::matrix::Mat;
use crate::poly::DiffPoly;
use crate::quotient::{
    antipode, evaluate_at_constant_matrix, quot_equal, ritt_reduce_tensor, QuotElem, QuotRing,
};
use crate::rat::{rat_int, RatFunc};
use crate::rng::SplitMix64;
use crate::var::{names, DerivVar, Monomial, VarGroup, VarName};

#[derive(Clone, Debug)]
pub enum ModuleError {
    /// The span of a proposed basis is not coaction-stable; the witness is
    /// a tensor term escaping the span.
    NotClosed(DiffPoly),
    LinearlyDependent,
    /// Construction parameter out of range (e.g. `W_1`).
    InvalidD,
    NotEquivariant,
    NotSurjective,
    NotInjective,
    ZeroVector,
    SocleNotSimple,
    /// The basis is not adapted (socle-first) as required.
    BasisNotAdapted,
    ZeroOnSocle,
    NotASubmodule,
}

impl fmt::Display for ModuleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleError::NotClosed(w) => write!(f, "span not coaction-stable; witness {}", w),
            ModuleError::LinearlyDependent => write!(f, "basis is linearly dependent"),
            ModuleError::InvalidD => write!(f, "parameter d out of range"),
            ModuleError::NotEquivariant => write!(f, "map is not equivariant"),
            ModuleError::NotSurjective => write!(f, "map is not surjective"),
            ModuleError::NotInjective => write!(f, "map is not injective"),
            ModuleError::ZeroVector => write!(f, "vector must be non-zero"),
            ModuleError::SocleNotSimple => write!(f, "socle is not simple"),
            ModuleError::BasisNotAdapted => write!(f, "basis must list the socle first"),
            ModuleError::ZeroOnSocle => write!(f, "first row vanishes on the socle"),
            ModuleError::NotASubmodule => write!(f, "span is not a submodule"),
        }
    }
}

/// An `n x n` matrix of `A`-elements.
pub type AMat = Vec<Vec<QuotElem>>;

fn a_zero() -> QuotElem {
    QuotElem::zero(QuotRing::A)
}

fn a_one() -> QuotElem {
    QuotElem::one(QuotRing::A)
}

pub fn amat_identity(n: usize) -> AMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { a_one() } else { a_zero() }).collect())
        .collect()
}

/// `k * a` with `k` over `K`.
pub fn amat_k_left(k: &Mat, a: &AMat) -> AMat {
    let rows = k.rows();
    let inner = k.cols();
    let cols = a[0].len();
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let mut acc = a_zero();
                    for l in 0..inner {
                        acc = acc.add(&a[l][j].scale(k.get(i, l)));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `a * k` with `k` over `K`.
pub fn amat_k_right(a: &AMat, k: &Mat) -> AMat {
    let rows = a.len();
    let inner = a[0].len();
    let cols = k.cols();
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let mut acc = a_zero();
                    for l in 0..inner {
                        acc = acc.add(&a[i][l].scale(k.get(l, j)));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Basis change `t^{-1} * a * t`.
pub fn amat_change_basis(a: &AMat, t: &Mat) -> AMat {
    let ti = t.inverse().expect("basis change must be invertible");
    amat_k_left(&ti, &amat_k_right(a, t))
}

pub fn amat_eq(a: &AMat, b: &AMat) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(ra, rb)| ra.len() == rb.len() && ra.iter().zip(rb).all(|(x, y)| quot_equal(x, y)))
}

/// A finite-dimensional `A`-comodule.
#[derive(Clone)]
pub struct FinModule {
    dim: usize,
    basis: Option<Vec<DiffPoly>>,
    coaction: AMat,
}

impl FinModule {
    pub fn new(coaction: AMat) -> Self {
        let n = coaction.len();
        assert!(coaction.iter().all(|r| r.len() == n), "square matrix required");
        FinModule {
            dim: n,
            basis: None,
            coaction,
        }
    }

    pub fn with_basis(basis: Vec<DiffPoly>, coaction: AMat) -> Self {
        let mut m = FinModule::new(coaction);
        assert_eq!(basis.len(), m.dim);
        m.basis = Some(basis);
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> Option<&[DiffPoly]> {
        self.basis.as_deref()
    }

    pub fn coaction(&self) -> &AMat {
        &self.coaction
    }

    pub fn entry(&self, i: usize, j: usize) -> &QuotElem {
        &self.coaction[i][j]
    }

    /// The one-dimensional trivial module.
    pub fn trivial() -> Self {
        FinModule::with_basis(alloc::vec![DiffPoly::one()], amat_identity(1))
    }

    /// Coordinates of `ρ(v)`: the vector with `i`-th entry `Σ_j v_j a_ij`.
    pub fn coact_vector(&self, v: &[RatFunc]) -> Vec<QuotElem> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let mut acc = a_zero();
                for (j, vj) in v.iter().enumerate() {
                    acc = acc.add(&self.coaction[i][j].scale(vj));
                }
                acc
            })
            .collect()
    }

    /// Evaluation of the coaction matrix at a constant point of SL2.
    pub fn constant_point(&self, g: &[[crate::rat::Rational; 2]; 2]) -> Mat {
        Mat::from_fn(self.dim, self.dim, |i, j| {
            evaluate_at_constant_matrix(self.coaction[i][j].rep(), g)
        })
    }
}

impl fmt::Debug for FinModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FinModule(dim {})", self.dim)?;
        for row in &self.coaction {
            write!(f, "  [")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", e)?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// A subspace of `K^n`, stored as a reduced (canonical) row basis.
#[derive(Clone, PartialEq, Eq)]
pub struct SubmoduleDescr {
    ambient_dim: usize,
    vectors: Vec<Vec<RatFunc>>,
}

impl SubmoduleDescr {
    pub fn new(ambient_dim: usize, vectors: Vec<Vec<RatFunc>>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient_dim));
        if vectors.is_empty() {
            return SubmoduleDescr {
                ambient_dim,
                vectors,
            };
        }
        let (r, pivots) = Mat::from_rows(vectors).rref();
        let reduced = (0..pivots.len()).map(|i| r.column_row(i)).collect();
        SubmoduleDescr {
            ambient_dim,
            vectors: reduced,
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        SubmoduleDescr {
            ambient_dim,
            vectors: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let id = Mat::identity(ambient_dim);
        SubmoduleDescr::new(ambient_dim, (0..ambient_dim).map(|i| id.column_row(i)).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn basis(&self) -> &[Vec<RatFunc>] {
        &self.vectors
    }

    /// `n x dim` matrix with the basis vectors as columns.
    pub fn basis_cols(&self) -> Mat {
        Mat::from_fn(self.ambient_dim, self.vectors.len(), |i, j| {
            self.vectors[j][i].clone()
        })
    }

    pub fn contains(&self, v: &[RatFunc]) -> bool {
        if self.vectors.is_empty() {
            return v.iter().all(|x| x.is_zero());
        }
        self.basis_cols().solve(v).is_some()
    }
}

impl fmt::Debug for SubmoduleDescr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SubmoduleDescr(dim {} of {})",
            self.vectors.len(),
            self.ambient_dim
        )
    }
}

/// Row `i` of a matrix as a vector (helper on `Mat`).
trait RowExt {
    fn column_row(&self, i: usize) -> Vec<RatFunc>;
}

impl RowExt for Mat {
    fn column_row(&self, i: usize) -> Vec<RatFunc> {
        (0..self.cols()).map(|j| self.get(i, j).clone()).collect()
    }
}

/// Lifts a family of `A`-elements to polynomial representatives with a
/// common `c11` power cleared, and expands them over the joint monomial
/// support. Returns the support, the lifted polynomials and the coefficient
/// matrix (one row per input element). `K`-linear relations of the rows are
/// exactly the `K`-linear relations of the input elements.
pub fn common_shift_rows(elems: &[QuotElem]) -> (Vec<Monomial>, Vec<DiffPoly>, Mat) {
    let shift = elems.iter().map(|e| e.shift()).max().unwrap_or(0);
    let c11 = DiffPoly::var(names::c(1, 1, 0));
    let lifted: Vec<DiffPoly> = elems
        .iter()
        .map(|e| e.nf().mul(&c11.pow(shift - e.shift())))
        .collect();
    let mut support: BTreeSet<Monomial> = BTreeSet::new();
    for p in &lifted {
        for (m, _) in p.iter() {
            support.insert(m.clone());
        }
    }
    let support: Vec<Monomial> = support.into_iter().collect();
    let mat = Mat::from_fn(elems.len(), support.len(), |i, t| {
        lifted[i].coeff_of(&support[t])
    });
    (support, lifted, mat)
}

fn mono_has_derivative(m: &Monomial) -> bool {
    m.vars().any(|v| v.order > 0)
}

/// Computes the coaction matrix of the span of a `K`-linearly independent
/// family of differential polynomials in `P`: applies the SL2 coaction to
/// each element and solves `ρ(b_j) = Σ_i b_i ⊗ a_ij` over `K`.
pub fn coaction_matrix(basis: &[DiffPoly]) -> Result<FinModule, ModuleError> {
    let n = basis.len();
    assert!(n > 0);
    let images: Vec<_> = basis.iter().map(sl2_coaction).collect();
    // joint module-monomial support
    let mut support: BTreeSet<Monomial> = BTreeSet::new();
    let mut img_parts: Vec<BTreeMap<Monomial, DiffPoly>> = Vec::new();
    for b in basis {
        for (m, _) in b.iter() {
            support.insert(m.clone());
        }
    }
    for img in &images {
        let parts: BTreeMap<Monomial, DiffPoly> = collect_module(img).into_iter().collect();
        for m in parts.keys() {
            support.insert(m.clone());
        }
        img_parts.push(parts);
    }
    let mut monos: Vec<Monomial> = support.into_iter().collect();
    let s = monos.len();
    let mut kb: Vec<Vec<RatFunc>> = (0..s)
        .map(|t| (0..n).map(|i| basis[i].coeff_of(&monos[t])).collect())
        .collect();
    let mut gg: Vec<Vec<DiffPoly>> = (0..s)
        .map(|t| {
            (0..n)
                .map(|j| img_parts[j].get(&monos[t]).cloned().unwrap_or_default())
                .collect()
        })
        .collect();
    // Gauss-Jordan on the K-part, mirrored on the polynomial right side
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0usize;
    for col in 0..n {
        let Some(p) = (r..s).find(|&i| !kb[i][col].is_zero()) else {
            return Err(ModuleError::LinearlyDependent);
        };
        kb.swap(r, p);
        gg.swap(r, p);
        monos.swap(r, p);
        let inv = kb[r][col].inv();
        for x in kb[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for x in gg[r].iter_mut() {
            *x = x.scale(&inv);
        }
        for i in 0..s {
            if i != r && !kb[i][col].is_zero() {
                let f = kb[i][col].clone();
                for c in 0..n {
                    kb[i][c] = kb[i][c].sub(&f.mul(&kb[r][c]));
                    gg[i][c] = gg[i][c].sub(&gg[r][c].scale(&f));
                }
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    for i in r..s {
        for j in 0..n {
            if !gg[i][j].is_zero() {
                let witness = gg[i][j].mul_mono(&monos[i]);
                return Err(ModuleError::NotClosed(witness));
            }
        }
    }
    let mut coaction = alloc::vec![alloc::vec![a_zero(); n]; n];
    for (row, col) in pivots {
        for j in 0..n {
            coaction[col][j] = QuotElem::new(QuotRing::A, gg[row][j].clone())
                .expect("coaction entries stay within the order cap");
        }
    }
    Ok(FinModule::with_basis(basis.to_vec(), coaction))
}

/// All differential monomials in `x, y` of total degree `d` and weight at
/// most `k`, in the canonical order: weight ascending, then exponent
/// vectors on `x, y, x', y', ...` lexicographically descending.
pub fn pdk_monomials(d: u32, k: u32) -> Vec<Monomial> {
    let vars: Vec<DerivVar> = (0..=k)
        .flat_map(|o| [names::x(o), names::y(o)])
        .collect();
    let mut out: Vec<(u32, Vec<u32>)> = Vec::new();
    let mut current = alloc::vec![0u32; vars.len()];
    fn gen(
        vars: &[DerivVar],
        idx: usize,
        deg_left: u32,
        weight_left: i64,
        current: &mut Vec<u32>,
        out: &mut Vec<(u32, Vec<u32>)>,
        weight_cap: u32,
    ) {
        if idx == vars.len() {
            if deg_left == 0 {
                let w: u32 = vars
                    .iter()
                    .zip(current.iter())
                    .map(|(v, e)| v.order * e)
                    .sum();
                out.push((w, current.clone()));
            }
            return;
        }
        for e in (0..=deg_left).rev() {
            let wcost = vars[idx].order as i64 * e as i64;
            if wcost > weight_left {
                continue;
            }
            current[idx] = e;
            gen(vars, idx + 1, deg_left - e, weight_left - wcost, current, out, weight_cap);
        }
        current[idx] = 0;
    }
    gen(&vars, 0, d, k as i64, &mut current, &mut out, k);
    out.sort_by(|(wa, ea), (wb, eb)| wa.cmp(wb).then_with(|| eb.cmp(ea)));
    out.into_iter()
        .map(|(_, e)| {
            Monomial::from_factors(vars.iter().zip(e).filter(|(_, m)| *m > 0).map(|(v, m)| (*v, m)))
        })
        .collect()
}

/// The module `P_d^k`: monomials of degree `d` and weight at most `k`.
pub fn construct_pdk(d: u32, k: u32) -> FinModule {
    let basis: Vec<DiffPoly> = pdk_monomials(d, k)
        .into_iter()
        .map(|m| DiffPoly::term(RatFunc::one(), m))
        .collect();
    coaction_matrix(&basis).expect("monomial spans of fixed degree and weight are stable")
}

/// `U_d`: the span of `P_d^0` together with the derivatives of its
/// monomial basis; dimension `2d + 2`.
pub fn construct_ud(d: u32) -> Result<FinModule, ModuleError> {
    if d < 1 {
        return Err(ModuleError::InvalidD);
    }
    let mut basis: Vec<DiffPoly> = pdk_monomials(d, 0)
        .into_iter()
        .map(|m| DiffPoly::term(RatFunc::one(), m))
        .collect();
    let derived: Vec<DiffPoly> = basis.iter().map(|p| p.derive()).collect();
    basis.extend(derived);
    coaction_matrix(&basis)
}

/// `W_d`: the span of `P_d^0` and `(x'y - xy') * P_{d-2}^0`; dimension
/// `2d`. `W_1` is rejected as degenerate.
pub fn construct_wd(d: u32) -> Result<FinModule, ModuleError> {
    if d < 2 {
        return Err(ModuleError::InvalidD);
    }
    let w = DiffPoly::var(names::x(1))
        .mul(&DiffPoly::var(names::y(0)))
        .sub(&DiffPoly::var(names::x(0)).mul(&DiffPoly::var(names::y(1))));
    let mut basis: Vec<DiffPoly> = pdk_monomials(d, 0)
        .into_iter()
        .map(|m| DiffPoly::term(RatFunc::one(), m))
        .collect();
    basis.extend(
        pdk_monomials(d - 2, 0)
            .into_iter()
            .map(|m| w.mul(&DiffPoly::term(RatFunc::one(), m))),
    );
    coaction_matrix(&basis)
}

/// A 5-dimensional module with three irreducible layers (trivial, then a
/// 3-dimensional layer, then trivial), given inside `A` by the span of
/// `{1, c11'c21 - c11c21', c11'c22 - c21'c12, c12'c22 - c12c22',
///   c11'c22' - c12'c21'}`. Its invariants are one-dimensional and its
/// middle layer does not split off; it witnesses that modules with more
/// than two layers can escape the polynomial module `K{x, y}`.
pub fn three_layer_example() -> FinModule {
    let v = |i: usize, j: usize, o: u32| DiffPoly::var(crate::var::names::c(i, j, o));
    let a = || v(1, 1, 0);
    let b = || v(1, 2, 0);
    let c = || v(2, 1, 0);
    let d = || v(2, 2, 0);
    let ap = || v(1, 1, 1);
    let bp = || v(1, 2, 1);
    let cp = || v(2, 1, 1);
    let dp = || v(2, 2, 1);
    let z = DiffPoly::zero;
    let two = RatFunc::from_int(2);
    let rows: Vec<Vec<DiffPoly>> = alloc::vec![
        alloc::vec![
            DiffPoly::one(),
            ap().mul(&c()).sub(&a().mul(&cp())),
            ap().mul(&d()).sub(&b().mul(&cp())),
            bp().mul(&d()).sub(&b().mul(&dp())),
            ap().mul(&dp()).sub(&bp().mul(&cp())),
        ],
        alloc::vec![
            z(),
            a().pow(2),
            a().mul(&b()),
            b().pow(2),
            a().mul(&bp()).sub(&ap().mul(&b())),
        ],
        alloc::vec![
            z(),
            a().mul(&c()).scale(&two),
            a().mul(&d()).add(&b().mul(&c())),
            b().mul(&d()).scale(&two),
            a().mul(&dp()).sub(&b().mul(&cp())).scale(&two),
        ],
        alloc::vec![
            z(),
            c().pow(2),
            c().mul(&d()),
            d().pow(2),
            c().mul(&dp()).sub(&cp().mul(&d())),
        ],
        alloc::vec![z(), z(), z(), z(), DiffPoly::one()],
    ];
    let coaction: AMat = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|p| QuotElem::new(QuotRing::A, p).expect("first-order entries"))
                .collect()
        })
        .collect();
    FinModule::new(coaction)
}

/// The prolongation `F(M)`: dimension `2n` with block coaction
/// `[[A, ∂A], [0, A]]` (entrywise derivative of representatives).
pub fn prolongation(m: &FinModule) -> FinModule {
    let n = m.dim();
    let da: AMat = m
        .coaction
        .iter()
        .map(|row| row.iter().map(|e| e.derive()).collect())
        .collect();
    let mut big = alloc::vec![alloc::vec![a_zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            big[i][j] = m.coaction[i][j].clone();
            big[i][j + n] = da[i][j].clone();
            big[i + n][j + n] = m.coaction[i][j].clone();
        }
    }
    let mut out = FinModule::new(big);
    if let Some(b) = &m.basis {
        let mut full: Vec<DiffPoly> = b.clone();
        full.extend(b.iter().map(|p| p.derive()));
        // keep the embedded presentation only when it stays independent
        let mut support: BTreeSet<Monomial> = BTreeSet::new();
        for p in &full {
            for (mono, _) in p.iter() {
                support.insert(mono.clone());
            }
        }
        let support: Vec<Monomial> = support.into_iter().collect();
        let mat = Mat::from_fn(support.len(), full.len(), |t, i| full[i].coeff_of(&support[t]));
        if mat.rank() == full.len() {
            out.basis = Some(full);
        }
    }
    out
}

/// Direct sum with block-diagonal coaction.
pub fn direct_sum(m1: &FinModule, m2: &FinModule) -> FinModule {
    let (n1, n2) = (m1.dim(), m2.dim());
    let mut big = alloc::vec![alloc::vec![a_zero(); n1 + n2]; n1 + n2];
    for i in 0..n1 {
        for j in 0..n1 {
            big[i][j] = m1.coaction[i][j].clone();
        }
    }
    for i in 0..n2 {
        for j in 0..n2 {
            big[i + n1][j + n1] = m2.coaction[i][j].clone();
        }
    }
    FinModule::new(big)
}

/// First failing entry of a comodule-axiom check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComoduleFailure {
    Coassociativity(usize, usize),
    Counit(usize, usize),
}

/// Verifies the comodule axioms entrywise: `Δ(a_ij) = Σ_k a_ik ⊗ a_kj`
/// modulo both determinant chains, and `a_ij(identity) = δ_ij`.
pub fn check_comodule(m: &FinModule) -> Result<(), ComoduleFailure> {
    let n = m.dim();
    let id = [
        [rat_int(1), rat_int(0)],
        [rat_int(0), rat_int(1)],
    ];
    for i in 0..n {
        for j in 0..n {
            let rep = m.coaction[i][j].rep();
            let lhs = comultiply_c(rep);
            let mut rhs = DiffPoly::zero();
            for k in 0..n {
                let right = m.coaction[k][j].rep().retag_group(VarGroup::GroupLeft, VarGroup::GroupRight);
                rhs = rhs.add(&m.coaction[i][k].rep().mul(&right));
            }
            let diff = lhs.sub(&rhs);
            let red = ritt_reduce_tensor(&diff, QuotRing::A)
                .expect("comodule entries stay within the order cap");
            if !red.is_zero() {
                return Err(ComoduleFailure::Coassociativity(i, j));
            }
            let at_id = evaluate_at_constant_matrix(rep, &id);
            let want = if i == j { RatFunc::one() } else { RatFunc::zero() };
            if at_id != want {
                return Err(ComoduleFailure::Counit(i, j));
            }
        }
    }
    Ok(())
}

/// Extends the columns of `cols` (independent) to an invertible `n x n`
/// matrix by adding standard basis vectors.
fn extend_to_basis(cols: &Mat) -> Mat {
    let n = cols.rows();
    let mut acc = cols.clone();
    for i in 0..n {
        if acc.cols() == n {
            break;
        }
        let mut e = alloc::vec![RatFunc::zero(); n];
        e[i] = RatFunc::one();
        let candidate = acc.hstack(&Mat::col_vec(&e));
        if candidate.rank() == candidate.cols() {
            acc = candidate;
        }
    }
    assert_eq!(acc.cols(), n, "could not extend to a basis");
    acc
}

/// Checks `pi * A_M = A_W * pi` entrywise in `A`.
fn is_equivariant(pi: &Mat, m: &FinModule, w: &FinModule) -> bool {
    let lhs = amat_k_left(pi, &m.coaction);
    let rhs = amat_k_right(&w.coaction, pi);
    amat_eq(&lhs, &rhs)
}

/// The pull-back of two equivariant surjections `pi_k : M_k -> W`:
/// dimension `n_1 + n_2 - w`, with the block coaction
/// `[[A_1°, 0, B_1], [0, A_2°, B_2], [0, 0, A_W]]` in a kernel-adapted
/// basis (`A_k°` the kernel block of `M_k`).
pub fn pullback(
    m1: &FinModule,
    m2: &FinModule,
    w: &FinModule,
    pi1: &Mat,
    pi2: &Mat,
) -> Result<FinModule, ModuleError> {
    let wd = w.dim();
    for (m, pi) in [(m1, pi1), (m2, pi2)] {
        if pi.rows() != wd || pi.cols() != m.dim() {
            return Err(ModuleError::NotSurjective);
        }
        if pi.rank() != wd {
            return Err(ModuleError::NotSurjective);
        }
        if !is_equivariant(pi, m, w) {
            return Err(ModuleError::NotEquivariant);
        }
    }
    let blocks: Vec<(AMat, AMat)> = [(m1, pi1), (m2, pi2)]
        .into_iter()
        .map(|(m, pi)| {
            let n = m.dim();
            let kdim = n - wd;
            // adapted basis: kernel of pi first, then lifts with pi*L = id
            let mut cols: Vec<Vec<RatFunc>> = pi.kernel_basis();
            for i in 0..wd {
                let mut e = alloc::vec![RatFunc::zero(); wd];
                e[i] = RatFunc::one();
                cols.push(pi.solve(&e).expect("surjection must lift"));
            }
            let t = Mat::from_fn(n, n, |r, c| cols[c][r].clone());
            let a_new = amat_change_basis(&m.coaction, &t);
            // lower-left block vanishes because the kernel is a submodule
            for i in kdim..n {
                for j in 0..kdim {
                    assert!(
                        a_new[i][j].is_zero(),
                        "kernel of an equivariant surjection must be a submodule"
                    );
                }
            }
            let kernel_block: AMat = (0..kdim)
                .map(|i| (0..kdim).map(|j| a_new[i][j].clone()).collect())
                .collect();
            let b_block: AMat = (0..kdim)
                .map(|i| (kdim..n).map(|j| a_new[i][j].clone()).collect())
                .collect();
            (kernel_block, b_block)
        })
        .collect();
    let k1 = m1.dim() - wd;
    let k2 = m2.dim() - wd;
    let total = k1 + k2 + wd;
    let mut big = alloc::vec![alloc::vec![a_zero(); total]; total];
    for i in 0..k1 {
        for j in 0..k1 {
            big[i][j] = blocks[0].0[i][j].clone();
        }
        for j in 0..wd {
            big[i][k1 + k2 + j] = blocks[0].1[i][j].clone();
        }
    }
    for i in 0..k2 {
        for j in 0..k2 {
            big[k1 + i][k1 + j] = blocks[1].0[i][j].clone();
        }
        for j in 0..wd {
            big[k1 + i][k1 + k2 + j] = blocks[1].1[i][j].clone();
        }
    }
    for i in 0..wd {
        for j in 0..wd {
            big[k1 + k2 + i][k1 + k2 + j] = w.coaction[i][j].clone();
        }
    }
    Ok(FinModule::new(big))
}

/// The push-out of two equivariant injections `iota_k : U -> M_k`:
/// dimension `n_1 + n_2 - u`, with the block coaction
/// `[[A_U, C_1, C_2], [0, D_1, 0], [0, 0, D_2]]` in an image-adapted basis.
pub fn pushout(
    m1: &FinModule,
    m2: &FinModule,
    u: &FinModule,
    iota1: &Mat,
    iota2: &Mat,
) -> Result<FinModule, ModuleError> {
    let ud = u.dim();
    for (m, iota) in [(m1, iota1), (m2, iota2)] {
        if iota.rows() != m.dim() || iota.cols() != ud {
            return Err(ModuleError::NotInjective);
        }
        if iota.rank() != ud {
            return Err(ModuleError::NotInjective);
        }
        // equivariance: A_M * iota = iota * A_U
        let lhs = amat_k_left(iota, &u.coaction);
        let rhs = amat_k_right(&m.coaction, iota);
        if !amat_eq(&rhs, &lhs) {
            return Err(ModuleError::NotEquivariant);
        }
    }
    let blocks: Vec<(AMat, AMat)> = [(m1, iota1), (m2, iota2)]
        .into_iter()
        .map(|(m, iota)| {
            let n = m.dim();
            let t = extend_to_basis(iota);
            let a_new = amat_change_basis(&m.coaction, &t);
            for i in ud..n {
                for j in 0..ud {
                    assert!(
                        a_new[i][j].is_zero(),
                        "image of an equivariant injection must be a submodule"
                    );
                }
            }
            let c_block: AMat = (0..ud)
                .map(|i| (ud..n).map(|j| a_new[i][j].clone()).collect())
                .collect();
            let d_block: AMat = (ud..n)
                .map(|i| (ud..n).map(|j| a_new[i][j].clone()).collect())
                .collect();
            (c_block, d_block)
        })
        .collect();
    let q1 = m1.dim() - ud;
    let q2 = m2.dim() - ud;
    let total = ud + q1 + q2;
    let mut big = alloc::vec![alloc::vec![a_zero(); total]; total];
    for i in 0..ud {
        for j in 0..ud {
            big[i][j] = u.coaction[i][j].clone();
        }
        for j in 0..q1 {
            big[i][ud + j] = blocks[0].0[i][j].clone();
        }
        for j in 0..q2 {
            big[i][ud + q1 + j] = blocks[1].0[i][j].clone();
        }
    }
    for i in 0..q1 {
        for j in 0..q1 {
            big[ud + i][ud + j] = blocks[0].1[i][j].clone();
        }
    }
    for i in 0..q2 {
        for j in 0..q2 {
            big[ud + q1 + i][ud + q1 + j] = blocks[1].1[i][j].clone();
        }
    }
    Ok(FinModule::new(big))
}

/// The dual module: `b_ij = S(a_ji)` with the antipode `S`.
pub fn dual(m: &FinModule) -> FinModule {
    let n = m.dim();
    let coaction: AMat = (0..n)
        .map(|i| (0..n).map(|j| antipode(&m.coaction[j][i])).collect())
        .collect();
    FinModule::new(coaction)
}

/// The submodule generated by a vector: the span of the coefficient
/// vectors of `ρ(v)` over the joint monomial support.
pub fn generated_submodule(m: &FinModule, v: &[RatFunc]) -> Result<SubmoduleDescr, ModuleError> {
    if v.iter().all(|x| x.is_zero()) {
        return Err(ModuleError::ZeroVector);
    }
    let u = m.coact_vector(v);
    let (_, _, rows) = common_shift_rows(&u);
    let vectors: Vec<Vec<RatFunc>> = (0..rows.cols()).map(|t| rows.column(t)).collect();
    let descr = SubmoduleDescr::new(m.dim(), vectors);
    debug_assert!(is_coaction_stable(m, &descr));
    Ok(descr)
}

/// True when the span is closed under the coaction.
pub fn is_coaction_stable(m: &FinModule, s: &SubmoduleDescr) -> bool {
    for w in s.basis() {
        let u = m.coact_vector(w);
        let (_, _, rows) = common_shift_rows(&u);
        for t in 0..rows.cols() {
            if !s.contains(&rows.column(t)) {
                return false;
            }
        }
    }
    true
}

/// The space of invariants: solutions of `ρ(v) = v ⊗ 1`.
pub fn invariants(m: &FinModule) -> SubmoduleDescr {
    let n = m.dim();
    let mut eq_rows: Vec<Vec<RatFunc>> = Vec::new();
    for i in 0..n {
        // family a_i1, ..., a_in, 1 with one common shift
        let mut fam: Vec<QuotElem> = (0..n).map(|j| m.coaction[i][j].clone()).collect();
        fam.push(a_one());
        let (_, _, rows) = common_shift_rows(&fam);
        for t in 0..rows.cols() {
            // Σ_j v_j rows[j][t] - v_i rows[n][t] = 0
            let mut eq = alloc::vec![RatFunc::zero(); n];
            for j in 0..n {
                eq[j] = rows.get(j, t).clone();
            }
            eq[i] = eq[i].sub(rows.get(n, t));
            if eq.iter().any(|x| !x.is_zero()) {
                eq_rows.push(eq);
            }
        }
    }
    if eq_rows.is_empty() {
        return SubmoduleDescr::full(n);
    }
    let kernel = Mat::from_rows(eq_rows).kernel_basis();
    SubmoduleDescr::new(n, kernel)
}

fn subst_entry(rep: &DiffPoly, images: &BTreeMap<VarName, DiffPoly>) -> DiffPoly {
    rep.substitute_in_group(VarGroup::GroupLeft, images)
        .expect("all four coordinates have images")
}

/// The Lie-algebra action at the constant points: matrices `E`, `F`, `H`
/// over `K` obtained from the one-parameter constant subgroups
/// `(1 τ; 0 1)`, `(1 0; τ 1)` and the diagonal torus.
pub fn const_lie_action(m: &FinModule) -> (Mat, Mat, Mat) {
    let n = m.dim();
    let tau = DiffPoly::var(DerivVar::base(VarGroup::AuxConst, "tau"));
    let uvar = DerivVar::base(VarGroup::AuxConst, "u");
    let wvar = DerivVar::base(VarGroup::AuxConst, "w");
    let mk = |c11: DiffPoly, c12: DiffPoly, c21: DiffPoly, c22: DiffPoly| {
        let mut im = BTreeMap::new();
        im.insert(VarName::new("c11"), c11);
        im.insert(VarName::new("c12"), c12);
        im.insert(VarName::new("c21"), c21);
        im.insert(VarName::new("c22"), c22);
        im
    };
    let upper = mk(
        DiffPoly::one(),
        tau.clone(),
        DiffPoly::zero(),
        DiffPoly::one(),
    );
    let lower = mk(
        DiffPoly::one(),
        DiffPoly::zero(),
        tau.clone(),
        DiffPoly::one(),
    );
    let torus = mk(
        DiffPoly::var(uvar),
        DiffPoly::zero(),
        DiffPoly::zero(),
        DiffPoly::var(wvar),
    );
    let tau_mono = Monomial::var(DerivVar::base(VarGroup::AuxConst, "tau"));
    let linear_coeff = |images: &BTreeMap<VarName, DiffPoly>, i: usize, j: usize| -> RatFunc {
        subst_entry(m.coaction[i][j].rep(), images).coeff_of(&tau_mono)
    };
    let e = Mat::from_fn(n, n, |i, j| linear_coeff(&upper, i, j));
    let f = Mat::from_fn(n, n, |i, j| linear_coeff(&lower, i, j));
    let h = Mat::from_fn(n, n, |i, j| {
        let p = subst_entry(m.coaction[i][j].rep(), &torus);
        let mut acc = RatFunc::zero();
        for (mono, coeff) in p.iter() {
            let alpha = mono.multiplicity(&DerivVar::base(VarGroup::AuxConst, "u")) as i64;
            let beta = mono.multiplicity(&DerivVar::base(VarGroup::AuxConst, "w")) as i64;
            acc = acc.add(&coeff.scale(&rat_int(alpha - beta)));
        }
        acc
    });
    (e, f, h)
}

/// The socle: the largest submodule whose coaction matrix is free of
/// derivatives (simple differential SL2-modules are algebraic, and the
/// largest algebraic submodule of a differential module is semisimple).
/// Computed as the decreasing fixed point of
/// `S -> {v in S : ρ(v) in S ⊗ A_alg}`.
pub fn socle(m: &FinModule) -> SubmoduleDescr {
    let n = m.dim();
    let mut elems: Vec<QuotElem> = Vec::with_capacity(n * n);
    for row in &m.coaction {
        for e in row {
            elems.push(e.clone());
        }
    }
    let (monos, _, rows) = common_shift_rows(&elems);
    // per-monomial coefficient matrices C_t with (C_t)_{ij} = coeff of a_ij
    let cmats: Vec<Mat> = (0..monos.len())
        .map(|t| Mat::from_fn(n, n, |i, j| rows.get(i * n + j, t).clone()))
        .collect();
    let mut current = SubmoduleDescr::full(n);
    loop {
        let wmat = current.basis_cols();
        let s = wmat.cols();
        if s == 0 {
            return current;
        }
        // rows annihilating the current span
        let left_kernel: Vec<Vec<RatFunc>> = wmat.transpose().kernel_basis();
        let mut eqs: Vec<Vec<RatFunc>> = Vec::new();
        for (t, cmat) in cmats.iter().enumerate() {
            let cw = cmat.mul(&wmat); // n x s
            if mono_has_derivative(&monos[t]) {
                for i in 0..n {
                    let row = cw.column_row(i);
                    if row.iter().any(|x| !x.is_zero()) {
                        eqs.push(row);
                    }
                }
            } else {
                for r in &left_kernel {
                    // r^T * C_t * W = 0
                    let mut row = alloc::vec![RatFunc::zero(); s];
                    for (i, ri) in r.iter().enumerate() {
                        if ri.is_zero() {
                            continue;
                        }
                        for c in 0..s {
                            row[c] = row[c].add(&ri.mul(cw.get(i, c)));
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        eqs.push(row);
                    }
                }
            }
        }
        let lambda = if eqs.is_empty() {
            Mat::identity(s)
        } else {
            let kb = Mat::from_rows(eqs).kernel_basis();
            Mat::from_fn(s, kb.len(), |i, j| kb[j][i].clone())
        };
        let new_cols = wmat.mul(&lambda);
        let next = SubmoduleDescr::new(
            n,
            (0..new_cols.cols()).map(|j| new_cols.column(j)).collect(),
        );
        if next.dim() == current.dim() {
            return next;
        }
        current = next;
    }
}

/// Restricts a module to a coaction-stable subspace (basis-adapted block).
pub fn submodule_module(m: &FinModule, s: &SubmoduleDescr) -> Result<FinModule, ModuleError> {
    if !is_coaction_stable(m, s) {
        return Err(ModuleError::NotASubmodule);
    }
    let t = extend_to_basis(&s.basis_cols());
    let a_new = amat_change_basis(&m.coaction, &t);
    let k = s.dim();
    let block: AMat = (0..k).map(|i| (0..k).map(|j| a_new[i][j].clone()).collect()).collect();
    Ok(FinModule::new(block))
}

/// The quotient by a coaction-stable subspace (bottom-right block in an
/// adapted basis).
pub fn quotient_module(m: &FinModule, s: &SubmoduleDescr) -> Result<FinModule, ModuleError> {
    if !is_coaction_stable(m, s) {
        return Err(ModuleError::NotASubmodule);
    }
    let n = m.dim();
    let k = s.dim();
    let t = extend_to_basis(&s.basis_cols());
    let a_new = amat_change_basis(&m.coaction, &t);
    for i in k..n {
        for j in 0..k {
            assert!(a_new[i][j].is_zero(), "submodule block must be triangular");
        }
    }
    let block: AMat = (k..n)
        .map(|i| (k..n).map(|j| a_new[i][j].clone()).collect())
        .collect();
    Ok(FinModule::new(block))
}

/// The equivariant projection onto the quotient by a coaction-stable
/// subspace, together with the quotient module: `pi` is `(n - k) x n` in
/// the original coordinates and satisfies `pi * A_M = A_{M/S} * pi`.
pub fn quotient_projection(
    m: &FinModule,
    s: &SubmoduleDescr,
) -> Result<(Mat, FinModule), ModuleError> {
    let quo = quotient_module(m, s)?;
    let n = m.dim();
    let k = s.dim();
    let t = extend_to_basis(&s.basis_cols());
    let ti = t.inverse().expect("adapted basis is invertible");
    let pi = ti.submatrix(k, n, 0, n);
    Ok((pi, quo))
}

/// Simplicity via the constant Lie action: a socle-style (semisimple
/// algebraic) module is simple iff its highest-weight space `ker E` is a
/// line.
pub(crate) fn semisimple_is_simple(m: &FinModule) -> bool {
    let (e, _, _) = const_lie_action(m);
    e.kernel_basis().len() == 1
}

/// For a module whose socle is simple and spanned by the leading basis
/// vectors, the first row `(a_11, ..., a_1n)` of the coaction spans a
/// submodule of `A` isomorphic to the module; returns that row after
/// verifying the hypotheses and the `K`-linear independence of the entries.
pub fn first_row_embed(m: &FinModule) -> Result<Vec<QuotElem>, ModuleError> {
    let n = m.dim();
    let soc = socle(m);
    let s = soc.dim();
    let leading = SubmoduleDescr::new(
        n,
        (0..s)
            .map(|i| {
                let mut v = alloc::vec![RatFunc::zero(); n];
                v[i] = RatFunc::one();
                v
            })
            .collect(),
    );
    if soc != leading {
        return Err(ModuleError::BasisNotAdapted);
    }
    let soc_mod = submodule_module(m, &soc)?;
    if !semisimple_is_simple(&soc_mod) {
        return Err(ModuleError::SocleNotSimple);
    }
    if (0..s).all(|j| m.coaction[0][j].is_zero()) {
        return Err(ModuleError::ZeroOnSocle);
    }
    let row: Vec<QuotElem> = (0..n).map(|j| m.coaction[0][j].clone()).collect();
    let (_, _, rows) = common_shift_rows(&row);
    assert_eq!(rows.rank(), n, "first-row entries must be independent");
    Ok(row)
}

/// Searches for an invertible element in the `K`-span of the kernel basis
/// matrices. Deterministic seeded search.
pub(crate) fn invertible_in_span(basis: &[Mat], n: usize) -> Option<Mat> {
    if basis.is_empty() {
        return None;
    }
    for b in basis {
        if !b.det().is_zero() {
            return Some(b.clone());
        }
    }
    let mut rng = SplitMix64::new(0x1f0_57ab);
    for _ in 0..200 {
        let mut cand = Mat::zeros(n, n);
        for b in basis {
            let c = RatFunc::from_int(rng.int_in(-4, 4));
            if !c.is_zero() {
                cand = cand.add(&b.scale(&c));
            }
        }
        if !cand.det().is_zero() {
            return Some(cand);
        }
    }
    None
}

/// Isomorphism test: solves `T A_1 = A_2 T` over `K` and searches the
/// solution space for an invertible witness.
pub fn iso_test(m1: &FinModule, m2: &FinModule) -> Option<Mat> {
    if m1.dim() != m2.dim() {
        return None;
    }
    let n = m1.dim();
    // one common shift across the entries of both matrices
    let mut fam: Vec<QuotElem> = Vec::with_capacity(2 * n * n);
    for row in &m1.coaction {
        fam.extend(row.iter().cloned());
    }
    for row in &m2.coaction {
        fam.extend(row.iter().cloned());
    }
    let (monos, _, rows) = common_shift_rows(&fam);
    let a1 = |i: usize, j: usize, t: usize| rows.get(i * n + j, t).clone();
    let a2 = |i: usize, j: usize, t: usize| rows.get(n * n + i * n + j, t).clone();
    let mut eqs: Vec<Vec<RatFunc>> = Vec::new();
    for t in 0..monos.len() {
        for i in 0..n {
            for j in 0..n {
                // Σ_k T_ik a1_kj - Σ_k a2_ik T_kj = 0
                let mut row = alloc::vec![RatFunc::zero(); n * n];
                for k in 0..n {
                    row[i * n + k] = row[i * n + k].add(&a1(k, j, t));
                    row[k * n + j] = row[k * n + j].sub(&a2(i, k, t));
                }
                if row.iter().any(|x| !x.is_zero()) {
                    eqs.push(row);
                }
            }
        }
    }
    let kernel = if eqs.is_empty() {
        // every matrix intertwines; the identity works
        return Some(Mat::identity(n));
    } else {
        Mat::from_rows(eqs).kernel_basis()
    };
    let basis: Vec<Mat> = kernel
        .iter()
        .map(|v| Mat::from_fn(n, n, |i, j| v[i * n + j].clone()))
        .collect();
    invertible_in_span(&basis, n)
}

/// Splitting test: searches for an equivariant section of `M -> M/S`.
/// Returns the section as an `n x (n - s)` matrix in the original basis.
pub fn split_test(m: &FinModule, s: &SubmoduleDescr) -> Result<Option<Mat>, ModuleError> {
    if !is_coaction_stable(m, s) {
        return Err(ModuleError::NotASubmodule);
    }
    let n = m.dim();
    let k = s.dim();
    let q = n - k;
    if q == 0 {
        return Ok(Some(Mat::zeros(n, 0)));
    }
    if k == 0 {
        return Ok(Some(Mat::identity(n)));
    }
    let t = extend_to_basis(&s.basis_cols());
    let a_new = amat_change_basis(&m.coaction, &t);
    // blocks: A_S (k x k), B (k x q), A_Q (q x q)
    let mut fam: Vec<QuotElem> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            fam.push(a_new[i][j].clone());
        }
    }
    let (monos, _, rows) = common_shift_rows(&fam);
    let at = |i: usize, j: usize, t: usize| rows.get(i * n + j, t).clone();
    // unknowns X (k x q): A_S X - X A_Q = -B entrywise over the support
    let mut eq_rows: Vec<Vec<RatFunc>> = Vec::new();
    let mut rhs: Vec<RatFunc> = Vec::new();
    for tdx in 0..monos.len() {
        for i in 0..k {
            for j in 0..q {
                let mut row = alloc::vec![RatFunc::zero(); k * q];
                for l in 0..k {
                    // A_S[i][l] X[l][j]
                    row[l * q + j] = row[l * q + j].add(&at(i, l, tdx));
                }
                for l in 0..q {
                    // - X[i][l] A_Q[l][j]
                    row[i * q + l] = row[i * q + l].sub(&at(k + l, k + j, tdx));
                }
                let b = at(i, k + j, tdx);
                if row.iter().any(|x| !x.is_zero()) || !b.is_zero() {
                    eq_rows.push(row);
                    rhs.push(b.neg());
                }
            }
        }
    }
    if eq_rows.is_empty() {
        let section = t.mul(&Mat::identity(n).submatrix(0, n, k, n));
        return Ok(Some(section));
    }
    let a = Mat::from_rows(eq_rows);
    match a.solve(&rhs) {
        None => Ok(None),
        Some(x) => {
            let mut adapted = Mat::zeros(n, q);
            for i in 0..k {
                for j in 0..q {
                    adapted.set(i, j, x[i * q + j].clone());
                }
            }
            for j in 0..q {
                adapted.set(k + j, j, RatFunc::one());
            }
            Ok(Some(t.mul(&adapted)))
        }
    }
}

/// Maximal degree of the coaction entries; the degree of the module.
pub fn module_degree(m: &FinModule) -> u32 {
    let mut best = 0;
    for row in &m.coaction {
        for e in row {
            if !e.is_zero() {
                best = best.max(crate::quotient::deg_quot(e).unwrap());
            }
        }
    }
    best
}

/// Sufficient homogeneity criterion for an embedded basis in `A`: every
/// normal form is homogeneous and all share the same degree.
pub fn is_homogeneous_basis(basis: &[QuotElem]) -> bool {
    let mut deg: Option<i64> = None;
    for e in basis {
        if e.is_zero() {
            continue;
        }
        if !e.nf().is_homogeneous() {
            return false;
        }
        let d = e.nf().total_degree() as i64 - e.shift() as i64;
        match deg {
            None => deg = Some(d),
            Some(prev) if prev == d => {}
            Some(_) => return false,
        }
    }
    true
}
