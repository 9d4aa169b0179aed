//! Dense matrices and exact linear algebra over the field `K = Q(t)`.
//!
//! Everything is fraction-free in spirit but implemented directly over the
//! field: Gauss-Jordan elimination with exact rational-function arithmetic.

use alloc::vec::Vec;
use core::fmt;

use crate::rat::RatFunc;

/// A dense `rows x cols` matrix over `K`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: alloc::vec![RatFunc::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, RatFunc::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RatFunc) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Column vector from a slice.
    pub fn col_vec(v: &[RatFunc]) -> Self {
        Mat {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j)))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    pub fn neg(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).neg())
    }

    pub fn scale(&self, c: &RatFunc) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mul(c))
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Mat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = RatFunc::zero();
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        })
    }

    /// Entry-wise derivative in `K`.
    pub fn derive(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).derive())
    }

    pub fn pow(&self, e: u32) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut out = Mat::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        Mat::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Mat {
        Mat::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn column(&self, j: usize) -> Vec<RatFunc> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Row-reduced echelon form together with the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // find a pivot in column c at or below row r
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(r, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.get(r, c).inv();
            for j in 0..m.cols {
                m.set(r, j, m.get(r, j).mul(&inv));
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `{x : A x = 0}`, as column vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<RatFunc>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut piv_of_col = alloc::vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            piv_of_col[c] = Some(row);
        }
        for free in 0..self.cols {
            if piv_of_col[free].is_some() {
                continue;
            }
            let mut v = alloc::vec![RatFunc::zero(); self.cols];
            v[free] = RatFunc::one();
            for (c, p) in piv_of_col.iter().enumerate() {
                if let Some(row) = p {
                    v[c] = r.get(*row, free).neg();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `A x = b`, if any.
    pub fn solve(&self, b: &[RatFunc]) -> Option<Vec<RatFunc>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Mat::col_vec(b));
        let (r, pivots) = aug.rref();
        // inconsistent iff a pivot lands in the last column
        if pivots.iter().any(|&c| c == self.cols) {
            return None;
        }
        let mut x = alloc::vec![RatFunc::zero(); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
            return None;
        }
        Some(r.submatrix(0, n, n, 2 * n))
    }

    pub fn det(&self) -> RatFunc {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = RatFunc::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return RatFunc::zero();
            };
            if p != c {
                det = det.neg();
                for j in 0..n {
                    let a = m.get(c, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(c, j, b);
                    m.set(p, j, a);
                }
            }
            det = det.mul(m.get(c, c));
            let inv = m.get(c, c).inv();
            for i in (c + 1)..n {
                if !m.get(i, c).is_zero() {
                    let f = m.get(i, c).mul(&inv);
                    for j in c..n {
                        let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }

    pub fn trace(&self) -> RatFunc {
        assert_eq!(self.rows, self.cols);
        let mut t = RatFunc::zero();
        for i in 0..self.rows {
            t = t.add(self.get(i, i));
        }
        t
    }

    /// True when some power (at most `n`) vanishes.
    pub fn is_nilpotent(&self) -> bool {
        assert_eq!(self.rows, self.cols);
        let mut p = self.clone();
        for _ in 0..self.rows {
            if p.is_zero() {
                return true;
            }
            p = p.mul(self);
        }
        p.is_zero()
    }

    /// `exp(N)` of a nilpotent matrix: the series terminates.
    pub fn exp_nilpotent(&self) -> Option<Mat> {
        if !self.is_nilpotent() {
            return None;
        }
        let n = self.rows;
        let mut out = Mat::identity(n);
        let mut term = Mat::identity(n);
        let mut k: i64 = 1;
        loop {
            term = term.mul(self).scale(&RatFunc::from_rational(crate::rat::Rational::new(
                1.into(),
                k.into(),
            )));
            if term.is_zero() {
                return Some(out);
            }
            out = out.add(&term);
            k += 1;
        }
    }

    /// `log(U)` of a unipotent matrix (`U - 1` nilpotent): the series
    /// terminates and is the nilpotent logarithm.
    pub fn log_unipotent(&self) -> Option<Mat> {
        let n = self.rows;
        let nilp = self.sub(&Mat::identity(n));
        if !nilp.is_nilpotent() {
            return None;
        }
        let mut out = Mat::zeros(n, n);
        let mut pw = Mat::identity(n);
        let mut k: i64 = 1;
        loop {
            pw = pw.mul(&nilp);
            if pw.is_zero() {
                return Some(out);
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&pw.scale(&RatFunc::from_rational(crate::rat::Rational::new(
                sign.into(),
                k.into(),
            ))));
            k += 1;
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn m(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| RatFunc::from_int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let (r, pivots) = a.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(r.get(0, 0), &RatFunc::one());
        assert!(r.get(1, 0).is_zero());
    }

    #[test]
    fn kernel_solves_homogeneous_system() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let basis = a.kernel_basis();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            let x = Mat::col_vec(v);
            assert!(a.mul(&x).is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let b = vec![RatFunc::from_int(3), RatFunc::from_int(1)];
        let x = a.solve(&b).unwrap();
        assert_eq!(x, vec![RatFunc::from_int(2), RatFunc::from_int(1)]);
        let s = m(&[&[1, 1], &[2, 2]]);
        assert!(s.solve(&b).is_none());
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.det(), RatFunc::from_int(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        let s = m(&[&[1, 2], &[2, 4]]);
        assert!(s.det().is_zero());
        assert!(s.inverse().is_none());
    }

    #[test]
    fn det_with_rational_functions() {
        // [[t, 1], [1, 1/t]] has det 0; [[t, 1], [0, t]] has det t^2
        let t = RatFunc::t();
        let a = Mat::from_rows(vec![
            vec![t.clone(), RatFunc::one()],
            vec![RatFunc::one(), t.inv()],
        ]);
        assert!(a.det().is_zero());
        let b = Mat::from_rows(vec![
            vec![t.clone(), RatFunc::one()],
            vec![RatFunc::zero(), t.clone()],
        ]);
        assert_eq!(b.det(), t.mul(&t));
    }

    #[test]
    fn exp_log_roundtrip_on_nilpotents() {
        let n = m(&[&[0, 1, 2], &[0, 0, 3], &[0, 0, 0]]);
        assert!(n.is_nilpotent());
        let u = n.exp_nilpotent().unwrap();
        let back = u.log_unipotent().unwrap();
        assert_eq!(back, n);
        // non-nilpotent input is rejected
        assert!(m(&[&[1, 0], &[0, 1]]).exp_nilpotent().is_none());
        assert!(m(&[&[2, 0], &[0, 1]]).log_unipotent().is_none());
    }

    #[test]
    fn rational_entries_survive_elimination() {
        let a = Mat::from_rows(vec![
            vec![RatFunc::from_rational(rat(1, 2)), RatFunc::from_rational(rat(1, 3))],
            vec![RatFunc::from_rational(rat(1, 4)), RatFunc::from_rational(rat(1, 5))],
        ]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        let _ = rat_int(7);
    }
}
