//! The base differential field `K = Q(t)` with `t' = 1`, built on
//! arbitrary-precision rationals.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Dense univariate polynomial in `t` over `Q`.
///
/// Coefficients are stored from the constant term up; the leading
/// coefficient is never zero (the zero polynomial has an empty vector).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            QPoly::zero()
        } else {
            QPoly { coeffs: vec![c] }
        }
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        QPoly {
            coeffs: vec![Rational::zero(), Rational::one()],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0 by convention of callers
    /// that only ask for non-zero inputs.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
            out.push(a + b);
        }
        QPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division; panics on division by zero.
    pub fn divrem(&self, den: &QPoly) -> (QPoly, QPoly) {
        assert!(!den.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        if rem.len() < den.coeffs.len() {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - den.coeffs.len() + 1];
        let lead = den.leading_coeff();
        for k in (0..quot.len()).rev() {
            let top = rem[k + den.coeffs.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            let q = top / &lead;
            for (j, b) in den.coeffs.iter().enumerate() {
                let v = &q * b;
                rem[k + j] -= v;
            }
            quot[k] = q;
        }
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let lead = self.leading_coeff();
        self.scale(&(Rational::one() / lead))
    }

    /// Formal derivative with respect to `t`.
    pub fn derive(&self) -> QPoly {
        let mut out = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c * Rational::from_integer(BigInt::from(i)));
        }
        QPoly::from_coeffs(out)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            if abs.is_one() && i > 0 {
                // coefficient 1 is implicit
            } else {
                write!(f, "{}", abs)?;
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{}", i)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Element of `K = Q(t)`: a reduced fraction of polynomials in `t` with a
/// monic denominator. The derivation has `t' = 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator in Q(t)");
        if num.is_zero() {
            return RatFunc {
                num: QPoly::zero(),
                den: QPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, _) = num.divrem(&g);
        let (den, _) = den.divrem(&g);
        let lead = den.leading_coeff();
        let inv = Rational::one() / lead;
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(QPoly::one())
    }

    pub fn t() -> Self {
        RatFunc::from_poly(QPoly::t())
    }

    pub fn from_poly(p: QPoly) -> Self {
        RatFunc {
            num: p,
            den: QPoly::one(),
        }
    }

    pub fn from_rational(c: Rational) -> Self {
        RatFunc::from_poly(QPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc::from_rational(rat_int(n))
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == QPoly::one() && self.den == QPoly::one()
    }

    /// True for elements of `Q`, i.e. the constants of `(K, ∂)`.
    pub fn is_constant(&self) -> bool {
        self.num.degree() == 0 && self.den == QPoly::one()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero in Q(t)");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFunc) -> RatFunc {
        self.mul(&other.inv())
    }

    pub fn pow(&self, e: i64) -> RatFunc {
        if e == 0 {
            return RatFunc::one();
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut out = RatFunc::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Derivation by the quotient rule, with `t' = 1`.
    pub fn derive(&self) -> RatFunc {
        RatFunc::new(
            self.num
                .derive()
                .mul(&self.den)
                .sub(&self.num.mul(&self.den.derive())),
            self.den.mul(&self.den),
        )
    }

    pub fn derive_times(&self, n: u32) -> RatFunc {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.derive();
        }
        out
    }
}

/// Derivation on `K`; see [`RatFunc::derive`].
pub fn field_derive(f: &RatFunc) -> RatFunc {
    f.derive()
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == QPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Renders as the canonical string used by the JSON encoding.
pub fn qpoly_to_string(p: &QPoly) -> String {
    alloc::format!("{}", p)
}

/// Parses an arbitrary-precision rational written as `a` or `a/b`.
pub fn rat_parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::parse_bytes(n.as_bytes(), 10)?;
    let den = BigInt::parse_bytes(d.as_bytes(), 10)?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Parses a polynomial in `t` in the notation produced by [`QPoly`]'s
/// display: terms like `2*t^2-1/3*t+5`, with implicit unit coefficients
/// (`t^3-t`) and rational coefficients (`1/2*t`).
pub fn qpoly_parse(input: &str) -> Option<QPoly> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    if s == "0" {
        return Some(QPoly::zero());
    }
    // split into signed terms at top level (no parentheses inside a QPoly)
    let bytes = s.as_bytes();
    let mut pieces: Vec<(bool, &str)> = Vec::new();
    let mut start = 0usize;
    let mut neg = false;
    let mut i = 0usize;
    if bytes[0] == b'-' {
        neg = true;
        start = 1;
        i = 1;
    } else if bytes[0] == b'+' {
        start = 1;
        i = 1;
    }
    while i < bytes.len() {
        let c = bytes[i];
        if (c == b'+' || c == b'-') && i > start {
            pieces.push((neg, &s[start..i]));
            neg = c == b'-';
            start = i + 1;
        }
        i += 1;
    }
    if start >= s.len() {
        return None;
    }
    pieces.push((neg, &s[start..]));
    let mut coeffs: Vec<Rational> = Vec::new();
    for (neg, term) in pieces {
        let (coeff_str, var_str) = match term.split_once('*') {
            Some((c, v)) => (c, v),
            None => {
                if term.starts_with('t') {
                    ("1", term)
                } else {
                    (term, "")
                }
            }
        };
        let exp: usize = if var_str.is_empty() {
            0
        } else if var_str == "t" {
            1
        } else {
            let e = var_str.strip_prefix("t^")?;
            e.parse().ok()?
        };
        let mut c = rat_parse(coeff_str)?;
        if neg {
            c = -c;
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, Rational::zero());
        }
        coeffs[exp] += c;
    }
    Some(QPoly::from_coeffs(coeffs))
}

/// Parses an element of `K` written as `p` or `(p)/(q)` (the display
/// notation of [`RatFunc`]).
pub fn ratfunc_parse(input: &str) -> Option<RatFunc> {
    let s = input.trim();
    if let Some(rest) = s.strip_prefix('(') {
        let (num, den) = rest.split_once(")/(")?;
        let den = den.strip_suffix(')')?;
        let n = qpoly_parse(num)?;
        let d = qpoly_parse(den)?;
        if d.is_zero() {
            return None;
        }
        return Some(RatFunc::new(n, d));
    }
    qpoly_parse(s).map(|p| RatFunc::new(p, QPoly::one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_power_rule() {
        // t^2 -> 2t
        let t2 = RatFunc::t().mul(&RatFunc::t());
        assert_eq!(t2.derive(), RatFunc::t().scale(&rat_int(2)));
    }

    #[test]
    fn derive_quotient_rule() {
        // 1/t -> -1/t^2
        let inv_t = RatFunc::t().inv();
        let expect = RatFunc::new(QPoly::constant(rat_int(-1)), QPoly::t().mul(&QPoly::t()));
        assert_eq!(inv_t.derive(), expect);
    }

    #[test]
    fn rationals_are_constants() {
        let c = RatFunc::from_rational(rat(7, 3));
        assert!(c.derive().is_zero());
    }

    #[test]
    fn reduction_and_monic_denominator() {
        // (2t^2 + 2t) / (4t) = (t + 1) / 2
        let num = QPoly::from_coeffs(vec![rat_int(0), rat_int(2), rat_int(2)]);
        let den = QPoly::from_coeffs(vec![rat_int(0), rat_int(4)]);
        let f = RatFunc::new(num, den);
        assert_eq!(f.den(), &QPoly::one());
        assert_eq!(
            f.num(),
            &QPoly::from_coeffs(vec![rat(1, 2), rat(1, 2)])
        );
    }

    #[test]
    fn field_axioms_spot_checks() {
        let a = RatFunc::new(
            QPoly::from_coeffs(vec![rat_int(1), rat_int(3)]),
            QPoly::from_coeffs(vec![rat_int(-2), rat_int(0), rat_int(1)]),
        );
        let b = RatFunc::t().add(&RatFunc::one());
        assert_eq!(a.mul(&b).div(&b), a);
        assert_eq!(a.sub(&a), RatFunc::zero());
        // Leibniz on the field
        let lhs = a.mul(&b).derive();
        let rhs = a.derive().mul(&b).add(&a.mul(&b.derive()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_round_readable() {
        let p = QPoly::from_coeffs(vec![rat_int(5), rat(-1, 3), rat_int(2)]);
        assert_eq!(alloc::format!("{}", p), "2*t^2-1/3*t+5");
    }

    #[test]
    fn parse_round_trips_display() {
        let samples = [
            QPoly::zero(),
            QPoly::one(),
            QPoly::t(),
            QPoly::from_coeffs(vec![rat_int(5), rat(-1, 3), rat_int(2)]),
            QPoly::from_coeffs(vec![rat_int(0), rat_int(-1), rat_int(0), rat_int(1)]),
        ];
        for p in samples {
            let s = alloc::format!("{}", p);
            assert_eq!(qpoly_parse(&s), Some(p.clone()), "through {}", s);
        }
        let fractions = [
            RatFunc::zero(),
            RatFunc::t().inv(),
            RatFunc::new(
                QPoly::from_coeffs(vec![rat_int(1), rat_int(3)]),
                QPoly::from_coeffs(vec![rat_int(-2), rat_int(0), rat_int(1)]),
            ),
            RatFunc::from_int(-7).mul(&RatFunc::t()),
        ];
        for r in fractions {
            let s = alloc::format!("{}", r);
            assert_eq!(ratfunc_parse(&s), Some(r.clone()), "through {}", s);
        }
        assert!(qpoly_parse("").is_none());
        assert!(qpoly_parse("t^").is_none());
        assert!(ratfunc_parse("(t)/(0)").is_none());
    }
}
