//! Differential variables and monomials.
//!
//! Variables carry a group tag so that tensor factors (module part, left and
//! right copies of the group coordinates, auxiliary constants) can coexist in
//! one polynomial engine.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::rat::RatFunc;

/// Which tensor factor a variable belongs to.
///
/// Auxiliary constants have derivative zero; all other groups are genuine
/// differential indeterminates.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarGroup {
    /// Module variables `x`, `y` (or `x1..xn` for vector groups).
    Module,
    /// Left copy of group coordinates `c_ij`; the canonical copy for `C`, `A`, `B`.
    GroupLeft,
    /// Right copy of group coordinates, used for tensor factors.
    GroupRight,
    /// Constant parameters (`tau`, `beta`, ...); derivation kills them.
    AuxConst,
}

/// Short inline variable name (at most 8 bytes), cheap to copy and order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName {
    len: u8,
    bytes: [u8; 8],
}

impl VarName {
    pub fn new(s: &str) -> Self {
        let b = s.as_bytes();
        assert!(b.len() <= 8 && !b.is_empty(), "variable name must be 1..=8 bytes");
        let mut bytes = [0u8; 8];
        bytes[..b.len()].copy_from_slice(b);
        VarName {
            len: b.len() as u8,
            bytes,
        }
    }

    pub fn as_str(&self) -> &str {
        core::str::from_utf8(&self.bytes[..self.len as usize]).unwrap()
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

impl fmt::Debug for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

/// A derivative `∂^order name` of a base variable.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivVar {
    pub group: VarGroup,
    pub name: VarName,
    pub order: u32,
}

impl DerivVar {
    pub fn new(group: VarGroup, name: &str, order: u32) -> Self {
        DerivVar {
            group,
            name: VarName::new(name),
            order,
        }
    }

    pub fn base(group: VarGroup, name: &str) -> Self {
        DerivVar::new(group, name, 0)
    }

    /// The derivative of this variable, or `None` for auxiliary constants.
    pub fn derived(&self) -> Option<DerivVar> {
        if self.group == VarGroup::AuxConst {
            None
        } else {
            Some(DerivVar {
                group: self.group,
                name: self.name,
                order: self.order + 1,
            })
        }
    }
}

impl fmt::Display for DerivVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order {
            0 => write!(f, "{}", self.name),
            1 => write!(f, "{}'", self.name),
            2 => write!(f, "{}''", self.name),
            o => write!(f, "{}^({})", self.name, o),
        }
    }
}

impl fmt::Debug for DerivVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A power product of derivative variables with positive multiplicities,
/// kept in canonical sorted order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: BTreeMap<DerivVar, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: DerivVar) -> Self {
        let mut factors = BTreeMap::new();
        factors.insert(v, 1);
        Monomial { factors }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (DerivVar, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (v, m) in factors {
            if m > 0 {
                *map.entry(v).or_insert(0) += m;
            }
        }
        Monomial { factors: map }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&DerivVar, &u32)> {
        self.factors.iter()
    }

    pub fn multiplicity(&self, v: &DerivVar) -> u32 {
        self.factors.get(v).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.values().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.factors.clone();
        for (v, m) in &other.factors {
            *out.entry(*v).or_insert(0) += m;
        }
        Monomial { factors: out }
    }

    /// Exact division; `None` if some multiplicity of `other` exceeds ours.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.factors.clone();
        for (v, m) in &other.factors {
            let slot = out.get_mut(v)?;
            if *slot < *m {
                return None;
            }
            *slot -= m;
            if *slot == 0 {
                out.remove(v);
            }
        }
        Some(Monomial { factors: out })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.div(self).is_some()
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = self.factors.clone();
        for (v, m) in &other.factors {
            let slot = out.entry(*v).or_insert(0);
            if *slot < *m {
                *slot = *m;
            }
        }
        Monomial { factors: out }
    }

    pub fn vars(&self) -> impl Iterator<Item = &DerivVar> {
        self.factors.keys()
    }

    pub fn max_order(&self) -> u32 {
        self.factors.keys().map(|v| v.order).max().unwrap_or(0)
    }

    /// True when every factor belongs to `group`.
    pub fn all_in_group(&self, group: VarGroup) -> bool {
        self.factors.keys().all(|v| v.group == group)
    }

    /// Splits the monomial into the part in `group` and the rest.
    pub fn split_group(&self, group: VarGroup) -> (Monomial, Monomial) {
        let mut inside = BTreeMap::new();
        let mut outside = BTreeMap::new();
        for (v, m) in &self.factors {
            if v.group == group {
                inside.insert(*v, *m);
            } else {
                outside.insert(*v, *m);
            }
        }
        (Monomial { factors: inside }, Monomial { factors: outside })
    }

    pub fn into_factors(self) -> Vec<(DerivVar, u32)> {
        self.factors.into_iter().collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, m) in &self.factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *m == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A coefficient from `K` times a monomial. The coefficient is non-zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Term {
    pub coeff: RatFunc,
    pub mono: Monomial,
}

impl Term {
    pub fn new(coeff: RatFunc, mono: Monomial) -> Self {
        assert!(!coeff.is_zero(), "term coefficient must be non-zero");
        Term { coeff, mono }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            write!(f, "{}", self.coeff)
        } else if self.coeff.is_one() {
            write!(f, "{}", self.mono)
        } else {
            write!(f, "{}*{}", self.coeff, self.mono)
        }
    }
}

/// Convenience constructors for the fixed names used throughout.
pub mod names {
    use super::*;

    /// Module variable `x^(order)`.
    pub fn x(order: u32) -> DerivVar {
        DerivVar::new(VarGroup::Module, "x", order)
    }

    /// Module variable `y^(order)`.
    pub fn y(order: u32) -> DerivVar {
        DerivVar::new(VarGroup::Module, "y", order)
    }

    /// Group coordinate `c_ij^(order)` in the canonical (left) copy.
    pub fn c(i: usize, j: usize, order: u32) -> DerivVar {
        c_in(VarGroup::GroupLeft, i, j, order)
    }

    pub fn c_in(group: VarGroup, i: usize, j: usize, order: u32) -> DerivVar {
        assert!((1..=2).contains(&i) && (1..=2).contains(&j));
        let name = match (i, j) {
            (1, 1) => "c11",
            (1, 2) => "c12",
            (2, 1) => "c21",
            (2, 2) => "c22",
            _ => unreachable!(),
        };
        DerivVar::new(group, name, order)
    }
}
