//! Exact symbolic differential algebra over the differential field `K = Q(t)`
//! with `t' = 1`.
//!
//! The crate provides, bottom up:
//!
//! * [`rat`] — arbitrary-precision rationals and rational functions in `t`;
//! * [`var`] / [`poly`] — sparse differential polynomials in tagged variable
//!   groups with derivation, substitution, weight and degree;
//! * [`ordering`] — the term order on `K{x,y}` through sequence pairs, and
//!   grevlex for the Groebner engine;
//! * [`quotient`] — arithmetic in `C = K{c_ij}`, `A = C/[det-1]` and
//!   `B = C/[det]` via Ritt pseudo-reduction;
//! * [`groebner`] — a Buchberger engine and the machine check of the
//!   `[det']` primality argument;
//! * [`laurent`] — differential Laurent polynomials used for torus actions;
//! * [`actions`] — coactions of SL2, Gm and Ga^n on polynomial rings;
//! * [`matrix`] — dense matrices and exact linear algebra over `K`;
//! * [`modules`] — finite-dimensional differential SL2-modules and their
//!   structural analysis (socle, invariants, isomorphism and splitting);
//! * [`classify`] — classification of torus representations and of two-step
//!   SL2 extensions.
//!
//! Everything is exact; there is no floating point anywhere.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod rat;
pub mod var;
pub mod poly;
pub mod ordering;
pub mod quotient;
pub mod groebner;
pub mod laurent;
pub mod matrix;
pub mod rng;
pub mod actions;
pub mod modules;
pub mod classify;

pub use rat::{QPoly, RatFunc, Rational};
pub use var::{DerivVar, Monomial, Term, VarGroup, VarName};
pub use poly::DiffPoly;

use core::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

/// Default maximum derivative order allowed during quotient-ring reduction.
pub const DEFAULT_ORDER_CAP: u32 = 12;

static ORDER_CAP: AtomicU32 = AtomicU32::new(DEFAULT_ORDER_CAP);

/// Sets the global derivative-order cap used by [`quotient::ritt_reduce`].
/// The cap guards against runaway computations; it must be at least 4.
pub fn set_order_cap(cap: u32) {
    assert!(cap >= 4, "order cap must be at least 4");
    ORDER_CAP.store(cap, AtomicOrdering::Relaxed);
}

/// Current derivative-order cap.
pub fn order_cap() -> u32 {
    ORDER_CAP.load(AtomicOrdering::Relaxed)
}
