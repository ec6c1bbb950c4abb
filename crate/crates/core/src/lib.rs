//! Exact computations in the clover restricted Lie algebras `T(Ξ)`.
//!
//! The algebra is generated by three derivations `v_0, w_0, u_0` of a
//! truncated divided power algebra over `F_p`. This crate provides
//!
//! * parameter tuples `Ξ = (S_i, R_i)` and the weight functions they induce ([`params`]),
//! * exact arithmetic in the depth-`N` truncation `R_N` ([`dpalgebra`]),
//! * derivations, brackets and `p`-th powers ([`derivations`]),
//! * standard monomials, their weights and exact growth counting ([`monomials`]),
//! * a brute-force restricted closure used as an oracle ([`closure`]),
//! * growth bounds, GK dimension formulas and exponent fits ([`analytics`]).
//!
//! Everything here is `no_std` with `alloc`; file formats and the command
//! line live in the companion `clover` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytics;
pub mod closure;
pub mod derivations;
pub mod dpalgebra;
mod error;
pub mod fp;
pub mod interval;
pub mod monomials;
pub mod params;
pub mod report;

pub use error::{Error, Result};
