//! Exact arithmetic for proper class numbers of positive-definite binary
//! quadratic polynomials over ℚ, i.e. shifted lattices X = L + ν in a binary
//! quadratic space.
//!
//! The crate is organized around the pipeline
//!
//! ```text
//!   GramMatrix + shift ──► Jordan form over ℤ_p ──► local densities β_p⁺
//!        │                                              │
//!        └── reduction / genus / automorphisms ──► class number h⁺(X)
//! ```
//!
//! Every closed-form local density carries an independent brute-force oracle
//! (residue enumeration of the finite orthogonal groups O⁺(L, p^t) and
//! O⁺(X, p^t)), so each factor of the class-number formula can be
//! cross-checked exactly.
//!
//! All arithmetic is exact: integers, rationals, and fixed-precision p-adic
//! residues that refuse to answer valuation queries they cannot certify.
//!
//! The crate is `no_std` (with `alloc`); IO, CLI and file formats live in the
//! companion `shifted-genus-cli` crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod arith;
mod error;
pub mod global;
pub mod lattice;
pub mod localdensity;

pub use error::Error;

/// Exact rational number used throughout the crate.
///
/// `i128` components are ample for desk-scale inputs: every intermediate of
/// the class-number assembly is bounded by (conductor · det)^O(1).
pub type Rat = num_rational::Ratio<i128>;
