//! Exact kernel for currents on a free group relative to a malnormal
//! subgroup system.
//!
//! The crate is `no_std` and only needs `alloc`. All arithmetic is exact:
//! words are reduced letter sequences, weights are big rationals.
//!
//! Module map:
//! - [`word`]: letters, reduced words, cyclic words, automorphisms.
//! - [`stallings`]: folded core graphs, fiber products, malnormality, `L`.
//! - [`boundary`]: the word set `C`, strata `S_k`, cylinders and their
//!   disjoint decomposition.
//! - [`currents`]: weight tables, rational currents, k-extensions, the
//!   automorphism action.
//! - [`approximation`]: transition graphs, cycle extraction, the density
//!   procedure.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod approximation;
pub mod boundary;
pub mod currents;
pub mod error;
pub mod linalg;
pub mod stallings;
pub mod word;

pub use error::Error;

/// Exact rational scalar used for every weight.
pub type Rational = num_rational::BigRational;

pub type Result<T> = core::result::Result<T, Error>;
