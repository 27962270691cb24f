//! Real-kernel α-harmonic mappings of the unit disk.
//!
//! Solutions of the weighted Laplace equation `T_α u = 0` are built from a
//! finitely supported coefficient sequence ([`field`]), reproduced from their
//! boundary values by a Poisson-type integral ([`poisson`]), rewritten through
//! holomorphic recurrences when α is an even integer ([`represent`]), checked
//! for univalence and convexity ([`univalence`]) and measured ([`area`]).
//! [`verify`] cross-checks all of it against independent numerical oracles.

// `!(x > y)` is used on purpose so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Published coefficients are kept digit for digit.
#![allow(clippy::excessive_precision)]

pub mod area;
pub mod error;
pub mod field;
pub mod poisson;
pub mod represent;
pub mod specfun;
pub mod univalence;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
