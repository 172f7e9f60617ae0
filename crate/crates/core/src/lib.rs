//! Permutation group algorithms.
//!
//! The crate is organized bottom-up:
//!
//! - [`perm`]: permutations, cycle structure and cycle notation.
//! - [`bsgs`]: orbits and Schreier–Sims stabilizer chains.
//! - [`move_opt`]: exact average number of moved points over a coset and the
//!   conditional-expectation descent to an element moving at least that many.
//! - [`coset_fpf`]: fixed-point-free elements of a coset by inclusion-exclusion.
//! - [`kmove`]: the parameterized "moves at least k points" problem and its
//!   kernel.
//! - [`kbase`]: minimum base search for cyclic and bounded-orbit groups.
//! - [`oracle`]: brute-force enumeration used as ground truth.
//!
//! All points are 1-based in the public API.

pub mod bsgs;
pub mod coset_fpf;
pub mod error;
pub mod kbase;
pub mod kmove;
pub mod move_opt;
pub mod oracle;
pub mod perm;

pub use bsgs::{orbits, GroupInput, StabilizerChain};
pub use error::{Error, Result};
pub use perm::{CycleForm, Permutation};

/// Arbitrary-precision group orders and counts.
pub type BigCount = num_bigint::BigUint;

/// Exact rational numbers, always stored reduced.
pub type ExactRational = num_rational::BigRational;
