//! Exact combinatorics of the combinatorial cube `[k]^n`.
//!
//! The crate provides, over a dense-bitmap representation of subsets of
//! `[k]^n` and exact rational arithmetic throughout:
//!
//! * words, variable words, combinatorial lines and `m`-dimensional
//!   subspaces, with canonical enumeration ([`cube`]);
//! * point sets with exact densities, slices and subspace-relative
//!   densities ([`set`]);
//! * `(i,j)`-equivalence and insensitive sets ([`insensitive`]);
//! * brute-force and branch-and-bound ground truth: line/subspace
//!   finders, maximum line-free sets, horizon-verified threshold values
//!   and partition searches ([`search`]);
//! * executable versions of the constructive procedures behind the
//!   density-increment method: uniformization, multidimensional lifts,
//!   structured-set extraction, correlation, insensitive tilings and the
//!   increment driver ([`engine`]);
//! * exact big-integer/rational evaluation of the associated numerical
//!   recursions ([`bounds`]).
//!
//! Every search and every procedure re-verifies its postconditions by
//! independent recomputation before returning, and serializes a
//! machine-checkable certificate. Procedures run opportunistically at any
//! user-supplied `n`; when a step cannot be completed at that scale the
//! outcome is an explicit `HypothesisNotMet` rather than a guess.
//!
//! The `examples/` directory is the guided tour; the thin `dhj` binary
//! exposes the same operations for batch use over wordset files.

pub mod bounds;
pub mod cli;
pub mod cube;
pub mod engine;
pub mod error;
pub mod fixtures;
pub mod insensitive;
pub mod params;
pub mod ratio;
pub mod report;
pub mod search;
pub mod set;
pub mod trace;
pub mod verify;

pub use cube::{count_lines, enumerate_lines, Alphabet, Cube, Line, Subspace, VariableWord, Word};
pub use error::Error;
pub use insensitive::LetterPair;
pub use ratio::Q;
pub use set::{Density, PointSet};
