//! Exact analysis of random siteswap juggling.
//!
//! A juggler with maximum throw height `h` who picks uniformly among the
//! legal throws performs a random walk on a graph of landing states. This
//! crate builds those graphs for the standard, add-drop and annihilation
//! models, assembles their transition matrices over exact rationals, and
//! computes stationary distributions three ways: closed form, exact linear
//! solve, and simulation. It also checks the intermediate facts used to
//! derive the closed forms: the throw/landing refinement is doubly
//! stochastic, lumps back onto the landing chain, and is in bijection with
//! set partitions of `{1, ..., h+1}`.
//!
//! ```
//! use juggle_core::chains::{matrix_standard, stationary_exact, closed_form_standard};
//!
//! let p = matrix_standard(5, 2).unwrap();
//! let alpha = stationary_exact(&p).unwrap();
//! assert_eq!(alpha, closed_form_standard(5, 2).unwrap());
//! ```

pub mod chains;
pub mod combinatorics;
pub mod error;
pub mod graphs;
pub mod linalg;
pub mod montecarlo;
pub mod par;
pub mod serialize;
pub mod states;

pub use error::{Error, Result};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
