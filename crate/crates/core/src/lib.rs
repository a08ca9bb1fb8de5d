//! Unavoidable regularities in words with bounded letter multiplicities,
//! and the multicollision attacks they enable on generalized iterated hash
//! functions.
//!
//! - [`words`]: words, projection, condensation, permutations.
//! - [`classics`]: arithmetic cadence and n-division finders.
//! - [`regularity`]: permutation-structure certificates and `N(m, q)`.
//! - [`nesting`]: block matchings, nested factorizations, attack structures.
//! - [`hashsim`]: simulated compression oracle, schedules, birthday search.
//! - [`attacks`]: Joux and schedule-driven multicollision attacks.
//! - [`cli`]: the `qbounded` command-line front end.

pub mod attacks;
pub mod classics;
pub mod cli;
pub mod error;
pub mod hashsim;
pub mod nesting;
pub mod regularity;
pub mod words;

pub use error::{Error, Result};
