//! Littlewood-Paley analysis on the 2-adic integers at finite resolution.
//!
//! Functions on Z_2 are represented as step functions constant on the 2^J
//! cosets of 2^J Z_2. Conditional expectations over coarser coset algebras
//! give a martingale decomposition into blocks, from which Sobolev and Besov
//! norms are assembled; translation differences give the BV seminorm. On top
//! of these the crate provides:
//!
//! * exact dyadic-rational arithmetic for bit-exact norm evaluation,
//! * the sibling-paired block family whose blow-up ratio defeats the
//!   L^2 <= C * BV * Besov(-1, inf, inf) estimate,
//! * inequality reports and seeded corpora for property-style verification.
//!
//! With the default `parallel` feature the exhaustive translation scans and
//! corpus evaluations run on rayon; disabling it falls back to sequential
//! loops with identical results.

pub mod counterexample;
pub mod error;
pub mod exact;
pub mod harness;
pub mod lp;
pub mod norms;
pub mod padic;
pub mod step;

pub use error::{Error, Result};
pub use step::{DyadicStepFunction, Exponent, FunctionFile};
