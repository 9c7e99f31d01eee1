//! Sweeping words in matrix algebras.
//!
//! A generic g-tuple of n x n matrices has n² words of degree
//! `2 * ceil(log_g n)` whose values span the full matrix algebra. This crate
//! builds those words, certifies their independence by exact linear algebra,
//! checks the multigraph walk-partition argument behind them, measures
//! generating lengths, and produces deterministic integer witnesses.

pub mod cli;
pub mod error;
pub mod exactalg;
pub mod genericity;
pub mod graphs;
pub mod witness;
pub mod words;

pub use error::{Error, Result};
