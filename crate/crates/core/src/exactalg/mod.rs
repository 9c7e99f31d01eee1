//! Exact scalar arithmetic and dense linear algebra over prime fields and
//! the integers: word evaluation, vectorization, discriminants, rank and
//! incremental span maintenance.

mod linalg;
mod matrix;
mod ring;

pub use linalg::{discriminant, rank, span_insert, SubspaceBasis};
pub use matrix::{evaluate_word, evaluate_words, Matrix, MatrixRecord, MatrixTuple};
pub use ring::{is_prime, Integers, PrimeField, Ring, ScalarRing, MERSENNE_61};
