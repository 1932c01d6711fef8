//! Workbench for L-graded Brieskorn-Pham singularities `k[X_1..X_n]/(sum X_i^{p_i})`.
//!
//! The crate implements the grading group, finite-dimensional graded modules with the
//! weight-change functors, the symbolic calculus of the objects `U^l(x)[k]` of the
//! stable category, tilting families, quiver algebras with their derived invariants,
//! and an independent matrix-factorization oracle that audits the calculus.

pub mod error;
pub mod grading;
pub mod linalg;
pub mod gmod;
pub mod stable;
pub mod functor;
pub mod tilting;
pub mod qalg;
pub mod mforacle;
pub mod cli;

pub use error::{Error, Result};
pub use grading::{GradeElement, GroupEmbedding, WeightSystem};
