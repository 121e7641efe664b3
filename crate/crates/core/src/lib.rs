//! Inverse-positive preprocessing for nonnegative matrix factorization.
//!
//! The central operation replaces a nonnegative matrix `M` by
//! `P(M) = M (I - B*)`, where column `i` of `B*` is the best nonnegative
//! combination of the other columns that can be subtracted from `M[:, i]`
//! without making it negative. The result is sparser and its NMF is better
//! posed. Around it the crate provides:
//!
//! * [`matcore`]: the matrix carrier, column normalization, sparsity.
//! * [`cllsolve`]: the per-column constrained least squares solver.
//! * [`preprocess`]: `P`, `P^alpha`, spectral radius, rescaling, alpha search.
//! * [`npp3`]: the exact nested-polygon engine for rank-3 matrices.
//! * [`nmf`]: A-HALS, sparse NMF, refits and the comparison pipeline.
//! * [`uniq`]: sparsity-based uniqueness certificates.

pub mod cllsolve;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod matcore;
pub mod nmf;
pub mod npp3;
pub mod preprocess;
pub mod uniq;

pub use error::{Error, Result};
pub use matcore::DenseMatrix;
