//! Matrix carrier, pullback map, sparsity measure and duplicate detection.

mod dense;
mod metrics;
mod pullback;
mod svd;

pub use dense::DenseMatrix;
pub use metrics::{detect_duplicates, sparsity, DuplicatePair, DEFAULT_ZERO_TOL};
pub use pullback::{pullback, Pullback, DEFAULT_DROP_TOL};
pub use svd::Svd;
