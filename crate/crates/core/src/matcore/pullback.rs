use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;

/// Default relative threshold below which a column counts as zero.
pub const DEFAULT_DROP_TOL: f64 = 1e-12;

/// Column-stochastic normalization of the non-zero columns of a matrix.
#[derive(Clone, Debug)]
pub struct Pullback {
    /// Normalized kept columns; every column sums to one.
    pub theta: DenseMatrix,
    /// Inverse l1 norm of each kept column.
    pub scale: Vec<f64>,
    /// Indices of the kept columns in the source matrix, in order.
    pub kept: Vec<usize>,
}

/// Normalizes each column of `x` to unit l1 norm, dropping columns whose l1
/// norm is at most `drop_tol` times the largest column l1 norm.
pub fn pullback(x: &DenseMatrix, drop_tol: f64) -> Result<Pullback> {
    let norms = x.column_l1_norms();
    let largest = norms.iter().copied().fold(0.0_f64, f64::max);
    if largest == 0.0 {
        return Err(Error::AllColumnsZero);
    }
    let kept: Vec<usize> = (0..x.ncols())
        .filter(|&j| norms[j] > drop_tol * largest)
        .collect();
    if kept.is_empty() {
        return Err(Error::AllColumnsZero);
    }
    let scale: Vec<f64> = kept.iter().map(|&j| 1.0 / norms[j]).collect();
    let theta = DenseMatrix::from_fn(x.nrows(), kept.len(), |i, k| x.get(i, kept[k]) * scale[k])?;
    Ok(Pullback { theta, scale, kept })
}
