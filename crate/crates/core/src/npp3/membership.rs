use nalgebra::{DMatrix, DVector};

use crate::cllsolve::nnls;
use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;

/// Whether `x` lies in the convex hull of the columns of `hull`, in any
/// dimension: the nonnegative least-squares residual of
/// `[X; 1^T] lambda = [x; 1]` must not exceed `tol`.
pub fn hull_membership(x: &[f64], hull: &DenseMatrix, tol: f64) -> Result<bool> {
    Ok(hull_distance(x, hull)? <= tol)
}

/// Residual of the best convex combination (with the sum-to-one row).
pub fn hull_distance(x: &[f64], hull: &DenseMatrix) -> Result<f64> {
    let (m, n) = hull.shape();
    if x.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "point has {} entries, hull columns have {m}",
            x.len()
        )));
    }
    let c = DMatrix::from_fn(m + 1, n, |i, j| if i < m { hull.get(i, j) } else { 1.0 });
    let y = DVector::from_fn(m + 1, |i, _| if i < m { x[i] } else { 1.0 });
    Ok(nnls(&c, &y).residual_norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_membership() {
        let hull = DenseMatrix::identity(3);
        assert!(hull_membership(&[0.2, 0.3, 0.5], &hull, 1e-9).unwrap());
        assert!(!hull_membership(&[0.6, 0.6, -0.2], &hull, 1e-9).unwrap());
        assert!(hull_membership(&[0.5], &hull, 1e-9).is_err());
    }
}
