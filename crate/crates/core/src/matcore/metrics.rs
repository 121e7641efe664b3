use crate::matcore::DenseMatrix;

/// Default relative zero threshold for [`sparsity`].
pub const DEFAULT_ZERO_TOL: f64 = 1e-8;

/// Fraction of entries that count as zero: `value <= zero_tol * max|U|`.
///
/// The test is one-sided, so negative entries are zeros too.
pub fn sparsity(u: &DenseMatrix, zero_tol: f64) -> f64 {
    let threshold = zero_tol * u.max_abs();
    let zeros = u.as_slice().iter().filter(|&&v| v <= threshold).count();
    zeros as f64 / u.as_slice().len() as f64
}

/// A column that is (numerically) a nonnegative multiple of another one:
/// `M[:, column] ~ alpha * M[:, of]` with `column > of`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DuplicatePair {
    pub column: usize,
    pub of: usize,
    pub alpha: f64,
}

/// Finds pairs of non-zero columns where one is a positive multiple of the
/// other, using the least-squares ratio and the relative residual
/// `||M_i - alpha M_j|| <= tol * ||M_i||`.
pub fn detect_duplicates(m: &DenseMatrix, tol: f64) -> Vec<DuplicatePair> {
    let norms = m.column_l2_norms();
    let mut out = Vec::new();
    for i in 0..m.ncols() {
        if norms[i] == 0.0 {
            continue;
        }
        let ci = m.column(i);
        for j in 0..i {
            if norms[j] == 0.0 {
                continue;
            }
            let cj = m.column(j);
            let dot: f64 = ci.iter().zip(cj).map(|(a, b)| a * b).sum();
            let alpha = dot / (norms[j] * norms[j]);
            if alpha <= 0.0 {
                continue;
            }
            let dev = ci
                .iter()
                .zip(cj)
                .map(|(a, b)| (a - alpha * b).powi(2))
                .sum::<f64>()
                .sqrt();
            if dev <= tol * norms[i] {
                out.push(DuplicatePair { column: i, of: j, alpha });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_sparsity() {
        let s = sparsity(&DenseMatrix::identity(3), 0.0);
        assert!((s - 6.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn dense_matrix_has_no_zeros() {
        let u = DenseMatrix::from_fn(4, 3, |_, _| 1.0).unwrap();
        assert_eq!(sparsity(&u, DEFAULT_ZERO_TOL), 0.0);
    }

    #[test]
    fn negative_entries_count_as_zero() {
        let u = DenseMatrix::from_rows(&[[1.0, -0.5], [0.2, 3.0]]).unwrap();
        assert_eq!(sparsity(&u, 0.0), 0.25);
    }

    #[test]
    fn exact_multiple_is_reported_once() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0], [1.0, 2.0]]).unwrap();
        let d = detect_duplicates(&m, 1e-9);
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].column, d[0].of), (1, 0));
        assert!((d[0].alpha - 2.0).abs() < 1e-15);
    }

    #[test]
    fn identity_has_no_duplicates() {
        assert!(detect_duplicates(&DenseMatrix::identity(3), 1e-9).is_empty());
    }

    #[test]
    fn zero_columns_are_not_duplicates() {
        let m = DenseMatrix::from_rows(&[[1.0, 0.0], [2.0, 0.0]]).unwrap();
        assert!(detect_duplicates(&m, 1e-9).is_empty());
    }
}
