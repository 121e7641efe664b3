//! Lawson–Hanson nonnegative least squares.
//!
//! Kept deliberately separate from the active-set kernel: the KKT
//! certificate and the hull-membership test use it as an independent
//! second route.

use nalgebra::{DMatrix, DVector};

use crate::matcore::Svd;

#[derive(Clone, Debug)]
pub struct NnlsResult {
    pub x: DVector<f64>,
    /// `||C x - y||_2`
    pub residual_norm: f64,
    pub iterations: usize,
}

/// Least-squares solve restricted to the columns in `set`, min-norm on
/// rank deficiency.
fn restricted_lstsq(c: &DMatrix<f64>, y: &DVector<f64>, set: &[usize]) -> DVector<f64> {
    let sub = c.select_columns(set);
    let svd = Svd::new(&sub);
    svd.solve(y, 1e-13 * svd.max().max(f64::MIN_POSITIVE))
}

/// Solves `min ||C x - y||_2` subject to `x >= 0`.
pub fn nnls(c: &DMatrix<f64>, y: &DVector<f64>) -> NnlsResult {
    let n = c.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let col_scale = c
        .column_iter()
        .map(|col| col.norm())
        .fold(0.0_f64, f64::max);
    let tol = 1e-12 * col_scale * y.norm().max(f64::MIN_POSITIVE);
    let max_iter = 3 * n + 10;
    let mut iterations = 0;
    // a variable that just failed to enter stays out until x moves
    let mut barred: Option<usize> = None;

    while iterations < max_iter {
        iterations += 1;
        let w = c.tr_mul(&(y - c * &x));
        let mut best: Option<usize> = None;
        for j in 0..n {
            if passive[j] || Some(j) == barred || w[j] <= tol {
                continue;
            }
            if best.is_none_or(|b| w[j] > w[b]) {
                best = Some(j);
            }
        }
        let Some(t) = best else { break };
        passive[t] = true;

        let mut entered = true;
        loop {
            let set: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let s_p = restricted_lstsq(c, y, &set);
            if s_p.iter().all(|&v| v > 0.0) {
                for (k, &j) in set.iter().enumerate() {
                    x[j] = s_p[k];
                }
                barred = None;
                break;
            }
            let t_pos = set.iter().position(|&j| j == t);
            if entered && t_pos.is_some_and(|k| s_p[k] <= 0.0) {
                passive[t] = false;
                barred = Some(t);
                break;
            }
            entered = false;
            let mut alpha = f64::INFINITY;
            for (k, &j) in set.iter().enumerate() {
                if s_p[k] <= 0.0 {
                    let denom = x[j] - s_p[k];
                    if denom > 0.0 {
                        alpha = alpha.min(x[j] / denom);
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            for (k, &j) in set.iter().enumerate() {
                x[j] += alpha * (s_p[k] - x[j]);
            }
            let mut dropped = false;
            for &j in &set {
                if x[j] <= 1e-15 * x.amax().max(1.0) {
                    x[j] = 0.0;
                    passive[j] = false;
                    dropped = true;
                }
            }
            if !dropped {
                // numerical stall; accept the current point
                break;
            }
            if !passive.iter().any(|&p| p) {
                barred = Some(t);
                break;
            }
        }
    }
    let residual_norm = (c * &x - y).norm();
    NnlsResult {
        x,
        residual_norm,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_optimum_is_returned_when_positive() {
        let c = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let y = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let r = nnls(&c, &y);
        assert!((r.x[0] - 1.0).abs() < 1e-12 && (r.x[1] - 2.0).abs() < 1e-12);
        assert!(r.residual_norm < 1e-12);
    }

    #[test]
    fn negative_direction_is_clamped() {
        let c = DMatrix::identity(2, 2);
        let y = DVector::from_vec(vec![-1.0, 2.0]);
        let r = nnls(&c, &y);
        assert_eq!(r.x[0], 0.0);
        assert!((r.x[1] - 2.0).abs() < 1e-14);
        assert!((r.residual_norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_target_gives_zero() {
        let c = DMatrix::from_element(3, 3, 1.0);
        let r = nnls(&c, &DVector::zeros(3));
        assert_eq!(r.x, DVector::zeros(3));
    }
}
