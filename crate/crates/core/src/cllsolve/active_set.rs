//! Primal active-set method for
//!
//! ```text
//! min 1/2 ||A x - d||^2   s.t.  x >= 0,  A x <= u (optional)
//! ```
//!
//! Started from `x = 0` with every bound in the working set. Equality
//! subproblems are solved as min-norm least squares on the null space of the
//! active general rows, so a rank-deficient `A` needs no regularization.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matcore::Svd;

#[derive(Clone, Debug)]
pub(crate) struct KernelOptions {
    pub max_iter: usize,
    /// Absolute feasibility slack for the general rows.
    pub feas_abs: f64,
}

#[derive(Clone, Debug)]
pub(crate) struct KernelOutput {
    pub x: DVector<f64>,
    pub iterations: usize,
    pub active_bounds: Vec<usize>,
    pub active_upper: Vec<usize>,
}

/// Min-norm least squares; singular values below `1e-12 * scale` (or below
/// `1e-12 * sigma_max` when larger) count as zero.
fn lstsq(a: &DMatrix<f64>, r: &DVector<f64>, scale: f64) -> DVector<f64> {
    if a.ncols() == 0 {
        return DVector::zeros(0);
    }
    let svd = Svd::new(a);
    let cut = 1e-12 * svd.max().max(scale);
    if cut == 0.0 {
        return DVector::zeros(a.ncols());
    }
    svd.solve(r, cut)
}

/// Orthonormal basis (as rows) of the row space of `h`.
fn row_space(h: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = Svd::new(h);
    svd.row_space(1e-12 * svd.max())
}

pub(crate) fn solve(
    a: &DMatrix<f64>,
    d: &DVector<f64>,
    upper: Option<&DVector<f64>>,
    opts: &KernelOptions,
) -> Result<KernelOutput> {
    let (m, p) = a.shape();
    let n_upper = upper.map_or(0, |_| m);
    if let Some(u) = upper {
        if let Some(k) = (0..m).find(|&k| u[k] < -opts.feas_abs) {
            return Err(Error::Infeasible(format!(
                "upper bound of row {k} is negative, so x = 0 is not feasible"
            )));
        }
    }
    let row_norms: Vec<f64> = (0..m).map(|k| a.row(k).norm()).collect();
    let col_max = a.column_iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    let d_norm = d.norm();
    let grad_scale = d_norm * col_max.max(d_norm);
    let mult_tol = 1e-12 * grad_scale;

    let mut x = DVector::zeros(p);
    let mut bound_active = vec![true; p];
    let mut upper_active: Vec<usize> = Vec::new();
    let mut degenerate = false;

    for iter in 0..opts.max_iter {
        let free: Vec<usize> = (0..p).filter(|&j| !bound_active[j]).collect();
        let ax = a * &x;
        let r = d - &ax;

        let mut step = DVector::zeros(p);
        let mut a_step = DVector::zeros(m);
        if !free.is_empty() {
            let a_f = a.select_columns(&free);
            let p_f = if upper_active.is_empty() {
                lstsq(&a_f, &r, col_max)
            } else {
                let basis = row_space(&a_f.select_rows(&upper_active));
                // A_F restricted to the null space of the active rows
                let projected = &a_f - (&a_f * basis.transpose()) * &basis;
                let y = lstsq(&projected, &r, col_max);
                &y - basis.transpose() * (&basis * &y)
            };
            for (k, &j) in free.iter().enumerate() {
                step[j] = p_f[k];
            }
            a_step = &a_f * &p_f;
        }

        if a_step.norm() <= 1e-13 * d_norm.max(f64::MIN_POSITIVE) {
            // stationary on the working set: inspect multipliers
            let g = a.tr_mul(&(-&r));
            let mu = if upper_active.is_empty() || free.is_empty() {
                DVector::zeros(upper_active.len())
            } else {
                let h_t = a.select_rows(&upper_active).select_columns(&free).transpose();
                let g_f = DVector::from_iterator(free.len(), free.iter().map(|&j| -g[j]));
                lstsq(&h_t, &g_f, 0.0)
            };
            let mut leave: Option<(usize, f64)> = None;
            let mut consider = |idx: usize, value: f64| {
                if value >= -mult_tol {
                    return;
                }
                let better = match leave {
                    None => true,
                    Some((_, v)) => !degenerate && value < v,
                };
                if better {
                    leave = Some((idx, value));
                }
            };
            for j in 0..p {
                if bound_active[j] {
                    let lambda = g[j]
                        + upper_active
                            .iter()
                            .enumerate()
                            .map(|(k, &row)| a[(row, j)] * mu[k])
                            .sum::<f64>();
                    consider(j, lambda);
                }
            }
            let mut order: Vec<usize> = (0..upper_active.len()).collect();
            order.sort_by_key(|&k| upper_active[k]);
            for k in order {
                let row = upper_active[k];
                consider(p + row, mu[k] * row_norms[row]);
            }
            match leave {
                None => {
                    for v in x.iter_mut() {
                        if *v < 0.0 {
                            *v = 0.0;
                        }
                    }
                    let active_bounds = (0..p).filter(|&j| bound_active[j]).collect();
                    upper_active.sort_unstable();
                    return Ok(KernelOutput {
                        x,
                        iterations: iter,
                        active_bounds,
                        active_upper: upper_active,
                    });
                }
                Some((idx, _)) if idx < p => bound_active[idx] = false,
                Some((idx, _)) => upper_active.retain(|&row| row != idx - p),
            }
            continue;
        }

        // ratio test; lowest constraint index wins ties
        let step_max = step.amax();
        let a_step_max = a_step.amax();
        let mut alpha = 1.0;
        let mut blocking: Option<usize> = None;
        for &j in &free {
            if step[j] < -1e-14 * step_max {
                let ratio = x[j].max(0.0) / -step[j];
                if ratio < alpha * (1.0 - 1e-12) || (blocking.is_none() && ratio <= alpha) {
                    alpha = ratio;
                    blocking = Some(j);
                }
            }
        }
        if let Some(u) = upper {
            for row in 0..n_upper {
                if upper_active.contains(&row) {
                    continue;
                }
                if a_step[row] > 1e-14 * a_step_max {
                    let ratio = (u[row] - ax[row]).max(0.0) / a_step[row];
                    if ratio < alpha * (1.0 - 1e-12) || (blocking.is_none() && ratio <= alpha) {
                        alpha = ratio;
                        blocking = Some(p + row);
                    }
                }
            }
        }
        x += &step * alpha;
        for &j in &free {
            if x[j] < 0.0 {
                x[j] = 0.0;
            }
        }
        match blocking {
            Some(j) if j < p => {
                x[j] = 0.0;
                bound_active[j] = true;
            }
            Some(idx) => upper_active.push(idx - p),
            None => {}
        }
        degenerate = alpha == 0.0;
    }
    Err(Error::MaxIterations(opts.max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> KernelOptions {
        KernelOptions {
            max_iter: 200,
            feas_abs: 1e-12,
        }
    }

    #[test]
    fn nonnegative_least_squares_without_upper_rows() {
        let a = DMatrix::identity(2, 2);
        let d = DVector::from_vec(vec![-1.0, 2.0]);
        let out = solve(&a, &d, None, &opts()).unwrap();
        assert_eq!(out.x[0], 0.0);
        assert!((out.x[1] - 2.0).abs() < 1e-14);
        assert_eq!(out.active_bounds, vec![0]);
    }

    #[test]
    fn upper_rows_cap_the_fit() {
        // fit d = 2 with one column of ones, capped at 1
        let a = DMatrix::from_element(2, 1, 1.0);
        let d = DVector::from_vec(vec![2.0, 2.0]);
        let u = DVector::from_vec(vec![1.0, 5.0]);
        let out = solve(&a, &d, Some(&u), &opts()).unwrap();
        assert!((out.x[0] - 1.0).abs() < 1e-14);
        assert_eq!(out.active_upper, vec![0]);
    }

    #[test]
    fn negative_upper_bound_is_infeasible() {
        let a = DMatrix::from_element(1, 1, 1.0);
        let d = DVector::from_vec(vec![1.0]);
        let u = DVector::from_vec(vec![-1.0]);
        assert!(matches!(
            solve(&a, &d, Some(&u), &opts()),
            Err(Error::Infeasible(_))
        ));
    }
}
