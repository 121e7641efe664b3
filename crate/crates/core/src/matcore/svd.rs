//! One-sided Jacobi SVD.
//!
//! nalgebra's bidiagonal SVD loses accuracy on some rank-deficient inputs
//! whose entries mix `O(1)` values with `O(1e-16)` round-off, which is
//! exactly what projected active-set subproblems look like. Jacobi
//! rotations keep full relative accuracy there, at a cost that is irrelevant
//! for the small matrices this crate decomposes.

use nalgebra::{DMatrix, DVector};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U diag(s) V^T` with `s` sorted in decreasing order.
#[derive(Clone, Debug)]
pub struct Svd {
    /// `m x k`, `k = min(m, n)`; columns for zero singular values are zero.
    pub u: DMatrix<f64>,
    pub s: DVector<f64>,
    /// `n x k`
    pub v: DMatrix<f64>,
}

impl Svd {
    pub fn new(a: &DMatrix<f64>) -> Self {
        let (m, n) = a.shape();
        if m < n {
            let t = Svd::new(&a.transpose());
            return Svd {
                u: t.v,
                s: t.s,
                v: t.u,
            };
        }
        let mut w = a.clone();
        let mut v = DMatrix::<f64>::identity(n, n);
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha = w.column(p).norm_squared();
                    let beta = w.column(q).norm_squared();
                    let gamma = w.column(p).dot(&w.column(q));
                    if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = if zeta == 0.0 {
                        1.0
                    } else {
                        zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for (mat, rows) in [(&mut w, m), (&mut v, n)] {
                        for i in 0..rows {
                            let (x, y) = (mat[(i, p)], mat[(i, q)]);
                            mat[(i, p)] = c * x - s * y;
                            mat[(i, q)] = s * x + c * y;
                        }
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
        let mut u = DMatrix::zeros(m, n);
        let mut vs = DMatrix::zeros(n, n);
        let mut s = DVector::zeros(n);
        for (k, &j) in order.iter().enumerate() {
            s[k] = norms[j];
            if norms[j] > 0.0 {
                u.set_column(k, &(w.column(j) / norms[j]));
            }
            vs.set_column(k, &v.column(j));
        }
        Svd { u, s, v: vs }
    }

    pub fn max(&self) -> f64 {
        if self.s.is_empty() {
            0.0
        } else {
            self.s[0]
        }
    }

    /// Number of singular values above `cut`.
    pub fn rank(&self, cut: f64) -> usize {
        self.s.iter().filter(|&&x| x > cut).count()
    }

    /// Min-norm least-squares solution, dropping singular values `<= cut`.
    pub fn solve(&self, b: &DVector<f64>, cut: f64) -> DVector<f64> {
        let mut x = DVector::zeros(self.v.nrows());
        for k in 0..self.s.len() {
            if self.s[k] > cut {
                let coef = self.u.column(k).dot(b) / self.s[k];
                x.axpy(coef, &self.v.column(k), 1.0);
            }
        }
        x
    }

    /// Orthonormal basis of the row space as rows, for `s > cut`.
    pub fn row_space(&self, cut: f64) -> DMatrix<f64> {
        let k = self.rank(cut);
        self.v.columns(0, k).transpose()
    }
}
