//! Sparse NMF: `min ||M - UV||_F^2 + sum_k mu_k ||U_:k||_1` with every
//! column of `U` normalized to `||U_:k||_inf = 1`.

use nalgebra::{DMatrix, DVector};

use super::hals::{random_init, update_columns, HalsConfig};
use super::FactorPair;
use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;

#[derive(Clone, Debug)]
pub struct SnmfConfig {
    pub mu: Vec<f64>,
    pub max_outer: usize,
    pub seed: u64,
}

impl SnmfConfig {
    pub fn uniform(r: usize, mu: f64, max_outer: usize, seed: u64) -> Self {
        Self {
            mu: vec![mu; r],
            max_outer,
            seed,
        }
    }
}

fn penalized(m: &DMatrix<f64>, u: &DMatrix<f64>, v: &DMatrix<f64>, mu: &[f64]) -> f64 {
    let l1: f64 = mu
        .iter()
        .enumerate()
        .map(|(k, w)| w * u.column(k).iter().sum::<f64>())
        .sum();
    (m - u * v).norm_squared() + l1
}

/// Exact minimizer of `bkk ||u||^2 - 2 g.u + mu sum(u)` over
/// `{u in [0,1]^m : max u = 1}`.
fn best_column(g: &DVector<f64>, bkk: f64, mu: f64) -> DVector<f64> {
    let cost = |gi: f64, x: f64| bkk * x * x - 2.0 * gi * x + mu * x;
    let mut u = g.map(|gi| {
        if bkk > 0.0 {
            ((gi - 0.5 * mu) / bkk).clamp(0.0, 1.0)
        } else if 2.0 * gi > mu {
            1.0
        } else {
            0.0
        }
    });
    if u.iter().all(|&x| x < 1.0) {
        // pin the entry whose move to 1 costs least; ties go to the lowest index
        let mut best = 0;
        let mut best_delta = f64::INFINITY;
        for i in 0..u.len() {
            let delta = cost(g[i], 1.0) - cost(g[i], u[i]);
            if delta < best_delta {
                best_delta = delta;
                best = i;
            }
        }
        u[best] = 1.0;
    }
    u
}

/// Reseeds column `k` from the column of the positive residual with the
/// largest norm (lowest index on ties).
fn reseed(m: &DMatrix<f64>, u: &mut DMatrix<f64>, v: &DMatrix<f64>, k: usize) {
    let resid = (m - &*u * v).map(|x| x.max(0.0));
    let mut best = 0;
    let mut best_norm = -1.0;
    for j in 0..resid.ncols() {
        let n = resid.column(j).norm();
        if n > best_norm {
            best_norm = n;
            best = j;
        }
    }
    let col = resid.column(best);
    let top = col.max();
    if top > 0.0 {
        u.set_column(k, &(col / top));
    }
}

/// Runs sparse NMF. Columns of `U` whose `V` row vanishes are reseeded from
/// the residual, which can break monotonicity on that iteration.
pub fn snmf(m: &DenseMatrix, r: usize, cfg: &SnmfConfig) -> Result<FactorPair> {
    if r == 0 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    if cfg.mu.len() != r || cfg.mu.iter().any(|&w| !w.is_finite() || w <= 0.0) {
        return Err(Error::InvalidParameter(
            "sNMF needs r positive finite penalty weights".into(),
        ));
    }
    let mm = m.as_nalgebra();
    let (rows, cols) = m.shape();
    let (mut u, mut v) = random_init(m, r, cfg.seed);
    for k in 0..r {
        let top = u.column(k).max();
        if top > 0.0 {
            u.column_mut(k).scale_mut(1.0 / top);
            v.row_mut(k).scale_mut(top);
        }
    }
    let max_inner = HalsConfig::default().max_inner(rows, cols, r);
    let eps_stop = HalsConfig::default().eps_stop;
    let mut history = vec![penalized(mm, &u, &v, &cfg.mu)];
    for _ in 0..cfg.max_outer {
        let a = mm * v.transpose();
        let b = &v * v.transpose();
        for k in 0..r {
            // g = (residual without column k) * v_k
            let g = a.column(k) - &u * b.column(k) + u.column(k) * b[(k, k)];
            let col = best_column(&g, b[(k, k)], cfg.mu[k]);
            u.set_column(k, &col);
        }
        let at = mm.transpose() * &u;
        let bt = u.transpose() * &u;
        let mut vt = v.transpose();
        update_columns(&mut vt, &at, &bt, max_inner, eps_stop, None);
        v = vt.transpose();
        for k in 0..r {
            if v.row(k).iter().all(|&x| x == 0.0) {
                reseed(mm, &mut u, &v, k);
            }
        }
        history.push(penalized(mm, &u, &v, &cfg.mu));
    }
    let mut out = FactorPair::new(m, u, v, history)?;
    out.seed = cfg.seed;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_keep_unit_max() {
        let m = crate::fixtures::load("separable-rank3").unwrap();
        let fp = snmf(&m, 3, &SnmfConfig::uniform(3, 1e-3, 50, 1)).unwrap();
        for k in 0..3 {
            let top = fp.u.column(k).iter().cloned().fold(f64::MIN, f64::max);
            assert!((top - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn best_column_is_exact_on_a_small_case() {
        // unconstrained optimum 0.5, 0.25 -> the cheaper pin is the larger entry
        let g = DVector::from_vec(vec![0.5, 0.25]);
        let u = best_column(&g, 1.0, 0.0);
        assert_eq!(u, DVector::from_vec(vec![1.0, 0.25]));
    }

    #[test]
    fn rejects_nonpositive_weights() {
        let m = DenseMatrix::identity(2);
        assert!(snmf(&m, 2, &SnmfConfig::uniform(2, 0.0, 5, 0)).is_err());
    }
}
