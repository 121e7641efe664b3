//! Refitting `V` for a fixed `U`, and the direct map `V = V' Q^{-1}`.

use nalgebra::{DMatrix, DVector};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::cllsolve::{active_set_solve, KernelOptions, Tolerances};
use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;
use crate::preprocess::spectral_radius_bracket;

/// `rho(alpha B*)` above this flags `Q` as nearly singular.
pub const ILL_CONDITIONED_RHO: f64 = 0.99;

/// Relative KKT residual of `min ||U v - d||, v >= 0`.
fn nnls_kkt(u: &DMatrix<f64>, d: &DVector<f64>, v: &DVector<f64>) -> f64 {
    let g = u.tr_mul(&(u * v - d));
    let col_max = u.column_iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    let d_norm = d.norm();
    let scale = d_norm * col_max.max(d_norm);
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0_f64;
    for j in 0..v.len() {
        // dual feasibility, and complementarity on the free coordinates
        worst = worst.max((-g[j]).max(0.0));
        if v[j] > 0.0 {
            worst = worst.max(g[j].abs());
        }
    }
    worst / scale
}

/// `V = argmin_{X >= 0} ||M - U X||_F`, column by column, with each column
/// certified to `kkt_tol`.
pub fn refit_v(m: &DenseMatrix, u: &DenseMatrix) -> Result<DenseMatrix> {
    if u.nrows() != m.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "U has {} rows but M has {}",
            u.nrows(),
            m.nrows()
        )));
    }
    if u.min() < 0.0 {
        return Err(Error::InvalidParameter("U must be nonnegative".into()));
    }
    let tol = Tolerances::default();
    let r = u.ncols();
    let a = u.as_nalgebra();
    let solve = |j: usize| -> Result<Vec<f64>> {
        let d = DVector::from_column_slice(m.column(j));
        let out = active_set_solve(
            a,
            &d,
            None,
            &KernelOptions {
                max_iter: tol.max_iter_factor * (r + 1),
                feas_abs: 0.0,
            },
        )
        .map_err(|e| e.in_column(j))?;
        let residual = nnls_kkt(a, &d, &out.x);
        if residual > tol.kkt_tol {
            return Err(Error::KktTolerance {
                residual,
                tol: tol.kkt_tol,
            }
            .in_column(j));
        }
        Ok(out.x.iter().copied().collect())
    };
    #[cfg(feature = "parallel")]
    let columns: Result<Vec<Vec<f64>>> = (0..m.ncols()).into_par_iter().map(solve).collect();
    #[cfg(not(feature = "parallel"))]
    let columns: Result<Vec<Vec<f64>>> = (0..m.ncols()).map(solve).collect();
    let values = columns?.into_iter().flatten().collect();
    DenseMatrix::from_column_major(r, m.ncols(), values)
}

#[derive(Clone, Debug, Serialize)]
pub struct VFromQ {
    #[serde(skip)]
    pub v: DenseMatrix,
    /// `rho(alpha B*)`
    pub rho: f64,
    pub ill_conditioned: bool,
    /// Most negative entry removed by clipping.
    pub clipped: f64,
}

/// `V = V' (I - alpha B*)^{-1}`, clipped at zero.
pub fn v_from_q(vp: &DenseMatrix, b_star: &DenseMatrix, alpha: f64) -> Result<VFromQ> {
    let n = b_star.nrows();
    if vp.ncols() != n || b_star.ncols() != n {
        return Err(Error::DimensionMismatch("V' and B* sizes disagree".into()));
    }
    let rho = alpha * spectral_radius_bracket(b_star)?.upper;
    if rho >= 1.0 {
        return Err(Error::SingularQ { rho });
    }
    let q = DMatrix::identity(n, n) - b_star.as_nalgebra() * alpha;
    // V Q = V'  <=>  Q^T V^T = V'^T
    let vt = q
        .transpose()
        .lu()
        .solve(&vp.as_nalgebra().transpose())
        .ok_or(Error::SingularQ { rho })?;
    let mut clipped = 0.0_f64;
    let v = vt.transpose().map(|x| {
        if x < 0.0 {
            clipped = clipped.min(x);
            0.0
        } else {
            x
        }
    });
    Ok(VFromQ {
        v: DenseMatrix::from_nalgebra(v)?,
        rho,
        ill_conditioned: rho > ILL_CONDITIONED_RHO,
        clipped,
    })
}
