//! Factorization engines: A-HALS, l1-penalized sparse NMF, NNLS refits and
//! the Pre-NMF pipeline.

mod hals;
mod pipeline;
mod refit;
mod snmf;
mod tune;

use nalgebra::DMatrix;

use crate::error::Result;
use crate::matcore::{sparsity, DenseMatrix, DEFAULT_ZERO_TOL};

pub use hals::{ahals, ahals_from, postprocess_fixed_support, random_init, roundoff_floor, HalsConfig, SNAP};
pub use pipeline::{run_pipeline, Method, MethodRecord, PipelineConfig, PipelineOutput};
pub use refit::{refit_v, v_from_q, VFromQ, ILL_CONDITIONED_RHO};
pub use snmf::{snmf, SnmfConfig};
pub use tune::{tune_mu, TuneResult, TUNE_PROBES, TUNE_TOL};

/// Nonnegative factors of an `m x n` matrix with their fit statistics.
#[derive(Clone, Debug)]
pub struct FactorPair {
    pub u: DenseMatrix,
    pub v: DenseMatrix,
    pub rank: usize,
    /// `||M - UV||_F / ||M||_F` (the absolute error when `M = 0`).
    pub rel_error: f64,
    pub s_u: f64,
    pub s_v: f64,
    pub seed: u64,
    pub iterations: usize,
    /// Objective value before the first and after every outer iteration.
    pub history: Vec<f64>,
    /// `r > min(m, n)`; the run still proceeds.
    pub rank_too_large: bool,
}

impl FactorPair {
    pub(crate) fn new(
        m: &DenseMatrix,
        u: DMatrix<f64>,
        v: DMatrix<f64>,
        history: Vec<f64>,
    ) -> Result<Self> {
        let rank = u.ncols();
        let (rows, cols) = m.shape();
        let u = DenseMatrix::from_nalgebra(u)?;
        let v = DenseMatrix::from_nalgebra(v)?;
        Ok(Self {
            rel_error: relative_error(m, &u, &v),
            s_u: sparsity(&u, DEFAULT_ZERO_TOL),
            s_v: sparsity(&v, DEFAULT_ZERO_TOL),
            rank,
            seed: 0,
            iterations: history.len().saturating_sub(1),
            history,
            rank_too_large: rank > rows.min(cols),
            u,
            v,
        })
    }

    /// Recomputes sparsities with a different zero threshold.
    pub fn with_zero_tol(mut self, zero_tol: f64) -> Self {
        self.s_u = sparsity(&self.u, zero_tol);
        self.s_v = sparsity(&self.v, zero_tol);
        self
    }
}

/// `||M - UV||_F / ||M||_F`, or the absolute error for `M = 0`.
pub fn relative_error(m: &DenseMatrix, u: &DenseMatrix, v: &DenseMatrix) -> f64 {
    let err = (m.as_nalgebra() - u.as_nalgebra() * v.as_nalgebra()).norm();
    let scale = m.frobenius_norm();
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}
