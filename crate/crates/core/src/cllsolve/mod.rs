//! Per-column constrained least squares defining the preprocessing.
//!
//! Column `i` of `B*` solves
//!
//! ```text
//! min_b ||M_i - M b||^2   s.t.  b >= 0,  b_i = 0,  M b <= M_i + eps ||M_i||_inf e
//! ```
//!
//! The fitted vector `M b` is unique even when `b` is not.

mod active_set;
mod kkt;
mod nnls;

pub use kkt::kkt_check;
pub use nnls::{nnls, NnlsResult};

use nalgebra::{DMatrix, DVector};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) use active_set::{solve as active_set_solve, KernelOptions};

use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Constraint slack, relative to `||M_i||_inf`.
    pub feas_tol: f64,
    /// Bound on the normalized KKT residual of an accepted solution.
    pub kkt_tol: f64,
    /// Iteration cap is `max_iter_factor * n`.
    pub max_iter_factor: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            feas_tol: 1e-9,
            kkt_tol: 1e-8,
            max_iter_factor: 50,
        }
    }
}

/// One column problem; borrows the full data matrix.
#[derive(Clone, Debug)]
pub struct CllsProblem<'a> {
    m: &'a DenseMatrix,
    column: usize,
    epsilon: f64,
    upper: Vec<f64>,
}

impl<'a> CllsProblem<'a> {
    pub fn new(m: &'a DenseMatrix, column: usize, epsilon: f64) -> Result<Self> {
        if m.ncols() < 2 {
            return Err(Error::InvalidParameter(
                "need at least two columns".into(),
            ));
        }
        if column >= m.ncols() {
            return Err(Error::InvalidParameter(format!(
                "column {column} out of range for {} columns",
                m.ncols()
            )));
        }
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in [0, 1), got {epsilon}"
            )));
        }
        let d = m.column(column);
        let d_inf = d.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        let upper = d.iter().map(|v| v + epsilon * d_inf).collect();
        Ok(Self {
            m,
            column,
            epsilon,
            upper,
        })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        self.m
    }

    pub fn column(&self) -> usize {
        self.column
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn target(&self) -> &[f64] {
        self.m.column(self.column)
    }

    /// `u = M_i + eps ||M_i||_inf e`
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActiveConstraint {
    /// `b_j = 0`
    Bound(usize),
    /// `(M b)_k = u_k`
    Upper(usize),
}

#[derive(Clone, Debug)]
pub struct CllsSolution {
    /// Length `n`, nonnegative, `b[i] == 0`.
    pub b: Vec<f64>,
    /// `||M_i - M b||^2`
    pub objective: f64,
    pub kkt_residual: f64,
    pub active_set: Vec<ActiveConstraint>,
    pub iterations: usize,
}

impl CllsSolution {
    /// `M b`
    pub fn fitted(&self, m: &DenseMatrix) -> Vec<f64> {
        (0..m.nrows())
            .map(|k| (0..m.ncols()).map(|j| m.get(k, j) * self.b[j]).sum())
            .collect()
    }
}

pub fn solve_column(p: &CllsProblem<'_>, tol: &Tolerances) -> Result<CllsSolution> {
    let order: Vec<usize> = (0..p.m.ncols()).collect();
    solve_column_ordered(p, tol, &order)
}

/// Like [`solve_column`], but the free coefficients are presented to the
/// solver in the given order (a permutation of `0..n`), which changes every
/// tie-break and therefore the path taken through the active sets.
pub fn solve_column_ordered(
    p: &CllsProblem<'_>,
    tol: &Tolerances,
    order: &[usize],
) -> Result<CllsSolution> {
    let m = p.m;
    let n = m.ncols();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&j| j >= n || std::mem::replace(&mut seen[j], true)) {
        return Err(Error::InvalidParameter("order must be a permutation of 0..n".into()));
    }
    let vars: Vec<usize> = order.iter().copied().filter(|&j| j != p.column).collect();
    let d = DVector::from_column_slice(p.target());
    let d_inf = d.amax();
    if d_inf == 0.0 {
        return Ok(CllsSolution {
            b: vec![0.0; n],
            objective: 0.0,
            kkt_residual: 0.0,
            active_set: vars.iter().map(|&j| ActiveConstraint::Bound(j)).collect(),
            iterations: 0,
        });
    }
    let a: DMatrix<f64> = m.as_nalgebra().select_columns(&vars);
    let u = DVector::from_column_slice(p.upper());
    let out = active_set_solve(
        &a,
        &d,
        Some(&u),
        &KernelOptions {
            max_iter: tol.max_iter_factor * n,
            feas_abs: tol.feas_tol * d_inf,
        },
    )?;
    let mut b = vec![0.0; n];
    for (k, &j) in vars.iter().enumerate() {
        b[j] = out.x[k];
    }
    let mut active_set: Vec<ActiveConstraint> = out
        .active_bounds
        .iter()
        .map(|&k| ActiveConstraint::Bound(vars[k]))
        .chain(out.active_upper.iter().map(|&r| ActiveConstraint::Upper(r)))
        .collect();
    active_set.sort_by_key(|c| match *c {
        ActiveConstraint::Bound(j) => (0, j),
        ActiveConstraint::Upper(r) => (1, r),
    });
    let residual = &d - &a * &out.x;
    let kkt_residual = kkt_check(p, &b, tol)?;
    if kkt_residual > tol.kkt_tol {
        return Err(Error::KktTolerance {
            residual: kkt_residual,
            tol: tol.kkt_tol,
        });
    }
    Ok(CllsSolution {
        b,
        objective: residual.norm_squared(),
        kkt_residual,
        active_set,
        iterations: out.iterations,
    })
}

/// Result of solving every column problem of a matrix.
#[derive(Clone, Debug)]
pub struct ColumnSolves {
    /// `n x n`, nonnegative, zero diagonal.
    pub b_star: DenseMatrix,
    pub columns: Vec<CllsSolution>,
}

impl ColumnSolves {
    pub fn kkt_residuals(&self) -> Vec<f64> {
        self.columns.iter().map(|c| c.kkt_residual).collect()
    }
}

/// Solves all `n` column problems (in parallel with the `parallel` feature)
/// and assembles `B*`.
pub fn preprocess_matrix(m: &DenseMatrix, epsilon: f64, tol: &Tolerances) -> Result<ColumnSolves> {
    let n = m.ncols();
    let solve = |i: usize| -> Result<CllsSolution> {
        let p = CllsProblem::new(m, i, epsilon)?;
        solve_column(&p, tol).map_err(|e| e.in_column(i))
    };
    #[cfg(feature = "parallel")]
    let columns: Result<Vec<CllsSolution>> = (0..n).into_par_iter().map(solve).collect();
    #[cfg(not(feature = "parallel"))]
    let columns: Result<Vec<CllsSolution>> = (0..n).map(solve).collect();
    let columns = columns?;
    let values = columns.iter().flat_map(|c| c.b.iter().copied()).collect();
    let b_star = DenseMatrix::from_column_major(n, n, values)?;
    Ok(ColumnSolves { b_star, columns })
}
