//! The preprocessing operators built on `B*`: `P^alpha(M) = M (I - alpha B*)`,
//! its spectral radius check, column rescaling and the search for the
//! largest `alpha` that keeps a rank-3 matrix's nonnegative rank.

use nalgebra::{DMatrix, DVector};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::cllsolve::{preprocess_matrix, Tolerances};
use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;
use crate::npp3;

/// `sigma_4 / sigma_1` at or below this counts as rank at most 3.
pub const RANK3_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct PreprocessConfig {
    pub epsilon: f64,
    pub alpha: f64,
    pub tol: Tolerances,
    /// Rescale the output columns to the norms of the input columns.
    pub rescale: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            alpha: 1.0,
            tol: Tolerances::default(),
            rescale: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PreprocessResult {
    pub b_star: DenseMatrix,
    pub epsilon: f64,
    pub alpha: f64,
    /// `M - alpha M B*`, rescaled when requested.
    pub p_alpha_m: DenseMatrix,
    pub rho: SpectralRadius,
    pub column_kkt: Vec<f64>,
    /// Diagonal of the column rescaling, when applied.
    pub rescale: Option<Vec<f64>>,
}

/// Solves the column problems and assembles every derived quantity.
pub fn preprocess(m: &DenseMatrix, cfg: &PreprocessConfig) -> Result<PreprocessResult> {
    let solves = preprocess_matrix(m, cfg.epsilon, &cfg.tol)?;
    let column_kkt = solves.kkt_residuals();
    let b_star = solves.b_star;
    let mut p_alpha_m = apply_alpha(m, &b_star, cfg.alpha)?;
    let rho = spectral_radius_bracket(&b_star)?;
    let rescale = if cfg.rescale {
        let (scaled, d) = rescale_columns(&p_alpha_m, m)?;
        p_alpha_m = scaled;
        Some(d)
    } else {
        None
    };
    Ok(PreprocessResult {
        b_star,
        epsilon: cfg.epsilon,
        alpha: cfg.alpha,
        p_alpha_m,
        rho,
        column_kkt,
        rescale,
    })
}

/// `P^alpha(M) = M - alpha M B*`
pub fn apply_alpha(m: &DenseMatrix, b_star: &DenseMatrix, alpha: f64) -> Result<DenseMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    if b_star.shape() != (m.ncols(), m.ncols()) {
        return Err(Error::DimensionMismatch(format!(
            "B* is {}x{}, expected {n}x{n}",
            b_star.nrows(),
            b_star.ncols(),
            n = m.ncols()
        )));
    }
    if alpha == 0.0 {
        return Ok(m.clone());
    }
    let mb = m.as_nalgebra() * b_star.as_nalgebra();
    DenseMatrix::from_nalgebra(m.as_nalgebra() - mb * alpha)
}

/// Spectral radius with its Collatz–Wielandt bracket.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralRadius {
    pub rho: f64,
    pub lower: f64,
    pub upper: f64,
    pub converged: bool,
    pub iterations: usize,
}

const POWER_CAP: usize = 10_000;
const POWER_TOL: f64 = 1e-10;

/// Power iteration on one irreducible block, shifted by `mu I`.
fn block_radius(b: &DMatrix<f64>) -> SpectralRadius {
    let n = b.nrows();
    let max_col_sum = b.column_iter().map(|c| c.sum()).fold(0.0_f64, f64::max);
    if max_col_sum == 0.0 {
        return SpectralRadius {
            rho: 0.0,
            lower: 0.0,
            upper: 0.0,
            converged: true,
            iterations: 0,
        };
    }
    let mu = 1e-3 * max_col_sum;
    let mut shifted = b.clone();
    for i in 0..n {
        shifted[(i, i)] += mu;
    }
    let mut x = DVector::from_element(n, 1.0);
    let (mut lower, mut upper) = (0.0_f64, f64::INFINITY);
    for it in 1..=POWER_CAP {
        let y = &shifted * &x;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
        for i in 0..n {
            let ratio = y[i] / x[i];
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        lower = lower.max(lo - mu);
        upper = upper.min(hi - mu);
        if upper - lower <= POWER_TOL * upper.max(f64::MIN_POSITIVE) {
            return SpectralRadius {
                rho: 0.5 * (lower + upper),
                lower,
                upper,
                converged: true,
                iterations: it,
            };
        }
        x = &y / y.max();
    }
    SpectralRadius {
        rho: 0.5 * (lower + upper),
        lower,
        upper,
        converged: false,
        iterations: POWER_CAP,
    }
}

/// Spectral radius of a nonnegative matrix together with its bracket.
///
/// The matrix is split into strongly connected components of its sparsity
/// graph; each irreducible block gets a shifted power iteration, whose
/// Collatz–Wielandt quotients bracket the block radius. The radius is the
/// largest block radius.
pub fn spectral_radius_bracket(b: &DenseMatrix) -> Result<SpectralRadius> {
    let n = b.nrows();
    if b.ncols() != n {
        return Err(Error::DimensionMismatch("spectral radius needs a square matrix".into()));
    }
    if b.min() < 0.0 {
        return Err(Error::InvalidParameter(
            "spectral radius bracket needs a nonnegative matrix".into(),
        ));
    }
    let mut graph = DiGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if b.get(i, j) > 0.0 {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut best = SpectralRadius {
        rho: 0.0,
        lower: 0.0,
        upper: 0.0,
        converged: true,
        iterations: 0,
    };
    for component in tarjan_scc(&graph) {
        let idx: Vec<usize> = component.iter().map(|v| v.index()).collect();
        let block = b.as_nalgebra().select_rows(&idx).select_columns(&idx);
        let r = block_radius(&block);
        best.lower = best.lower.max(r.lower);
        best.upper = best.upper.max(r.upper);
        best.converged &= r.converged;
        best.iterations = best.iterations.max(r.iterations);
        best.rho = best.rho.max(r.rho);
    }
    Ok(best)
}

/// Spectral radius of a nonnegative matrix; errors when the bracket does not
/// close within the iteration cap.
pub fn spectral_radius(b: &DenseMatrix) -> Result<f64> {
    let r = spectral_radius_bracket(b)?;
    if r.converged {
        Ok(r.rho)
    } else {
        Err(Error::NonConvergence {
            lower: r.lower,
            upper: r.upper,
        })
    }
}

/// Scales column `i` of `p_m` by `||M_i|| / ||P_i||`. Columns of `p_m` that
/// are numerically zero relative to `M_i` pass through with factor 1.
pub fn rescale_columns(p_m: &DenseMatrix, m: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>)> {
    if p_m.shape() != m.shape() {
        return Err(Error::DimensionMismatch("rescale needs equal shapes".into()));
    }
    let p_norms = p_m.column_l2_norms();
    let m_norms = m.column_l2_norms();
    let d: Vec<f64> = p_norms
        .iter()
        .zip(&m_norms)
        .map(|(&p, &q)| if p > 1e-10 * q && p > 0.0 { q / p } else { 1.0 })
        .collect();
    let out = DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| p_m.get(i, j) * d[j])?;
    Ok((out, d))
}

/// Checks `sigma_4 / sigma_1 <= RANK3_TOL` and `sigma_3 / sigma_1 > RANK3_TOL`.
pub fn check_rank3(m: &DenseMatrix) -> Result<()> {
    let rank = m.numerical_rank(RANK3_TOL);
    if rank == 3 {
        Ok(())
    } else {
        Err(Error::RankMismatch {
            expected: 3,
            found: rank,
        })
    }
}

/// Whether `P^alpha(M)` still admits a 3-vertex nested polygon.
pub fn rank3_feasible(m: &DenseMatrix, b_star: &DenseMatrix, alpha: f64) -> Result<bool> {
    Ok(rank3_feasibility(m, b_star, alpha)?.feasible)
}

fn rank3_feasibility(m: &DenseMatrix, b_star: &DenseMatrix, alpha: f64) -> Result<npp3::Feasibility> {
    let pa = apply_alpha(m, b_star, alpha)?;
    let npp = npp3::build_npp(&pa)?;
    Ok(npp3::feasible_k(&npp, 3))
}

const ALPHA_BISECTIONS: usize = 40;

/// Largest `alpha` in `[0, 1]` for which `P^alpha(M)` keeps nonnegative
/// rank 3, by bisection on the nested-polygon gap.
///
/// Touching within the geometric tolerance counts as feasible at the ends of
/// `[0, 1]`. Inside, the bisection tracks the sign change of the largest gap,
/// so the returned `alpha` has a gap `>= 0` and sits below the exact value by
/// at most `tol_alpha`. Bisecting on the tolerant test instead would land
/// where the gap is `-geom_tol`, slightly past the touching configuration.
pub fn find_alpha_bar(m: &DenseMatrix, b_star: &DenseMatrix, tol_alpha: f64) -> Result<f64> {
    check_rank3(m)?;
    if rank3_feasible(m, b_star, 1.0)? {
        return Ok(1.0);
    }
    if !rank3_feasible(m, b_star, 0.0)? {
        return Err(Error::Infeasible(
            "the input itself has no 3-vertex nested polygon (nonnegative rank above 3)".into(),
        ));
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..ALPHA_BISECTIONS {
        if hi - lo <= tol_alpha {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if rank3_feasibility(m, b_star, mid)?.max_gap >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nested_b() -> DenseMatrix {
        let c = [
            [0.0, 1.0, 0.0, 1.0],
            [1.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 1.0],
            [1.0, 0.0, 1.0, 0.0],
        ];
        DenseMatrix::from_rows(&c).unwrap().scaled(0.375).unwrap()
    }

    #[test]
    fn zero_matrix_has_zero_radius() {
        assert_eq!(spectral_radius(&DenseMatrix::zeros(3, 3)).unwrap(), 0.0);
    }

    #[test]
    fn nested_squares_radius() {
        let r = spectral_radius(&nested_b()).unwrap();
        assert!((r - 0.75).abs() < 1e-9);
    }

    #[test]
    fn exchange_block_has_radius_one() {
        let b = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!((spectral_radius(&b).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn nilpotent_block_is_zero() {
        let b = DenseMatrix::from_rows(&[[0.0, 5.0], [0.0, 0.0]]).unwrap();
        assert_eq!(spectral_radius(&b).unwrap(), 0.0);
    }

    #[test]
    fn alpha_zero_is_identity() {
        let m = crate::fixtures::load("nested-squares").unwrap();
        assert_eq!(apply_alpha(&m, &nested_b(), 0.0).unwrap(), m);
        assert!(apply_alpha(&m, &nested_b(), 1.5).is_err());
    }

    #[test]
    fn rescale_matches_norms() {
        let p = DenseMatrix::from_columns(&[[2.0, 0.0, 2.0, 0.0], [0.0; 4]]).unwrap();
        let m = DenseMatrix::from_columns(&[[5.0, 3.0, 5.0, 3.0], [1.0; 4]]).unwrap();
        let (out, d) = rescale_columns(&p, &m).unwrap();
        assert!((d[0] - (68.0f64 / 8.0).sqrt()).abs() < 1e-12);
        assert_eq!(d[1], 1.0);
        assert!((out.column_l2_norms()[0] - 68f64.sqrt()).abs() < 1e-12);
    }
}
