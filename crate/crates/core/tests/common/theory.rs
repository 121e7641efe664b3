//! Checkers for the structural properties of the preprocessing. Each takes a
//! seed, builds its own random instance and reports a violation as `Err`.

use prepnmf::cllsolve::{solve_column_ordered, CllsProblem, Tolerances};
use prepnmf::matcore::detect_duplicates;
use prepnmf::npp3::hull_membership;
use prepnmf::preprocess::{preprocess, spectral_radius_bracket, PreprocessConfig};
use prepnmf::DenseMatrix;
use rand::Rng;

use super::{permutation, random_low_rank, random_nonneg, rng, theta};

pub type Check = std::result::Result<(), String>;

fn p_of(m: &DenseMatrix) -> prepnmf::preprocess::PreprocessResult {
    preprocess(m, &PreprocessConfig::default()).expect("preprocess")
}

/// Low-rank instance with zeros, so `B*` is typically not unique.
fn degenerate_instance(seed: u64) -> DenseMatrix {
    let mut r = rng(seed);
    let rank = r.gen_range(2..4);
    random_low_rank(&mut r, 6, 7, rank, 0.3).0
}

/// The fitted vector `M b` does not depend on the solver's path.
pub fn fit_is_order_independent(seed: u64) -> Check {
    let m = degenerate_instance(seed);
    let mut r = rng(seed ^ 0xABCD);
    let tol = Tolerances::default();
    for i in 0..m.ncols() {
        let p = CllsProblem::new(&m, i, 0.0).map_err(|e| e.to_string())?;
        let base: Vec<usize> = (0..m.ncols()).collect();
        let first = solve_column_ordered(&p, &tol, &base).map_err(|e| e.to_string())?;
        let order = permutation(&mut r, m.ncols());
        let second = solve_column_ordered(&p, &tol, &order).map_err(|e| e.to_string())?;
        let norm = p.target().iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
        let (f1, f2) = (first.fitted(&m), second.fitted(&m));
        let gap = f1.iter().zip(&f2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if gap > 1e-8 * norm {
            return Err(format!("column {i}: fitted vectors differ by {gap:e}"));
        }
    }
    Ok(())
}

/// `P(M Pi D) = P(M) Pi D` for a permutation `Pi` and positive diagonal `D`.
pub fn permutation_scaling_equivariance(seed: u64) -> Check {
    let m = degenerate_instance(seed);
    let n = m.ncols();
    let mut r = rng(seed ^ 0x1234);
    let perm = permutation(&mut r, n);
    let scale: Vec<f64> = (0..n).map(|_| 10f64.powf(r.gen_range(-1.0..1.0))).collect();
    // column k of M Pi D is d_k M_{perm[k]}
    let mono = DenseMatrix::from_fn(n, n, |i, k| if perm[k] == i { scale[k] } else { 0.0 }).unwrap();
    let lhs = p_of(&m.matmul(&mono).unwrap()).p_alpha_m;
    let rhs = p_of(&m).p_alpha_m.matmul(&mono).unwrap();
    let gap = lhs.max_abs_diff(&rhs).unwrap();
    let tol = 1e-8 * m.matmul(&mono).unwrap().max_abs();
    if gap > tol {
        return Err(format!("P(M Pi D) and P(M) Pi D differ by {gap:e}"));
    }
    Ok(())
}

/// `rho(B*) < 1` when no column is a multiple of another.
pub fn radius_below_one(seed: u64) -> Check {
    let m = degenerate_instance(seed);
    if !detect_duplicates(&m, 1e-9).is_empty() {
        return Ok(());
    }
    let rho = spectral_radius_bracket(&p_of(&m).b_star).map_err(|e| e.to_string())?;
    if rho.upper >= 1.0 {
        return Err(format!("rho(B*) bracket reaches {}", rho.upper));
    }
    Ok(())
}

/// Column sums of `B*` are at most one for column-stochastic `M`.
pub fn column_sums_at_most_one(seed: u64) -> Check {
    let mut r = rng(seed);
    let raw = random_nonneg(&mut r, 5, 7, 0.3);
    let sums = raw.column_l1_norms();
    let m = DenseMatrix::from_fn(5, 7, |i, j| if sums[j] > 0.0 { raw.get(i, j) / sums[j] } else { 0.2 }).unwrap();
    let b = p_of(&m).b_star;
    for (j, s) in b.column_l1_norms().iter().enumerate() {
        if *s > 1.0 + 1e-9 {
            return Err(format!("column {j} of B* sums to {s}"));
        }
    }
    Ok(())
}

/// `conv(theta(M))` lies inside `conv(theta(P(M)))`, which lies in the
/// simplex and in `col(M)`.
pub fn hull_nesting(seed: u64) -> Check {
    let mut r = rng(seed);
    let (m, _, _) = random_low_rank(&mut r, 6, 8, 3, 0.25);
    if !detect_duplicates(&m, 1e-9).is_empty() || m.column_l1_norms().contains(&0.0) {
        return Ok(());
    }
    let p = p_of(&m).p_alpha_m;
    if p.min() < -1e-12 * m.max_abs() {
        return Err(format!("P(M) has a negative entry {}", p.min()));
    }
    let hull = theta(&p);
    let points = theta(&m);
    for j in 0..points.ncols() {
        if !hull_membership(points.column(j), &hull, 1e-7).map_err(|e| e.to_string())? {
            return Err(format!("theta(M) column {j} is outside conv(theta(P(M)))"));
        }
    }
    let both = DenseMatrix::from_columns(
        &(0..m.ncols())
            .map(|j| m.column(j).to_vec())
            .chain((0..p.ncols()).map(|j| p.column(j).to_vec()))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    if both.numerical_rank(1e-9) != m.numerical_rank(1e-9) {
        return Err("P(M) leaves the column space of M".into());
    }
    Ok(())
}

/// `rank(P(M)) = rank(M)` without proportional columns.
pub fn rank_preserved(seed: u64) -> Check {
    let mut r = rng(seed);
    let rank = r.gen_range(2..5);
    let (m, _, _) = random_low_rank(&mut r, 7, 8, rank, 0.2);
    if !detect_duplicates(&m, 1e-9).is_empty() {
        return Ok(());
    }
    let p = p_of(&m).p_alpha_m;
    let (rm, rp) = (m.numerical_rank(1e-9), p.numerical_rank(1e-9));
    if rm != rp {
        return Err(format!("rank(M) = {rm} but rank(P(M)) = {rp}"));
    }
    Ok(())
}
