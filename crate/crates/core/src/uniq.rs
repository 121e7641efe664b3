//! Sparsity-based uniqueness certificates for exact NMF.
//!
//! A column of `M` with `r - 1` zeros in rows of pairwise distinct support
//! (and with those rows of rank `r - 1`) spans an extreme ray of the cone of
//! `M`, so every exact rank-`r` NMF must use it. `r` such columns pin the
//! factorization down. The converse fails, so a negative verdict only means
//! "not certified".

use serde::Serialize;

use crate::error::Result;
use crate::matcore::{detect_duplicates, DenseMatrix, Svd};

/// Rank threshold for the row and matrix rank checks.
const RANK_TOL: f64 = 1e-9;
/// Above this many candidate row subsets the search goes greedy.
const EXHAUSTIVE_LIMIT: u128 = 200_000;

fn supports(m: &DenseMatrix, zero_tol: f64) -> Vec<Vec<bool>> {
    let threshold = zero_tol * m.max_abs();
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|&x| x > threshold).collect())
        .collect()
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

fn rows_rank(m: &DenseMatrix, rows: &[usize]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let svd = Svd::new(&m.as_nalgebra().select_rows(rows));
    svd.rank(RANK_TOL * svd.max())
}

/// Looks for `need` rows among `zero_rows` with pairwise distinct supports
/// and full row rank.
fn find_witness_rows(
    m: &DenseMatrix,
    zero_rows: &[usize],
    sup: &[Vec<bool>],
    need: usize,
) -> Option<Vec<usize>> {
    if need == 0 {
        return Some(Vec::new());
    }
    // one representative per support pattern; equal supports can never be
    // chosen together
    let mut reps: Vec<usize> = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &i in zero_rows {
        match reps.iter().position(|&k| sup[k] == sup[i]) {
            Some(c) => classes[c].push(i),
            None => {
                reps.push(i);
                classes.push(vec![i]);
            }
        }
    }
    if classes.len() < need {
        return None;
    }
    if binomial(zero_rows.len(), need) <= EXHAUSTIVE_LIMIT {
        // choose `need` classes, then one row per class
        let mut chosen = Vec::with_capacity(need);
        search(m, &classes, need, 0, &mut chosen)
    } else {
        let mut chosen: Vec<usize> = Vec::new();
        for class in &classes {
            for &i in class {
                chosen.push(i);
                if rows_rank(m, &chosen) == chosen.len() {
                    break;
                }
                chosen.pop();
            }
            if chosen.len() == need {
                return Some(chosen);
            }
        }
        None
    }
}

fn search(
    m: &DenseMatrix,
    classes: &[Vec<usize>],
    need: usize,
    from: usize,
    chosen: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if chosen.len() == need {
        return Some(chosen.clone());
    }
    for c in from..classes.len() {
        if classes.len() - c < need - chosen.len() {
            break;
        }
        for &i in &classes[c] {
            chosen.push(i);
            // prune as soon as the rows become dependent
            if rows_rank(m, chosen) == chosen.len() {
                if let Some(found) = search(m, classes, need, c + 1, chosen) {
                    return Some(found);
                }
            }
            chosen.pop();
        }
    }
    None
}

/// A certified column with the zero rows that certify it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexCertificate {
    pub column: usize,
    pub rows: Vec<usize>,
}

/// Columns certified as extreme by their zero pattern, with the witness
/// rows.
pub fn vertex_certificates(m: &DenseMatrix, r: usize, zero_tol: f64) -> Vec<VertexCertificate> {
    if r == 0 {
        return Vec::new();
    }
    let sup = supports(m, zero_tol);
    let col_nonzero = |j: usize| (0..m.nrows()).any(|i| sup[i][j]);
    (0..m.ncols())
        .filter(|&j| col_nonzero(j))
        .filter_map(|j| {
            let zero_rows: Vec<usize> = (0..m.nrows()).filter(|&i| !sup[i][j]).collect();
            find_witness_rows(m, &zero_rows, &sup, r - 1).map(|rows| VertexCertificate { column: j, rows })
        })
        .collect()
}

pub fn vertex_columns_by_sparsity(m: &DenseMatrix, r: usize, zero_tol: f64) -> Vec<usize> {
    vertex_certificates(m, r, zero_tol)
        .into_iter()
        .map(|c| c.column)
        .collect()
}

/// Certified columns with proportional duplicates removed (first kept).
fn distinct_vertices(m: &DenseMatrix, vertices: &[usize]) -> Vec<usize> {
    if vertices.is_empty() {
        return Vec::new();
    }
    let sub = m.select_columns(vertices).expect("indices in range");
    let dup: Vec<usize> = detect_duplicates(&sub, 1e-9).iter().map(|d| d.column).collect();
    (0..vertices.len())
        .filter(|k| !dup.contains(k))
        .map(|k| vertices[k])
        .collect()
}

/// Sufficient condition for uniqueness of the rank-`r` NMF, assuming the
/// nonnegative rank equals the rank.
pub fn is_unique_by_sparsity(m: &DenseMatrix, r: usize, zero_tol: f64) -> bool {
    m.numerical_rank(RANK_TOL) == r
        && distinct_vertices(m, &vertex_columns_by_sparsity(m, r, zero_tol)).len() >= r
}

/// `supp(U_:k) ⊆ supp(U_:l)` together with the factor `D = I - eps e_k e_l^T`
/// that keeps `UD >= 0` while zeroing `(UD)_{p_bar, l}`.
#[derive(Clone, Debug, Serialize)]
pub struct ContainmentPair {
    pub k: usize,
    pub l: usize,
    pub p_bar: usize,
    pub epsilon: f64,
    /// `r x r`, row-major.
    pub d: Vec<Vec<f64>>,
    /// Smallest entry of `UD`.
    pub ud_min: f64,
    /// `(UD)_{p_bar, l}`
    pub ud_target: f64,
    /// `UD >= -tol` and the targeted entry is zero within tolerance.
    pub verified: bool,
}

pub fn support_containment(u: &DenseMatrix, zero_tol: f64) -> Vec<ContainmentPair> {
    let r = u.ncols();
    let threshold = zero_tol * u.max_abs();
    let supp: Vec<Vec<usize>> = (0..r)
        .map(|k| (0..u.nrows()).filter(|&p| u.get(p, k) > threshold).collect())
        .collect();
    let mut out = Vec::new();
    for k in 0..r {
        if supp[k].is_empty() {
            continue;
        }
        for l in 0..r {
            if l == k || !supp[k].iter().all(|p| supp[l].contains(p)) {
                continue;
            }
            let mut p_bar = supp[k][0];
            for &p in &supp[k] {
                if u.get(p, l) / u.get(p, k) < u.get(p_bar, l) / u.get(p_bar, k) {
                    p_bar = p;
                }
            }
            let epsilon = u.get(p_bar, l) / u.get(p_bar, k);
            let mut d = vec![vec![0.0; r]; r];
            for (i, row) in d.iter_mut().enumerate() {
                row[i] = 1.0;
            }
            d[k][l] = -epsilon;
            let ud_col: Vec<f64> = (0..u.nrows())
                .map(|p| u.get(p, l) - epsilon * u.get(p, k))
                .collect();
            let col_min = ud_col.iter().copied().fold(f64::INFINITY, f64::min);
            let ud_min = col_min.min(u.min());
            let ud_target = ud_col[p_bar];
            out.push(ContainmentPair {
                k,
                l,
                p_bar,
                epsilon,
                d,
                ud_min,
                ud_target,
                verified: ud_min >= -threshold.max(zero_tol) && ud_target.abs() <= threshold.max(zero_tol),
            });
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct UniquenessReport {
    pub r: usize,
    pub numerical_rank: usize,
    pub vertex_columns: Vec<VertexCertificate>,
    pub unique: bool,
    /// `"unique"` or `"not certified"`; the certificate is only sufficient.
    pub verdict: &'static str,
    /// The certificate presumes nonnegative rank = rank.
    pub assumes_nonnegative_rank_equals_rank: bool,
    /// Computed on the certified columns when there are at least `r` of
    /// them, otherwise on all columns of `M`.
    pub containment_pairs: Vec<ContainmentPair>,
    pub epsilon_witness: Option<f64>,
}

/// Runs every detector. `r` defaults to the numerical rank.
pub fn uniqueness_report(m: &DenseMatrix, r: Option<usize>, zero_tol: f64) -> Result<UniquenessReport> {
    let numerical_rank = m.numerical_rank(RANK_TOL);
    let r = r.unwrap_or(numerical_rank);
    let vertex_columns = vertex_certificates(m, r, zero_tol);
    let cols: Vec<usize> = vertex_columns.iter().map(|c| c.column).collect();
    let distinct = distinct_vertices(m, &cols);
    let unique = numerical_rank == r && distinct.len() >= r;
    let basis = if distinct.len() >= r && r > 0 {
        m.select_columns(&distinct)?
    } else {
        m.clone()
    };
    let containment_pairs = support_containment(&basis, zero_tol);
    let epsilon_witness = containment_pairs.first().map(|p| p.epsilon);
    Ok(UniquenessReport {
        r,
        numerical_rank,
        vertex_columns,
        unique,
        verdict: if unique { "unique" } else { "not certified" },
        assumes_nonnegative_rank_equals_rank: true,
        containment_pairs,
        epsilon_witness,
    })
}
