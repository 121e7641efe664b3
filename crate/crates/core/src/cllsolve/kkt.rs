use nalgebra::{DMatrix, DVector};

use super::nnls::nnls;
use super::{CllsProblem, Tolerances};
use crate::error::{Error, Result};

/// Independent optimality certificate for a candidate `b`.
///
/// The constraints active at `b` are detected from the point itself, then
/// the gradient is fitted by a nonnegative combination of their normals with
/// Lawson–Hanson NNLS. The result is the larger of the stationarity residual
/// and the complementarity violation, both divided by
/// `||d|| * max(||d||, max_j ||M_j||)` so that it is scale free.
pub fn kkt_check(p: &CllsProblem<'_>, b: &[f64], tol: &Tolerances) -> Result<f64> {
    let m = p.matrix();
    let (rows, n) = m.shape();
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "b has length {}, expected {n}",
            b.len()
        )));
    }
    let d = p.target();
    let u = p.upper();
    let d_inf = d.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let d_norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    let col_norms = m.column_l2_norms();
    let col_inf: Vec<f64> = (0..n)
        .map(|j| m.column(j).iter().fold(0.0_f64, |acc, v| acc.max(v.abs())))
        .collect();
    let others: Vec<usize> = (0..n).filter(|&j| j != p.column()).collect();
    let col_max = others.iter().map(|&j| col_norms[j]).fold(0.0_f64, f64::max);
    let mut scale = d_norm * d_norm.max(col_max);
    if scale == 0.0 {
        scale = 1.0;
    }
    let act_tol = tol.feas_tol * d_inf;

    // feasibility
    let fit: Vec<f64> = (0..rows)
        .map(|k| (0..n).map(|j| m.get(k, j) * b[j]).sum())
        .collect();
    let mut violation = b[p.column()].abs() * col_inf[p.column()];
    for &j in &others {
        violation = violation.max(-b[j] * col_inf[j]);
    }
    for k in 0..rows {
        violation = violation.max(fit[k] - u[k]);
    }
    let rel_violation = if d_inf > 0.0 { violation / d_inf } else { violation };
    if rel_violation > tol.feas_tol {
        return Err(Error::InfeasiblePoint {
            violation: rel_violation,
        });
    }

    // gradient of 1/2 ||d - A b||^2 over the free coefficients
    let residual: Vec<f64> = (0..rows).map(|k| fit[k] - d[k]).collect();
    let g = DVector::from_iterator(
        others.len(),
        others
            .iter()
            .map(|&j| m.column(j).iter().zip(&residual).map(|(a, r)| a * r).sum::<f64>()),
    );

    let mut normals: Vec<DVector<f64>> = Vec::new();
    let mut slacks: Vec<f64> = Vec::new();
    for (pos, &j) in others.iter().enumerate() {
        let slack = b[j] * col_inf[j];
        if slack <= act_tol {
            let mut e = DVector::zeros(others.len());
            e[pos] = 1.0;
            normals.push(e);
            slacks.push(b[j].max(0.0));
        }
    }
    for k in 0..rows {
        let slack = u[k] - fit[k];
        if slack <= act_tol {
            normals.push(DVector::from_iterator(
                others.len(),
                others.iter().map(|&j| -m.get(k, j)),
            ));
            slacks.push(slack.max(0.0));
        }
    }
    if normals.is_empty() {
        return Ok(g.norm() / scale);
    }
    let c = DMatrix::from_columns(&normals);
    let fit = nnls(&c, &g);
    let stationarity = fit.residual_norm / scale;
    let complementarity = fit
        .x
        .iter()
        .zip(&slacks)
        .zip(&normals)
        .map(|((l, s), a)| l * s * a.norm())
        .fold(0.0_f64, f64::max)
        / scale;
    Ok(stationarity.max(complementarity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::DenseMatrix;

    #[test]
    fn optimum_certifies_and_suboptimal_point_does_not() {
        // column 0 equals column 1 + column 2
        let m = DenseMatrix::from_rows(&[[1.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 0.0, 0.0]]).unwrap();
        let p = CllsProblem::new(&m, 0, 0.0).unwrap();
        let tol = Tolerances::default();
        assert!(kkt_check(&p, &[0.0, 1.0, 1.0], &tol).unwrap() < 1e-12);
        assert!(kkt_check(&p, &[0.0, 0.5, 0.5], &tol).unwrap() > 0.1);
        assert!(matches!(
            kkt_check(&p, &[0.0, 2.0, 0.0], &tol),
            Err(Error::InfeasiblePoint { .. })
        ));
    }
}
