//! The active-set column solver against a brute-force enumeration oracle.

mod common;

use nalgebra::DVector;
use prepnmf::cllsolve::{kkt_check, solve_column, solve_column_ordered, CllsProblem, Tolerances};
use prepnmf::DenseMatrix;

fn check_against_oracle(m: &DenseMatrix, eps: f64) {
    let tol = Tolerances::default();
    for i in 0..m.ncols() {
        let p = CllsProblem::new(m, i, eps).unwrap();
        let sol = solve_column(&p, &tol).unwrap();
        let others: Vec<usize> = (0..m.ncols()).filter(|&j| j != i).collect();
        let a = m.as_nalgebra().select_columns(&others);
        let d = DVector::from_column_slice(p.target());
        let u = DVector::from_column_slice(p.upper());
        let (obj, _) = common::qp_oracle(&a, &d, &u);
        let scale = d.norm_squared().max(1e-300);
        assert!(
            (sol.objective - obj).abs() <= 1e-9 * scale,
            "column {i}: solver {} vs oracle {obj}",
            sol.objective
        );
        assert!(sol.b[i] == 0.0 && sol.b.iter().all(|&x| x >= 0.0));
    }
}

#[test]
fn matches_enumeration_on_random_sparse_instances() {
    let mut rng = common::rng(11);
    for _ in 0..40 {
        let m = common::random_nonneg(&mut rng, 4, 5, 0.3);
        check_against_oracle(&m, 0.0);
    }
}

#[test]
fn matches_enumeration_with_relaxation() {
    let mut rng = common::rng(12);
    for k in 0..30 {
        let m = common::random_nonneg(&mut rng, 4, 5, 0.4);
        check_against_oracle(&m, [0.01, 0.1, 0.3][k % 3]);
    }
}

#[test]
fn matches_enumeration_on_low_rank_instances() {
    // rank deficiency makes b non-unique, but the objective is not
    let mut rng = common::rng(13);
    for _ in 0..30 {
        let (m, _, _) = common::random_low_rank(&mut rng, 5, 5, 2, 0.2);
        check_against_oracle(&m, 0.0);
    }
}

#[test]
fn fitted_vector_is_order_independent() {
    let mut rng = common::rng(14);
    let tol = Tolerances::default();
    for _ in 0..20 {
        let (m, _, _) = common::random_low_rank(&mut rng, 6, 7, 3, 0.3);
        let p = CllsProblem::new(&m, 2, 0.0).unwrap();
        let base = solve_column(&p, &tol).unwrap().fitted(&m);
        let order = common::permutation(&mut rng, 7);
        let other = solve_column_ordered(&p, &tol, &order).unwrap().fitted(&m);
        let norm = p.target().iter().map(|x| x * x).sum::<f64>().sqrt();
        for (x, y) in base.iter().zip(&other) {
            assert!((x - y).abs() <= 1e-8 * norm);
        }
    }
}

#[test]
fn certificate_rejects_perturbed_optima() {
    let mut rng = common::rng(15);
    let tol = Tolerances::default();
    let mut rejected = 0;
    for _ in 0..20 {
        let m = common::random_nonneg(&mut rng, 5, 4, 0.2);
        let p = CllsProblem::new(&m, 0, 0.0).unwrap();
        let sol = solve_column(&p, &tol).unwrap();
        if sol.b.iter().all(|&x| x == 0.0) {
            continue;
        }
        // shrinking keeps feasibility but loses optimality
        let shrunk: Vec<f64> = sol.b.iter().map(|x| 0.5 * x).collect();
        if kkt_check(&p, &shrunk, &tol).unwrap() > tol.kkt_tol {
            rejected += 1;
        }
    }
    assert!(rejected > 0);
}
