//! Spectral radius bracket against the full complex spectrum.

mod common;

use prepnmf::preprocess::{spectral_radius, spectral_radius_bracket};
use prepnmf::DenseMatrix;
use proptest::prelude::*;

#[test]
fn nested_squares_radius() {
    let b = common::nested_b_star();
    assert!((spectral_radius(&b).unwrap() - 0.75).abs() <= 1e-8);
    assert!((common::eigen_radius(&b) - 0.75).abs() <= 1e-12);
}

#[test]
fn reducible_block_triangular() {
    // two cycles joined one way: radius is the larger cycle's
    let b = DenseMatrix::from_rows(&[
        [0.0, 0.9, 0.0, 0.0],
        [0.9, 0.0, 5.0, 0.0],
        [0.0, 0.0, 0.0, 0.2],
        [0.0, 0.0, 0.2, 0.0],
    ])
    .unwrap();
    let r = spectral_radius_bracket(&b).unwrap();
    assert!(r.converged);
    assert!((r.rho - 0.9).abs() <= 1e-8);
    assert!(r.lower <= 0.9 + 1e-12 && r.upper >= 0.9 - 1e-12);
}

#[test]
fn strictly_triangular_is_nilpotent() {
    let b = DenseMatrix::from_fn(5, 5, |i, j| if i < j { 1.0 + i as f64 } else { 0.0 }).unwrap();
    assert_eq!(spectral_radius(&b).unwrap(), 0.0);
}

fn sparse_nonneg(n: usize) -> impl Strategy<Value = DenseMatrix> {
    proptest::collection::vec(prop_oneof![Just(0.0), 0.0f64..2.0], n * n)
        .prop_map(move |v| DenseMatrix::from_column_major(n, n, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn matches_dense_eigenvalues(b in (2usize..7).prop_flat_map(sparse_nonneg)) {
        let oracle = common::eigen_radius(&b);
        let r = spectral_radius_bracket(&b).unwrap();
        let scale = oracle.max(1.0);
        // periodic blocks contract by at most 1 - 2e-3 per step under the
        // shift, so even at the cap the bracket is narrow
        prop_assert!(r.converged || r.upper - r.lower <= 1e-7 * scale, "wide bracket: {:?}", r);
        prop_assert!((r.rho - oracle).abs() <= 1e-7 * scale, "{} vs {}", r.rho, oracle);
        // dense eigenvalues of defective (e.g. nilpotent) matrices are only
        // accurate to about sqrt(eps)
        prop_assert!(r.lower <= oracle + 1e-7 * scale && r.upper >= oracle - 1e-7 * scale);
    }
}
