//! Structural properties of the preprocessing over random instances.

mod common;

use common::theory;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fitted_matrix_is_unique(seed in any::<u64>()) {
        theory::fit_is_order_independent(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn permutation_and_scaling_commute(seed in any::<u64>()) {
        theory::permutation_scaling_equivariance(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn radius_below_one_without_duplicates(seed in any::<u64>()) {
        theory::radius_below_one(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn stochastic_inputs_give_dominant_diagonal(seed in any::<u64>()) {
        theory::column_sums_at_most_one(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn preprocessing_inflates_the_hull(seed in any::<u64>()) {
        theory::hull_nesting(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn rank_is_preserved(seed in any::<u64>()) {
        theory::rank_preserved(seed).map_err(TestCaseError::fail)?;
    }
}
