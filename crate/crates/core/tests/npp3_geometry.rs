//! Nested-polygon engine: tangent steps against brute-force chord bisection,
//! structure of f_k, rotation invariance and solution validity.

mod common;

use prepnmf::fixtures;
use prepnmf::npp3::{
    build_npp, enumerate_solutions, f_k, feasible_k, hull_membership, sample_fk, tangent_step, NppInstance,
    SolutionSet,
};
use prepnmf::preprocess::{apply_alpha, find_alpha_bar, preprocess, PreprocessConfig};
use prepnmf::DenseMatrix;
use proptest::prelude::*;

/// Chord-bisection oracle: the largest `t'` in `(t, t + 1)` such that every
/// inner vertex stays weakly left of the chord `p(t) -> p(t')`.
fn ray_oracle(npp: &NppInstance, t: f64) -> f64 {
    let p0 = npp.outer.point_at(t);
    let left = |s: f64| {
        let p1 = npp.outer.point_at(s);
        let d = [p1[0] - p0[0], p1[1] - p0[1]];
        npp.inner.vertices().iter().all(|q| d[0] * (q[1] - p0[1]) - d[1] * (q[0] - p0[0]) >= -1e-12 * (d[0].abs() + d[1].abs()))
    };
    let (mut lo, mut hi) = (t + 1e-12, t + 1.0 - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if left(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn nested_at(alpha: f64) -> NppInstance {
    let m = fixtures::load("nested-squares").unwrap();
    build_npp(&apply_alpha(&m, &common::nested_b_star(), alpha).unwrap()).unwrap()
}

fn random_rank3(seed: u64) -> Option<NppInstance> {
    let mut r = common::rng(seed);
    let (m, _, _) = common::random_low_rank(&mut r, 6, 8, 3, 0.0);
    build_npp(&m).ok()
}

#[test]
fn corner_step_on_identical_squares() {
    let npp = nested_at(1.0);
    let corner = npp.outer.vertex_param(0);
    let walk = tangent_step(&npp, corner).unwrap().t_next - corner;
    let oracle = ray_oracle(&npp, corner) - corner;
    assert!((walk - 0.25).abs() < 1e-9, "{walk}");
    assert!((oracle - 0.25).abs() < 1e-9, "{oracle}");
}

#[test]
fn tangent_step_matches_oracle_on_nested_squares() {
    for alpha in [0.0, 0.3, common::alpha_bar(), 0.9] {
        let npp = nested_at(alpha);
        for k in 0..50 {
            let t = k as f64 / 50.0 + 0.003;
            let walk = tangent_step(&npp, t).unwrap().t_next;
            let oracle = ray_oracle(&npp, t);
            assert!((walk - oracle).abs() < 1e-8, "alpha {alpha}, t {t}: {walk} vs {oracle}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn tangent_step_matches_oracle_on_random_instances(seed in any::<u64>(), t in 0.0f64..1.0) {
        if let Some(npp) = random_rank3(seed) {
            let walk = tangent_step(&npp, t).unwrap().t_next;
            let oracle = ray_oracle(&npp, t);
            prop_assert!((walk - oracle).abs() < 1e-8, "{} vs {}", walk, oracle);
        }
    }

    #[test]
    fn fk_is_monotone_and_periodic(seed in any::<u64>(), k in 1usize..5) {
        if let Some(npp) = random_rank3(seed) {
            let samples = sample_fk(&npp, k, 200).unwrap();
            for w in samples.windows(2) {
                prop_assert!(w[1].1 >= w[0].1 - 1e-9);
            }
            for &(t, f) in &samples {
                prop_assert!(f > t);
                let shifted = f_k(&npp, t + 1.0, k).unwrap();
                prop_assert!((shifted - f - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn feasibility_is_rotation_invariant(seed in any::<u64>(), angle in 0.0f64..std::f64::consts::TAU) {
        if let Some(npp) = random_rank3(seed) {
            let a = feasible_k(&npp, 3);
            let b = feasible_k(&npp.rotated(angle), 3);
            prop_assert_eq!(a.feasible, b.feasible);
            prop_assert!((a.max_gap - b.max_gap).abs() < 1e-8, "{} vs {}", a.max_gap, b.max_gap);
        }
    }
}

/// Every enumerated triangle lifts to an exact nonnegative factorization.
fn assert_solutions_are_exact(x: &DenseMatrix, sols: &SolutionSet) {
    let SolutionSet::Finite(list) = sols else { panic!("expected a finite list") };
    let th = common::theta(x);
    for s in list {
        assert!(s.u.min() >= -1e-9, "negative lifted vertex");
        for j in 0..th.ncols() {
            assert!(hull_membership(th.column(j), &s.u, 1e-7).unwrap(), "column {j} outside");
        }
    }
}

#[test]
fn nested_squares_at_alpha_bar_has_eight_exact_solutions() {
    let m = fixtures::load("nested-squares").unwrap();
    let x = apply_alpha(&m, &common::nested_b_star(), common::alpha_bar()).unwrap();
    let sols = enumerate_solutions(&build_npp(&x).unwrap(), 3).unwrap();
    assert_eq!(sols.count(), Some(8));
    assert_solutions_are_exact(&x, &sols);
}

#[test]
fn above_alpha_bar_no_triangle_exists() {
    let f = feasible_k(&nested_at(common::alpha_bar() + 1e-3), 3);
    assert!(!f.feasible && f.max_gap < 0.0);
    assert!(feasible_k(&nested_at(common::alpha_bar() - 1e-3), 3).feasible);
}

#[test]
fn separable_fixture_preprocessed_inner_polygon_is_a_triangle() {
    let p = preprocess(&fixtures::load("separable-rank3").unwrap(), &PreprocessConfig::default()).unwrap();
    let npp = build_npp(&p.p_alpha_m).unwrap();
    assert_eq!(npp.inner.len(), 3);
    let sols = enumerate_solutions(&npp, 3).unwrap();
    assert_eq!(sols.count(), Some(1));
    assert_solutions_are_exact(&p.p_alpha_m, &sols);
}

#[test]
fn counter_example_has_a_continuum() {
    let m = fixtures::load("counter-example").unwrap();
    let p = preprocess(&m, &PreprocessConfig::default()).unwrap().p_alpha_m;
    let shown = DenseMatrix::from_rows(&[
        [0.0, 0.5, 0.0, 0.0],
        [1.0, 0.5, 0.3, 0.5],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.3, 0.5],
    ])
    .unwrap();
    assert!(p.max_abs_diff(&shown).unwrap() < 1e-9);
    let sols = enumerate_solutions(&build_npp(&p).unwrap(), 3).unwrap();
    assert!(matches!(sols, SolutionSet::NotFinite { .. }), "{:?}", sols.count());
}

#[test]
fn identity_gives_one_solution() {
    let sols = enumerate_solutions(&build_npp(&DenseMatrix::identity(3)).unwrap(), 3).unwrap();
    assert_eq!(sols.count(), Some(1));
}

#[test]
fn searched_alpha_bar_reproduces_the_eight_solutions() {
    let m = fixtures::load("nested-squares").unwrap();
    let b = common::nested_b_star();
    let a = find_alpha_bar(&m, &b, 1e-12).unwrap();
    // the search stays on the feasible side
    assert!(a <= common::alpha_bar() + 1e-12 && common::alpha_bar() - a <= 1e-11, "{a}");
    let sols = enumerate_solutions(&build_npp(&apply_alpha(&m, &b, a).unwrap()).unwrap(), 3).unwrap();
    assert_eq!(sols.count(), Some(8));
}

#[test]
fn touching_gap_is_exact_at_alpha_bar() {
    // a tangent picked a hair past the extreme vertex shows up as a spurious
    // gap of the size of the tolerance
    let f = feasible_k(&nested_at(common::alpha_bar()), 3);
    assert!(f.max_gap.abs() <= 1e-12, "{}", f.max_gap);
}

#[test]
fn near_alpha_bar_the_count_is_stable() {
    for d in [-1e-10, -1e-12, 1e-12, 1e-10, 5e-10] {
        let sols = enumerate_solutions(&nested_at(common::alpha_bar() + d), 3).unwrap();
        assert_eq!(sols.count(), Some(8), "offset {d}");
    }
}
