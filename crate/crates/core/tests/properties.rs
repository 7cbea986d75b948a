//! Property tests for the algebraic invariants that hold on every instance.

use proptest::prelude::*;

use agg_core::oracles::DEFAULT_PINV_TOL;
use agg_core::testing::{orthonormal_design, random_design, random_vector};
use agg_core::{
    convex_oracle, fit_hard_threshold, fit_soft_threshold, l1_weights, linear_oracle,
    maurey_grid_oracle, ms_oracle, penalized_objective, ConvexSolverConfig, DesignMatrix,
    HardFitOptions, PenaltySpec, SoftFitOptions, WeightVector,
};

fn dims() -> impl Strategy<Value = (usize, usize, u64)> {
    (2usize..8, 8usize..40, any::<u64>()).prop_map(|(m, n, seed)| (n.max(m), m, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn combine_is_linear((n, m, seed) in dims(), c in -3.0f64..3.0) {
        let d = random_design(n, m, seed, 1.0);
        let a = random_vector(m, seed ^ 1, 2.0);
        let b = random_vector(m, seed ^ 2, 2.0);
        let mixed: Vec<f64> = a.iter().zip(&b).map(|(x, y)| c * x + y).collect();
        let lhs = d.combine_coeffs(&mixed).unwrap();
        let fa = d.combine_coeffs(&a).unwrap();
        let fb = d.combine_coeffs(&b).unwrap();
        for i in 0..n {
            let rhs = c * fa[i] + fb[i];
            prop_assert!((lhs[i] - rhs).abs() <= 1e-12, "entry {i}: {} vs {rhs}", lhs[i]);
        }
    }

    #[test]
    fn combined_norm_equals_gram_quadratic_form((n, m, seed) in dims()) {
        let d = random_design(n, m, seed, 1.0);
        let lam = random_vector(m, seed ^ 3, 2.0);
        let f = d.combine_coeffs(&lam).unwrap();
        let norm = agg_core::empirical_norm_sq(&f).unwrap();
        let g = d.gram();
        let mut quad = 0.0;
        for j in 0..m {
            for k in 0..m {
                quad += lam[j] * g.entry(j, k) * lam[k];
            }
        }
        prop_assert!((norm - quad).abs() <= 1e-10, "{norm} vs {quad}");
    }

    #[test]
    fn rayleigh_quotient_bounds_hold((n, m, seed) in dims()) {
        let d = random_design(n, m, seed, 1.0);
        let lam = random_vector(m, seed ^ 4, 2.0);
        let f = d.combine_coeffs(&lam).unwrap();
        let norm = agg_core::empirical_norm_sq(&f).unwrap();
        let g = d.gram();
        let l2: f64 = lam.iter().map(|v| v * v).sum();
        prop_assert!(g.xi_min() * l2 <= norm + 1e-9 * (1.0 + l2));
        prop_assert!(norm <= g.xi_max() * l2 + 1e-9 * (1.0 + l2));
    }

    #[test]
    fn oracle_risks_are_nested((n, m, seed) in dims()) {
        let d = random_design(n, m, seed, 1.0);
        let f = random_vector(n, seed ^ 5, 1.0);
        let gap_tol = 1e-8;
        let ms = ms_oracle(&d, &f).unwrap();
        let cvx = convex_oracle(&d, &f, &ConvexSolverConfig { max_iters: 200_000, gap_tol }).unwrap();
        let lin = linear_oracle(&d, &f, DEFAULT_PINV_TOL).unwrap();
        prop_assert!(ms.risk >= cvx.risk - gap_tol);
        prop_assert!(cvx.risk >= lin.risk - 1e-8);
        // Simplex feasibility is exact.
        prop_assert!(cvx.weights.coeffs().iter().all(|&v| v >= 0.0));
        prop_assert!(cvx.weights.sum() <= 1.0 + 1e-15);
    }

    #[test]
    fn linear_oracle_certificate_vanishes_on_full_rank((m, seed) in (2usize..7, any::<u64>())) {
        let n = 4 * m;
        let d = random_design(n, m, seed, 1.0);
        let f = random_vector(n, seed ^ 6, 1.0);
        let lin = linear_oracle(&d, &f, DEFAULT_PINV_TOL).unwrap();
        prop_assert!(lin.certificate <= 1e-8, "certificate {}", lin.certificate);
    }

    #[test]
    fn finer_grids_never_raise_the_grid_risk((seed, m) in (any::<u64>(), 1usize..4)) {
        let d = random_design(12, 4, seed, 1.0);
        let f = random_vector(12, seed ^ 7, 1.0);
        let coarse = maurey_grid_oracle(&d, &f, m, 1 << 20).unwrap();
        let fine = maurey_grid_oracle(&d, &f, 2 * m, 1 << 20).unwrap();
        prop_assert!(fine.risk <= coarse.risk + 1e-12);
    }

    #[test]
    fn grid_risk_bounded_by_simplex_risk_plus_slack((seed, m) in (any::<u64>(), 1usize..6)) {
        let d = random_design(10, 5, seed, 1.0);
        let f = random_vector(10, seed ^ 8, 1.0);
        let grid = maurey_grid_oracle(&d, &f, m, 1 << 20).unwrap();
        let cvx = convex_oracle(&d, &f, &ConvexSolverConfig { max_iters: 200_000, gap_tol: 1e-9 }).unwrap();
        let bound_l = d.bound_l();
        prop_assert!(
            grid.risk <= cvx.risk + bound_l * bound_l / m as f64 + 1e-9,
            "grid {} simplex {} m {m}",
            grid.risk,
            cvx.risk
        );
    }

    #[test]
    fn exact_hard_fit_is_certified_minimal((n, m, seed) in dims()) {
        let d = random_design(n, m, seed, 1.0);
        let y = random_vector(n, seed ^ 9, 1.0);
        let spec = PenaltySpec::hard(0.5);
        let fit = fit_hard_threshold(&d, &y, &spec, &HardFitOptions::default()).unwrap();
        prop_assert!((fit.objective - (fit.rss + fit.penalty)).abs() <= 1e-12);
        // Never worse than the zero vector, any vertex, or the linear
        // oracle's weights.
        let zero = penalized_objective(&d, &y, &WeightVector::zeros(m), &spec).unwrap();
        prop_assert!(fit.objective <= zero + 1e-12);
        for j in 0..m {
            let v = penalized_objective(&d, &y, &WeightVector::vertex(m, j).unwrap(), &spec).unwrap();
            prop_assert!(fit.objective <= v + 1e-12);
        }
        let lin = linear_oracle(&d, &y, DEFAULT_PINV_TOL).unwrap();
        let at_lin = penalized_objective(&d, &y, &lin.weights, &spec).unwrap();
        prop_assert!(fit.objective <= at_lin + 1e-10);
    }

    #[test]
    fn soft_fit_is_certified_minimal((n, m, seed) in dims()) {
        let d = random_design(n, m, seed, 1.0);
        let y = random_vector(n, seed ^ 10, 1.0);
        let spec = PenaltySpec::soft(0.5);
        let fit = fit_soft_threshold(&d, &y, &spec, &SoftFitOptions::default()).unwrap();
        prop_assert!((fit.objective - (fit.rss + fit.penalty)).abs() <= 1e-12);
        let zero = penalized_objective(&d, &y, &WeightVector::zeros(m), &spec).unwrap();
        prop_assert!(fit.objective <= zero + 1e-12);
        for j in 0..m {
            let v = penalized_objective(&d, &y, &WeightVector::vertex(m, j).unwrap(), &spec).unwrap();
            prop_assert!(fit.objective <= v + 1e-12);
        }
    }

    #[test]
    fn hard_fit_on_orthonormal_design_selects_top_magnitudes((m, seed) in (2usize..10, any::<u64>())) {
        let n = 16 * m;
        let d = orthonormal_design(n, m);
        let z = random_vector(m, seed, 1.5);
        let y = d.combine_coeffs(&z).unwrap();
        let fit = fit_hard_threshold(&d, &y, &PenaltySpec::hard(0.8), &HardFitOptions::default()).unwrap();
        // The support must be a top-|z| set: every selected magnitude at
        // least every rejected one (ties to the smaller index).
        let sel = fit.weights.support();
        for &j in sel {
            for k in 0..m {
                if !sel.contains(&k) {
                    let zj = z[j].abs();
                    let zk = z[k].abs();
                    prop_assert!(
                        zj > zk || (zj == zk && j < k),
                        "selected |z[{j}]| = {zj} vs rejected |z[{k}]| = {zk}"
                    );
                }
            }
        }
    }

    #[test]
    fn soft_fit_on_orthonormal_design_matches_closed_form((m, seed) in (2usize..10, any::<u64>())) {
        let n = 16 * m;
        let d = orthonormal_design(n, m);
        let z = random_vector(m, seed, 1.5);
        let y = d.combine_coeffs(&z).unwrap();
        let fit = fit_soft_threshold(&d, &y, &PenaltySpec::soft(0.7), &SoftFitOptions::default()).unwrap();
        let r = l1_weights(&d, 0.7).unwrap();
        for j in 0..m {
            let want = agg_core::soft_threshold_scalar(z[j], r[j] / 2.0);
            prop_assert!((fit.weights.coeffs()[j] - want).abs() <= 1e-8);
        }
    }

    #[test]
    fn l1_fit_is_invariant_under_column_rescaling((seed, scale) in (any::<u64>(), 0.2f64..5.0)) {
        let (n, m) = (24, 4);
        let d = random_design(n, m, seed, 1.0);
        let y = random_vector(n, seed ^ 11, 1.0);
        let spec = PenaltySpec::soft(0.6);
        let base = fit_soft_threshold(&d, &y, &spec, &SoftFitOptions::default()).unwrap();
        // Rescale column 1 by `scale`; the fitted function must not change.
        let cols: Vec<Vec<f64>> = (0..m)
            .map(|j| {
                d.col(j)
                    .iter()
                    .map(|&v| if j == 1 { scale * v } else { v })
                    .collect()
            })
            .collect();
        let d2 = DesignMatrix::from_columns_inferred(cols).unwrap();
        let rescaled = fit_soft_threshold(&d2, &y, &spec, &SoftFitOptions::default()).unwrap();
        let f1 = d.combine(&base.weights).unwrap();
        let f2 = d2.combine(&rescaled.weights).unwrap();
        for i in 0..n {
            prop_assert!((f1[i] - f2[i]).abs() <= 1e-8, "point {i}: {} vs {}", f1[i], f2[i]);
        }
        prop_assert!((base.objective - rescaled.objective).abs() <= 1e-8);
    }

    #[test]
    fn stronger_noise_shrinks_the_l1_fit((m, seed) in (2usize..8, any::<u64>())) {
        let n = 16 * m;
        let d = orthonormal_design(n, m);
        let z = random_vector(m, seed, 1.5);
        let y = d.combine_coeffs(&z).unwrap();
        let small = fit_soft_threshold(&d, &y, &PenaltySpec::soft(0.3), &SoftFitOptions::default()).unwrap();
        let large = fit_soft_threshold(&d, &y, &PenaltySpec::soft(0.9), &SoftFitOptions::default()).unwrap();
        prop_assert!(large.weights.l1_norm() <= small.weights.l1_norm() + 1e-12);
    }
}
