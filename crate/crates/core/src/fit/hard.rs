//! Best-subset search under the sparsity-counting penalty.

use crate::design::DesignMatrix;
use crate::error::{Error, Result};
use crate::fit::{FitResult, SolverMeta, SolverMode};
use crate::gram::{correlations, gram_matrix};
use crate::linalg::{cholesky_in_place, cholesky_solve, jacobi_eigen};
use crate::norms::empirical_norm_sq;
use crate::penalty::{penalty_hard, PenaltySpec};
use crate::weights::WeightVector;

/// Controls the exact-vs-greedy switch for the subset scan.
#[derive(Debug, Clone, Copy)]
pub struct HardFitOptions {
    /// Maximum number of subsets (2^M) the exact scan may enumerate.
    pub budget: u128,
    /// Fall back to forward stepwise selection when the budget is exceeded;
    /// when false the fit refuses instead.
    pub allow_greedy: bool,
}

impl Default for HardFitOptions {
    fn default() -> Self {
        HardFitOptions {
            budget: 1_000_000,
            allow_greedy: true,
        }
    }
}

/// Minimizes `rss(lambda) + pen(M(lambda))` over all weight vectors (or over
/// the L1 ball of radius `t_radius` when present, by radial rescaling after
/// the support search).
///
/// Exact mode scans every support of every size, fitting unrestricted least
/// squares on each (minimum-norm on rank-deficient subsets, which can never
/// strictly win and are skipped). Greedy mode grows one forward-stepwise
/// support per size and is disclosed in `solver_meta.mode`.
pub fn fit_hard_threshold(
    d: &DesignMatrix,
    y: &[f64],
    spec: &PenaltySpec,
    opts: &HardFitOptions,
) -> Result<FitResult> {
    spec.validate()?;
    let (k1, use_max_mn) = match spec {
        PenaltySpec::HardThreshold { use_max_mn, .. } => (spec.k1_resolved().unwrap(), *use_max_mn),
        PenaltySpec::SoftThresholdL1 { .. } => {
            return Err(Error::Config(
                "fit_hard_threshold needs a hard-threshold penalty spec".into(),
            ))
        }
    };
    if y.len() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "observations of length {} against design with n = {}",
            y.len(),
            d.n()
        )));
    }

    let m = d.m_dict();
    let n = d.n();
    let psi = gram_matrix(d);
    let c = correlations(d, y);
    let ynorm = empirical_norm_sq(y)?;
    let pens: Vec<f64> = (0..=m)
        .map(|s| penalty_hard(s, m, n, k1, use_max_mn))
        .collect::<Result<_>>()?;
    let max_diag = (0..m).fold(0.0f64, |acc, j| acc.max(psi[j * m + j]));
    let pivot_floor = 1e-12 * max_diag.max(f64::MIN_POSITIVE);

    let subsets: u128 = if m >= 127 { u128::MAX } else { 1u128 << m };
    let exact = subsets <= opts.budget;
    if !exact && !opts.allow_greedy {
        return Err(Error::BudgetExceeded {
            count: subsets,
            budget: opts.budget,
        });
    }

    let search = if exact {
        exact_scan(&psi, &c, ynorm, &pens, m, pivot_floor)
    } else {
        greedy_scan(&psi, &c, ynorm, &pens, m, pivot_floor)
    };

    finish(
        d,
        y,
        spec,
        search,
        if exact {
            SolverMode::ExactExhaustive
        } else {
            SolverMode::GreedyForward
        },
    )
}

struct SearchOutcome {
    support: Vec<usize>,
    theta: Vec<f64>,
    iters: usize,
}

/// Exhaustive scan over all supports, depth-first in lexicographic order
/// with an incrementally grown Cholesky factor, so each subset costs
/// O(size^2) instead of a fresh O(size^3) factorization.
///
/// Candidates are compared by `(objective, size, lexicographic support)`:
/// on exact objective ties the smaller support wins, then the
/// lexicographically earlier one. Rank-deficient subsets are skipped: their
/// rss equals that of a strict sub-support, which beats them at a strictly
/// smaller penalty.
fn exact_scan(
    psi: &[f64],
    c: &[f64],
    ynorm: f64,
    pens: &[f64],
    m: usize,
    pivot_floor: f64,
) -> SearchOutcome {
    struct Dfs<'a> {
        psi: &'a [f64],
        c: &'a [f64],
        pens: &'a [f64],
        m: usize,
        pivot_floor: f64,
        lfact: Vec<f64>,
        u: Vec<f64>,
        path: Vec<usize>,
        best_obj: f64,
        best_support: Vec<usize>,
        iters: usize,
    }

    impl Dfs<'_> {
        fn better(&self, obj: f64, size: usize, last: usize) -> bool {
            if obj < self.best_obj {
                return true;
            }
            if obj > self.best_obj {
                return false;
            }
            let cand = (size, &self.path[..size - 1], last);
            let inc = &self.best_support;
            match size.cmp(&inc.len()) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => {
                    // Lexicographic comparison of (path + last) vs incumbent.
                    for (a, b) in cand.1.iter().chain(std::iter::once(&cand.2)).zip(inc) {
                        match a.cmp(b) {
                            std::cmp::Ordering::Less => return true,
                            std::cmp::Ordering::Greater => return false,
                            std::cmp::Ordering::Equal => {}
                        }
                    }
                    false
                }
            }
        }

        fn descend(&mut self, depth: usize, rss: f64, start: usize) {
            let m = self.m;
            for j in start..m {
                // Append column j: one triangular solve against the prefix.
                let mut wnorm = 0.0;
                for a in 0..depth {
                    let ja = self.path[a];
                    let mut s = self.psi[ja * m + j];
                    for k in 0..a {
                        s -= self.lfact[a * m + k] * self.lfact[depth * m + k];
                    }
                    let w = s / self.lfact[a * m + a];
                    self.lfact[depth * m + a] = w;
                    wnorm += w * w;
                }
                let d2 = self.psi[j * m + j] - wnorm;
                if d2 <= self.pivot_floor {
                    continue;
                }
                let dsqrt = d2.sqrt();
                self.lfact[depth * m + depth] = dsqrt;
                let cross: f64 = (0..depth)
                    .map(|a| self.lfact[depth * m + a] * self.u[a])
                    .sum();
                let unew = (self.c[j] - cross) / dsqrt;
                self.u[depth] = unew;
                let child_rss = (rss - unew * unew).max(0.0);
                let size = depth + 1;
                let obj = child_rss + self.pens[size];
                self.iters += 1;
                if self.better(obj, size, j) {
                    self.best_obj = obj;
                    self.best_support.clear();
                    self.best_support.extend_from_slice(&self.path[..depth]);
                    self.best_support.push(j);
                }
                // Deeper supports pay at least pens[size + 1]; equal-penalty
                // ties are still explored so the tie-break stays exact.
                if size < m && self.pens[size + 1] <= self.best_obj {
                    self.path[depth] = j;
                    self.descend(size, child_rss, j + 1);
                }
            }
        }
    }

    let mut dfs = Dfs {
        psi,
        c,
        pens,
        m,
        pivot_floor,
        lfact: vec![0.0; m * m],
        u: vec![0.0; m],
        path: vec![0; m],
        best_obj: ynorm,
        best_support: Vec::new(),
        iters: 1,
    };
    dfs.descend(0, ynorm, 0);

    let theta = solve_on_support(psi, c, m, &dfs.best_support, pivot_floor);
    SearchOutcome {
        support: dfs.best_support,
        theta,
        iters: dfs.iters,
    }
}

fn greedy_scan(
    psi: &[f64],
    c: &[f64],
    ynorm: f64,
    pens: &[f64],
    m: usize,
    pivot_floor: f64,
) -> SearchOutcome {
    let mut best_obj = ynorm;
    let mut best_size = 0usize;
    let mut iters = 1usize;

    // Growing Cholesky factor of the selected Gram submatrix (row-major into
    // an m x m scratch) and the forward-substituted correlations u = L^-1 c.
    let mut lfact = vec![0.0; m * m];
    let mut u: Vec<f64> = Vec::with_capacity(m);
    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    let mut in_support = vec![false; m];
    let mut rss = ynorm;
    let mut w = vec![0.0; m];

    for (size, &pen_size) in pens.iter().enumerate().skip(1) {
        let prev = size - 1;
        let mut best_j = usize::MAX;
        let mut best_gain = f64::NEG_INFINITY;
        let mut best_row: Vec<f64> = Vec::new();
        let mut best_unew = 0.0;
        for j in 0..m {
            if in_support[j] {
                continue;
            }
            iters += 1;
            // Forward-substitute the new cross-correlation column.
            for (a, &ja) in chosen.iter().enumerate() {
                let mut s = psi[ja * m + j];
                for k in 0..a {
                    s -= lfact[a * m + k] * w[k];
                }
                w[a] = s / lfact[a * m + a];
            }
            let wnorm: f64 = w[..prev].iter().map(|v| v * v).sum();
            let d2 = psi[j * m + j] - wnorm;
            if d2 <= pivot_floor {
                continue;
            }
            let cross: f64 = w[..prev].iter().zip(&u).map(|(a, b)| a * b).sum();
            let unew = (c[j] - cross) / d2.sqrt();
            let gain = unew * unew;
            if gain > best_gain {
                best_gain = gain;
                best_j = j;
                best_row = w[..prev].to_vec();
                best_unew = unew;
            }
        }
        if best_j == usize::MAX {
            break; // only dependent columns remain
        }
        for (k, &v) in best_row.iter().enumerate() {
            lfact[prev * m + k] = v;
        }
        let d2 = psi[best_j * m + best_j] - best_row.iter().map(|v| v * v).sum::<f64>();
        lfact[prev * m + prev] = d2.sqrt();
        u.push(best_unew);
        chosen.push(best_j);
        in_support[best_j] = true;
        rss = (rss - best_gain).max(0.0);
        let obj = rss + pen_size;
        if obj < best_obj {
            best_obj = obj;
            best_size = size;
        }
    }

    // Re-solve on the winning prefix, sorted ascending.
    let mut support: Vec<usize> = chosen[..best_size].to_vec();
    support.sort_unstable();
    let theta = solve_on_support(psi, c, m, &support, pivot_floor);
    SearchOutcome {
        support,
        theta,
        iters,
    }
}

fn solve_on_support(
    psi: &[f64],
    c: &[f64],
    m: usize,
    support: &[usize],
    pivot_floor: f64,
) -> Vec<f64> {
    let size = support.len();
    if size == 0 {
        return Vec::new();
    }
    let mut sub = vec![0.0; size * size];
    let mut rhs = vec![0.0; size];
    for (a, &ja) in support.iter().enumerate() {
        rhs[a] = c[ja];
        for (b, &jb) in support.iter().enumerate() {
            sub[a * size + b] = psi[ja * m + jb];
        }
    }
    let mut chol = sub.clone();
    if cholesky_in_place(&mut chol, size, pivot_floor) {
        cholesky_solve(&chol, size, &rhs)
    } else {
        let eig = jacobi_eigen(&sub, size, 1e-12, 64);
        eig.pinv_solve(&rhs, 1e-10).0
    }
}

fn finish(
    d: &DesignMatrix,
    y: &[f64],
    spec: &PenaltySpec,
    search: SearchOutcome,
    mode: SolverMode,
) -> Result<FitResult> {
    let m = d.m_dict();
    let mut coeffs = vec![0.0; m];
    for (&j, &v) in search.support.iter().zip(&search.theta) {
        coeffs[j] = v;
    }

    let mut projected = false;
    if let Some(t) = spec.t_radius() {
        let l1: f64 = coeffs.iter().map(|v| v.abs()).sum();
        if l1 > t {
            let scale = t / l1;
            for v in coeffs.iter_mut() {
                *v *= scale;
            }
            projected = true;
        }
    }

    let weights = WeightVector::from_coeffs(coeffs)?;
    let rss = d.rss(y, &weights)?;
    let (k1, use_max_mn) = match spec {
        PenaltySpec::HardThreshold { use_max_mn, .. } => (spec.k1_resolved().unwrap(), *use_max_mn),
        PenaltySpec::SoftThresholdL1 { .. } => unreachable!(),
    };
    let penalty = penalty_hard(weights.sparsity(), m, d.n(), k1, use_max_mn)?;
    Ok(FitResult {
        objective: rss + penalty,
        rss,
        penalty,
        weights,
        solver_meta: SolverMeta {
            mode,
            iters: search.iters,
            converged: true,
            projected,
            frozen: Vec::new(),
            radius: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{orthonormal_design, random_design};

    #[test]
    fn exact_scan_visits_every_subset() {
        let d = random_design(12, 5, 60, 1.0);
        let y = crate::testing::random_vector(12, 61, 1.0);
        // A negligible penalty keeps every subtree competitive, so the scan
        // counts all 2^5 subsets.
        let spec = PenaltySpec::HardThreshold {
            k1: Some(1e-9),
            use_max_mn: false,
            sigma: 1.0,
            t_radius: None,
        };
        let fit = fit_hard_threshold(&d, &y, &spec, &Default::default()).unwrap();
        assert_eq!(fit.solver_meta.iters, 32);
    }

    #[test]
    fn zero_observations_select_the_empty_model() {
        let d = random_design(10, 4, 61, 1.0);
        let fit = fit_hard_threshold(&d, &[0.0; 10], &PenaltySpec::hard(1.0), &Default::default())
            .unwrap();
        assert!(fit.weights.is_zero());
        assert_eq!(fit.objective, 0.0);
        assert_eq!(fit.solver_meta.mode, SolverMode::ExactExhaustive);
    }

    #[test]
    fn worked_orthonormal_instance() {
        // Correlations z = (1.0, 0.5, 0.05) on an orthonormal design with
        // n = 100, M = 3, k1 = 2: the two-element support wins.
        let d = orthonormal_design(100, 3);
        let z = [1.0, 0.5, 0.05];
        let y = d.combine_coeffs(&z).unwrap();
        let spec = PenaltySpec::hard(1.0); // k1 = 2 sigma^2 = 2
        let fit = fit_hard_threshold(&d, &y, &spec, &Default::default()).unwrap();
        assert_eq!(fit.weights.support(), &[0, 1]);
        assert!((fit.weights.coeffs()[0] - 1.0).abs() < 1e-10);
        assert!((fit.weights.coeffs()[1] - 0.5).abs() < 1e-10);
        // Objective relative to the target norm: -1.25 + pen(2).
        let ynorm = crate::norms::empirical_norm_sq(&y).unwrap();
        assert!((fit.objective - ynorm - (-1.2133483707250339)).abs() < 1e-10);
    }

    #[test]
    fn budget_refusal_names_the_count() {
        let d = random_design(12, 8, 62, 1.0);
        let y = crate::testing::random_vector(12, 63, 1.0);
        let opts = HardFitOptions {
            budget: 10,
            allow_greedy: false,
        };
        match fit_hard_threshold(&d, &y, &PenaltySpec::hard(1.0), &opts) {
            Err(Error::BudgetExceeded { count, budget }) => {
                assert_eq!(count, 256);
                assert_eq!(budget, 10);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn greedy_mode_is_flagged() {
        let d = random_design(12, 8, 64, 1.0);
        let y = crate::testing::random_vector(12, 65, 1.0);
        let opts = HardFitOptions {
            budget: 10,
            allow_greedy: true,
        };
        let fit = fit_hard_threshold(&d, &y, &PenaltySpec::hard(0.3), &opts).unwrap();
        assert_eq!(fit.solver_meta.mode, SolverMode::GreedyForward);
        assert!((fit.objective - (fit.rss + fit.penalty)).abs() < 1e-12);
    }

    #[test]
    fn l1_ball_projection_is_radial_and_disclosed() {
        let d = orthonormal_design(40, 4);
        let z = [2.0, -1.0, 0.0, 0.0];
        let y = d.combine_coeffs(&z).unwrap();
        let spec = PenaltySpec::HardThreshold {
            k1: Some(0.5),
            use_max_mn: false,
            sigma: 1.0,
            t_radius: Some(1.5),
        };
        let fit = fit_hard_threshold(&d, &y, &spec, &Default::default()).unwrap();
        assert!(fit.solver_meta.projected);
        assert!(fit.weights.l1_norm() <= 1.5 + 1e-12);
        // Radial: direction preserved.
        let c = fit.weights.coeffs();
        assert!((c[0] / c[1] - (-2.0)).abs() < 1e-8);
    }

    #[test]
    fn greedy_on_orthonormal_matches_exact() {
        let d = orthonormal_design(64, 8);
        let z = [0.9, -0.7, 0.5, 0.3, -0.2, 0.1, 0.05, 0.01];
        let y = d.combine_coeffs(&z).unwrap();
        let spec = PenaltySpec::hard(0.5);
        let exact = fit_hard_threshold(&d, &y, &spec, &Default::default()).unwrap();
        let greedy = fit_hard_threshold(
            &d,
            &y,
            &spec,
            &HardFitOptions {
                budget: 1,
                allow_greedy: true,
            },
        )
        .unwrap();
        assert_eq!(exact.weights.support(), greedy.weights.support());
        assert!((exact.objective - greedy.objective).abs() < 1e-12);
    }
}
