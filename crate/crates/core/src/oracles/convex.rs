//! Best simplex combination by conditional-gradient (Frank-Wolfe) descent.
//!
//! The feasible set is the polytope spanned by the origin and the unit
//! vertices, so the linear subproblem is an O(M) scan of the gradient. Plain
//! conditional-gradient steps zigzag near optima that sit on a face, so each
//! iteration moves mass pairwise from the worst active vertex to the best
//! vertex with an exact line search; the duality gap still certifies
//! optimality and drives the stopping rule.

use crate::design::DesignMatrix;
use crate::error::{Error, Result};
use crate::gram::{correlations, gram_matrix};
use crate::norms::empirical_norm_sq;
use crate::oracles::{ConvexSolverConfig, OracleKind, OracleResult};
use crate::weights::WeightVector;

const REFRESH_PERIOD: usize = 1024;

/// `None` encodes the origin vertex.
type Vertex = Option<usize>;

pub fn convex_oracle(
    d: &DesignMatrix,
    f_vals: &[f64],
    cfg: &ConvexSolverConfig,
) -> Result<OracleResult> {
    cfg.validate()?;
    if f_vals.len() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "target of length {} against design with n = {}",
            f_vals.len(),
            d.n()
        )));
    }
    let m = d.m_dict();
    let psi = gram_matrix(d);
    let c = correlations(d, f_vals);

    let mut lambda = vec![0.0; m];
    let mut slack = 1.0; // barycentric weight of the origin
    let mut psi_lambda = vec![0.0; m];
    let mut iters = 0;

    while iters < cfg.max_iters {
        if iters > 0 && iters % REFRESH_PERIOD == 0 {
            refresh(&psi, &lambda, &mut psi_lambda);
        }
        let grad = |j: usize| 2.0 * (psi_lambda[j] - c[j]);

        // Linear minimization over {0, e_1, ..., e_M}.
        let mut fw: Vertex = None;
        let mut fw_val = 0.0;
        for j in 0..m {
            let g = grad(j);
            if g < fw_val {
                fw_val = g;
                fw = Some(j);
            }
        }
        let grad_dot_lambda: f64 = (0..m)
            .filter(|&j| lambda[j] != 0.0)
            .map(|j| grad(j) * lambda[j])
            .sum();
        let gap = grad_dot_lambda - fw_val;
        if gap <= cfg.gap_tol {
            break;
        }

        // Worst active vertex (largest gradient value; origin scores zero).
        let mut away: Vertex = None;
        let mut away_val = f64::NEG_INFINITY;
        for (j, &lj) in lambda.iter().enumerate() {
            if lj > 0.0 {
                let g = grad(j);
                if g > away_val {
                    away_val = g;
                    away = Some(j);
                }
            }
        }
        if slack > 0.0 && 0.0 > away_val {
            away = None;
            away_val = 0.0;
        }
        if fw == away {
            break;
        }

        let dir_grad = fw_val - away_val;
        if dir_grad >= 0.0 {
            break;
        }
        let step_max = match away {
            Some(k) => lambda[k],
            None => slack,
        };
        let curvature = match (fw, away) {
            (Some(j), Some(k)) => 2.0 * (psi[j * m + j] - 2.0 * psi[j * m + k] + psi[k * m + k]),
            (Some(j), None) => 2.0 * psi[j * m + j],
            (None, Some(k)) => 2.0 * psi[k * m + k],
            (None, None) => unreachable!(),
        };
        let step = if curvature > 0.0 {
            (-dir_grad / curvature).min(step_max)
        } else {
            step_max
        };

        match fw {
            Some(j) => {
                lambda[j] += step;
                for (pl, col) in psi_lambda.iter_mut().zip(psi[j * m..(j + 1) * m].iter()) {
                    *pl += step * col;
                }
            }
            None => slack += step,
        }
        match away {
            Some(k) => {
                lambda[k] = if step == step_max {
                    0.0
                } else {
                    lambda[k] - step
                };
                for (pl, col) in psi_lambda.iter_mut().zip(psi[k * m..(k + 1) * m].iter()) {
                    *pl -= step * col;
                }
            }
            None => slack = if step == step_max { 0.0 } else { slack - step },
        }
        iters += 1;
    }

    // Feasibility is exact up to accumulated rounding: clip stray negatives
    // and renormalize only if the sum overshoots one.
    for v in lambda.iter_mut() {
        if *v < 0.0 {
            debug_assert!(*v > -1e-12, "negative simplex weight {v}");
            *v = 0.0;
        }
    }
    let total: f64 = lambda.iter().sum();
    if total > 1.0 {
        debug_assert!(total <= 1.0 + 1e-12, "simplex sum overshoot {total}");
        for v in lambda.iter_mut() {
            *v /= total;
        }
    }

    refresh(&psi, &lambda, &mut psi_lambda);
    let mut fw_val = 0.0f64;
    let mut grad_dot_lambda = 0.0;
    for j in 0..m {
        let g = 2.0 * (psi_lambda[j] - c[j]);
        fw_val = fw_val.min(g);
        grad_dot_lambda += g * lambda[j];
    }
    let certificate = grad_dot_lambda - fw_val;

    let fitted = d.combine_coeffs(&lambda)?;
    let resid: Vec<f64> = f_vals.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let risk = empirical_norm_sq(&resid)?;

    Ok(OracleResult {
        kind: OracleKind::Convex,
        weights: WeightVector::from_coeffs(lambda)?,
        risk,
        certificate,
        iters,
    })
}

fn refresh(psi: &[f64], lambda: &[f64], psi_lambda: &mut [f64]) {
    let m = lambda.len();
    for (j, pl) in psi_lambda.iter_mut().enumerate() {
        let mut s = 0.0;
        for k in 0..m {
            s += psi[j * m + k] * lambda[k];
        }
        *pl = s;
    }
}
