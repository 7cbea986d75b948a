//! Worst-case Monte Carlo evaluation of an estimator over a hard instance.

use rayon::prelude::*;

use crate::design::DesignMatrix;
use crate::error::{Error, Result};
use crate::hardness::instances::HardInstance;
use crate::norms::empirical_norm_sq;
use crate::rng::StreamKey;

/// Cap on `card(truth_set) * reps`; beyond it the evaluation refuses
/// rather than materializing the risk table.
pub const MAX_EVAL_CELLS: usize = 1 << 24;

/// Per-truth mean risks and the worst case, with a Monte Carlo standard
/// error for the worst truth.
#[derive(Debug, Clone)]
pub struct MinimaxReport {
    pub per_truth_mean: Vec<f64>,
    pub worst_mean: f64,
    pub worst_truth: usize,
    pub worst_se: f64,
    pub reps: usize,
}

/// Simulates `y = g + N(0, sigma^2)` noise `reps` times for every truth `g`
/// in the instance, runs the estimator (a map from `(design, y)` to fitted
/// values at the design points), and averages `||T - g||_n^2`.
///
/// Replications are keyed by `(seed, truth index, replication index)` and
/// may run in parallel; accumulation order is fixed by index. `sigma`
/// overrides the instance's calibration value when given (zero gives
/// noiseless evaluations). Estimator failures propagate with the offending
/// `(truth, replication)` pair attached.
pub fn minimax_eval<F>(
    inst: &HardInstance,
    estimator: &F,
    reps: usize,
    seed: u64,
    sigma: Option<f64>,
) -> Result<MinimaxReport>
where
    F: Fn(&DesignMatrix, &[f64]) -> Result<Vec<f64>> + Sync,
{
    if reps == 0 {
        return Err(Error::InvalidInput("reps must be >= 1".into()));
    }
    let cells_total = inst.card().saturating_mul(reps);
    if cells_total > MAX_EVAL_CELLS {
        return Err(Error::BudgetExceeded {
            count: cells_total as u128,
            budget: MAX_EVAL_CELLS as u128,
        });
    }
    let sigma = sigma.unwrap_or(inst.sigma);
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "sigma must be a nonnegative real, got {sigma}"
        )));
    }
    let n = inst.design.n();
    let root = StreamKey::new(seed).labeled("minimax");

    let cells: Vec<(usize, usize)> = (0..inst.card())
        .flat_map(|t| (0..reps).map(move |r| (t, r)))
        .collect();
    let risks: Vec<Result<f64>> = cells
        .par_iter()
        .map(|&(t, r)| {
            let truth = &inst.truth_set[t];
            let key = root.child(t as u64).child(r as u64);
            let mut y = vec![0.0; n];
            key.fill_gaussian(&mut y);
            for (yi, &g) in y.iter_mut().zip(truth) {
                *yi = g + sigma * *yi;
            }
            let fitted = estimator(&inst.design, &y).map_err(|e| Error::EstimatorFailed {
                truth: t,
                rep: r,
                source: Box::new(e),
            })?;
            if fitted.len() != n {
                return Err(Error::EstimatorFailed {
                    truth: t,
                    rep: r,
                    source: Box::new(Error::DimensionMismatch(format!(
                        "estimator returned {} values, expected {n}",
                        fitted.len()
                    ))),
                });
            }
            let diff: Vec<f64> = fitted.iter().zip(truth).map(|(a, b)| a - b).collect();
            empirical_norm_sq(&diff)
        })
        .collect();

    // First failure in (truth, rep) order wins, independent of scheduling.
    let mut table = vec![vec![0.0; reps]; inst.card()];
    for (&(t, r), risk) in cells.iter().zip(risks) {
        table[t][r] = risk?;
    }

    let per_truth_mean: Vec<f64> = table
        .iter()
        .map(|row| row.iter().sum::<f64>() / reps as f64)
        .collect();
    let mut worst_truth = 0;
    for (t, &mean) in per_truth_mean.iter().enumerate() {
        if mean > per_truth_mean[worst_truth] {
            worst_truth = t;
        }
    }
    let worst_mean = per_truth_mean[worst_truth];
    let worst_se = if reps > 1 {
        let var = table[worst_truth]
            .iter()
            .map(|&x| (x - worst_mean) * (x - worst_mean))
            .sum::<f64>()
            / (reps as f64 - 1.0);
        (var / reps as f64).sqrt()
    } else {
        0.0
    };

    Ok(MinimaxReport {
        per_truth_mean,
        worst_mean,
        worst_truth,
        worst_se,
        reps,
    })
}
