//! Penalized least-squares fitting: exact and greedy best-subset search for
//! the sparsity penalty, coordinate descent and projected proximal steps for
//! the weighted L1 penalty.

mod hard;
mod soft;

pub use hard::{fit_hard_threshold, HardFitOptions};
pub use soft::{fit_soft_threshold, radius_conditions, RadiusConditions, SoftFitOptions};

use serde::{Deserialize, Serialize};

use crate::weights::WeightVector;

/// Which solver produced a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMode {
    ExactExhaustive,
    GreedyForward,
    CoordinateDescent,
    ProjectedProximal,
}

/// Solver disclosure attached to every fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverMeta {
    pub mode: SolverMode,
    /// Subsets scanned, candidate evaluations, or sweeps, by mode.
    pub iters: usize,
    pub converged: bool,
    /// True when the solution was radially rescaled onto a constraint ball.
    #[serde(default)]
    pub projected: bool,
    /// Zero dictionary columns whose coefficients were frozen at zero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub frozen: Vec<usize>,
    /// Ball-radius diagnostics, present for L2-constrained fits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<soft::RadiusConditions>,
}

/// A fitted weight vector with its objective decomposition
/// `objective = rss + penalty` (exact to rounding).
#[derive(Debug, Clone)]
pub struct FitResult {
    pub weights: WeightVector,
    pub objective: f64,
    pub rss: f64,
    pub penalty: f64,
    pub solver_meta: SolverMeta,
}

impl FitResult {
    /// JSON object `{weights, support, rss, penalty, objective, solver_meta}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "weights": self.weights.coeffs(),
            "support": self.weights.support(),
            "rss": self.rss,
            "penalty": self.penalty,
            "objective": self.objective,
            "solver_meta": self.solver_meta,
        })
    }
}
