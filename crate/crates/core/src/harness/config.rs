//! Experiment configuration: everything a Monte Carlo study needs, in one
//! serializable manifest.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::rates::RateVariant;
use crate::penalty::PenaltySpec;

/// How design points are placed on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DesignKind {
    /// Midpoint grid `(i + 1/2) / n`.
    #[default]
    FixedGrid,
    /// Independent uniform draws.
    RandomUniform,
}

/// Which dictionary to synthesize (or load).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DictionaryKind {
    /// Cosine basis orthonormalized in the empirical norm, so Gram = I and
    /// closed-form results apply. Needs `n >= M`.
    OrthonormalCosine,
    /// Indicator functions of the `M` equal subintervals of `[0, 1]`.
    IndicatorBlocks,
    /// Point masses at the first `M` design points. Needs `n >= M`.
    PointMass,
    /// I.i.d. uniform entries in `(-bound, bound)`; redrawn per replication.
    RandomBounded {
        #[serde(default = "default_bound")]
        bound: f64,
    },
    /// Load the design from a CSV file (fixed design only).
    UserCsv { path: String },
}

fn default_bound() -> f64 {
    1.0
}

/// Which truth to synthesize.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TruthKind {
    /// `f = f_{index}`.
    InDictionary { index: usize },
    /// `f = sum w_j f_j` with `w` in the simplex. Shorter weight lists are
    /// zero-padded.
    ConvexCombo { weights: Vec<f64> },
    /// `f = sum w_j f_j`, unrestricted weights.
    LinearCombo { weights: Vec<f64> },
    /// `f = sum w_j f_j + amplitude * u` with `u` a unit-norm direction
    /// orthogonal to the column span (fixed design only).
    OutsideSpan {
        weights: Vec<f64>,
        residual_amplitude: f64,
    },
}

/// Solver knobs shared by the fits and oracles inside an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSettings {
    /// Duality-gap stop for the simplex oracle.
    pub gap_tol: f64,
    /// Iteration cap for the simplex oracle.
    pub max_iters: usize,
    /// Relative eigenvalue cutoff for the linear oracle's pseudo-inverse.
    pub pinv_tol: f64,
    /// Subset-enumeration budget for the exact hard-threshold scan.
    pub budget: u128,
    /// Fall back to forward stepwise when the budget is exceeded.
    pub allow_greedy: bool,
    /// Sweep-change stop for the weighted-L1 solvers.
    pub cd_tol: f64,
    /// Sweep cap for the weighted-L1 solvers.
    pub cd_max_iters: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            gap_tol: 1e-8,
            max_iters: 200_000,
            pinv_tol: 1e-10,
            budget: 1_000_000,
            allow_greedy: true,
            cd_tol: 1e-10,
            cd_max_iters: 100_000,
        }
    }
}

/// Full description of one Monte Carlo study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Sample sizes to sweep.
    pub n_grid: Vec<usize>,
    pub m_dict: usize,
    pub dictionary: DictionaryKind,
    pub truth: TruthKind,
    /// Noise standard deviation (zero gives noiseless observations).
    pub sigma: f64,
    pub penalty: PenaltySpec,
    pub reps: usize,
    pub seed: u64,
    #[serde(default)]
    pub design: DesignKind,
    /// With a random design, a positive value evaluates all risks on a fresh
    /// noise-free hold-out of this size instead of the training points.
    #[serde(default)]
    pub holdout_size: usize,
    #[serde(default)]
    pub solver: SolverSettings,
    /// Optional sensitivity sweep over the hard-threshold constant.
    #[serde(default)]
    pub k1_grid: Option<Vec<f64>>,
    /// Which rate variant the summary's `psi_rate` column uses.
    #[serde(default)]
    pub rate_variant: RateVariant,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::Config("n_grid must be nonempty".into()));
        }
        if self.n_grid.contains(&0) {
            return Err(Error::Config("all sample sizes must be >= 1".into()));
        }
        if self.m_dict < 2 {
            return Err(Error::Config(format!(
                "m_dict must be >= 2, got {}",
                self.m_dict
            )));
        }
        if self.reps == 0 {
            return Err(Error::Config("reps must be >= 1".into()));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::Config(format!(
                "sigma must be a nonnegative real, got {}",
                self.sigma
            )));
        }
        self.penalty.validate()?;

        match &self.dictionary {
            DictionaryKind::OrthonormalCosine | DictionaryKind::PointMass => {
                if let Some(&n) = self.n_grid.iter().find(|&&n| n < self.m_dict) {
                    return Err(Error::Config(format!(
                        "this dictionary needs n >= M; got n = {n} < M = {}",
                        self.m_dict
                    )));
                }
            }
            DictionaryKind::RandomBounded { bound } => {
                if !(bound.is_finite() && *bound > 0.0) {
                    return Err(Error::Config(format!(
                        "dictionary bound must be positive, got {bound}"
                    )));
                }
            }
            DictionaryKind::IndicatorBlocks | DictionaryKind::UserCsv { .. } => {}
        }

        let check_weights = |w: &[f64]| -> Result<()> {
            if w.len() > self.m_dict {
                return Err(Error::Config(format!(
                    "truth weights reference {} functions, dictionary has {}",
                    w.len(),
                    self.m_dict
                )));
            }
            if let Some(v) = w.iter().find(|v| !v.is_finite()) {
                return Err(Error::Config(format!("truth weight {v} is not finite")));
            }
            Ok(())
        };
        match &self.truth {
            TruthKind::InDictionary { index } => {
                if *index >= self.m_dict {
                    return Err(Error::Config(format!(
                        "truth index {index} out of range for M = {}",
                        self.m_dict
                    )));
                }
            }
            TruthKind::ConvexCombo { weights } => {
                check_weights(weights)?;
                if weights.iter().any(|&w| w < 0.0) {
                    return Err(Error::Config(
                        "convex-combo weights must be nonnegative".into(),
                    ));
                }
                let total: f64 = weights.iter().sum();
                if total > 1.0 + 1e-12 {
                    return Err(Error::Config(format!(
                        "convex-combo weights sum to {total} > 1"
                    )));
                }
            }
            TruthKind::LinearCombo { weights } => check_weights(weights)?,
            TruthKind::OutsideSpan {
                weights,
                residual_amplitude,
            } => {
                check_weights(weights)?;
                if !(residual_amplitude.is_finite() && *residual_amplitude >= 0.0) {
                    return Err(Error::Config(format!(
                        "residual amplitude must be a nonnegative real, got {residual_amplitude}"
                    )));
                }
            }
        }

        if self.holdout_size > 0 {
            if self.design != DesignKind::RandomUniform {
                return Err(Error::Config(
                    "holdout risk evaluation needs a random-uniform design".into(),
                ));
            }
            match &self.dictionary {
                DictionaryKind::OrthonormalCosine | DictionaryKind::IndicatorBlocks => {}
                other => {
                    return Err(Error::Config(format!(
                        "holdout evaluation needs a function-backed dictionary, got {other:?}"
                    )))
                }
            }
            if matches!(self.truth, TruthKind::OutsideSpan { .. }) {
                return Err(Error::Config(
                    "holdout evaluation cannot represent an outside-span truth".into(),
                ));
            }
        }
        if matches!(self.design, DesignKind::RandomUniform)
            && matches!(self.dictionary, DictionaryKind::UserCsv { .. })
        {
            return Err(Error::Config(
                "a CSV dictionary fixes the design; use fixed-grid".into(),
            ));
        }

        if let Some(grid) = &self.k1_grid {
            if !matches!(self.penalty, PenaltySpec::HardThreshold { .. }) {
                return Err(Error::Config(
                    "k1_grid only applies to the hard-threshold penalty".into(),
                ));
            }
            if grid.is_empty() || grid.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
                return Err(Error::Config(
                    "k1_grid entries must be positive reals".into(),
                ));
            }
        }
        Ok(())
    }
}
