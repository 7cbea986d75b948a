//! Aggregation of a fixed dictionary of regression functions by penalized
//! least squares.
//!
//! Given evaluations of `M` functions at `n` design points and noisy
//! observations of an unknown regression function, the estimators here mix
//! the dictionary with weights chosen by least squares plus one of two
//! penalties: a sparsity-counting penalty solved by best-subset search, or a
//! weighted L1 penalty solved by soft-threshold descent. Their excess risks
//! are measured against the three reference minimizers (best single element,
//! best simplex combination, best linear combination).
//!
//! The crate also ships the machinery to stress-test the estimators: grid
//! oracles, concentration-bound checks, hard-instance generators built on
//! well-separated binary codes, and a deterministic Monte Carlo harness
//! whose output is bit-reproducible across thread counts.

pub mod design;
pub mod error;
pub mod fit;
pub mod gram;
pub mod hardness;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod norms;
pub mod oracles;
pub mod penalty;
pub mod rng;
pub mod testing;
pub mod weights;

pub use design::{DesignMatrix, TargetVector};
pub use error::{Error, Result};
pub use fit::{fit_hard_threshold, fit_soft_threshold, FitResult, HardFitOptions, SoftFitOptions};
pub use gram::GramInfo;
pub use norms::{empirical_dot, empirical_norm_sq};
pub use oracles::{
    convex_oracle, linear_oracle, maurey_grid_oracle, ms_oracle, ConvexSolverConfig, OracleKind,
    OracleResult,
};
pub use penalty::{
    estimate_sigma, l1_weights, l1_weights_with_multiplier, penalized_objective, penalty_hard,
    soft_threshold_scalar, PenaltySpec,
};
pub use weights::WeightVector;
