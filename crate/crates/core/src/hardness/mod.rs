//! Provably hard problem instances and the information-theoretic quantities
//! used to calibrate them: a chi-square tail bound, Kullback-Leibler
//! divergences between fixed-design Gaussian models, greedily constructed
//! well-separated binary codes, and worst-case Monte Carlo evaluation of
//! estimators over the resulting finite truth classes.

mod bounds;
mod code;
mod instances;
mod minimax;

pub use bounds::{chi2_tail_bound, kl_gaussian_fixed_design};
pub use code::{default_code_distance, vg_code, BinaryCode, MAX_CODE_LENGTH};
pub use instances::{make_l_hard, make_ms_hard, HardInstance, HardKind, DEFAULT_TRUTH_BUDGET};
pub use minimax::{minimax_eval, MinimaxReport};
