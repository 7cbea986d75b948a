//! Synthetic data generation and the Monte Carlo replication engine: builds
//! dictionaries and truths, simulates noisy observations, fits the penalized
//! estimators, measures excess risks over the three oracles, and summarizes
//! scaling against the theoretical rate curves.

mod config;
mod event_a;
mod experiment;
mod generate;
mod rates;

pub use config::{DesignKind, DictionaryKind, ExperimentConfig, SolverSettings, TruthKind};
pub use event_a::{event_a_diagnostic, EventAReport};
pub use experiment::{run_experiment, ExperimentResult, ReplicationRecord, SummaryRow};
pub use generate::gen_data;
pub use rates::{psi_rate, rate_slope, RateKind, RateVariant, SlopeFit};
