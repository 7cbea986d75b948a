//! Shared benchmark fixtures.

use agg_core::testing::{random_design, random_vector};
use agg_core::DesignMatrix;

/// A reproducible random instance: bounded dictionary plus observations.
pub fn instance(n: usize, m: usize, seed: u64) -> (DesignMatrix, Vec<f64>) {
    let d = random_design(n, m, seed, 1.0);
    let y = random_vector(n, seed ^ 0xBEEF, 1.0);
    (d, y)
}
