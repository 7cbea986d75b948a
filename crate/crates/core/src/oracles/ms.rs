//! Best single dictionary element.

use crate::design::DesignMatrix;
use crate::error::{Error, Result};
use crate::oracles::{OracleKind, OracleResult};
use crate::weights::WeightVector;

/// Scans all columns and returns the one closest to `f_vals` in the
/// empirical norm. Ties go to the smallest index.
pub fn ms_oracle(d: &DesignMatrix, f_vals: &[f64]) -> Result<OracleResult> {
    if f_vals.len() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "target of length {} against design with n = {}",
            f_vals.len(),
            d.n()
        )));
    }
    let n = d.n() as f64;
    let mut best_j = 0;
    let mut best_risk = f64::INFINITY;
    for j in 0..d.m_dict() {
        let risk = d
            .col(j)
            .iter()
            .zip(f_vals)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            / n;
        if risk < best_risk {
            best_risk = risk;
            best_j = j;
        }
    }
    Ok(OracleResult {
        kind: OracleKind::ModelSelect,
        weights: WeightVector::vertex(d.m_dict(), best_j)?,
        risk: best_risk,
        certificate: 0.0,
        iters: d.m_dict(),
    })
}
