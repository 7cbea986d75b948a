//! The benchmark minimizers an aggregate is judged against: the best single
//! dictionary element, the best simplex combination, the best linear
//! combination, and the best point of a rational-coefficient grid.
//!
//! Every oracle minimizes `||f_lambda - f||_n^2` over its weight set for a
//! known target `f`; the sets are nested (vertices within the simplex
//! within all of R^M), so the achieved risks are nonincreasing along that
//! chain up to solver tolerance.

mod convex;
mod linear;
mod maurey;
mod ms;

pub use convex::convex_oracle;
pub use linear::{linear_oracle, DEFAULT_PINV_TOL};
pub use maurey::{maurey_grid_oracle, DEFAULT_GRID_BUDGET};
pub use ms::ms_oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::WeightVector;

/// Which weight set an oracle minimized over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleKind {
    /// Best single dictionary element (a simplex vertex).
    #[serde(rename = "MS")]
    ModelSelect,
    /// Best point of the simplex (nonnegative weights summing to at most 1).
    #[serde(rename = "C")]
    Convex,
    /// Best unrestricted linear combination.
    #[serde(rename = "L")]
    Linear,
    /// Best grid point with coefficients `k_j / m`, nonnegative integers
    /// `k_j` summing to at most `m`.
    #[serde(rename = "MaureyGrid")]
    MaureyGrid,
}

/// An oracle's minimizer and achieved risk.
///
/// `certificate` quantifies optimality: the final duality gap for the convex
/// oracle, the Euclidean norm of the normal-equation residual for the linear
/// oracle, and zero for the exhaustive oracles.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub kind: OracleKind,
    pub weights: WeightVector,
    pub risk: f64,
    pub certificate: f64,
    pub iters: usize,
}

impl OracleResult {
    /// JSON object `{kind, weights, support, risk, certificate, iters}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "weights": self.weights.coeffs(),
            "support": self.weights.support(),
            "risk": self.risk,
            "certificate": self.certificate,
            "iters": self.iters,
        })
    }
}

/// Stopping rule for the simplex oracle's conditional-gradient solver.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConvexSolverConfig {
    pub max_iters: usize,
    /// Stop once the duality gap falls to this value; the returned risk is
    /// then within `gap_tol` of the true simplex minimum.
    pub gap_tol: f64,
}

impl Default for ConvexSolverConfig {
    fn default() -> Self {
        ConvexSolverConfig {
            max_iters: 200_000,
            gap_tol: 1e-8,
        }
    }
}

impl ConvexSolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gap_tol.is_nan() || self.gap_tol <= 0.0 {
            return Err(Error::Config(format!(
                "gap_tol must be positive, got {}",
                self.gap_tol
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be positive".into()));
        }
        Ok(())
    }
}

/// The sparsity scale `sqrt(n log 2 / log(1 + M / sqrt(n)))` used to pick
/// grid resolutions in the many-functions regime `M > sqrt(n)`; callers take
/// the integer part.
pub fn x_n_m(n: usize, m_dict: usize) -> Result<f64> {
    if n == 0 || m_dict < 2 {
        return Err(Error::Domain(format!(
            "need n >= 1 and M >= 2, got n = {n}, M = {m_dict}"
        )));
    }
    // Integer test for M > sqrt(n); equality counts as the small-M regime.
    if (m_dict as u128) * (m_dict as u128) <= n as u128 {
        return Err(Error::Domain(format!(
            "x_{{n,M}} is defined only for M > sqrt(n); got M = {m_dict}, n = {n}"
        )));
    }
    let nf = n as f64;
    let ratio = m_dict as f64 / nf.sqrt();
    Ok((nf * std::f64::consts::LN_2 / ratio.ln_1p()).sqrt())
}
