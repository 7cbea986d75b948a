//! Exhaustive search over the grid of m-sparse rational simplex points.

use crate::design::DesignMatrix;
use crate::error::{Error, Result};
use crate::norms::empirical_norm_sq;
use crate::oracles::{OracleKind, OracleResult};
use crate::weights::WeightVector;

/// Default cap on the number of grid points the oracle will enumerate.
pub const DEFAULT_GRID_BUDGET: u128 = 1_000_000;

/// Number of grid points: C(M + m, m), i.e. nonnegative integer vectors of
/// length M with coordinate sum at most m.
pub fn grid_point_count(m_dict: usize, m: usize) -> Option<u128> {
    // C(M + m, m) computed incrementally; None on overflow.
    let mut acc: u128 = 1;
    for i in 1..=m as u128 {
        acc = acc.checked_mul(m_dict as u128 + i)?;
        acc /= i; // exact: C(M+i, i) = C(M+i-1, i-1) * (M+i) / i
    }
    Some(acc)
}

/// Minimizes the empirical risk over all functions `(1/m) sum_j k_j f_j`
/// with nonnegative integers `k_j` summing to at most `m`, by exhaustive
/// enumeration in lexicographic order of `(k_1, ..., k_M)`; the first
/// minimizer found is kept, so ties break lexicographically.
///
/// Refuses (with the exact count) when the grid exceeds `budget`.
pub fn maurey_grid_oracle(
    d: &DesignMatrix,
    f_vals: &[f64],
    m: usize,
    budget: u128,
) -> Result<OracleResult> {
    if f_vals.len() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "target of length {} against design with n = {}",
            f_vals.len(),
            d.n()
        )));
    }
    if m == 0 {
        return Err(Error::InvalidInput(
            "grid denominator m must be >= 1".into(),
        ));
    }
    let count = grid_point_count(d.m_dict(), m).ok_or(Error::BudgetExceeded {
        count: u128::MAX,
        budget,
    })?;
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }

    let mut best_k: Vec<usize> = vec![0; d.m_dict()];
    let mut best_risk = empirical_norm_sq(f_vals)?; // the all-zero grid point
    let mut visited: usize = 1;

    // Depth-first over coordinates; `resid` carries f - (1/m) sum k_j f_j.
    let mut k = vec![0usize; d.m_dict()];
    let mut resid = f_vals.to_vec();
    descend(
        d,
        m,
        0,
        m,
        &mut k,
        &mut resid,
        &mut visited,
        &mut best_risk,
        &mut best_k,
    )?;
    debug_assert_eq!(visited as u128, count);

    let coeffs: Vec<f64> = best_k.iter().map(|&kj| kj as f64 / m as f64).collect();
    let fitted = d.combine_coeffs(&coeffs)?;
    let resid: Vec<f64> = f_vals.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    Ok(OracleResult {
        kind: OracleKind::MaureyGrid,
        weights: WeightVector::from_coeffs(coeffs)?,
        risk: empirical_norm_sq(&resid)?,
        certificate: 0.0,
        iters: visited,
    })
}

#[allow(clippy::too_many_arguments)]
fn descend(
    d: &DesignMatrix,
    m: usize,
    j: usize,
    remaining: usize,
    k: &mut Vec<usize>,
    resid: &mut Vec<f64>,
    visited: &mut usize,
    best_risk: &mut f64,
    best_k: &mut Vec<usize>,
) -> Result<()> {
    if j == d.m_dict() {
        return Ok(());
    }
    // k[j] = 0 branch first (resid unchanged), then increments.
    descend(d, m, j + 1, remaining, k, resid, visited, best_risk, best_k)?;
    let col = d.col(j);
    let step = 1.0 / m as f64;
    for kj in 1..=remaining {
        k[j] = kj;
        for (r, &v) in resid.iter_mut().zip(col.iter()) {
            *r -= step * v;
        }
        *visited += 1;
        let risk = empirical_norm_sq(resid)?;
        if risk < *best_risk {
            *best_risk = risk;
            best_k.clone_from(k);
        }
        descend(
            d,
            m,
            j + 1,
            remaining - kj,
            k,
            resid,
            visited,
            best_risk,
            best_k,
        )?;
    }
    // Restore state for the caller.
    for (r, &v) in resid.iter_mut().zip(col.iter()) {
        *r += remaining as f64 * step * v;
    }
    k[j] = 0;
    Ok(())
}
