//! Concentration and divergence formulas.

use crate::error::{Error, Result};
use crate::norms::empirical_norm_sq;

/// Upper bound on `P{Z_d - d >= x sqrt(2d)}` for a chi-square variable
/// `Z_d` with `d` degrees of freedom:
/// `exp(-x^2 / (2 (1 + x sqrt(2/d))))`. Tends to 1 as `x -> 0+`.
pub fn chi2_tail_bound(d: usize, x: f64) -> f64 {
    debug_assert!(d >= 1 && x > 0.0);
    let df = d as f64;
    (-x * x / (2.0 * (1.0 + x * (2.0 / df).sqrt()))).exp()
}

/// Kullback-Leibler divergence between two fixed-design Gaussian regression
/// models with truths `f` and `g` and noise s.d. `sigma`:
/// `(n / (2 sigma^2)) * ||f - g||_n^2`.
pub fn kl_gaussian_fixed_design(
    f_vals: &[f64],
    g_vals: &[f64],
    n: usize,
    sigma: f64,
) -> Result<f64> {
    if f_vals.len() != n || g_vals.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected two length-{n} vectors, got {} and {}",
            f_vals.len(),
            g_vals.len()
        )));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidInput(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    let diff: Vec<f64> = f_vals.iter().zip(g_vals).map(|(a, b)| a - b).collect();
    Ok(n as f64 / (2.0 * sigma * sigma) * empirical_norm_sq(&diff)?)
}
