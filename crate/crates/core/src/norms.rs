//! The empirical (mean-square) norm and inner product over design points.

use crate::error::{Error, Result};

/// `(1/n) * sum(vals[i]^2)`, the squared empirical norm.
///
/// Zero if and only if every entry is zero.
pub fn empirical_norm_sq(vals: &[f64]) -> Result<f64> {
    if vals.is_empty() {
        return Err(Error::InvalidInput(
            "empirical norm of an empty vector".into(),
        ));
    }
    let n = vals.len() as f64;
    Ok(vals.iter().map(|v| v * v).sum::<f64>() / n)
}

/// `(1/n) * sum(a[i] * b[i])`, the empirical inner product.
pub fn empirical_dot(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::InvalidInput(
            "empirical inner product of empty vectors".into(),
        ));
    }
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "inner product of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len() as f64;
    Ok(a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / n)
}
