//! Aggregation weight vectors with derived support and sparsity.

use crate::error::{Error, Result};

/// A weight vector `lambda` over the dictionary, together with its support
/// `J(lambda) = {j : lambda_j != 0}` (kept sorted ascending) and sparsity
/// `M(lambda) = |J(lambda)|`.
///
/// The sparsity is zero exactly when the vector is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    coeffs: Vec<f64>,
    support: Vec<usize>,
}

impl WeightVector {
    /// Builds a weight vector, deriving support and sparsity from `coeffs`.
    pub fn from_coeffs(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("empty weight vector".into()));
        }
        if let Some(j) = coeffs.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "weight {j} is not finite: {}",
                coeffs[j]
            )));
        }
        let support = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(j, _)| j)
            .collect();
        Ok(WeightVector { coeffs, support })
    }

    /// The zero vector of length `m`.
    pub fn zeros(m: usize) -> Self {
        WeightVector {
            coeffs: vec![0.0; m],
            support: Vec::new(),
        }
    }

    /// The j-th vertex of the simplex: a single unit coefficient.
    pub fn vertex(m: usize, j: usize) -> Result<Self> {
        if j >= m {
            return Err(Error::InvalidInput(format!("vertex {j} out of range {m}")));
        }
        let mut coeffs = vec![0.0; m];
        coeffs[j] = 1.0;
        Ok(WeightVector {
            coeffs,
            support: vec![j],
        })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// `M(lambda)`: the number of nonzero coefficients.
    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn l1_norm(&self) -> f64 {
        self.support.iter().map(|&j| self.coeffs[j].abs()).sum()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.support
            .iter()
            .map(|&j| self.coeffs[j] * self.coeffs[j])
            .sum()
    }

    /// Sum of coefficients (used for simplex feasibility checks).
    pub fn sum(&self) -> f64 {
        self.coeffs.iter().sum()
    }
}
