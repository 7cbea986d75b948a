//! Best unrestricted linear combination via the spectral pseudo-inverse.

use crate::design::DesignMatrix;
use crate::error::{Error, Result};
use crate::gram::{correlations, gram_matrix};
use crate::linalg::jacobi_eigen;
use crate::norms::empirical_norm_sq;
use crate::oracles::{OracleKind, OracleResult};
use crate::weights::WeightVector;

/// Default relative eigenvalue cutoff for the pseudo-inverse.
pub const DEFAULT_PINV_TOL: f64 = 1e-10;

/// Minimum-Euclidean-norm solution of the normal equations
/// `Psi lambda = c`, `c_j = <f, f_j>_n`, with eigenvalues below
/// `rel_tol * xi_max` treated as zero. The certificate is the Euclidean
/// norm of the residual `Psi lambda - c`, which vanishes for any exact
/// least-squares solution regardless of rank.
pub fn linear_oracle(d: &DesignMatrix, f_vals: &[f64], rel_tol: f64) -> Result<OracleResult> {
    if f_vals.len() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "target of length {} against design with n = {}",
            f_vals.len(),
            d.n()
        )));
    }
    let m = d.m_dict();
    let psi = gram_matrix(d);
    let c = correlations(d, f_vals);
    let eig = jacobi_eigen(&psi, m, 1e-12, 64);
    let (coeffs, _rank) = eig.pinv_solve(&c, rel_tol);

    let fitted = d.combine_coeffs(&coeffs)?;
    let resid: Vec<f64> = f_vals.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let risk = empirical_norm_sq(&resid)?;

    let mut cert_sq = 0.0;
    for j in 0..m {
        let mut s = -c[j];
        for k in 0..m {
            s += psi[j * m + k] * coeffs[k];
        }
        cert_sq += s * s;
    }

    Ok(OracleResult {
        kind: OracleKind::Linear,
        weights: WeightVector::from_coeffs(coeffs)?,
        risk,
        certificate: cert_sq.sqrt(),
        iters: eig.sweeps,
    })
}
