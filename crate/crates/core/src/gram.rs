//! The empirical Gram matrix of the dictionary and its eigenvalue range.

use crate::design::DesignMatrix;
use crate::linalg::{jacobi_eigen, SymEigen};

/// Default eigen-iteration tolerance.
pub const DEFAULT_EIG_TOL: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 64;

/// The `M x M` matrix `Psi[j][k] = (1/n) sum_i f_j(x_i) f_k(x_i)` together
/// with its extreme eigenvalues. `xi_min` may be zero or slightly negative
/// (within eigen-solver accuracy) for rank-deficient dictionaries; that is
/// reported, not treated as an error.
#[derive(Debug, Clone)]
pub struct GramInfo {
    psi: Vec<f64>,
    m: usize,
    xi_min: f64,
    xi_max: f64,
    tol_eig: f64,
}

impl GramInfo {
    /// Row-major `m x m` matrix.
    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn entry(&self, j: usize, k: usize) -> f64 {
        self.psi[j * self.m + k]
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn xi_min(&self) -> f64 {
        self.xi_min
    }

    pub fn xi_max(&self) -> f64 {
        self.xi_max
    }

    pub fn tol_eig(&self) -> f64 {
        self.tol_eig
    }

    /// Full eigendecomposition of `Psi` at this Gram's tolerance.
    pub fn eigen(&self) -> SymEigen {
        jacobi_eigen(&self.psi, self.m, self.tol_eig, MAX_JACOBI_SWEEPS)
    }
}

/// Computes the raw Gram matrix without the eigen pass.
pub(crate) fn gram_matrix(d: &DesignMatrix) -> Vec<f64> {
    let m = d.m_dict();
    let n = d.n() as f64;
    let mut psi = vec![0.0; m * m];
    for j in 0..m {
        let cj = d.col(j);
        for k in j..m {
            let dot: f64 = cj.iter().zip(d.col(k)).map(|(a, b)| a * b).sum::<f64>() / n;
            psi[j * m + k] = dot;
            psi[k * m + j] = dot;
        }
    }
    psi
}

/// The empirical cross-correlations `c_j = (1/n) <y, f_j>` for all columns.
pub(crate) fn correlations(d: &DesignMatrix, y: &[f64]) -> Vec<f64> {
    let n = d.n() as f64;
    (0..d.m_dict())
        .map(|j| d.col(j).iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / n)
        .collect()
}

impl DesignMatrix {
    /// Gram matrix and eigenvalue range at the default tolerance.
    pub fn gram(&self) -> GramInfo {
        self.gram_with_tol(DEFAULT_EIG_TOL)
    }

    /// Gram matrix with eigenvalues converged to `tol_eig` (cyclic Jacobi).
    pub fn gram_with_tol(&self, tol_eig: f64) -> GramInfo {
        let m = self.m_dict();
        let psi = gram_matrix(self);
        let eig = jacobi_eigen(&psi, m, tol_eig, MAX_JACOBI_SWEEPS);
        GramInfo {
            psi,
            m,
            xi_min: eig.min(),
            xi_max: eig.max(),
            tol_eig,
        }
    }
}
