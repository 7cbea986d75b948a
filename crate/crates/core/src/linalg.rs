//! Dense symmetric linear algebra at dictionary scale: cyclic Jacobi
//! eigendecomposition, Cholesky factorization, and spectral pseudo-inverse
//! solves. Matrices are row-major `m * m` slices.

/// Eigendecomposition of a symmetric matrix. `vectors` is column-major:
/// `vectors[k * m + i]` is component `i` of the eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
    pub m: usize,
    pub sweeps: usize,
}

/// Cyclic Jacobi sweeps until the off-diagonal Frobenius mass falls below
/// `tol` times the Frobenius norm of the input (or `max_sweeps` is hit).
pub fn jacobi_eigen(a: &[f64], m: usize, tol: f64, max_sweeps: usize) -> SymEigen {
    assert_eq!(a.len(), m * m, "matrix size mismatch");
    let mut w = a.to_vec();
    let mut v = vec![0.0; m * m];
    for i in 0..m {
        v[i * m + i] = 1.0;
    }
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let thresh = tol.max(f64::EPSILON) * frob.max(f64::MIN_POSITIVE);

    let mut sweeps = 0;
    while sweeps < max_sweeps {
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..m {
                for q in (p + 1)..m {
                    s += 2.0 * w[p * m + q] * w[p * m + q];
                }
            }
            s.sqrt()
        };
        if off <= thresh {
            break;
        }
        sweeps += 1;
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = w[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let app = w[p * m + p];
                let aqq = w[q * m + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                w[p * m + p] = app - t * apq;
                w[q * m + q] = aqq + t * apq;
                w[p * m + q] = 0.0;
                w[q * m + p] = 0.0;
                for r in 0..m {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = w[r * m + p];
                    let arq = w[r * m + q];
                    let new_p = c * arp - s * arq;
                    let new_q = s * arp + c * arq;
                    w[r * m + p] = new_p;
                    w[p * m + r] = new_p;
                    w[r * m + q] = new_q;
                    w[q * m + r] = new_q;
                }
                for r in 0..m {
                    let vrp = v[p * m + r];
                    let vrq = v[q * m + r];
                    v[p * m + r] = c * vrp - s * vrq;
                    v[q * m + r] = s * vrp + c * vrq;
                }
            }
        }
    }

    let values: Vec<f64> = (0..m).map(|i| w[i * m + i]).collect();
    SymEigen {
        values,
        vectors: v,
        m,
        sweeps,
    }
}

impl SymEigen {
    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Minimum-norm solution of `A x = b` with eigenvalues of magnitude
    /// below `rel_tol * max |eigenvalue|` treated as zero.
    /// Returns the solution and the numerical rank used.
    pub fn pinv_solve(&self, b: &[f64], rel_tol: f64) -> (Vec<f64>, usize) {
        assert_eq!(b.len(), self.m);
        let scale = self.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let cutoff = rel_tol * scale;
        let mut x = vec![0.0; self.m];
        let mut rank = 0;
        for k in 0..self.m {
            let lam = self.values[k];
            if lam.abs() <= cutoff || lam == 0.0 {
                continue;
            }
            rank += 1;
            let vk = &self.vectors[k * self.m..(k + 1) * self.m];
            let proj: f64 = vk.iter().zip(b).map(|(a, c)| a * c).sum();
            let coef = proj / lam;
            for (xi, &vi) in x.iter_mut().zip(vk) {
                *xi += coef * vi;
            }
        }
        (x, rank)
    }
}

/// In-place lower Cholesky factorization. Fails (returns `false`) when a
/// pivot falls at or below `pivot_floor`; the matrix is then left partially
/// overwritten and must be discarded.
pub fn cholesky_in_place(a: &mut [f64], m: usize, pivot_floor: f64) -> bool {
    for j in 0..m {
        let mut d = a[j * m + j];
        for k in 0..j {
            d -= a[j * m + k] * a[j * m + k];
        }
        if d <= pivot_floor {
            return false;
        }
        let d = d.sqrt();
        a[j * m + j] = d;
        for i in (j + 1)..m {
            let mut s = a[i * m + j];
            for k in 0..j {
                s -= a[i * m + k] * a[j * m + k];
            }
            a[i * m + j] = s / d;
        }
    }
    true
}

/// Solves `L L' x = b` given the lower factor from [`cholesky_in_place`].
pub fn cholesky_solve(l: &[f64], m: usize, b: &[f64]) -> Vec<f64> {
    let mut x = b.to_vec();
    for i in 0..m {
        let mut s = x[i];
        for k in 0..i {
            s -= l[i * m + k] * x[k];
        }
        x[i] = s / l[i * m + i];
    }
    for i in (0..m).rev() {
        let mut s = x[i];
        for k in (i + 1)..m {
            s -= l[k * m + i] * x[k];
        }
        x[i] = s / l[i * m + i];
    }
    x
}
