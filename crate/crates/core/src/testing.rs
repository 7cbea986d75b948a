//! Deterministic instance generators shared by unit tests, integration
//! tests, and benchmarks.

use crate::design::DesignMatrix;
use crate::rng::StreamKey;

/// A design whose columns are exactly orthonormal in the empirical norm:
/// disjoint indicator blocks scaled to unit mean square. Requires `n >= m`.
pub fn orthonormal_design(n: usize, m: usize) -> DesignMatrix {
    assert!(m >= 2 && n >= m, "need n >= m >= 2");
    let block = n / m;
    let height = ((n as f64) / (block as f64)).sqrt();
    let mut cols = vec![vec![0.0; n]; m];
    for (j, col) in cols.iter_mut().enumerate() {
        for v in &mut col[j * block..(j + 1) * block] {
            *v = height;
        }
    }
    DesignMatrix::from_columns_inferred(cols).unwrap()
}

/// A design with i.i.d. uniform entries in `(-bound, bound)`.
pub fn random_design(n: usize, m: usize, seed: u64, bound: f64) -> DesignMatrix {
    let key = StreamKey::new(seed).labeled("test-design");
    let mut cols = Vec::with_capacity(m);
    for j in 0..m {
        let cj = key.child(j as u64);
        cols.push(
            (0..n)
                .map(|i| cj.uniform_in(i as u64, -bound, bound))
                .collect(),
        );
    }
    DesignMatrix::from_columns(cols, bound).unwrap()
}

/// A deterministic pseudo-random vector with entries in `(-bound, bound)`.
pub fn random_vector(n: usize, seed: u64, bound: f64) -> Vec<f64> {
    let key = StreamKey::new(seed).labeled("test-vector");
    (0..n)
        .map(|i| key.uniform_in(i as u64, -bound, bound))
        .collect()
}
