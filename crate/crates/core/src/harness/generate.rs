//! Deterministic synthesis of one replication's data.

use crate::design::{DesignMatrix, TargetVector};
use crate::error::{Error, Result};
use crate::gram::{correlations, gram_matrix};
use crate::harness::config::{DesignKind, DictionaryKind, ExperimentConfig, TruthKind};
use crate::io;
use crate::linalg::jacobi_eigen;
use crate::norms::empirical_norm_sq;
use crate::rng::StreamKey;

/// A generated replication, including what is needed to evaluate the
/// dictionary and truth at fresh hold-out points.
pub(crate) struct GeneratedInstance {
    pub design: DesignMatrix,
    pub target: TargetVector,
    pub evaluator: Option<DictionaryEvaluator>,
    /// The truth as dictionary coefficients, when it is one.
    pub truth_coeffs: Option<Vec<f64>>,
}

/// Functional form behind a synthesized dictionary, for evaluation at
/// arbitrary points of `[0, 1]`.
pub(crate) enum DictionaryEvaluator {
    /// Orthonormalized cosines: column j is
    /// `sum_k transform[j * m + k] * raw_k`.
    Cosine {
        transform: Vec<f64>,
        m: usize,
    },
    Blocks {
        m: usize,
    },
}

impl DictionaryEvaluator {
    /// Dictionary columns evaluated at `points`.
    pub fn eval_columns(&self, points: &[f64]) -> Vec<Vec<f64>> {
        match self {
            DictionaryEvaluator::Cosine { transform, m } => {
                let raw = raw_cosine_columns(points, *m);
                (0..*m)
                    .map(|j| {
                        let mut col = vec![0.0; points.len()];
                        for k in 0..*m {
                            let w = transform[j * m + k];
                            if w != 0.0 {
                                for (c, &r) in col.iter_mut().zip(&raw[k]) {
                                    *c += w * r;
                                }
                            }
                        }
                        col
                    })
                    .collect()
            }
            DictionaryEvaluator::Blocks { m } => (0..*m)
                .map(|j| points.iter().map(|&x| block_indicator(x, j, *m)).collect())
                .collect(),
        }
    }
}

fn block_indicator(x: f64, j: usize, m: usize) -> f64 {
    let lo = j as f64 / m as f64;
    let hi = (j + 1) as f64 / m as f64;
    let inside = if j + 1 == m {
        x >= lo && x <= hi
    } else {
        x >= lo && x < hi
    };
    if inside {
        1.0
    } else {
        0.0
    }
}

fn raw_cosine_columns(points: &[f64], m: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|k| {
            if k == 0 {
                vec![1.0; points.len()]
            } else {
                points
                    .iter()
                    .map(|&x| {
                        std::f64::consts::SQRT_2 * (std::f64::consts::PI * k as f64 * x).cos()
                    })
                    .collect()
            }
        })
        .collect()
}

/// Gram-Schmidt in the empirical inner product, with a second
/// reorthogonalization pass. Returns the orthonormal columns and the
/// transform such that `col_j = sum_k transform[j * m + k] raw_k`.
fn orthonormalize(raw: &[Vec<f64>], n: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let m = raw.len();
    let nf = n as f64;
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut transform = vec![0.0; m * m];
    for j in 0..m {
        let mut v = raw[j].clone();
        let mut coef = vec![0.0; m];
        coef[j] = 1.0;
        for _pass in 0..2 {
            for (k, qk) in q.iter().enumerate() {
                let rho: f64 = v.iter().zip(qk).map(|(a, b)| a * b).sum::<f64>() / nf;
                for (vi, &qi) in v.iter_mut().zip(qk) {
                    *vi -= rho * qi;
                }
                for t in 0..m {
                    coef[t] -= rho * transform[k * m + t];
                }
            }
        }
        let norm = (v.iter().map(|x| x * x).sum::<f64>() / nf).sqrt();
        if norm < 1e-10 {
            return Err(Error::Config(format!(
                "cosine basis is numerically dependent at column {j}; \
                 increase n relative to M"
            )));
        }
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        for t in 0..m {
            transform[j * m + t] = coef[t] / norm;
        }
        q.push(v);
    }
    Ok((q, transform))
}

pub(crate) fn design_points(cfg: &ExperimentConfig, n: usize, rep: usize) -> Vec<f64> {
    match cfg.design {
        DesignKind::FixedGrid => (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect(),
        DesignKind::RandomUniform => {
            let key = StreamKey::new(cfg.seed).child(rep as u64).labeled("design");
            (0..n).map(|i| key.uniform(i as u64)).collect()
        }
    }
}

pub(crate) fn gen_instance(
    cfg: &ExperimentConfig,
    n: usize,
    rep: usize,
) -> Result<GeneratedInstance> {
    let rep_key = StreamKey::new(cfg.seed).child(rep as u64);
    let points = design_points(cfg, n, rep);

    let (columns, evaluator): (Vec<Vec<f64>>, Option<DictionaryEvaluator>) = match &cfg.dictionary {
        DictionaryKind::OrthonormalCosine => {
            if n < cfg.m_dict {
                return Err(Error::Config(format!(
                    "orthonormal cosines need n >= M, got n = {n}, M = {}",
                    cfg.m_dict
                )));
            }
            let raw = raw_cosine_columns(&points, cfg.m_dict);
            let (cols, transform) = orthonormalize(&raw, n)?;
            (
                cols,
                Some(DictionaryEvaluator::Cosine {
                    transform,
                    m: cfg.m_dict,
                }),
            )
        }
        DictionaryKind::IndicatorBlocks => {
            let cols = (0..cfg.m_dict)
                .map(|j| {
                    points
                        .iter()
                        .map(|&x| block_indicator(x, j, cfg.m_dict))
                        .collect()
                })
                .collect();
            (cols, Some(DictionaryEvaluator::Blocks { m: cfg.m_dict }))
        }
        DictionaryKind::PointMass => {
            if n < cfg.m_dict {
                return Err(Error::Config(format!(
                    "point masses need n >= M, got n = {n}, M = {}",
                    cfg.m_dict
                )));
            }
            let mut cols = vec![vec![0.0; n]; cfg.m_dict];
            for (j, col) in cols.iter_mut().enumerate() {
                col[j] = 1.0;
            }
            (cols, None)
        }
        DictionaryKind::RandomBounded { bound } => {
            let key = rep_key.labeled("dict");
            let cols = (0..cfg.m_dict)
                .map(|j| {
                    let cj = key.child(j as u64);
                    (0..n)
                        .map(|i| cj.uniform_in(i as u64, -bound, *bound))
                        .collect()
                })
                .collect();
            (cols, None)
        }
        DictionaryKind::UserCsv { path } => {
            let d = io::read_design_csv_path(path)?;
            if d.n() != n {
                return Err(Error::Config(format!(
                    "CSV design has n = {}, experiment asked for n = {n}",
                    d.n()
                )));
            }
            if d.m_dict() != cfg.m_dict {
                return Err(Error::Config(format!(
                    "CSV design has M = {}, experiment asked for M = {}",
                    d.m_dict(),
                    cfg.m_dict
                )));
            }
            let cols = (0..d.m_dict()).map(|j| d.col(j).to_vec()).collect();
            (cols, None)
        }
    };

    let (f_vals, truth_coeffs): (Vec<f64>, Option<Vec<f64>>) = match &cfg.truth {
        TruthKind::InDictionary { index } => (columns[*index].clone(), {
            let mut w = vec![0.0; cfg.m_dict];
            w[*index] = 1.0;
            Some(w)
        }),
        TruthKind::ConvexCombo { weights } | TruthKind::LinearCombo { weights } => {
            let mut w = weights.clone();
            w.resize(cfg.m_dict, 0.0);
            let mut f = vec![0.0; n];
            for (j, &wj) in w.iter().enumerate() {
                if wj != 0.0 {
                    for (fi, &v) in f.iter_mut().zip(&columns[j]) {
                        *fi += wj * v;
                    }
                }
            }
            (f, Some(w))
        }
        TruthKind::OutsideSpan {
            weights,
            residual_amplitude,
        } => {
            let mut w = weights.clone();
            w.resize(cfg.m_dict, 0.0);
            let mut f = vec![0.0; n];
            for (j, &wj) in w.iter().enumerate() {
                if wj != 0.0 {
                    for (fi, &v) in f.iter_mut().zip(&columns[j]) {
                        *fi += wj * v;
                    }
                }
            }
            let probe_key = rep_key.labeled("probe");
            let probe: Vec<f64> = (0..n)
                .map(|i| probe_key.uniform_in(i as u64, -1.0, 1.0))
                .collect();
            let resid = residual_against_span(&columns, &probe, n)?;
            let norm = empirical_norm_sq(&resid)?.sqrt();
            if norm < 1e-10 {
                return Err(Error::Config(
                    "dictionary spans the design space; no outside-span direction exists".into(),
                ));
            }
            for (fi, &r) in f.iter_mut().zip(&resid) {
                *fi += residual_amplitude * r / norm;
            }
            (f, None)
        }
    };

    // The declared bound covers both the dictionary and the truth.
    let dict_max = columns
        .iter()
        .flat_map(|c| c.iter())
        .fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let truth_max = f_vals.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let bound = dict_max.max(truth_max).max(f64::MIN_POSITIVE);
    let design = DesignMatrix::from_columns(columns, bound)?;

    let noise_key = rep_key.labeled("noise");
    let mut y = vec![0.0; n];
    noise_key.fill_gaussian(&mut y);
    for (yi, &f) in y.iter_mut().zip(&f_vals) {
        *yi = f + cfg.sigma * *yi;
    }
    let target = TargetVector::new(f_vals, y)?;
    design.check_target(&target)?;

    Ok(GeneratedInstance {
        design,
        target,
        evaluator,
        truth_coeffs,
    })
}

fn residual_against_span(columns: &[Vec<f64>], probe: &[f64], n: usize) -> Result<Vec<f64>> {
    let d = DesignMatrix::from_columns_inferred(columns.to_vec())?;
    let psi = gram_matrix(&d);
    let c = correlations(&d, probe);
    let eig = jacobi_eigen(&psi, d.m_dict(), 1e-12, 64);
    let (coeffs, _) = eig.pinv_solve(&c, 1e-10);
    let proj = d.combine_coeffs(&coeffs)?;
    Ok((0..n).map(|i| probe[i] - proj[i]).collect())
}

/// One replication's data as a pure function of `(seed, n, rep)`.
pub fn gen_data(
    cfg: &ExperimentConfig,
    n: usize,
    rep: usize,
) -> Result<(DesignMatrix, TargetVector)> {
    cfg.validate()?;
    if !cfg.n_grid.contains(&n) {
        return Err(Error::Config(format!(
            "n = {n} is not in the config's n_grid"
        )));
    }
    let inst = gen_instance(cfg, n, rep)?;
    Ok((inst.design, inst.target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::tests::base_config;

    #[test]
    fn zero_noise_gives_exact_observations() {
        let mut cfg = base_config();
        cfg.sigma = 0.0;
        let (_, t) = gen_data(&cfg, 64, 0).unwrap();
        assert_eq!(t.f_vals(), t.y_vals());
    }

    #[test]
    fn identical_seed_and_rep_reproduce_bitwise() {
        let cfg = base_config();
        let (d1, t1) = gen_data(&cfg, 64, 2).unwrap();
        let (d2, t2) = gen_data(&cfg, 64, 2).unwrap();
        assert_eq!(d1, d2);
        assert_eq!(t1, t2);
    }

    #[test]
    fn cosine_dictionary_is_empirically_orthonormal() {
        let mut cfg = base_config();
        cfg.m_dict = 8;
        cfg.n_grid = vec![256];
        cfg.truth = TruthKind::InDictionary { index: 0 };
        let (d, _) = gen_data(&cfg, 256, 0).unwrap();
        let g = d.gram();
        for j in 0..8 {
            for k in 0..8 {
                let want = if j == k { 1.0 } else { 0.0 };
                assert!(
                    (g.entry(j, k) - want).abs() < 1e-10,
                    "Gram({j},{k}) = {}",
                    g.entry(j, k)
                );
            }
        }
    }

    #[test]
    fn cosine_evaluator_reproduces_training_columns() {
        let mut cfg = base_config();
        cfg.m_dict = 5;
        cfg.n_grid = vec![64];
        let inst = gen_instance(&cfg, 64, 3).unwrap();
        let points = design_points(&cfg, 64, 3);
        let cols = inst.evaluator.as_ref().unwrap().eval_columns(&points);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                assert!(
                    (v - inst.design.entry(i, j)).abs() < 1e-10,
                    "column {j} row {i}"
                );
            }
        }
    }

    #[test]
    fn outside_span_truth_is_orthogonal_to_columns() {
        let mut cfg = base_config();
        cfg.truth = TruthKind::OutsideSpan {
            weights: vec![0.5],
            residual_amplitude: 0.3,
        };
        let inst = gen_instance(&cfg, 64, 1).unwrap();
        // Linear fit of the truth leaves exactly the planted residual.
        let r = crate::oracles::linear_oracle(&inst.design, inst.target.f_vals(), 1e-10).unwrap();
        assert!((r.risk - 0.09).abs() < 1e-8, "risk {}", r.risk);
    }

    #[test]
    fn csv_dictionary_round_trips_through_generation() {
        let dir = tempfile::tempdir().unwrap();
        let d = crate::testing::random_design(12, 3, 55, 1.0);
        let path = dir.path().join("dict.csv");
        std::fs::write(&path, crate::io::design_to_csv(&d)).unwrap();
        let mut cfg = base_config();
        cfg.n_grid = vec![12];
        cfg.m_dict = 3;
        cfg.dictionary = DictionaryKind::UserCsv {
            path: path.to_str().unwrap().to_owned(),
        };
        cfg.truth = TruthKind::InDictionary { index: 1 };
        let (gen_d, t) = gen_data(&cfg, 12, 0).unwrap();
        for j in 0..3 {
            assert_eq!(gen_d.col(j), d.col(j));
        }
        assert_eq!(t.f_vals(), d.col(1));
        // A size mismatch surfaces as a config error.
        cfg.n_grid = vec![16];
        assert!(gen_data(&cfg, 16, 0).is_err());
    }

    #[test]
    fn point_mass_and_blocks_have_expected_shapes() {
        let mut cfg = base_config();
        cfg.dictionary = DictionaryKind::PointMass;
        let (d, _) = gen_data(&cfg, 64, 0).unwrap();
        assert_eq!(d.entry(0, 0), 1.0);
        assert_eq!(d.entry(1, 0), 0.0);

        cfg.dictionary = DictionaryKind::IndicatorBlocks;
        cfg.truth = TruthKind::LinearCombo {
            weights: vec![1.0, 1.0, 1.0, 1.0],
        };
        let (d, t) = gen_data(&cfg, 64, 0).unwrap();
        // The blocks partition [0,1], so the all-ones combo is constant one.
        assert!(t.f_vals().iter().all(|&v| v == 1.0));
        assert_eq!(d.m_dict(), 4);
    }
}
