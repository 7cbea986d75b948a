//! The Monte Carlo replication engine.

use rayon::prelude::*;
use serde::Serialize;

use crate::design::DesignMatrix;
use crate::error::{Error, Result};
use crate::fit::{
    fit_hard_threshold, fit_soft_threshold, HardFitOptions, SoftFitOptions, SolverMode,
};
use crate::harness::config::ExperimentConfig;
use crate::harness::generate::{gen_instance, GeneratedInstance};
use crate::harness::rates::{psi_rate, RateKind};
use crate::norms::empirical_norm_sq;
use crate::oracles::{convex_oracle, linear_oracle, ms_oracle, ConvexSolverConfig};
use crate::penalty::PenaltySpec;
use crate::rng::StreamKey;

/// One replication's measured risks. A failed replication carries its error
/// message and NaN numerics; summaries skip it and report the count.
#[derive(Debug, Clone, Serialize)]
pub struct ReplicationRecord {
    pub n: usize,
    pub rep_index: usize,
    pub agg_risk: f64,
    pub oracle_ms: f64,
    pub oracle_c: f64,
    pub oracle_l: f64,
    pub excess_ms: f64,
    pub excess_c: f64,
    pub excess_l: f64,
    pub solver_mode: Option<SolverMode>,
    pub solver_iters: usize,
    pub converged: bool,
    pub error: Option<String>,
}

impl ReplicationRecord {
    fn failed(n: usize, rep_index: usize, message: String) -> Self {
        ReplicationRecord {
            n,
            rep_index,
            agg_risk: f64::NAN,
            oracle_ms: f64::NAN,
            oracle_c: f64::NAN,
            oracle_l: f64::NAN,
            excess_ms: f64::NAN,
            excess_c: f64::NAN,
            excess_l: f64::NAN,
            solver_mode: None,
            solver_iters: 0,
            converged: false,
            error: Some(message),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Mean excess risk over one oracle at one sample size.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub n: usize,
    pub m_dict: usize,
    pub kind: RateKind,
    pub mean_excess: f64,
    pub mc_se: f64,
    pub psi_rate: f64,
    pub ratio: f64,
    pub reps_used: usize,
    pub failed: usize,
}

/// Full outcome of a study: per-replication records (in `(n, rep)` order),
/// per-(n, oracle) summaries, and optional sensitivity summaries over a
/// grid of hard-threshold constants.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub records: Vec<ReplicationRecord>,
    pub summaries: Vec<SummaryRow>,
    pub k1_summaries: Vec<(f64, Vec<SummaryRow>)>,
}

/// Runs every replication of the configured study. Replications execute in
/// parallel but are pure functions of `(seed, n, rep)` and are assembled in
/// index order, so output is bit-identical regardless of thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let records = run_records(cfg, &cfg.penalty);
    let summaries = summarize(cfg, &records)?;

    let mut k1_summaries = Vec::new();
    if let Some(grid) = &cfg.k1_grid {
        for &k1 in grid {
            let penalty = match &cfg.penalty {
                PenaltySpec::HardThreshold {
                    use_max_mn,
                    sigma,
                    t_radius,
                    ..
                } => PenaltySpec::HardThreshold {
                    k1: Some(k1),
                    use_max_mn: *use_max_mn,
                    sigma: *sigma,
                    t_radius: *t_radius,
                },
                PenaltySpec::SoftThresholdL1 { .. } => unreachable!("validated"),
            };
            let recs = run_records(cfg, &penalty);
            k1_summaries.push((k1, summarize(cfg, &recs)?));
        }
    }

    Ok(ExperimentResult {
        config: cfg.clone(),
        records,
        summaries,
        k1_summaries,
    })
}

fn run_records(cfg: &ExperimentConfig, penalty: &PenaltySpec) -> Vec<ReplicationRecord> {
    let cells: Vec<(usize, usize)> = cfg
        .n_grid
        .iter()
        .flat_map(|&n| (0..cfg.reps).map(move |rep| (n, rep)))
        .collect();
    cells
        .par_iter()
        .map(|&(n, rep)| match run_one(cfg, penalty, n, rep) {
            Ok(record) => record,
            Err(e) => ReplicationRecord::failed(n, rep, e.to_string()),
        })
        .collect()
}

fn run_one(
    cfg: &ExperimentConfig,
    penalty: &PenaltySpec,
    n: usize,
    rep: usize,
) -> Result<ReplicationRecord> {
    let inst = gen_instance(cfg, n, rep)?;
    let fit = match penalty {
        PenaltySpec::HardThreshold { .. } => fit_hard_threshold(
            &inst.design,
            inst.target.y_vals(),
            penalty,
            &HardFitOptions {
                budget: cfg.solver.budget,
                allow_greedy: cfg.solver.allow_greedy,
            },
        )?,
        PenaltySpec::SoftThresholdL1 { .. } => fit_soft_threshold(
            &inst.design,
            inst.target.y_vals(),
            penalty,
            &SoftFitOptions {
                tol: cfg.solver.cd_tol,
                max_iters: cfg.solver.cd_max_iters,
            },
        )?,
    };

    // Risk basis: the training design, or a fresh noise-free hold-out.
    let (eval_d, f_eval): (DesignMatrix, Vec<f64>) = if cfg.holdout_size == 0 {
        (inst.design.clone(), inst.target.f_vals().to_vec())
    } else {
        holdout_basis(cfg, &inst, rep)?
    };

    let fitted = eval_d.combine(&fit.weights)?;
    let diff: Vec<f64> = fitted.iter().zip(&f_eval).map(|(a, b)| a - b).collect();
    let agg_risk = empirical_norm_sq(&diff)?;

    let ms = ms_oracle(&eval_d, &f_eval)?;
    let cvx = convex_oracle(
        &eval_d,
        &f_eval,
        &ConvexSolverConfig {
            max_iters: cfg.solver.max_iters,
            gap_tol: cfg.solver.gap_tol,
        },
    )?;
    let lin = linear_oracle(&eval_d, &f_eval, cfg.solver.pinv_tol)?;

    Ok(ReplicationRecord {
        n,
        rep_index: rep,
        agg_risk,
        oracle_ms: ms.risk,
        oracle_c: cvx.risk,
        oracle_l: lin.risk,
        excess_ms: agg_risk - ms.risk,
        excess_c: agg_risk - cvx.risk,
        excess_l: agg_risk - lin.risk,
        solver_mode: Some(fit.solver_meta.mode),
        solver_iters: fit.solver_meta.iters,
        converged: fit.solver_meta.converged,
        error: None,
    })
}

fn holdout_basis(
    cfg: &ExperimentConfig,
    inst: &GeneratedInstance,
    rep: usize,
) -> Result<(DesignMatrix, Vec<f64>)> {
    let evaluator = inst.evaluator.as_ref().ok_or_else(|| {
        Error::Config("holdout evaluation needs a function-backed dictionary".into())
    })?;
    let coeffs = inst.truth_coeffs.as_ref().ok_or_else(|| {
        Error::Config("holdout evaluation needs a truth inside the dictionary span".into())
    })?;
    let key = StreamKey::new(cfg.seed)
        .child(rep as u64)
        .labeled("holdout");
    let points: Vec<f64> = (0..cfg.holdout_size)
        .map(|i| key.uniform(i as u64))
        .collect();
    let cols = evaluator.eval_columns(&points);
    let h = DesignMatrix::from_columns_inferred(cols)?;
    let f_eval = h.combine_coeffs(coeffs)?;
    Ok((h, f_eval))
}

fn summarize(cfg: &ExperimentConfig, records: &[ReplicationRecord]) -> Result<Vec<SummaryRow>> {
    let mut rows = Vec::new();
    for &n in &cfg.n_grid {
        for kind in RateKind::ALL {
            let excesses: Vec<f64> = records
                .iter()
                .filter(|r| r.n == n && r.is_ok())
                .map(|r| match kind {
                    RateKind::Ms => r.excess_ms,
                    RateKind::C => r.excess_c,
                    RateKind::L => r.excess_l,
                })
                .collect();
            let failed = records.iter().filter(|r| r.n == n && !r.is_ok()).count();
            let used = excesses.len();
            let (mean, se) = if used == 0 {
                (f64::NAN, f64::NAN)
            } else {
                let mean = excesses.iter().sum::<f64>() / used as f64;
                let se = if used > 1 {
                    let var = excesses
                        .iter()
                        .map(|x| (x - mean) * (x - mean))
                        .sum::<f64>()
                        / (used as f64 - 1.0);
                    (var / used as f64).sqrt()
                } else {
                    0.0
                };
                (mean, se)
            };
            let psi = psi_rate(n, cfg.m_dict, kind, cfg.rate_variant)?;
            rows.push(SummaryRow {
                n,
                m_dict: cfg.m_dict,
                kind,
                mean_excess: mean,
                mc_se: se,
                psi_rate: psi,
                ratio: mean / psi,
                reps_used: used,
                failed,
            });
        }
    }
    Ok(rows)
}
