//! Monte Carlo check of the noise-correlation event behind the weighted-L1
//! analysis: with probability close to one, every column's empirical
//! correlation with the noise stays below half its penalty weight.

use rayon::prelude::*;

use crate::design::DesignMatrix;
use crate::error::{Error, Result};
use crate::rng::StreamKey;

/// Measured failure frequency of the correlation event against its
/// theoretical bound `1 / (M n sqrt(pi (2 log M + log n)))`.
#[derive(Debug, Clone)]
pub struct EventAReport {
    pub failures: usize,
    pub reps: usize,
    pub failure_freq: f64,
    pub bound: f64,
    pub mc_se: f64,
}

/// Draws `reps` independent noise vectors, computes every column's noise
/// correlation `v_j = (1/n) sum_i f_j(x_i) w_i`, and counts how often some
/// column violates `2 |v_j| <= r_j`, where `r_j` is the weighted-L1 penalty
/// weight at `sigma` with the given multiplier. The reported bound is the
/// theoretical one for the default multiplier `2 sqrt(2)`; larger
/// multipliers only lower the true failure probability.
pub fn event_a_diagnostic(
    d: &DesignMatrix,
    sigma: f64,
    multiplier: f64,
    reps: usize,
    seed: u64,
) -> Result<EventAReport> {
    if reps == 0 {
        return Err(Error::InvalidInput("reps must be >= 1".into()));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "sigma must be a nonnegative real, got {sigma}"
        )));
    }
    if !(multiplier.is_finite() && multiplier > 0.0) {
        return Err(Error::InvalidInput(format!(
            "multiplier must be positive, got {multiplier}"
        )));
    }
    let n = d.n();
    let m = d.m_dict();
    let nf = n as f64;
    let mf = m as f64;
    let log_term = 2.0 * mf.ln() + nf.ln();

    // Penalty weights, evaluated directly so sigma = 0 is allowed here.
    let scale = multiplier * sigma * (log_term / nf).sqrt();
    let r: Vec<f64> = (0..m)
        .map(|j| {
            let norm_sq = d.col(j).iter().map(|v| v * v).sum::<f64>() / nf;
            scale * norm_sq.sqrt()
        })
        .collect();

    let key = StreamKey::new(seed).labeled("event-a");
    let failures: usize = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let rk = key.child(rep as u64);
            let mut w = vec![0.0; n];
            rk.fill_gaussian(&mut w);
            for v in w.iter_mut() {
                *v *= sigma;
            }
            let violated = (0..m).any(|j| {
                let vj = d.col(j).iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / nf;
                2.0 * vj.abs() > r[j]
            });
            usize::from(violated)
        })
        .sum();

    let freq = failures as f64 / reps as f64;
    let bound = 1.0 / (mf * nf * (std::f64::consts::PI * log_term).sqrt());
    Ok(EventAReport {
        failures,
        reps,
        failure_freq: freq,
        bound,
        mc_se: (freq * (1.0 - freq) / reps as f64).sqrt(),
    })
}
