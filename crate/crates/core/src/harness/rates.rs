//! Theoretical aggregation rate curves and log-log slope diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Aggregation flavor a rate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateKind {
    #[serde(rename = "MS")]
    Ms,
    #[serde(rename = "C")]
    C,
    #[serde(rename = "L")]
    L,
}

impl RateKind {
    pub const ALL: [RateKind; 3] = [RateKind::Ms, RateKind::C, RateKind::L];

    pub fn label(self) -> &'static str {
        match self {
            RateKind::Ms => "MS",
            RateKind::C => "C",
            RateKind::L => "L",
        }
    }
}

/// Rate family: the fixed-design empirical-norm rates (`base`), the
/// random-design variants with their extra logarithmic factors (`tilde`),
/// and the weighted-L1 variants (`bar`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RateVariant {
    #[default]
    Base,
    Tilde,
    Bar,
}

impl RateVariant {
    pub const ALL: [RateVariant; 3] = [RateVariant::Base, RateVariant::Tilde, RateVariant::Bar];

    pub fn label(self) -> &'static str {
        match self {
            RateVariant::Base => "base",
            RateVariant::Tilde => "tilde",
            RateVariant::Bar => "bar",
        }
    }
}

/// The rate `psi_{n,M}` a near-optimal aggregate's excess risk should track.
///
/// Base: `log(M)/n` for MS, `M/n` for L, and for C either `M/n` (when
/// `M <= sqrt(n)`, boundary included) or `sqrt(log(1 + M/sqrt(n)) / n)`.
/// The tilde and bar variants replace `log M` by `log(M v n)` factors and,
/// for C above the boundary, adjust the logarithm's argument.
pub fn psi_rate(n: usize, m_dict: usize, kind: RateKind, variant: RateVariant) -> Result<f64> {
    if n == 0 || m_dict < 2 {
        return Err(Error::Domain(format!(
            "need n >= 1 and M >= 2, got n = {n}, M = {m_dict}"
        )));
    }
    let nf = n as f64;
    let mf = m_dict as f64;
    let m_or_n = m_dict.max(n) as f64;
    let small_m = (m_dict as u128) * (m_dict as u128) <= n as u128;
    let value = match (kind, variant) {
        (RateKind::Ms, RateVariant::Base) => mf.ln() / nf,
        (RateKind::Ms, _) => m_or_n.ln() / nf,
        (RateKind::L, RateVariant::Base) => mf / nf,
        (RateKind::L, _) => mf * m_or_n.ln() / nf,
        (RateKind::C, RateVariant::Base) => {
            if small_m {
                mf / nf
            } else {
                ((mf / nf.sqrt()).ln_1p() / nf).sqrt()
            }
        }
        (RateKind::C, RateVariant::Tilde) => {
            if small_m {
                mf * nf.ln() / nf
            } else {
                ((m_or_n / nf.sqrt()).ln_1p() / nf).sqrt()
            }
        }
        (RateKind::C, RateVariant::Bar) => {
            if small_m {
                mf * nf.ln() / nf
            } else {
                (mf.ln() / nf).sqrt()
            }
        }
    };
    Ok(value)
}

/// Ordinary least-squares slope of `log(mean)` against `log(n)`.
#[derive(Debug, Clone)]
pub struct SlopeFit {
    pub slope: f64,
    /// 1.96-sigma halfwidth from the Monte Carlo standard errors of the
    /// means, propagated through the logarithm.
    pub halfwidth: f64,
    /// Indices of grid points excluded for nonpositive means.
    pub excluded: Vec<usize>,
    pub points_used: usize,
}

/// Fits the log-log slope through `(n, mean, se)` points. Points with
/// nonpositive means are excluded and flagged; at least three distinct
/// usable sample sizes are required.
pub fn rate_slope(points: &[(usize, f64, f64)]) -> Result<SlopeFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut vars = Vec::new();
    let mut excluded = Vec::new();
    for (i, &(n, mean, se)) in points.iter().enumerate() {
        if n == 0 {
            return Err(Error::InvalidInput("sample size zero in slope fit".into()));
        }
        if mean <= 0.0 {
            excluded.push(i);
            continue;
        }
        xs.push((n as f64).ln());
        ys.push(mean.ln());
        vars.push((se / mean) * (se / mean));
    }
    let mut distinct = xs.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "slope fit needs at least 3 distinct usable sample sizes, got {}",
            distinct.len()
        )));
    }
    let k = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / k;
    let ybar = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let var_slope: f64 = xs
        .iter()
        .zip(&vars)
        .map(|(x, v)| {
            let w = (x - xbar) / sxx;
            w * w * v
        })
        .sum();
    Ok(SlopeFit {
        slope,
        halfwidth: 1.96 * var_slope.sqrt(),
        excluded,
        points_used: xs.len(),
    })
}
