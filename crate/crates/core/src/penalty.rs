//! The two penalties driving the aggregation estimators: a sparsity-counting
//! penalty (hard thresholding) and a weighted L1 penalty with data-dependent
//! per-coordinate weights (soft thresholding).

use serde::{Deserialize, Serialize};

use crate::design::DesignMatrix;
use crate::error::{Error, Result};
use crate::weights::WeightVector;

/// Default multiplier in the L1 penalty weights, `2 * sqrt(2)`. Raising it
/// tightens the noise-correlation event the analysis rests on; it is exposed
/// as a knob with no claim about the right enlarged value.
pub fn default_l1_multiplier() -> f64 {
    2.0 * std::f64::consts::SQRT_2
}

/// Which penalized least-squares estimator to fit, with all constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PenaltySpec {
    /// `k1 * (M(lambda)/n) * log(1 + D / (M(lambda) v 1))` with `D = M`, or
    /// `D = M v n` when `use_max_mn` is set.
    HardThreshold {
        /// Penalty constant; `None` resolves to the default `2 sigma^2`.
        #[serde(default)]
        k1: Option<f64>,
        /// Use `M v n` instead of `M` under the logarithm.
        #[serde(default)]
        use_max_mn: bool,
        /// Noise standard deviation (assumed known).
        sigma: f64,
        /// Optional L1-ball radius; fits are radially rescaled onto the ball.
        #[serde(default)]
        t_radius: Option<f64>,
    },
    /// `sum_j r_j |lambda_j|` with `r_j = mult * sigma * ||f_j||_n *
    /// sqrt((2 log M + log n) / n)`.
    SoftThresholdL1 {
        /// Noise standard deviation (assumed known).
        sigma: f64,
        /// Optional L2-ball radius; fits use projected proximal steps.
        #[serde(default)]
        t_radius: Option<f64>,
        /// Multiplier in the weights; `None` resolves to `2 sqrt(2)`.
        #[serde(default)]
        multiplier: Option<f64>,
    },
}

impl PenaltySpec {
    /// Unconstrained hard-threshold spec with the default `k1 = 2 sigma^2`.
    pub fn hard(sigma: f64) -> Self {
        PenaltySpec::HardThreshold {
            k1: None,
            use_max_mn: false,
            sigma,
            t_radius: None,
        }
    }

    /// Unconstrained soft-threshold spec with the default multiplier.
    pub fn soft(sigma: f64) -> Self {
        PenaltySpec::SoftThresholdL1 {
            sigma,
            t_radius: None,
            multiplier: None,
        }
    }

    pub fn sigma(&self) -> f64 {
        match self {
            PenaltySpec::HardThreshold { sigma, .. } => *sigma,
            PenaltySpec::SoftThresholdL1 { sigma, .. } => *sigma,
        }
    }

    pub fn t_radius(&self) -> Option<f64> {
        match self {
            PenaltySpec::HardThreshold { t_radius, .. } => *t_radius,
            PenaltySpec::SoftThresholdL1 { t_radius, .. } => *t_radius,
        }
    }

    /// The hard-threshold constant, defaulting to `2 sigma^2`.
    pub fn k1_resolved(&self) -> Option<f64> {
        match self {
            PenaltySpec::HardThreshold { k1, sigma, .. } => Some(k1.unwrap_or(2.0 * sigma * sigma)),
            PenaltySpec::SoftThresholdL1 { .. } => None,
        }
    }

    /// The L1-weight multiplier, defaulting to `2 sqrt(2)`.
    pub fn multiplier_resolved(&self) -> Option<f64> {
        match self {
            PenaltySpec::HardThreshold { .. } => None,
            PenaltySpec::SoftThresholdL1 { multiplier, .. } => {
                Some(multiplier.unwrap_or_else(default_l1_multiplier))
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PenaltySpec::HardThreshold {
                k1,
                sigma,
                t_radius,
                ..
            } => {
                if let Some(k1) = k1 {
                    if !(k1.is_finite() && *k1 > 0.0) {
                        return Err(Error::Config(format!("k1 must be positive, got {k1}")));
                    }
                } else if !(sigma.is_finite() && *sigma > 0.0) {
                    return Err(Error::Config(format!(
                        "defaulting k1 = 2 sigma^2 needs sigma > 0, got {sigma}"
                    )));
                }
                if !(sigma.is_finite() && *sigma >= 0.0) {
                    return Err(Error::Config(format!("sigma must be >= 0, got {sigma}")));
                }
                check_radius(t_radius)
            }
            PenaltySpec::SoftThresholdL1 {
                sigma,
                t_radius,
                multiplier,
            } => {
                if !(sigma.is_finite() && *sigma > 0.0) {
                    return Err(Error::Config(format!(
                        "sigma must be positive, got {sigma}"
                    )));
                }
                if let Some(m) = multiplier {
                    if !(m.is_finite() && *m > 0.0) {
                        return Err(Error::Config(format!(
                            "multiplier must be positive, got {m}"
                        )));
                    }
                }
                check_radius(t_radius)
            }
        }
    }
}

fn check_radius(t: &Option<f64>) -> Result<()> {
    if let Some(t) = t {
        if !(t.is_finite() && *t >= 0.0) {
            return Err(Error::Config(format!(
                "t_radius must be a nonnegative real, got {t}"
            )));
        }
    }
    Ok(())
}

/// The sparsity-counting penalty
/// `k1 * (sparsity / n) * log(1 + D / (sparsity v 1))`,
/// with `D = m_dict` or `m_dict v n`. Zero sparsity costs zero.
pub fn penalty_hard(
    sparsity: usize,
    m_dict: usize,
    n: usize,
    k1: f64,
    use_max_mn: bool,
) -> Result<f64> {
    if sparsity > m_dict {
        return Err(Error::InvalidInput(format!(
            "sparsity {sparsity} exceeds dictionary size {m_dict}"
        )));
    }
    if sparsity == 0 {
        return Ok(0.0);
    }
    let dim = if use_max_mn { m_dict.max(n) } else { m_dict };
    let ratio = dim as f64 / sparsity as f64;
    Ok(k1 * (sparsity as f64 / n as f64) * ratio.ln_1p())
}

/// Data-dependent L1 penalty weights
/// `r_j = multiplier * sigma * ||f_j||_n * sqrt((2 log M + log n) / n)`.
/// Zero columns get weight zero (the coordinate is degenerate and solvers
/// freeze it at zero).
pub fn l1_weights_with_multiplier(
    d: &DesignMatrix,
    sigma: f64,
    multiplier: f64,
) -> Result<Vec<f64>> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidInput(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    let n = d.n() as f64;
    let m = d.m_dict() as f64;
    let scale = multiplier * sigma * ((2.0 * m.ln() + n.ln()) / n).sqrt();
    let nf = n;
    Ok((0..d.m_dict())
        .map(|j| {
            let norm_sq = d.col(j).iter().map(|v| v * v).sum::<f64>() / nf;
            scale * norm_sq.sqrt()
        })
        .collect())
}

/// [`l1_weights_with_multiplier`] at the default `2 sqrt(2)`.
pub fn l1_weights(d: &DesignMatrix, sigma: f64) -> Result<Vec<f64>> {
    l1_weights_with_multiplier(d, sigma, default_l1_multiplier())
}

/// Plug-in noise estimate from full-model residuals:
/// `sigma_hat^2 = n * rss(full least squares) / (n - rank)`.
///
/// Offered for callers who cannot supply the noise level; nothing in this
/// crate uses it implicitly. Fails when the full model interpolates
/// (`rank >= n` leaves no residual degrees of freedom).
pub fn estimate_sigma(d: &DesignMatrix, y: &[f64]) -> Result<f64> {
    if y.len() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "observations of length {} against design with n = {}",
            y.len(),
            d.n()
        )));
    }
    let m = d.m_dict();
    let psi = crate::gram::gram_matrix(d);
    let c = crate::gram::correlations(d, y);
    let eig = crate::linalg::jacobi_eigen(&psi, m, 1e-12, 64);
    let (coeffs, rank) = eig.pinv_solve(&c, 1e-10);
    if rank >= d.n() {
        return Err(Error::InvalidInput(format!(
            "cannot estimate noise: the dictionary interpolates (rank {rank} >= n {})",
            d.n()
        )));
    }
    let fitted = d.combine_coeffs(&coeffs)?;
    let rss: f64 = y.iter().zip(&fitted).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok((rss / (d.n() - rank) as f64).sqrt())
}

/// `sign(z) * max(|z| - r, 0)`.
pub fn soft_threshold_scalar(z: f64, r: f64) -> f64 {
    debug_assert!(r >= 0.0, "threshold must be nonnegative, got {r}");
    if z > r {
        z - r
    } else if z < -r {
        z + r
    } else {
        0.0
    }
}

/// The penalized least-squares objective `rss(lambda) + pen(lambda)` for
/// either penalty; the value the fitting routines minimize.
pub fn penalized_objective(
    d: &DesignMatrix,
    y: &[f64],
    w: &WeightVector,
    spec: &PenaltySpec,
) -> Result<f64> {
    spec.validate()?;
    let rss = d.rss(y, w)?;
    let pen = match spec {
        PenaltySpec::HardThreshold { use_max_mn, .. } => penalty_hard(
            w.sparsity(),
            d.m_dict(),
            d.n(),
            spec.k1_resolved().unwrap(),
            *use_max_mn,
        )?,
        PenaltySpec::SoftThresholdL1 { sigma, .. } => {
            let r = l1_weights_with_multiplier(d, *sigma, spec.multiplier_resolved().unwrap())?;
            w.support()
                .iter()
                .map(|&j| r[j] * w.coeffs()[j].abs())
                .sum()
        }
    };
    Ok(rss + pen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::empirical_norm_sq;
    use crate::testing::orthonormal_design;

    #[test]
    fn zero_sparsity_costs_nothing() {
        assert_eq!(penalty_hard(0, 10, 50, 3.0, false).unwrap(), 0.0);
    }

    #[test]
    fn full_support_value() {
        let m = 6;
        let n = 40;
        let got = penalty_hard(m, m, n, 1.5, false).unwrap();
        let want = 1.5 * (m as f64 / n as f64) * std::f64::consts::LN_2;
        assert!((got - want).abs() < 1e-15);
    }

    #[test]
    fn hand_value() {
        let got = penalty_hard(1, 4, 100, 1.0, false).unwrap();
        assert!((got - 0.016094379124341).abs() < 1e-14);
    }

    #[test]
    fn max_mn_variant_grows_with_n() {
        let small = penalty_hard(2, 5, 100, 1.0, false).unwrap();
        let large = penalty_hard(2, 5, 100, 1.0, true).unwrap();
        assert!(large > small);
        // With n <= M the two coincide.
        assert_eq!(
            penalty_hard(2, 5, 4, 1.0, true).unwrap(),
            penalty_hard(2, 5, 4, 1.0, false).unwrap()
        );
    }

    #[test]
    fn sparsity_beyond_dictionary_rejected() {
        assert!(penalty_hard(5, 4, 10, 1.0, false).is_err());
    }

    #[test]
    fn l1_weight_hand_value() {
        // Unit-norm columns, n = 100, M = 10.
        let d = orthonormal_design(100, 10);
        let r = l1_weights(&d, 1.0).unwrap();
        for rj in &r {
            assert!((rj - 0.8583864105157389).abs() < 1e-12, "got {rj}");
        }
        // Halving sigma halves every weight.
        let r_half = l1_weights(&d, 0.5).unwrap();
        for (a, b) in r.iter().zip(&r_half) {
            assert!((b - 0.5 * a).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_column_gets_zero_weight() {
        let d =
            crate::design::DesignMatrix::from_columns(vec![vec![1.0, -1.0], vec![0.0, 0.0]], 1.0)
                .unwrap();
        let r = l1_weights(&d, 1.0).unwrap();
        assert!(r[0] > 0.0);
        assert_eq!(r[1], 0.0);
    }

    #[test]
    fn soft_threshold_cases() {
        assert!((soft_threshold_scalar(0.5, 0.2) - 0.3).abs() < 1e-16);
        assert_eq!(soft_threshold_scalar(-0.1, 0.2), 0.0);
        assert_eq!(soft_threshold_scalar(1.25, 0.0), 1.25);
        assert!((soft_threshold_scalar(-0.5, 0.2) - (-0.3)).abs() < 1e-16);
    }

    #[test]
    fn objective_at_zero_weights_is_the_target_norm() {
        let d = orthonormal_design(20, 4);
        let y = crate::testing::random_vector(20, 3, 1.0);
        let w = WeightVector::zeros(4);
        for spec in [PenaltySpec::hard(1.0), PenaltySpec::soft(1.0)] {
            let obj = penalized_objective(&d, &y, &w, &spec).unwrap();
            assert_eq!(obj, empirical_norm_sq(&y).unwrap());
        }
    }

    #[test]
    fn objective_decomposes_for_full_support() {
        let d = orthonormal_design(20, 4);
        let y = crate::testing::random_vector(20, 5, 1.0);
        let w = WeightVector::from_coeffs(vec![0.1, -0.2, 0.3, 0.4]).unwrap();
        let spec = PenaltySpec::HardThreshold {
            k1: Some(1.5),
            use_max_mn: false,
            sigma: 1.0,
            t_radius: None,
        };
        let got = penalized_objective(&d, &y, &w, &spec).unwrap();
        let want = d.rss(&y, &w).unwrap() + 1.5 * (4.0 / 20.0) * std::f64::consts::LN_2;
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn objective_decomposes_for_unit_vertex() {
        let d = orthonormal_design(20, 4);
        let y = crate::testing::random_vector(20, 4, 1.0);
        let w = WeightVector::vertex(4, 0).unwrap();
        let spec = PenaltySpec::soft(1.0);
        let got = penalized_objective(&d, &y, &w, &spec).unwrap();
        let r = l1_weights(&d, 1.0).unwrap();
        let want = d.rss(&y, &w).unwrap() + r[0];
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn sigma_estimate_recovers_the_truth_at_scale() {
        let d = orthonormal_design(4000, 5);
        let coeffs = [0.5, -1.0, 0.25, 0.0, 2.0];
        let f = d.combine_coeffs(&coeffs).unwrap();
        let noise_key = crate::rng::StreamKey::new(31).labeled("sigma-est");
        let sigma = 0.7;
        let y: Vec<f64> = f
            .iter()
            .enumerate()
            .map(|(i, &v)| v + sigma * noise_key.gaussian(i as u64))
            .collect();
        let est = estimate_sigma(&d, &y).unwrap();
        assert!((est - sigma).abs() < 0.03, "estimate {est}");
        // Interpolating designs carry no residual information.
        let tiny = crate::testing::random_design(3, 3, 8, 1.0);
        assert!(estimate_sigma(&tiny, &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = PenaltySpec::HardThreshold {
            k1: Some(2.0),
            use_max_mn: true,
            sigma: 1.0,
            t_radius: Some(3.0),
        };
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("hard-threshold"));
        let back: PenaltySpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let soft: PenaltySpec =
            serde_json::from_str(r#"{"kind":"soft-threshold-l1","sigma":0.5}"#).unwrap();
        assert_eq!(soft.multiplier_resolved().unwrap(), default_l1_multiplier());
    }
}
