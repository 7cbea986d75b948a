//! Generators for provably hard regression instances: disjoint-block
//! dictionaries for mimicking the best single element, and point-mass
//! dictionaries with coded binary truth sets for linear aggregation.
//!
//! Signal amplitudes are calibrated so that the largest pairwise divergence
//! between truth distributions meets the reduction budget
//! `(1/16) log(card(truth_set))` with equality where possible.

use serde::Serialize;

use crate::design::DesignMatrix;
use crate::error::{Error, Result};
use crate::hardness::bounds::kl_gaussian_fixed_design;
use crate::hardness::code::{default_code_distance, vg_code, BinaryCode};

/// Default cap on the truth-set cardinality of the coded instances.
pub const DEFAULT_TRUTH_BUDGET: usize = 65_536;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HardKind {
    /// Disjoint indicator blocks; truths are the dictionary columns.
    MsHard,
    /// Point-mass columns; truths are coded binary combinations.
    LHard,
}

/// A finite family of candidate truths over a fixed design, built so that
/// any two truths are well separated while their sampling distributions stay
/// within the divergence budget.
#[derive(Debug, Clone)]
pub struct HardInstance {
    pub kind: HardKind,
    pub design: DesignMatrix,
    /// Candidate truths, each a length-n vector of values at design points.
    pub truth_set: Vec<Vec<f64>>,
    /// Signal amplitude.
    pub gamma: f64,
    /// Noise s.d. the calibration assumed.
    pub sigma: f64,
    /// Divergence budget `(1/16) log(card(truth_set))`.
    pub kl_budget: f64,
    /// Largest pairwise divergence achieved (always <= `kl_budget`).
    pub kl_max: f64,
    /// Smallest pairwise squared separation achieved.
    pub separation_min: f64,
    /// Block size, for the disjoint-block construction.
    pub block_size: Option<usize>,
    /// Binary code behind the truth set, for the coded construction.
    pub code: Option<BinaryCode>,
}

impl HardInstance {
    pub fn card(&self) -> usize {
        self.truth_set.len()
    }

    /// JSON sidecar describing the instance (the design itself is exported
    /// as CSV separately).
    pub fn sidecar_json(&self) -> serde_json::Value {
        let code_words: Option<Vec<String>> = self
            .code
            .as_ref()
            .map(|c| (0..c.card()).map(|i| c.word_string(i)).collect());
        serde_json::json!({
            "kind": self.kind,
            "gamma": self.gamma,
            "sigma": self.sigma,
            "n": self.design.n(),
            "m_dict": self.design.m_dict(),
            "card": self.card(),
            "block_size": self.block_size,
            "code_words": code_words,
            "kl_budget": self.kl_budget,
            "kl_max": self.kl_max,
            "separation_min": self.separation_min,
        })
    }
}

/// Hard instance for single-element aggregation: `M` disjoint index blocks
/// of size `floor(log M) v 1`, each dictionary column equal to `gamma` on
/// its block, with the columns themselves as the truth set.
///
/// `gamma = sigma / 4`, lowered if needed (only at `M = 2`) to keep the
/// pairwise divergence within the budget. All pairwise separations equal
/// `2 gamma^2 block / n` exactly. Requires `M * block <= n`.
pub fn make_ms_hard(n: usize, m_dict: usize, sigma: f64) -> Result<HardInstance> {
    if m_dict < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 dictionary functions, got {m_dict}"
        )));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidInput(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    let block = ((m_dict as f64).ln().floor() as usize).max(1);
    if m_dict * block > n {
        return Err(Error::Capacity(format!(
            "disjoint blocks need M * (floor(log M) v 1) <= n: {m_dict} * {block} > {n}"
        )));
    }
    let budget = (m_dict as f64).ln() / 16.0;
    // Largest amplitude the divergence budget permits; sigma/4 except at M=2.
    let gamma = (sigma / 4.0).min(sigma * (budget / block as f64).sqrt());

    let mut cols = vec![vec![0.0; n]; m_dict];
    for (j, col) in cols.iter_mut().enumerate() {
        for v in &mut col[j * block..(j + 1) * block] {
            *v = gamma;
        }
    }
    let design = DesignMatrix::from_columns(cols.clone(), gamma)?;
    let truth_set = cols;

    let separation = 2.0 * gamma * gamma * block as f64 / n as f64;
    let kl_max = kl_gaussian_fixed_design(&truth_set[0], &truth_set[1], n, sigma)?;
    debug_assert!(kl_max <= budget * (1.0 + 1e-12));

    Ok(HardInstance {
        kind: HardKind::MsHard,
        design,
        truth_set,
        gamma,
        sigma,
        kl_budget: budget,
        kl_max,
        separation_min: separation,
        block_size: Some(block),
        code: None,
    })
}

/// Hard instance for linear aggregation: point-mass columns
/// `gamma * 1{x = x_j}` at the first `M` design indices.
///
/// For `M >= 8` the truth set consists of the coded binary combinations of
/// the columns, with `gamma = sigma sqrt(log(card) / (8 d_max))` where
/// `d_max` is the largest pairwise Hamming distance observed, which meets
/// the divergence budget with equality. For `2 <= M < 8` the two-point truth
/// set `{0, gamma n^{-1/2} 1{x = x_1}}` is used. Requires `M <= n`.
pub fn make_l_hard(
    n: usize,
    m_dict: usize,
    sigma: f64,
    truth_budget: usize,
) -> Result<HardInstance> {
    if m_dict < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 dictionary functions, got {m_dict}"
        )));
    }
    if m_dict > n {
        return Err(Error::Capacity(format!(
            "point-mass columns need M <= n: {m_dict} > {n}"
        )));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidInput(format!(
            "sigma must be positive, got {sigma}"
        )));
    }

    let (gamma, truths_spec, code): (f64, TruthSpec, Option<(BinaryCode, usize)>) = if m_dict >= 8 {
        let code = vg_code(m_dict, default_code_distance(m_dict))?;
        if code.card() > truth_budget {
            return Err(Error::BudgetExceeded {
                count: code.card() as u128,
                budget: truth_budget as u128,
            });
        }
        let card = code.card() as f64;
        let d_max = code.max_distance();
        let gamma = sigma * (card.ln() / (8.0 * d_max as f64)).sqrt();
        (gamma, TruthSpec::Coded, Some((code, d_max)))
    } else {
        // Two-point fallback; the budget is log 2 / 16.
        let gamma = sigma * (n as f64 * std::f64::consts::LN_2 / 8.0).sqrt();
        (gamma, TruthSpec::TwoPoint, None)
    };

    let mut cols = vec![vec![0.0; n]; m_dict];
    for (j, col) in cols.iter_mut().enumerate() {
        col[j] = gamma;
    }
    let design = DesignMatrix::from_columns(cols, gamma)?;

    let truth_set: Vec<Vec<f64>> = match truths_spec {
        TruthSpec::Coded => {
            let (code, _) = code.as_ref().unwrap();
            (0..code.card())
                .map(|i| {
                    let mut g = vec![0.0; n];
                    for (j, bit) in code.word_bits(i).iter().enumerate() {
                        if *bit == 1 {
                            g[j] = gamma;
                        }
                    }
                    g
                })
                .collect()
        }
        TruthSpec::TwoPoint => {
            let mut g = vec![0.0; n];
            g[0] = gamma / (n as f64).sqrt();
            vec![vec![0.0; n], g]
        }
    };

    let card = truth_set.len();
    let budget = (card as f64).ln() / 16.0;
    let nf = n as f64;
    // Disjoint unit-index supports make both quantities exact functions of
    // the Hamming distances: separation gamma^2 d / n, divergence
    // gamma^2 d / (2 sigma^2).
    let (kl_max, separation_min) = match &code {
        Some((code, d_max)) => {
            let d_min = code.min_distance as f64;
            (
                gamma * gamma * *d_max as f64 / (2.0 * sigma * sigma),
                gamma * gamma * d_min / nf,
            )
        }
        None => (
            gamma * gamma / (2.0 * nf * sigma * sigma),
            gamma * gamma / (nf * nf),
        ),
    };
    debug_assert!(kl_max <= budget * (1.0 + 1e-12));

    Ok(HardInstance {
        kind: HardKind::LHard,
        design,
        truth_set,
        gamma,
        sigma,
        kl_budget: budget,
        kl_max,
        separation_min,
        block_size: None,
        code: code.map(|(c, _)| c),
    })
}

enum TruthSpec {
    Coded,
    TwoPoint,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::empirical_norm_sq;

    #[test]
    fn block_instance_hand_values() {
        let inst = make_ms_hard(16, 4, 1.0).unwrap();
        assert_eq!(inst.block_size, Some(1));
        assert_eq!(inst.gamma, 0.25);
        assert_eq!(inst.separation_min, 0.0078125);
        // At gamma = sigma/4 the divergence is exactly block/16.
        assert_eq!(inst.kl_max, 0.0625);
        // Separations are exactly equal across all pairs.
        for a in 0..4 {
            for b in (a + 1)..4 {
                let diff: Vec<f64> = inst.truth_set[a]
                    .iter()
                    .zip(&inst.truth_set[b])
                    .map(|(x, y)| x - y)
                    .collect();
                assert_eq!(empirical_norm_sq(&diff).unwrap(), inst.separation_min);
            }
        }
    }

    #[test]
    fn capacity_refusal() {
        // floor(log 8) = 2 blocks of size 2: 16 > 8.
        assert!(matches!(make_ms_hard(8, 8, 1.0), Err(Error::Capacity(_))));
    }

    #[test]
    fn divergence_budget_holds_for_all_sizes() {
        for (n, m) in [(4usize, 2usize), (16, 4), (64, 8), (128, 16)] {
            let inst = make_ms_hard(n, m, 0.7).unwrap();
            assert!(
                inst.kl_max <= inst.kl_budget * (1.0 + 1e-12),
                "M = {m}: {} > {}",
                inst.kl_max,
                inst.kl_budget
            );
        }
    }

    #[test]
    fn two_is_the_capped_amplitude_case() {
        let inst = make_ms_hard(16, 2, 1.0).unwrap();
        assert!(inst.gamma < 0.25);
        let pair =
            kl_gaussian_fixed_design(&inst.truth_set[0], &inst.truth_set[1], 16, 1.0).unwrap();
        assert!((pair - inst.kl_budget).abs() < 1e-15);
    }

    #[test]
    fn coded_truths_separate_by_hamming_distance_exactly() {
        let inst = make_l_hard(12, 8, 1.0, DEFAULT_TRUTH_BUDGET).unwrap();
        let code = inst.code.as_ref().unwrap();
        let nf = 12.0;
        for i in (0..inst.card()).step_by(37) {
            for k in (i + 1..inst.card()).step_by(41) {
                let diff: Vec<f64> = inst.truth_set[i]
                    .iter()
                    .zip(&inst.truth_set[k])
                    .map(|(x, y)| x - y)
                    .collect();
                let want = inst.gamma * inst.gamma * code.hamming(i, k) as f64 / nf;
                let got = empirical_norm_sq(&diff).unwrap();
                assert!((got - want).abs() < 1e-15 * (1.0 + want));
            }
        }
    }

    #[test]
    fn coded_budget_met_with_equality() {
        let inst = make_l_hard(16, 8, 1.3, DEFAULT_TRUTH_BUDGET).unwrap();
        assert!((inst.kl_max - inst.kl_budget).abs() < 1e-12);
        // Verify against the divergence routine on an extreme pair: word 0
        // is all-zeros and some word attains d_max.
        let code = inst.code.as_ref().unwrap();
        let d_max = code.max_distance();
        let mut found = false;
        for i in 0..inst.card() {
            for k in (i + 1)..inst.card() {
                if code.hamming(i, k) == d_max {
                    let kl =
                        kl_gaussian_fixed_design(&inst.truth_set[i], &inst.truth_set[k], 16, 1.3)
                            .unwrap();
                    assert!((kl - inst.kl_max).abs() < 1e-12);
                    found = true;
                    break;
                }
            }
            if found {
                break;
            }
        }
        assert!(found);
    }

    #[test]
    fn small_m_uses_the_two_point_truths() {
        let inst = make_l_hard(16, 2, 1.0, DEFAULT_TRUTH_BUDGET).unwrap();
        assert_eq!(inst.card(), 2);
        assert!(inst.code.is_none());
        assert!(inst.truth_set[0].iter().all(|&v| v == 0.0));
        let expected = inst.gamma / 4.0; // n^{-1/2} with n = 16
        assert_eq!(inst.truth_set[1][0], expected);
        assert!(inst.truth_set[1][1..].iter().all(|&v| v == 0.0));
        assert!((inst.kl_max - inst.kl_budget).abs() < 1e-15);
    }

    #[test]
    fn l_hard_requires_enough_points() {
        assert!(matches!(
            make_l_hard(4, 8, 1.0, DEFAULT_TRUTH_BUDGET),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn truth_budget_refusal() {
        match make_l_hard(16, 16, 1.0, 8) {
            Err(Error::BudgetExceeded { count, budget }) => {
                assert!(count > 8);
                assert_eq!(budget, 8);
            }
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }
}
