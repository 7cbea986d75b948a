//! The bundled theory-check battery: Monte Carlo and exhaustive
//! verification of the concentration bounds and constructions the
//! aggregation guarantees rest on. Deterministic for a fixed seed.

use rayon::prelude::*;

use agg_core::hardness::{
    chi2_tail_bound, default_code_distance, kl_gaussian_fixed_design, make_l_hard, make_ms_hard,
    vg_code, DEFAULT_TRUTH_BUDGET,
};
use agg_core::harness::event_a_diagnostic;
use agg_core::rng::StreamKey;
use agg_core::testing::{orthonormal_design, random_design, random_vector};
use agg_core::{convex_oracle, empirical_norm_sq, maurey_grid_oracle, ConvexSolverConfig};

use crate::commands::{out_file, write_text};
use crate::{CheckFailure, Cli};

struct CheckOutcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

pub(crate) fn run(cli: &Cli, inject_fault: Option<&str>) -> anyhow::Result<()> {
    if let Some(fault) = inject_fault {
        if fault != "chi2-constant" {
            return Err(agg_core::Error::Config(format!(
                "unknown fault {fault:?}; known: chi2-constant"
            ))
            .into());
        }
    }
    let seed = cli.seed.unwrap_or(606);

    let checks = vec![
        chi2_check(seed, inject_fault == Some("chi2-constant")),
        grid_bound_check(seed),
        event_bound_check(seed),
        divergence_budget_check(),
        block_separation_check(),
        code_distance_check(),
    ];

    let mut report = String::new();
    let mut failures = Vec::new();
    for c in &checks {
        let line = format!(
            "{} {}: {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
        println!("{line}");
        report.push_str(&line);
        report.push('\n');
        if !c.pass {
            failures.push(c.name);
        }
    }
    write_text(&out_file(cli, "check_report.txt"), &report)?;

    if failures.is_empty() {
        println!("check: all {} checks passed", checks.len());
        Ok(())
    } else {
        Err(CheckFailure(failures.join(", ")).into())
    }
}

/// Chi-square upper tails, 10^6 Monte Carlo draws per degree-of-freedom
/// value, against the closed-form bound (with 3-sigma sampling slack).
fn chi2_check(seed: u64, corrupt_constant: bool) -> CheckOutcome {
    let draws = 1_000_000usize;
    let xs = [0.5, 1.0, 2.0, 4.0];
    let mut detail = String::new();
    let mut pass = true;
    for d in [1usize, 5, 20, 100] {
        let key = StreamKey::new(seed).labeled("check-chi2").child(d as u64);
        let thresholds: Vec<f64> = xs
            .iter()
            .map(|&x| d as f64 + x * (2.0 * d as f64).sqrt())
            .collect();
        let counts: [usize; 4] = (0..draws)
            .into_par_iter()
            .map(|i| {
                let stream = key.child(i as u64);
                let mut sum = 0.0;
                let mut t = 0u64;
                while t + 1 < d as u64 {
                    let (a, b) = stream.gaussian_pair(t / 2);
                    sum += a * a + b * b;
                    t += 2;
                }
                if t < d as u64 {
                    let z = stream.gaussian(t);
                    sum += z * z;
                }
                let mut c = [0usize; 4];
                for (slot, thr) in c.iter_mut().zip(&thresholds) {
                    *slot = usize::from(sum >= *thr);
                }
                c
            })
            .reduce(
                || [0usize; 4],
                |mut acc, c| {
                    for (a, b) in acc.iter_mut().zip(&c) {
                        *a += b;
                    }
                    acc
                },
            );
        for (xi, &x) in xs.iter().enumerate() {
            let freq = counts[xi] as f64 / draws as f64;
            let mut bound = chi2_tail_bound(d, x);
            if corrupt_constant {
                bound *= 0.05;
            }
            let se = (bound * (1.0 - bound) / draws as f64).sqrt().max(1e-9);
            if freq > bound + 3.0 * se {
                pass = false;
            }
            detail.push_str(&format!("(d={d},x={x}) {freq:.3e}<={bound:.3e} "));
        }
    }
    CheckOutcome {
        name: "chi2-tail-bound",
        pass,
        detail,
    }
}

/// Rational-grid approximation of the simplex minimum: grid risk within
/// `L^2 / m` of the simplex oracle on 1000 random instances.
fn grid_bound_check(seed: u64) -> CheckOutcome {
    let violations: usize = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let k = StreamKey::new(seed).labeled("check-grid").child(i);
            let m_dict = 2 + (k.uniform(0) * 5.0) as usize;
            let m = 1 + (k.uniform(1) * 5.0) as usize;
            let n = 6 + (k.uniform(2) * 18.0) as usize;
            let d = random_design(n, m_dict, seed ^ (900_000 + i), 1.0);
            let f = random_vector(n, seed ^ (910_000 + i), 1.0);
            let grid = maurey_grid_oracle(&d, &f, m, 1 << 21).unwrap();
            let cvx = convex_oracle(
                &d,
                &f,
                &ConvexSolverConfig {
                    max_iters: 500_000,
                    gap_tol: 1e-8,
                },
            )
            .unwrap();
            let slack = d.bound_l() * d.bound_l() / m as f64;
            usize::from(grid.risk > cvx.risk + slack + 1e-6)
        })
        .sum();
    CheckOutcome {
        name: "grid-approximation-bound",
        pass: violations == 0,
        detail: format!("{} of 1000 trials violated the grid bound", violations),
    }
}

/// Noise-correlation event frequency against its closed-form bound,
/// n = 100, M = 10, sigma = 1, 10^5 draws.
fn event_bound_check(seed: u64) -> CheckOutcome {
    let d = orthonormal_design(100, 10);
    let mult = 2.0 * std::f64::consts::SQRT_2;
    let report = event_a_diagnostic(&d, 1.0, mult, 100_000, seed).unwrap();
    let se = (report.bound * (1.0 - report.bound) / report.reps as f64).sqrt();
    CheckOutcome {
        name: "noise-event-bound",
        pass: report.failure_freq <= report.bound + 3.0 * se,
        detail: format!(
            "measured {:.3e} vs bound {:.3e} (+3se {:.1e}), {} / {} reps",
            report.failure_freq,
            report.bound,
            3.0 * se,
            report.failures,
            report.reps
        ),
    }
}

/// Every generated hard instance keeps all pairwise divergences within the
/// reduction budget `(1/16) log(card)`.
fn divergence_budget_check() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for (n, m) in [(16usize, 2usize), (16, 4), (64, 8), (128, 16)] {
        let inst = make_ms_hard(n, m, 1.0).unwrap();
        for a in 0..m {
            for b in (a + 1)..m {
                let kl = kl_gaussian_fixed_design(&inst.truth_set[a], &inst.truth_set[b], n, 1.0)
                    .unwrap();
                let rel = kl / inst.kl_budget;
                worst = worst.max(rel);
                if kl > inst.kl_budget * (1.0 + 1e-12) {
                    pass = false;
                }
            }
        }
    }
    for m in [2usize, 4, 8, 16] {
        let n = m.max(16);
        let inst = make_l_hard(n, m, 1.0, DEFAULT_TRUTH_BUDGET).unwrap();
        worst = worst.max(inst.kl_max / inst.kl_budget);
        if inst.kl_max > inst.kl_budget * (1.0 + 1e-12) {
            pass = false;
        }
        let step = (inst.card() / 13).max(1);
        for a in (0..inst.card()).step_by(step) {
            for b in ((a + 1)..inst.card()).step_by(step) {
                let kl = kl_gaussian_fixed_design(&inst.truth_set[a], &inst.truth_set[b], n, 1.0)
                    .unwrap();
                if kl > inst.kl_budget * (1.0 + 1e-12) {
                    pass = false;
                }
            }
        }
    }
    CheckOutcome {
        name: "divergence-budget",
        pass,
        detail: format!("max divergence/budget ratio {worst:.6}"),
    }
}

/// Disjoint-block instances separate every pair of truths by exactly
/// `2 gamma^2 block / n`.
fn block_separation_check() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for (n, m) in [(16usize, 4usize), (64, 8), (128, 16)] {
        let inst = make_ms_hard(n, m, 1.0).unwrap();
        let want = inst.separation_min;
        for a in 0..m {
            for b in (a + 1)..m {
                let diff: Vec<f64> = inst.truth_set[a]
                    .iter()
                    .zip(&inst.truth_set[b])
                    .map(|(x, y)| x - y)
                    .collect();
                let got = empirical_norm_sq(&diff).unwrap();
                let rel = (got - want).abs() / want;
                worst = worst.max(rel);
                if rel > 1e-15 {
                    pass = false;
                }
            }
        }
    }
    CheckOutcome {
        name: "block-separation",
        pass,
        detail: format!("max relative separation error {worst:.2e}"),
    }
}

/// Greedy code construction: verified pairwise distance and the
/// `2^(M/8)` cardinality guarantee at the default target distance.
fn code_distance_check() -> CheckOutcome {
    let mut detail = String::new();
    let mut pass = true;
    for m in [8usize, 16, 24] {
        let dist = default_code_distance(m);
        match vg_code(m, dist) {
            Ok(code) => {
                let guarantee = 2f64.powf(m as f64 / 8.0);
                if (code.card() as f64) < guarantee || code.min_distance < dist {
                    pass = false;
                }
                // Independent full pairwise re-check at the smallest length.
                if m == 8 {
                    for a in 0..code.card() {
                        for b in (a + 1)..code.card() {
                            if code.hamming(a, b) < dist {
                                pass = false;
                            }
                        }
                    }
                }
                detail.push_str(&format!(
                    "M={m}: card {} (>= {guarantee:.0}), distance {} ",
                    code.card(),
                    code.min_distance
                ));
            }
            Err(e) => {
                pass = false;
                detail.push_str(&format!("M={m}: {e} "));
            }
        }
    }
    CheckOutcome {
        name: "code-distance",
        pass,
        detail,
    }
}
