use agg_core::hardness::{make_l_hard, make_ms_hard, minimax_eval};
use agg_core::{
    fit_hard_threshold, fit_soft_threshold, io, DesignMatrix, HardFitOptions, PenaltySpec,
    SoftFitOptions,
};

use crate::commands::{out_file, write_json, write_text};
use crate::Cli;

#[allow(clippy::too_many_arguments)]
pub(crate) fn run(
    cli: &Cli,
    kind: &str,
    n: usize,
    m: usize,
    sigma: f64,
    truth_budget: usize,
    eval: &Option<String>,
    reps: usize,
) -> anyhow::Result<()> {
    let inst = match kind {
        "ms" => make_ms_hard(n, m, sigma)?,
        "l" => make_l_hard(n, m, sigma, truth_budget)?,
        other => {
            return Err(agg_core::Error::Config(format!("unknown hardness kind {other:?}")).into())
        }
    };

    write_text(
        &out_file(cli, "design.csv"),
        &io::design_to_csv(&inst.design),
    )?;
    write_json(&out_file(cli, "instance.json"), &inst.sidecar_json())?;
    println!(
        "hardness {kind}: card {}, gamma {:.6e}, divergence {:.4e} <= budget {:.4e}, \
         min separation {:.4e}",
        inst.card(),
        inst.gamma,
        inst.kl_max,
        inst.kl_budget,
        inst.separation_min
    );

    if let Some(which) = eval {
        let seed = cli.seed.unwrap_or(1);
        let report = match which.as_str() {
            "hard" => {
                let spec = PenaltySpec::hard(sigma.max(f64::MIN_POSITIVE));
                let est = move |d: &DesignMatrix, y: &[f64]| {
                    let fit = fit_hard_threshold(d, y, &spec, &HardFitOptions::default())?;
                    d.combine(&fit.weights)
                };
                minimax_eval(&inst, &est, reps, seed, None)?
            }
            "soft" => {
                let spec = PenaltySpec::soft(sigma.max(f64::MIN_POSITIVE));
                let est = move |d: &DesignMatrix, y: &[f64]| {
                    let fit = fit_soft_threshold(d, y, &spec, &SoftFitOptions::default())?;
                    d.combine(&fit.weights)
                };
                minimax_eval(&inst, &est, reps, seed, None)?
            }
            "interpolate" => {
                let est = |_: &DesignMatrix, y: &[f64]| Ok(y.to_vec());
                minimax_eval(&inst, &est, reps, seed, None)?
            }
            other => {
                return Err(agg_core::Error::Config(format!("unknown estimator {other:?}")).into())
            }
        };
        write_json(
            &out_file(cli, "minimax.json"),
            &serde_json::json!({
                "estimator": which,
                "reps": report.reps,
                "worst_truth": report.worst_truth,
                "worst_mean_risk": report.worst_mean,
                "worst_se": report.worst_se,
                "per_truth_mean": report.per_truth_mean,
            }),
        )?;
        println!(
            "minimax {which}: worst mean risk {:.6e} (se {:.1e}) at truth {}",
            report.worst_mean, report.worst_se, report.worst_truth
        );
    }
    Ok(())
}
