use std::path::Path;

use agg_core::{
    fit_hard_threshold, fit_soft_threshold, io, HardFitOptions, PenaltySpec, SoftFitOptions,
};

use crate::commands::{out_file, require_config, write_json};
use crate::Cli;

#[allow(clippy::too_many_arguments)]
pub(crate) fn run(
    cli: &Cli,
    design: &Path,
    targets: &Path,
    budget: Option<u128>,
    no_greedy: bool,
    tol: Option<f64>,
    max_iters: Option<usize>,
) -> anyhow::Result<()> {
    let config_text = require_config(cli, "penalty spec")?;
    let spec: PenaltySpec = serde_json::from_str(&config_text)
        .map_err(|e| agg_core::Error::Config(format!("penalty config: {e}")))?;
    spec.validate()?;

    let d = io::read_design_csv_path(design)?;
    let t = io::read_targets_csv_path(targets)?;
    if t.len() != d.n() {
        return Err(agg_core::Error::DimensionMismatch(format!(
            "targets have {} rows, design has {}",
            t.len(),
            d.n()
        ))
        .into());
    }

    let result = match &spec {
        PenaltySpec::HardThreshold { .. } => {
            let mut opts = HardFitOptions::default();
            if let Some(b) = budget {
                opts.budget = b;
            }
            opts.allow_greedy = !no_greedy;
            fit_hard_threshold(&d, t.y_vals(), &spec, &opts)?
        }
        PenaltySpec::SoftThresholdL1 { .. } => {
            let mut opts = SoftFitOptions::default();
            if let Some(tol) = tol {
                opts.tol = tol;
            }
            if let Some(mi) = max_iters {
                opts.max_iters = mi;
            }
            fit_soft_threshold(&d, t.y_vals(), &spec, &opts)?
        }
    };

    write_json(
        &out_file(cli, "fit_config_resolved.json"),
        &serde_json::json!({
            "penalty": spec,
            "budget": budget,
            "allow_greedy": !no_greedy,
            "tol": tol,
            "max_iters": max_iters,
        }),
    )?;
    write_json(&out_file(cli, "fit.json"), &result.to_json())?;
    println!(
        "fit: objective {:.6e} (rss {:.6e} + penalty {:.6e}), sparsity {}, converged {}",
        result.objective,
        result.rss,
        result.penalty,
        result.weights.sparsity(),
        result.solver_meta.converged
    );
    Ok(())
}
