use agg_core::harness::{run_experiment, ExperimentConfig};
use agg_core::io;

use crate::commands::{out_file, require_config, write_json, write_text};
use crate::Cli;

pub(crate) fn run(cli: &Cli) -> anyhow::Result<()> {
    let text = require_config(cli, "experiment manifest")?;
    let mut cfg: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| agg_core::Error::Config(format!("experiment manifest: {e}")))?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;

    let result = run_experiment(&cfg)?;

    // Echo the fully resolved manifest for reproducibility audits.
    write_json(
        &out_file(cli, "manifest_resolved.json"),
        &serde_json::to_value(&result.config)?,
    )?;
    write_text(
        &out_file(cli, "records.csv"),
        &io::records_to_csv(&result.records),
    )?;
    write_text(
        &out_file(cli, "summary.csv"),
        &io::summary_to_csv(&result.summaries),
    )?;
    if !result.k1_summaries.is_empty() {
        let mut csv = String::from("k1,");
        csv.push_str(io::SUMMARY_CSV_HEADER);
        csv.push('\n');
        for (k1, rows) in &result.k1_summaries {
            let body = io::summary_to_csv(rows);
            for line in body.lines().skip(1) {
                csv.push_str(&io::fmt_f64(*k1));
                csv.push(',');
                csv.push_str(line);
                csv.push('\n');
            }
        }
        write_text(&out_file(cli, "k1_summary.csv"), &csv)?;
    }

    let failed: usize = result.records.iter().filter(|r| !r.is_ok()).count();
    println!(
        "simulate: {} replications across {} sample sizes, {failed} failed",
        result.records.len(),
        cfg.n_grid.len()
    );
    for row in &result.summaries {
        println!(
            "  n={} {}: mean excess {:.4e} (se {:.1e}), psi {:.4e}, ratio {:.3}",
            row.n,
            row.kind.label(),
            row.mean_excess,
            row.mc_se,
            row.psi_rate,
            row.ratio
        );
    }
    Ok(())
}
