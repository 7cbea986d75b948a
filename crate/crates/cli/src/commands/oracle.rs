use std::path::Path;

use agg_core::{
    convex_oracle, io, linear_oracle, maurey_grid_oracle, ms_oracle, ConvexSolverConfig,
    OracleResult,
};

use crate::commands::{out_file, write_json, write_text};
use crate::Cli;

pub(crate) fn run(
    cli: &Cli,
    design: &Path,
    targets: &Path,
    kinds: &str,
    grid_m: usize,
    gap_tol: f64,
    max_iters: usize,
) -> anyhow::Result<()> {
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
    let f = t.f_vals();

    let mut results: Vec<OracleResult> = Vec::new();
    for kind in kinds.split(',') {
        match kind.trim() {
            "ms" => results.push(ms_oracle(&d, f)?),
            "c" => results.push(convex_oracle(
                &d,
                f,
                &ConvexSolverConfig { max_iters, gap_tol },
            )?),
            "l" => results.push(linear_oracle(&d, f, 1e-10)?),
            "grid" => results.push(maurey_grid_oracle(
                &d,
                f,
                grid_m,
                agg_core::oracles::DEFAULT_GRID_BUDGET,
            )?),
            other => {
                return Err(agg_core::Error::Config(format!(
                    "unknown oracle kind {other:?}; expected ms, c, l, grid"
                ))
                .into())
            }
        }
    }

    if cli.format == "csv" {
        let mut csv = String::from("kind,risk,certificate,iters,sparsity\n");
        for r in &results {
            let kind = serde_json::to_value(r.kind)?;
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                kind.as_str().unwrap(),
                io::fmt_f64(r.risk),
                io::fmt_f64(r.certificate),
                r.iters,
                r.weights.sparsity()
            ));
        }
        write_text(&out_file(cli, "oracles.csv"), &csv)?;
    } else {
        let json = serde_json::Value::Array(results.iter().map(|r| r.to_json()).collect());
        write_json(&out_file(cli, "oracles.json"), &json)?;
    }
    for r in &results {
        println!(
            "oracle {:?}: risk {:.6e}, certificate {:.2e}, iters {}",
            r.kind, r.risk, r.certificate, r.iters
        );
    }
    Ok(())
}
