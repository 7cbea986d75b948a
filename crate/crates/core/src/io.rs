//! CSV and JSON interchange.
//!
//! Designs are stored with a `j0,j1,...` header and one row per design
//! point; targets as a two-column `f,y` file. Floats are written in
//! scientific notation with the shortest round-trippable mantissa, so output
//! bytes are a pure function of the values.

use std::fmt::Write as _;
use std::path::Path;

use crate::design::{DesignMatrix, TargetVector};
use crate::error::{Error, Result};
use crate::harness::{ReplicationRecord, SummaryRow};

/// Shortest round-trip scientific representation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

fn parse_f64(text: &str, line: usize, context: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{context}: bad number {text:?} on line {line}")))
}

/// Serializes a design to CSV (header `j0..j{M-1}`, then n rows).
pub fn design_to_csv(d: &DesignMatrix) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..d.m_dict()).map(|j| format!("j{j}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for i in 0..d.n() {
        for j in 0..d.m_dict() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&fmt_f64(d.entry(i, j)));
        }
        out.push('\n');
    }
    out
}

/// Parses a design CSV; the uniform bound is inferred from the data and
/// flagged as such on the returned design.
pub fn read_design_csv(text: &str) -> Result<DesignMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("design CSV is empty".into()))?;
    let m = header.split(',').count();
    for (j, name) in header.split(',').enumerate() {
        if name.trim() != format!("j{j}") {
            return Err(Error::Parse(format!(
                "design CSV header must be j0..j{}, found {:?}",
                m - 1,
                name.trim()
            )));
        }
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != m {
            return Err(Error::Parse(format!(
                "design CSV line {}: expected {m} fields, found {}",
                idx + 1,
                fields.len()
            )));
        }
        let row = fields
            .iter()
            .map(|f| parse_f64(f, idx + 1, "design CSV"))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("design CSV has no data rows".into()));
    }
    DesignMatrix::from_rows_inferred(&rows)
}

pub fn read_design_csv_path<P: AsRef<Path>>(path: P) -> Result<DesignMatrix> {
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.as_ref().display())))?;
    read_design_csv(&text)
}

/// Serializes a target to two-column CSV with header `f,y`.
pub fn targets_to_csv(t: &TargetVector) -> String {
    let mut out = String::from("f,y\n");
    for (f, y) in t.f_vals().iter().zip(t.y_vals()) {
        let _ = writeln!(out, "{},{}", fmt_f64(*f), fmt_f64(*y));
    }
    out
}

pub fn read_targets_csv(text: &str) -> Result<TargetVector> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("targets CSV is empty".into()))?;
    if header.trim() != "f,y" {
        return Err(Error::Parse(format!(
            "targets CSV header must be f,y, found {:?}",
            header.trim()
        )));
    }
    let mut f_vals = Vec::new();
    let mut y_vals = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(Error::Parse(format!(
                "targets CSV line {}: expected 2 fields, found {}",
                idx + 1,
                fields.len()
            )));
        }
        f_vals.push(parse_f64(fields[0], idx + 1, "targets CSV")?);
        y_vals.push(parse_f64(fields[1], idx + 1, "targets CSV")?);
    }
    TargetVector::new(f_vals, y_vals)
}

pub fn read_targets_csv_path<P: AsRef<Path>>(path: P) -> Result<TargetVector> {
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.as_ref().display())))?;
    read_targets_csv(&text)
}

pub const RECORDS_CSV_HEADER: &str = "n,rep_index,agg_risk,oracle_ms,oracle_c,oracle_l,\
excess_ms,excess_c,excess_l,solver_mode,solver_iters,converged,error";

/// Per-replication CSV in `(n, rep)` order.
pub fn records_to_csv(records: &[ReplicationRecord]) -> String {
    let mut out = String::from(RECORDS_CSV_HEADER);
    out.push('\n');
    for r in records {
        let mode = r
            .solver_mode
            .map(|m| {
                serde_json::to_value(m)
                    .unwrap()
                    .as_str()
                    .unwrap()
                    .to_owned()
            })
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.rep_index,
            fmt_f64(r.agg_risk),
            fmt_f64(r.oracle_ms),
            fmt_f64(r.oracle_c),
            fmt_f64(r.oracle_l),
            fmt_f64(r.excess_ms),
            fmt_f64(r.excess_c),
            fmt_f64(r.excess_l),
            mode,
            r.solver_iters,
            r.converged,
            r.error.as_deref().unwrap_or("").replace(',', ";"),
        );
    }
    out
}

pub const SUMMARY_CSV_HEADER: &str = "n,M,kind,mean_excess,mc_se,psi_rate,ratio";

/// Summary CSV with one row per `(n, oracle kind)`.
pub fn summary_to_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n,
            r.m_dict,
            r.kind.label(),
            fmt_f64(r.mean_excess),
            fmt_f64(r.mc_se),
            fmt_f64(r.psi_rate),
            fmt_f64(r.ratio),
        );
    }
    out
}
