use agg_core::harness::{psi_rate, RateKind, RateVariant};
use agg_core::io::fmt_f64;

use crate::commands::{out_file, write_json, write_text};
use crate::Cli;

/// Fixed column order: n, M, then kind x variant in this sequence.
pub(crate) const HEADER: &str =
    "n,M,ms_base,ms_tilde,ms_bar,c_base,c_tilde,c_bar,l_base,l_tilde,l_bar";

fn parse_list(text: &str, what: &str) -> anyhow::Result<Vec<usize>> {
    text.split(',')
        .map(|tok| {
            tok.trim().parse::<usize>().map_err(|_| {
                anyhow::Error::new(agg_core::Error::Config(format!(
                    "{what}: bad entry {tok:?}"
                )))
            })
        })
        .collect()
}

pub(crate) fn run(cli: &Cli, n_list: &str, m_list: &str) -> anyhow::Result<()> {
    let ns = parse_list(n_list, "--n-list")?;
    let ms = parse_list(m_list, "--m-list")?;

    let mut rows = Vec::new();
    for &n in &ns {
        for &m in &ms {
            let mut values = Vec::new();
            for kind in RateKind::ALL {
                for variant in RateVariant::ALL {
                    values.push(psi_rate(n, m, kind, variant)?);
                }
            }
            rows.push((n, m, values));
        }
    }

    if cli.format == "json" {
        let json: Vec<serde_json::Value> = rows
            .iter()
            .map(|(n, m, values)| {
                let mut obj = serde_json::Map::new();
                obj.insert("n".into(), (*n).into());
                obj.insert("M".into(), (*m).into());
                let mut idx = 0;
                for kind in RateKind::ALL {
                    for variant in RateVariant::ALL {
                        obj.insert(
                            format!("{}_{}", kind.label().to_lowercase(), variant.label()),
                            values[idx].into(),
                        );
                        idx += 1;
                    }
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        write_json(
            &out_file(cli, "rates.json"),
            &serde_json::Value::Array(json),
        )?;
    } else {
        let mut csv = String::from(HEADER);
        csv.push('\n');
        for (n, m, values) in &rows {
            csv.push_str(&format!("{n},{m}"));
            for v in values {
                csv.push(',');
                csv.push_str(&fmt_f64(*v));
            }
            csv.push('\n');
        }
        write_text(&out_file(cli, "rates.csv"), &csv)?;
    }
    println!("rates: {} rows", rows.len());
    Ok(())
}
