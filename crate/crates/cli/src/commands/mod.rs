pub(crate) mod check;
pub(crate) mod fit;
pub(crate) mod hardness;
pub(crate) mod oracle;
pub(crate) mod rates;
pub(crate) mod simulate;

use std::path::{Path, PathBuf};

use crate::Cli;

/// Resolves an output file path inside the out directory.
pub(crate) fn out_file(cli: &Cli, name: &str) -> PathBuf {
    cli.out.join(name)
}

pub(crate) fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text)?;
    println!("wrote {}", path.display());
    Ok(())
}

pub(crate) fn write_json(path: &Path, value: &serde_json::Value) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// Loads the JSON config file named by `--config`.
pub(crate) fn require_config(cli: &Cli, what: &str) -> anyhow::Result<String> {
    let path = cli.config.as_ref().ok_or_else(|| {
        anyhow::Error::new(agg_core::Error::Config(format!(
            "--config PATH ({what}) is required for this subcommand"
        )))
    })?;
    std::fs::read_to_string(path).map_err(|e| {
        anyhow::Error::new(agg_core::Error::Parse(format!(
            "cannot read {}: {e}",
            path.display()
        )))
    })
}
