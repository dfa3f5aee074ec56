use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Shortest round-trip decimal for a float; CSV artifacts stay diffable.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub struct Emitter {
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Emitter {
    /// Emits one run record. CSV: header plus rows, LF endings, findings to
    /// stderr. JSON: one top-level {version, config, rows, findings} object.
    pub fn emit(
        &self,
        config: Value,
        header: &[&str],
        rows: &[Vec<String>],
        json_rows: Vec<Value>,
        findings: &[String],
    ) -> std::io::Result<()> {
        let body = match self.format {
            Format::Csv => {
                let mut out = String::new();
                out.push_str(&header.join(","));
                out.push('\n');
                for row in rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                for finding in findings {
                    eprintln!("finding: {finding}");
                }
                out
            }
            Format::Json => {
                let record = json!({
                    "version": env!("CARGO_PKG_VERSION"),
                    "config": config,
                    "rows": json_rows,
                    "findings": findings,
                });
                let mut s = serde_json::to_string_pretty(&record)?;
                s.push('\n');
                s
            }
        };
        match &self.output {
            Some(path) => std::fs::write(path, body),
            None => std::io::stdout().write_all(body.as_bytes()),
        }
    }
}
