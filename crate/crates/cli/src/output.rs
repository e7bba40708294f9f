//! Artifact writers: fixed-format CSV, verdict JSON, gnuplot-consumable
//! two-column data files. Everything is written once, at the end, through a
//! temp-file-then-rename so partial runs never leave truncated artifacts.

use crate::CliError;
use serde::Serialize;
use std::path::Path;

/// 17 significant digits, '.' decimal separator; reproducible across runs.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, Serialize)]
pub struct TargetCheck {
    pub name: String,
    pub target: f64,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub schema_version: u32,
    pub task: String,
    pub fingerprint: String,
    pub seed: u64,
    pub pass: bool,
    pub targets: Vec<TargetCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub y0: f64,
    pub y1: f64,
    pub t: f64,
    pub margin: f64,
}

/// A complete artifact set, buffered until `write_all`.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub results_csv: String,
    pub verdict_json: String,
    /// (file name, two-column content) under plotdata/.
    pub plotdata: Vec<(String, String)>,
}

pub fn csv_from_rows(header: &str, rows: &[Vec<f64>]) -> String {
    let mut out = String::with_capacity(rows.len() * 32 + header.len());
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format_float(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn two_column(data: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(data.len() * 48);
    for (x, y) in data {
        out.push_str(&format_float(*x));
        out.push(' ');
        out.push_str(&format_float(*y));
        out.push('\n');
    }
    out
}

pub fn render_verdict(verdict: &Verdict) -> Result<String, CliError> {
    serde_json::to_string_pretty(verdict)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Io(e.to_string()))
}

fn write_atomic(path: &Path, content: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{path:?}: {e}"));
    let dir = path.parent().ok_or_else(|| {
        CliError::Io(format!("{path:?} has no parent directory"))
    })?;
    std::fs::create_dir_all(dir).map_err(io)?;
    let file_name = path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| CliError::Io(format!("{path:?}: bad file name")))?;
    let tmp = dir.join(format!(".{file_name}.tmp"));
    std::fs::write(&tmp, content).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)?;
    Ok(())
}

impl Artifacts {
    pub fn write_all(&self, out_dir: &Path) -> Result<(), CliError> {
        write_atomic(&out_dir.join("results.csv"), self.results_csv.as_bytes())?;
        write_atomic(&out_dir.join("verdict.json"), self.verdict_json.as_bytes())?;
        for (name, content) in &self.plotdata {
            write_atomic(&out_dir.join("plotdata").join(name), content.as_bytes())?;
        }
        Ok(())
    }
}
