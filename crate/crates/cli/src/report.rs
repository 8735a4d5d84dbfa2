//! JSON run reports and CSV data files. All numeric formatting is
//! deterministic; wall-clock time is metadata and never feeds a data file.

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub experiment: String,
    /// Echo of the flat configuration, sorted by key.
    pub config: BTreeMap<String, String>,
    /// sha256 of the canonicalized config echo.
    pub content_hash: String,
    pub checks: Vec<Check>,
    /// Named scalar outputs, sorted by key.
    pub values: BTreeMap<String, f64>,
    /// Named string outputs (exact integers as decimal strings).
    pub value_strings: BTreeMap<String, String>,
    pub wall_clock_secs: f64,
    pub artifacts: Vec<String>,
}

impl RunReport {
    pub fn new(experiment: &str, config: BTreeMap<String, String>) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(experiment.as_bytes());
        for (k, v) in &config {
            hasher.update([0u8]);
            hasher.update(k.as_bytes());
            hasher.update([1u8]);
            hasher.update(v.as_bytes());
        }
        let content_hash = format!("sha256:{:x}", hasher.finalize());
        RunReport {
            experiment: experiment.to_string(),
            config,
            content_hash,
            checks: Vec::new(),
            values: BTreeMap::new(),
            value_strings: BTreeMap::new(),
            wall_clock_secs: 0.0,
            artifacts: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), pass, detail: detail.into() });
    }

    pub fn value(&mut self, name: &str, v: f64) {
        self.values.insert(name.to_string(), v);
    }

    pub fn value_string(&mut self, name: &str, v: impl Into<String>) {
        self.value_strings.insert(name.to_string(), v.into());
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text.as_bytes())
            .with_context(|| format!("writing report {}", path.display()))?;
        Ok(())
    }

    /// One line per check on stdout, plus the scalar values.
    pub fn print_summary(&self) {
        for c in &self.checks {
            println!("{} {} | {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        for (k, v) in &self.values {
            println!("  {k} = {v}");
        }
        for (k, v) in &self.value_strings {
            println!("  {k} = {v}");
        }
    }
}

/// Writes a CSV with a fixed header; all cells preformatted by the caller.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(path, out.as_bytes())
        .with_context(|| format!("writing csv {}", path.display()))?;
    Ok(())
}
