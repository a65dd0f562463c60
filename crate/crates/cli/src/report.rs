//! Scenario results: per-operation lines, assertions and CSV tables.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::ScenarioError;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub index: usize,
    pub kind: String,
    pub label: String,
    pub lines: Vec<String>,
    pub checks: Vec<Check>,
}

impl Section {
    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }
}

/// A CSV table: header plus rows of already formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Table {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, ScenarioError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| ScenarioError::Invalid(format!("table {}: {e}", self.name));
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| ScenarioError::Invalid(format!("table {}: {e}", self.name)))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Locale-free number formatting: shortest round-trip digits, plain
/// decimals for moderate magnitudes and `1.5e-7` style otherwise.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-5..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub name: String,
    pub seed: u64,
    /// The scenario as parsed, re-serialized.
    pub config: String,
    pub sections: Vec<Section>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.sections
            .iter()
            .all(|s| s.checks.iter().all(|c| c.pass))
    }

    pub fn check_count(&self) -> (usize, usize) {
        let all = self.sections.iter().flat_map(|s| &s.checks);
        let total = all.clone().count();
        (all.filter(|c| c.pass).count(), total)
    }

    /// 0 when every assertion holds, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {} (seed {})", self.name, self.seed);
        for s in &self.sections {
            let _ = writeln!(out, "\n[{}] {} ({})", s.index, s.label, s.kind);
            for l in &s.lines {
                let _ = writeln!(out, "  {l}");
            }
            for c in &s.checks {
                let _ = writeln!(
                    out,
                    "  {} {}: {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
        }
        let (ok, total) = self.check_count();
        let _ = writeln!(
            out,
            "\n{ok} of {total} assertions pass: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }

    /// Writes `report.txt`, `scenario.toml` and every table into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(), ScenarioError> {
        let io = |e: std::io::Error| ScenarioError::Io {
            path: dir.to_path_buf(),
            source: e,
        };
        fs::create_dir_all(dir).map_err(io)?;
        fs::write(dir.join("report.txt"), self.render()).map_err(io)?;
        fs::write(dir.join("scenario.toml"), &self.config).map_err(io)?;
        for t in &self.tables {
            fs::write(dir.join(format!("{}.csv", t.name)), t.to_csv()?).map_err(io)?;
        }
        Ok(())
    }
}
