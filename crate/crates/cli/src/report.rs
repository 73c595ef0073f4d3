//! Verification reports and their bit-stable renderings.
//!
//! Numbers are frozen into strings at construction time -- counts as exact
//! decimal strings, floats at 12 significant digits -- so every emission
//! format serializes the same bytes for the same configuration. Wall time
//! is kept on the struct for display but never serialized.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use adnrg_core::error::{Error, Result};
use adnrg_core::io as set_io;
use adnrg_core::LatticeSet;

/// One checked instance of an inequality.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub input_hash: String,
    pub lhs: String,
    pub rhs: String,
    pub margin: String,
    pub pass: bool,
    /// Full reproducing input dump, present exactly when the trial failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

/// All trials of one inequality.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IneqTable {
    pub inequality: String,
    pub rows: Vec<TrialRecord>,
}

impl IneqTable {
    pub fn new(inequality: impl Into<String>) -> Self {
        IneqTable {
            inequality: inequality.into(),
            rows: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub experiment: String,
    pub pass: bool,
    pub seed: u64,
    pub trials: u32,
    pub version: String,
    pub tables: Vec<IneqTable>,
    /// Sorted key/value summary lines (maxima, measured constants, sizes).
    pub summary: std::collections::BTreeMap<String, String>,
    #[serde(skip)]
    pub wall_ms: u128,
}

impl VerifyReport {
    pub fn new(experiment: &str, seed: u64, trials: u32) -> Self {
        VerifyReport {
            experiment: experiment.to_string(),
            pass: true,
            seed,
            trials,
            version: env!("CARGO_PKG_VERSION").to_string(),
            tables: Vec::new(),
            summary: Default::default(),
            wall_ms: 0,
        }
    }

    pub fn push_table(&mut self, table: IneqTable) {
        self.pass &= table.all_pass();
        self.tables.push(table);
    }

    pub fn violations(&self) -> usize {
        self.tables
            .iter()
            .map(|t| t.rows.iter().filter(|r| !r.pass).count())
            .sum()
    }
}

/// 12 significant digits, bit-stable across runs.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{x:.11e}")
}

/// Short stable digest of the trial inputs, from their canonical text form.
pub fn hash_sets<'a>(sets: impl IntoIterator<Item = &'a LatticeSet>) -> String {
    let mut hasher = Sha256::new();
    for s in sets {
        hasher.update(set_io::to_text(s).as_bytes());
        hasher.update(b";");
    }
    let digest = hasher.finalize();
    let mut out = String::with_capacity(16);
    for byte in digest.iter().take(8) {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

pub fn hash_label(label: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    let mut out = String::with_capacity(16);
    for byte in digest.iter().take(8) {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// Inline dump of the sets of a failing trial; each block parses back with
/// the set reader.
pub fn dump_sets<'a>(sets: impl IntoIterator<Item = &'a LatticeSet>) -> String {
    sets.into_iter()
        .map(set_io::to_text)
        .collect::<Vec<_>>()
        .join("---\n")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Md,
    Csv,
}

/// Renders the report. JSON goes through a value tree, so keys are sorted;
/// all payload numbers are already strings, making the output byte-stable.
pub fn render(report: &VerifyReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let value = serde_json::to_value(report).expect("report serializes");
            let mut out = serde_json::to_string_pretty(&value).expect("value renders");
            out.push('\n');
            out
        }
        ReportFormat::Md => render_markdown(report),
        ReportFormat::Csv => render_csv(report),
    }
}

fn render_markdown(report: &VerifyReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("# verify {}\n\n", report.experiment));
    out.push_str(&format!(
        "- pass: {}\n- seed: {}\n- trials: {}\n- version: {}\n\n",
        report.pass, report.seed, report.trials, report.version
    ));
    for table in &report.tables {
        out.push_str(&format!("## {}\n\n", table.inequality));
        out.push_str("| trial | input | lhs | rhs | margin | pass |\n");
        out.push_str("|---|---|---|---|---|---|\n");
        for r in &table.rows {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} |\n",
                r.trial, r.input_hash, r.lhs, r.rhs, r.margin, r.pass
            ));
        }
        out.push('\n');
        for r in table.rows.iter().filter(|r| !r.pass) {
            if let Some(dump) = &r.counterexample {
                out.push_str(&format!(
                    "counterexample for trial {}:\n\n```\n{}```\n\n",
                    r.trial, dump
                ));
            }
        }
    }
    if !report.summary.is_empty() {
        out.push_str("## summary\n\n| key | value |\n|---|---|\n");
        for (k, v) in &report.summary {
            out.push_str(&format!("| {k} | {v} |\n"));
        }
        out.push('\n');
    }
    out
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn render_csv(report: &VerifyReport) -> String {
    let mut out = String::from("table,trial,input,lhs,rhs,margin,pass\n");
    for table in &report.tables {
        for r in &table.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                csv_quote(&table.inequality),
                r.trial,
                r.input_hash,
                csv_quote(&r.lhs),
                csv_quote(&r.rhs),
                csv_quote(&r.margin),
                r.pass
            ));
        }
    }
    out
}

pub fn write_report(report: &VerifyReport, format: ReportFormat, path: &Path) -> Result<()> {
    std::fs::write(path, render(report, format)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
