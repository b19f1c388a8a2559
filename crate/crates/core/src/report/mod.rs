//! Smell frequencies, `report.json`, `provenance.log` and stack comparison.

mod compare;
mod provenance;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::metrics::ProjectMetrics;
use crate::repo::MaturityClass;
use crate::smells::{SmellFinding, SmellKind};

pub use compare::{
    comparison, write_comparison_csv, ComparisonReport, ComparisonRow, ProjectColumn,
};
pub use provenance::{
    parse_provenance, render_provenance, write_provenance, ProvenanceError, ProvenanceHeader,
    PROVENANCE_FILE,
};

pub const REPORT_FILE: &str = "report.json";

/// `100·count/total` per kind; `None` when the total is zero.
pub fn percentages(counts: &BTreeMap<SmellKind, usize>) -> Option<BTreeMap<SmellKind, f64>> {
    let total: usize = counts.values().sum();
    (total > 0).then(|| {
        counts
            .iter()
            .map(|(k, &c)| (*k, 100.0 * c as f64 / total as f64))
            .collect()
    })
}

/// Two decimals, halves rounded away from zero. The scaled value is nudged by
/// a few ulps so decimal halves such as 12.345 are not lost to binary error.
pub fn round2(value: f64) -> f64 {
    (value * 100.0 * (1.0 + 4.0 * f64::EPSILON)).round() / 100.0
}

pub fn format_percent(value: Option<f64>) -> String {
    value.map_or_else(|| "-".to_string(), |v| format!("{:.2}", round2(v)))
}

/// Per-kind counts with every kind present.
pub fn count_by_kind(findings: &[SmellFinding]) -> BTreeMap<SmellKind, usize> {
    let mut counts: BTreeMap<SmellKind, usize> =
        SmellKind::ALL.into_iter().map(|k| (k, 0)).collect();
    for f in findings {
        *counts.entry(f.kind).or_default() += 1;
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedFile {
    pub path: PathBuf,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectReport {
    pub project_name: String,
    pub tool_version: String,
    pub timestamp: String,
    pub config_hash: String,
    pub maturity: Option<MaturityClass>,
    pub smell_counts: BTreeMap<SmellKind, usize>,
    /// Absent when the project has no findings.
    pub smell_percentages: Option<BTreeMap<SmellKind, f64>>,
    pub project_metrics: ProjectMetrics,
    pub findings: Vec<SmellFinding>,
    pub config_echo: BTreeMap<String, String>,
    pub diagnostics: Vec<String>,
    pub skipped_files: Vec<SkippedFile>,
}

impl ProjectReport {
    pub fn load(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(std::io::Error::other)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }
}
