//! Precision and recall against manually validated ground truth.
//!
//! Ground-truth file: one record per line, `subject<TAB>smell<TAB>verdict`
//! with verdict `tp`, `fp` or `missed`; `#` lines are comments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::report::format_percent;
use crate::smells::{SmellFinding, SmellKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    TrueSmell,
    FalsePositive,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("line {line}: malformed annotation: {reason}")]
    MalformedAnnotation { line: usize, reason: String },
    #[error("line {line}: duplicate annotation for {subject} {kind}")]
    DuplicateAnnotation {
        line: usize,
        subject: String,
        kind: SmellKind,
    },
    #[error("unlabeled findings: {}", format_pairs(.0))]
    UnlabeledFinding(Vec<(String, SmellKind)>),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

fn format_pairs(pairs: &[(String, SmellKind)]) -> String {
    pairs
        .iter()
        .map(|(s, k)| format!("{s} {k}"))
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundTruth {
    pub entries: BTreeMap<(String, SmellKind), Verdict>,
    pub missed: BTreeSet<(String, SmellKind)>,
}

impl GroundTruth {
    pub fn parse(text: &str) -> Result<Self, EvalError> {
        let mut truth = GroundTruth::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let malformed = |reason: String| EvalError::MalformedAnnotation { line, reason };
            let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
            let [subject, smell, verdict] = fields[..] else {
                return Err(malformed(format!(
                    "expected 3 tab-separated fields, found {}",
                    fields.len()
                )));
            };
            if subject.is_empty() {
                return Err(malformed("empty subject".into()));
            }
            let kind: SmellKind = smell.parse().map_err(|e| malformed(format!("{e}")))?;
            let key = (subject.to_string(), kind);
            if truth.entries.contains_key(&key) || truth.missed.contains(&key) {
                return Err(EvalError::DuplicateAnnotation {
                    line,
                    subject: subject.to_string(),
                    kind,
                });
            }
            match verdict {
                "tp" => {
                    truth.entries.insert(key, Verdict::TrueSmell);
                }
                "fp" => {
                    truth.entries.insert(key, Verdict::FalsePositive);
                }
                "missed" => {
                    truth.missed.insert(key);
                }
                other => return Err(malformed(format!("unknown verdict {other}"))),
            }
        }
        Ok(truth)
    }
}

pub fn load_ground_truth(path: &Path) -> Result<GroundTruth, EvalError> {
    let text = std::fs::read_to_string(path).map_err(|e| EvalError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    GroundTruth::parse(&text)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct KindCounts {
    pub detected: usize,
    pub true_positives: usize,
    pub missed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Score {
    pub detected: usize,
    pub true_positives: usize,
    pub missed: usize,
    /// 1.0 when nothing was detected, flagged by `zero_detection`.
    pub precision: f64,
    /// 1.0 when `true_positives + missed` is zero.
    pub recall: f64,
    pub zero_detection: bool,
}

impl Score {
    pub fn from_counts(c: KindCounts) -> Self {
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                1.0
            } else {
                num as f64 / den as f64
            }
        };
        Score {
            detected: c.detected,
            true_positives: c.true_positives,
            missed: c.missed,
            precision: ratio(c.true_positives, c.detected),
            recall: ratio(c.true_positives, c.true_positives + c.missed),
            zero_detection: c.detected == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationResult {
    pub per_kind: BTreeMap<SmellKind, Score>,
    /// Micro-average: pooled counts over all kinds.
    pub overall: Score,
}

impl EvaluationResult {
    pub fn overall_precision(&self) -> f64 {
        self.overall.precision
    }

    pub fn overall_recall(&self) -> f64 {
        self.overall.recall
    }

    pub fn from_counts(counts: &BTreeMap<SmellKind, KindCounts>) -> Self {
        let per_kind = SmellKind::ALL
            .into_iter()
            .map(|k| {
                (
                    k,
                    Score::from_counts(counts.get(&k).copied().unwrap_or_default()),
                )
            })
            .collect();
        let pooled = counts
            .values()
            .fold(KindCounts::default(), |acc, c| KindCounts {
                detected: acc.detected + c.detected,
                true_positives: acc.true_positives + c.true_positives,
                missed: acc.missed + c.missed,
            });
        EvaluationResult {
            per_kind,
            overall: Score::from_counts(pooled),
        }
    }

    /// Table layout: `detected \ TP \ precision%` per kind, then recall.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<32} {:>8} {:>8} {:>10} {:>10}",
            "smell", "detected", "tp", "precision", "recall"
        );
        let rows = self
            .per_kind
            .iter()
            .map(|(k, s)| (k.label(), s))
            .chain(std::iter::once(("Overall", &self.overall)));
        for (label, s) in rows {
            let marker = if s.zero_detection { " *" } else { "" };
            let _ = writeln!(
                out,
                "{label:<32} {:>8} {:>8} {:>9}%{marker} {:>9}%",
                s.detected,
                s.true_positives,
                format_percent(Some(100.0 * s.precision)),
                format_percent(Some(100.0 * s.recall)),
            );
        }
        if self.per_kind.values().any(|s| s.zero_detection) || self.overall.zero_detection {
            out.push_str("* no detections; precision reported as 100%\n");
        }
        out
    }
}

/// Counts findings per kind against the annotations; every finding must be labeled.
pub fn evaluate(
    findings: &[SmellFinding],
    truth: &GroundTruth,
) -> Result<EvaluationResult, EvalError> {
    let mut counts: BTreeMap<SmellKind, KindCounts> = BTreeMap::new();
    let mut unlabeled = BTreeSet::new();
    for f in findings {
        let key = (f.subject.clone(), f.kind);
        let c = counts.entry(f.kind).or_default();
        c.detected += 1;
        match truth.entries.get(&key) {
            Some(Verdict::TrueSmell) => c.true_positives += 1,
            Some(Verdict::FalsePositive) => {}
            None => {
                unlabeled.insert(key);
            }
        }
    }
    if !unlabeled.is_empty() {
        return Err(EvalError::UnlabeledFinding(unlabeled.into_iter().collect()));
    }
    for (_, kind) in &truth.missed {
        counts.entry(*kind).or_default().missed += 1;
    }
    Ok(EvaluationResult::from_counts(&counts))
}

pub const EVALUATION_FILE: &str = "evaluation.csv";

pub fn write_evaluation_csv<W: Write>(result: &EvaluationResult, out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record([
        "smell",
        "detected",
        "true_positives",
        "missed",
        "precision_pct",
        "recall_pct",
        "zero_detection",
    ])?;
    let rows = result
        .per_kind
        .iter()
        .map(|(k, s)| (k.name(), s))
        .chain(std::iter::once(("Overall", &result.overall)));
    for (name, s) in rows {
        writer.write_record([
            name.to_string(),
            s.detected.to_string(),
            s.true_positives.to_string(),
            s.missed.to_string(),
            format_percent(Some(100.0 * s.precision)),
            format_percent(Some(100.0 * s.recall)),
            s.zero_detection.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
