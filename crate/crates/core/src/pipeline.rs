//! End-to-end analysis of one source tree.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::eval::{
    evaluate, load_ground_truth, write_evaluation_csv, EvalError, EvaluationResult, EVALUATION_FILE,
};
use crate::frontend::{
    discover_java_files, parse_source, FrontendError, ParsedFile, SourceError, SourceFile,
};
use crate::metrics::{compute_metrics, write_metrics_csv, MetricsTable};
use crate::model::build_model;
use crate::repo::{classify, RepoError, RepoMetadata};
use crate::report::{
    count_by_kind, percentages, write_provenance, ProjectReport, ProvenanceHeader, SkippedFile,
    PROVENANCE_FILE, REPORT_FILE,
};
use crate::smells::{detect_all, ConfigError, RuleConfig};
use crate::TOOL_VERSION;

pub const METRICS_FILE: &str = "metrics.csv";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub source_root: PathBuf,
    pub config_path: Option<PathBuf>,
    pub metadata_path: Option<PathBuf>,
    pub ground_truth_path: Option<PathBuf>,
    pub output_dir: PathBuf,
    /// Written into headers instead of the current time.
    pub fixed_timestamp: Option<String>,
    pub worker_count: usize,
    /// Defaults to the last component of `source_root`.
    pub project_name: Option<String>,
}

impl RunConfig {
    pub fn new(source_root: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            source_root: source_root.into(),
            config_path: None,
            metadata_path: None,
            ground_truth_path: None,
            output_dir: output_dir.into(),
            fixed_timestamp: None,
            worker_count: 1,
            project_name: None,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if !self.source_root.is_dir() {
            return Err(PipelineError::InvalidRun(format!(
                "source root {} is not a directory",
                self.source_root.display()
            )));
        }
        if self.worker_count == 0 {
            return Err(PipelineError::InvalidRun(
                "worker count must be at least 1".into(),
            ));
        }
        if let Some(ts) = &self.fixed_timestamp {
            chrono::DateTime::parse_from_rfc3339(ts).map_err(|e| {
                PipelineError::InvalidRun(format!("timestamp {ts} is not ISO-8601: {e}"))
            })?;
        }
        Ok(())
    }

    fn project(&self) -> String {
        self.project_name.clone().unwrap_or_else(|| {
            self.source_root
                .canonicalize()
                .ok()
                .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
                .unwrap_or_else(|| "project".into())
        })
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{0}")]
    InvalidRun(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Metadata(#[from] RepoError),
    #[error(transparent)]
    Evaluation(#[from] EvalError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisOutput {
    pub report: ProjectReport,
    pub metrics: MetricsTable,
    pub evaluation: Option<EvaluationResult>,
    pub written: Vec<PathBuf>,
}

impl AnalysisOutput {
    /// Some files could not be parsed.
    pub fn is_partial(&self) -> bool {
        !self.report.skipped_files.is_empty()
    }
}

/// Discovers every `.java` file under the source root and analyzes them.
pub fn analyze(run: &RunConfig) -> Result<AnalysisOutput, PipelineError> {
    run.validate()?;
    let files = discover_java_files(&run.source_root).map_err(io_error(&run.source_root))?;
    analyze_files(run, files)
}

/// Analyzes the given files (absolute or relative to the working directory)
/// in any order; results depend only on the set of files.
pub fn analyze_files(
    run: &RunConfig,
    mut files: Vec<PathBuf>,
) -> Result<AnalysisOutput, PipelineError> {
    run.validate()?;
    files.sort();
    files.dedup();
    let config = match &run.config_path {
        Some(path) => RuleConfig::load(path)?,
        None => RuleConfig::default(),
    };
    let maturity = match &run.metadata_path {
        Some(path) => Some(classify(&RepoMetadata::load(path)?)?),
        None => None,
    };
    let truth = run
        .ground_truth_path
        .as_deref()
        .map(load_ground_truth)
        .transpose()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(run.worker_count)
        .build()?;
    let (parsed, skipped, model, metrics, findings) = pool.install(|| {
        let results: Vec<(PathBuf, Result<ParsedFile, FrontendError>)> = files
            .par_iter()
            .map(|path| {
                let relative = relative_path(&run.source_root, path);
                let parsed = std::fs::read(path)
                    .map_err(|source| {
                        FrontendError::Source(SourceError::Io {
                            path: relative.clone(),
                            source,
                        })
                    })
                    .and_then(|bytes| Ok(SourceFile::from_bytes(relative.clone(), bytes)?))
                    .and_then(parse_source);
                (relative, parsed)
            })
            .collect();
        let mut parsed = Vec::new();
        let mut skipped = Vec::new();
        for (path, result) in results {
            match result {
                Ok(file) => parsed.push(file),
                Err(e) => skipped.push(SkippedFile {
                    path,
                    error: e.to_string(),
                }),
            }
        }
        let diagnostics = parse_diagnostics(&parsed);
        let model = build_model(parsed);
        let metrics = compute_metrics(&model);
        let findings = detect_all(&model, &metrics, &config);
        (diagnostics, skipped, model, metrics, findings)
    });

    let mut diagnostics = parsed;
    diagnostics.extend(model.diagnostics.iter().map(ToString::to_string));
    let timestamp = run
        .fixed_timestamp
        .clone()
        .unwrap_or_else(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    let smell_counts = count_by_kind(&findings);
    let report = ProjectReport {
        project_name: run.project(),
        tool_version: TOOL_VERSION.to_string(),
        timestamp,
        config_hash: config.hash(),
        maturity,
        smell_percentages: percentages(&smell_counts),
        smell_counts,
        project_metrics: metrics.project.clone(),
        findings,
        config_echo: config
            .echo()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<BTreeMap<_, _>>(),
        diagnostics,
        skipped_files: skipped,
    };
    let evaluation = truth
        .as_ref()
        .map(|t| evaluate(&report.findings, t))
        .transpose()?;

    let written = write_outputs(&run.output_dir, &report, &metrics, evaluation.as_ref())?;
    Ok(AnalysisOutput {
        report,
        metrics,
        evaluation,
        written,
    })
}

fn relative_path(root: &Path, path: &Path) -> PathBuf {
    path.strip_prefix(root)
        .map(Path::to_path_buf)
        .unwrap_or_else(|_| path.to_path_buf())
}

fn parse_diagnostics(files: &[ParsedFile]) -> Vec<String> {
    files
        .iter()
        .flat_map(|f| {
            f.diagnostics.iter().map(move |d| {
                format!(
                    "{}:{}:{}: {}",
                    f.path().display(),
                    d.line,
                    d.column,
                    d.message
                )
            })
        })
        .collect()
}

fn write_outputs(
    dir: &Path,
    report: &ProjectReport,
    metrics: &MetricsTable,
    evaluation: Option<&EvaluationResult>,
) -> Result<Vec<PathBuf>, PipelineError> {
    std::fs::create_dir_all(dir).map_err(io_error(dir))?;
    let header = ProvenanceHeader {
        tool_version: report.tool_version.clone(),
        config_hash: report.config_hash.clone(),
        project: report.project_name.clone(),
        timestamp: report.timestamp.clone(),
    };
    let provenance = dir.join(PROVENANCE_FILE);
    write_provenance(&report.findings, &header, &provenance).map_err(io_error(&provenance))?;
    let report_path = dir.join(REPORT_FILE);
    report.write(&report_path).map_err(io_error(&report_path))?;
    let metrics_path = dir.join(METRICS_FILE);
    write_csv(&metrics_path, |f| write_metrics_csv(metrics, f))?;
    let mut written = vec![provenance, report_path, metrics_path];
    if let Some(result) = evaluation {
        let path = dir.join(EVALUATION_FILE);
        write_csv(&path, |f| write_evaluation_csv(result, f))?;
        written.push(path);
    }
    Ok(written)
}

pub(crate) fn write_csv(
    path: &Path,
    write: impl FnOnce(std::fs::File) -> csv::Result<()>,
) -> Result<(), PipelineError> {
    let file = std::fs::File::create(path).map_err(io_error(path))?;
    write(file).map_err(|e| PipelineError::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(files: &[(&str, &str)]) -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        for (path, text) in files {
            let full = dir.path().join(path);
            std::fs::create_dir_all(full.parent().unwrap()).unwrap();
            std::fs::write(full, text).unwrap();
        }
        dir
    }

    #[test]
    fn empty_directory() {
        let src = tree(&[]);
        let out = tempfile::tempdir().unwrap();
        let run = RunConfig {
            fixed_timestamp: Some("2020-01-01T00:00:00Z".into()),
            ..RunConfig::new(src.path(), out.path())
        };
        let result = analyze(&run).unwrap();
        assert!(result.report.findings.is_empty());
        assert!(!result.is_partial());
        let log = std::fs::read_to_string(out.path().join(PROVENANCE_FILE)).unwrap();
        assert!(log.lines().all(|l| l.starts_with('#')));
        assert!(out.path().join(REPORT_FILE).exists());
        assert!(out.path().join(METRICS_FILE).exists());
    }

    #[test]
    fn malformed_file_is_skipped() {
        let src = tree(&[
            (
                "p/A.java",
                "package p; public class A { public static void main(String[] a) { new B(); } }",
            ),
            ("p/B.java", "package p; class B { void f() {} void g() {} }"),
            ("p/Bad.java", "package p; class Bad { void f() {"),
        ]);
        let out = tempfile::tempdir().unwrap();
        let result = analyze(&RunConfig::new(src.path(), out.path())).unwrap();
        assert!(result.is_partial());
        assert_eq!(result.report.skipped_files[0].path, Path::new("p/Bad.java"));
        assert_eq!(result.metrics.types.len(), 2);
    }

    #[test]
    fn rejects_bad_runs() {
        let out = tempfile::tempdir().unwrap();
        let missing = RunConfig::new(out.path().join("nope"), out.path());
        assert!(matches!(
            analyze(&missing),
            Err(PipelineError::InvalidRun(_))
        ));
        let zero = RunConfig {
            worker_count: 0,
            ..RunConfig::new(out.path(), out.path())
        };
        assert!(matches!(analyze(&zero), Err(PipelineError::InvalidRun(_))));
    }
}
