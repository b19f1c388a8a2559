//! Design smell detection for Java source trees.
//!
//! The pipeline parses `.java` files into syntax trees, merges them into a
//! three-layer project model (elements, element descriptors, namespaces with
//! inheritance and dependency graphs), computes object-oriented metrics, runs
//! a configurable rule engine for ten design smells and writes the results as
//! a provenance log, JSON report and CSV tables. Repository metadata can be
//! used to classify a project as developing or established, and detected
//! smells can be scored against manually validated ground truth.
//!
//! Runnable examples for each stage live in `examples/`.

pub mod eval;
pub mod frontend;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod repo;
pub mod report;
pub mod smells;

pub use eval::{evaluate, EvaluationResult, GroundTruth};
pub use frontend::{parse_source, parse_str, ParsedFile, SourceFile};
pub use metrics::{compute_metrics, MetricsTable, ProjectMetrics, TypeMetrics};
pub use model::{build_model, PseudoModel};
pub use pipeline::{analyze, AnalysisOutput, RunConfig};
pub use repo::{classify, MaturityClass, RepoMetadata, Stack};
pub use report::{ComparisonReport, ProjectReport};
pub use smells::{detect_all, RuleConfig, SmellFinding, SmellKind};

/// Version string written into report headers.
pub const TOOL_VERSION: &str = concat!("smellscan ", env!("CARGO_PKG_VERSION"));
