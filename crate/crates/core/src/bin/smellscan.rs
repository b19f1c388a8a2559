use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use smellscan::eval::{load_ground_truth, write_evaluation_csv, EVALUATION_FILE};
use smellscan::pipeline::{analyze, RunConfig};
use smellscan::report::{comparison, format_percent, write_comparison_csv, ProjectReport};
use smellscan::{classify, evaluate, RepoMetadata, Stack};

const EXIT_OK: u8 = 0;
const EXIT_FAILURE: u8 = 1;
const EXIT_PARTIAL: u8 = 2;
const EXIT_USAGE: u8 = 64;
const COMPARISON_FILE: &str = "comparison.csv";

#[derive(Parser)]
#[command(
    name = "smellscan",
    version,
    about = "Design smell detection for Java source trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a source tree, compute metrics and detect smells.
    Analyze {
        #[arg(long)]
        src: PathBuf,
        /// Threshold file (`key = value` lines).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Repository metadata used to classify the project.
        #[arg(long)]
        metadata: Option<PathBuf>,
        /// Ground truth; adds evaluation.csv to the outputs.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, default_value = "smellscan-out")]
        out: PathBuf,
        /// ISO-8601 instant written instead of the current time.
        #[arg(long)]
        timestamp: Option<String>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        project: Option<String>,
    },
    /// Classify a repository as developing or established.
    Classify {
        #[arg(long)]
        metadata: PathBuf,
    },
    /// Score a report against ground truth.
    Evaluate {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Aggregate several reports by stack.
    Compare {
        #[arg(long = "report", required = true)]
        reports: Vec<PathBuf>,
        /// `project=stack`; overrides the class stored in the report.
        #[arg(long = "class")]
        classes: Vec<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let result = match cli.command {
        Command::Analyze {
            src,
            config,
            metadata,
            truth,
            out,
            timestamp,
            workers,
            project,
        } => cmd_analyze(RunConfig {
            source_root: src,
            config_path: config,
            metadata_path: metadata,
            ground_truth_path: truth,
            output_dir: out,
            fixed_timestamp: timestamp,
            worker_count: workers,
            project_name: project,
        }),
        Command::Classify { metadata } => cmd_classify(metadata),
        Command::Evaluate { report, truth, out } => cmd_evaluate(report, truth, out),
        Command::Compare {
            reports,
            classes,
            out,
        } => cmd_compare(reports, classes, out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn cmd_analyze(run: RunConfig) -> Result<u8, String> {
    let output = analyze(&run).map_err(|e| e.to_string())?;
    let report = &output.report;
    for d in &report.diagnostics {
        eprintln!("warning: {d}");
    }
    for s in &report.skipped_files {
        eprintln!("skipped: {}", s.error);
    }
    println!(
        "project {}: {} types, {} findings",
        report.project_name,
        output.metrics.types.len(),
        report.findings.len()
    );
    for (kind, count) in report.smell_counts.iter().filter(|(_, &c)| c > 0) {
        let pct = report.smell_percentages.as_ref().map(|p| p[kind]);
        println!(
            "  {:<32} {count:>6} {:>7}%",
            kind.label(),
            format_percent(pct)
        );
    }
    if let Some(class) = &report.maturity {
        println!("class: {}", class.stack);
    }
    if let Some(eval) = &output.evaluation {
        print!("{}", eval.render_table());
    }
    for path in &output.written {
        println!("wrote {}", path.display());
    }
    Ok(if output.is_partial() {
        EXIT_PARTIAL
    } else {
        EXIT_OK
    })
}

fn cmd_classify(metadata: PathBuf) -> Result<u8, String> {
    let meta = RepoMetadata::load(&metadata).map_err(|e| e.to_string())?;
    let class = classify(&meta).map_err(|e| e.to_string())?;
    let _ = write!(std::io::stdout(), "{class}");
    Ok(EXIT_OK)
}

fn load_report(path: &Path) -> Result<ProjectReport, String> {
    ProjectReport::load(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_evaluate(report: PathBuf, truth: PathBuf, out: PathBuf) -> Result<u8, String> {
    let report = load_report(&report)?;
    let truth = load_ground_truth(&truth).map_err(|e| e.to_string())?;
    let result = evaluate(&report.findings, &truth).map_err(|e| e.to_string())?;
    print!("{}", result.render_table());
    std::fs::create_dir_all(&out).map_err(|e| format!("{}: {e}", out.display()))?;
    let path = out.join(EVALUATION_FILE);
    let file = std::fs::File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    write_evaluation_csv(&result, file).map_err(|e| format!("{}: {e}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(EXIT_OK)
}

fn cmd_compare(paths: Vec<PathBuf>, classes: Vec<String>, out: PathBuf) -> Result<u8, String> {
    let mut assigned: BTreeMap<String, Stack> = BTreeMap::new();
    for entry in &classes {
        let (name, stack) = entry
            .split_once('=')
            .ok_or_else(|| format!("--class expects project=stack, got {entry}"))?;
        let stack: Stack = stack.parse().map_err(|e| format!("{e}"))?;
        if assigned.insert(name.to_string(), stack).is_some() {
            return Err(format!("project {name} classified twice"));
        }
    }
    let mut projects = Vec::new();
    for path in &paths {
        let report = load_report(path)?;
        let stack = match assigned.remove(&report.project_name) {
            Some(stack) => stack,
            None => report
                .maturity
                .as_ref()
                .map(|m| m.stack)
                .ok_or_else(|| format!("no class given for project {}", report.project_name))?,
        };
        projects.push((report, stack));
    }
    if let Some(name) = assigned.keys().next() {
        return Err(format!(
            "--class names project {name}, which matches no report"
        ));
    }
    let result = comparison(&projects);
    std::fs::create_dir_all(&out).map_err(|e| format!("{}: {e}", out.display()))?;
    let path = out.join(COMPARISON_FILE);
    let file = std::fs::File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    write_comparison_csv(&result, file).map_err(|e| format!("{}: {e}", path.display()))?;
    for stack in result.stacks() {
        println!("{stack}: {} findings", result.stack_total(stack));
    }
    println!("wrote {}", path.display());
    Ok(EXIT_OK)
}
