//! Scores the findings of a project against a ground-truth file.
//!
//! `cargo run --example evaluate_precision -- path/to/src truth.tsv [rules.conf]`

use std::path::PathBuf;

use smellscan::eval::{load_ground_truth, write_evaluation_csv};
use smellscan::frontend::{discover_java_files, SourceFile};
use smellscan::{build_model, compute_metrics, detect_all, evaluate, parse_source, RuleConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus");
    let mut args = std::env::args_os().skip(1).map(PathBuf::from);
    let root = args.next().unwrap_or_else(|| corpus.join("src"));
    let truth = load_ground_truth(
        &args
            .next()
            .unwrap_or_else(|| corpus.join("ground_truth.tsv")),
    )?;
    let config = RuleConfig::load(&args.next().unwrap_or_else(|| corpus.join("smellscan.conf")))?;

    let mut files = Vec::new();
    for path in discover_java_files(&root)? {
        files.push(parse_source(SourceFile::new(
            path.strip_prefix(&root)?,
            std::fs::read_to_string(&path)?,
        ))?);
    }
    let model = build_model(files);
    let findings = detect_all(&model, &compute_metrics(&model), &config);

    let result = evaluate(&findings, &truth)?;
    print!("{}", result.render_table());
    println!();
    write_evaluation_csv(&result, std::io::stdout().lock())?;
    Ok(())
}
