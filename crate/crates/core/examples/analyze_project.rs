//! Runs the whole pipeline over a source tree and writes every output file.
//!
//! `cargo run --example analyze_project -- path/to/src out-dir`

use std::path::PathBuf;

use smellscan::{analyze, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus");
    let mut args = std::env::args_os().skip(1).map(PathBuf::from);
    let src = args.next().unwrap_or_else(|| corpus.join("src"));
    let out = args
        .next()
        .unwrap_or_else(|| std::env::temp_dir().join("smellscan-example"));
    let bundled = src.starts_with(&corpus);
    let run = RunConfig {
        config_path: bundled.then(|| corpus.join("smellscan.conf")),
        ground_truth_path: bundled.then(|| corpus.join("ground_truth.tsv")),
        metadata_path: bundled.then(|| corpus.join("../metadata/developing.meta")),
        worker_count: std::thread::available_parallelism().map_or(1, usize::from),
        ..RunConfig::new(&src, &out)
    };
    let output = analyze(&run)?;

    let report = &output.report;
    println!(
        "{}: {} findings, {} skipped files",
        report.project_name,
        report.findings.len(),
        report.skipped_files.len()
    );
    if let Some(class) = &report.maturity {
        println!("{class}");
    }
    if let Some(eval) = &output.evaluation {
        print!("{}", eval.render_table());
    }
    for path in &output.written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
