//! Detects design smells in a source tree, optionally with a rule config file.
//!
//! `cargo run --example detect_smells -- path/to/src [rules.conf]`

use std::path::PathBuf;

use smellscan::frontend::{discover_java_files, SourceFile};
use smellscan::{build_model, compute_metrics, detect_all, parse_source, RuleConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus");
    let mut args = std::env::args_os().skip(1).map(PathBuf::from);
    let root = args.next().unwrap_or_else(|| fixtures.join("src"));
    let config = match args.next() {
        Some(path) => RuleConfig::load(&path)?,
        None => RuleConfig::default(),
    };

    let mut files = Vec::new();
    for path in discover_java_files(&root)? {
        files.push(parse_source(SourceFile::new(
            path.strip_prefix(&root)?,
            std::fs::read_to_string(&path)?,
        ))?);
    }
    let model = build_model(files);
    let metrics = compute_metrics(&model);
    let findings = detect_all(&model, &metrics, &config);

    println!("config {}", config.hash());
    for f in &findings {
        let evidence: Vec<String> = f.evidence.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!(
            "{}:{}  {}  {}  [{}]",
            f.file.display(),
            f.line,
            f.kind.label(),
            f.subject,
            evidence.join(" ")
        );
        if !f.cycle_members.is_empty() {
            println!("    cycle: {}", f.cycle_members.join(", "));
        }
    }
    println!("{} findings", findings.len());
    Ok(())
}
