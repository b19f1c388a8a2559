//! Writes the provenance log of a project analysis and reads it back.
//!
//! `cargo run --example provenance_log -- path/to/src`

use std::path::PathBuf;

use smellscan::frontend::{discover_java_files, SourceFile};
use smellscan::report::{parse_provenance, render_provenance, ProvenanceHeader};
use smellscan::{build_model, compute_metrics, detect_all, parse_source, RuleConfig, TOOL_VERSION};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus/src")
        });
    let config = RuleConfig::default();
    let mut files = Vec::new();
    for path in discover_java_files(&root)? {
        files.push(parse_source(SourceFile::new(
            path.strip_prefix(&root)?,
            std::fs::read_to_string(&path)?,
        ))?);
    }
    let model = build_model(files);
    let findings = detect_all(&model, &compute_metrics(&model), &config);

    let header = ProvenanceHeader {
        tool_version: TOOL_VERSION.into(),
        config_hash: config.hash(),
        project: root.display().to_string(),
        timestamp: "2024-01-01T00:00:00Z".into(),
    };
    let text = render_provenance(&header, &findings);
    print!("{text}");

    let (read_header, read_findings) = parse_provenance(&text)?;
    assert_eq!(read_header, header);
    assert_eq!(read_findings, findings);
    eprintln!("round trip ok: {} findings", read_findings.len());
    Ok(())
}
