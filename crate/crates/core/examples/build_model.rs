//! Builds the project model of a source tree and prints its hierarchy and dependency graph.
//!
//! `cargo run --example build_model -- path/to/src`

use std::path::PathBuf;

use smellscan::frontend::{discover_java_files, SourceFile};
use smellscan::{build_model, parse_source};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus/src")
        });
    let mut files = Vec::new();
    for path in discover_java_files(&root)? {
        let relative = path.strip_prefix(&root)?.to_path_buf();
        match parse_source(SourceFile::new(relative, std::fs::read_to_string(&path)?)) {
            Ok(parsed) => files.push(parsed),
            Err(e) => eprintln!("skipped {}: {e}", path.display()),
        }
    }
    let model = build_model(files);

    println!("{} types in {} files", model.types.len(), model.files.len());
    for name in model.types.keys() {
        let chain = model.superclass_chain(name);
        if chain.is_empty() {
            println!("  {name}");
        } else {
            println!("  {name} -> {}", chain.join(" -> "));
        }
    }
    println!("dependencies ({} edges):", model.dependencies.edge_count());
    for (from, to) in model.dependencies.edge_set() {
        let evidence = model.evidence(&from, &to).count();
        println!("  {from} -> {to} ({evidence} references)");
    }
    for d in &model.diagnostics {
        println!("warning: {d}");
    }
    Ok(())
}
