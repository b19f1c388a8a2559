//! Parses one Java file and prints its declarations.
//!
//! `cargo run --example parse_java -- path/to/File.java`

use std::path::PathBuf;

use smellscan::frontend::{NodeKind, SourceFile};
use smellscan::parse_source;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR"))
                .join("tests/fixtures/corpus/src/fixtures/Complex.java")
        });
    let parsed = parse_source(SourceFile::read(&path)?)?;
    println!(
        "{}: {} tokens, {} physical lines",
        path.display(),
        parsed.tokens.tokens.len(),
        parsed.file.physical_lines()
    );
    for node in parsed.unit.descendants() {
        let line = node.span.line;
        match &node.kind {
            NodeKind::PackageDecl { name } => println!("{line:>5}  package {name}"),
            NodeKind::TypeDecl(info) => println!("{line:>5}  {:?} {}", info.kind, info.name),
            NodeKind::FieldDecl {
                type_name, names, ..
            } => println!("{line:>5}    field {type_name} {}", names.join(", ")),
            NodeKind::MethodDecl(info) => println!("{line:>5}    method {}", info.name),
            NodeKind::ConstructorDecl(info) => println!("{line:>5}    constructor {}", info.name),
            _ => {}
        }
    }
    for d in &parsed.diagnostics {
        println!("warning: {}:{}: {}", d.line, d.column, d.message);
    }
    Ok(())
}
