//! Computes type and project metrics for a source tree and writes the metrics CSV to stdout.
//!
//! `cargo run --example compute_metrics -- path/to/src`

use std::path::PathBuf;

use smellscan::metrics::write_metrics_csv;
use smellscan::report::format_percent;
use smellscan::{analyze, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/fields/src")
        });
    let out = tempfile_dir()?;
    let output = analyze(&RunConfig::new(&root, &out))?;
    let p = &output.metrics.project;

    eprintln!(
        "types {}  fields {}  methods {}  loc {}",
        p.total_types, p.total_fields, p.total_methods, p.total_loc
    );
    eprintln!(
        "child classes {}%  public fields {}%  public methods {}%",
        format_percent(p.pct_child_classes),
        format_percent(p.pct_public_fields),
        format_percent(p.pct_public_methods)
    );
    eprintln!("cc buckets [1,19] [20,39] [40,+): {:?}", p.cc_histogram);
    eprintln!("dit buckets [0,6] >6: {:?}", p.dit_histogram);
    write_metrics_csv(&output.metrics, std::io::stdout().lock())?;
    std::fs::remove_dir_all(out)?;
    Ok(())
}

fn tempfile_dir() -> std::io::Result<PathBuf> {
    let dir = std::env::temp_dir().join(format!("smellscan-metrics-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}
