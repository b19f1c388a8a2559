//! Analyzes two projects, assigns each to a stack and prints the smell comparison table.
//!
//! `cargo run --example compare_stacks`

use std::path::PathBuf;

use smellscan::report::{comparison, format_percent, write_comparison_csv};
use smellscan::{analyze, RunConfig, SmellKind, Stack};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let scratch = std::env::temp_dir().join(format!("smellscan-compare-{}", std::process::id()));
    let projects = [
        ("corpus", fixtures.join("corpus/src"), Stack::Developing),
        ("shop", fixtures.join("fields/src"), Stack::Established),
        ("bank", fixtures.join("clean/src"), Stack::Established),
    ];

    let mut reports = Vec::new();
    for (name, src, stack) in projects {
        let run = RunConfig {
            project_name: Some(name.into()),
            ..RunConfig::new(src, scratch.join(name))
        };
        reports.push((analyze(&run)?.report, stack));
    }
    let table = comparison(&reports);

    for stack in table.stacks() {
        println!("{stack}: {} findings", table.stack_total(stack));
    }
    for kind in SmellKind::ALL {
        let row = &table.rows[&kind];
        let cells: Vec<String> = table
            .stacks()
            .into_iter()
            .map(|s| {
                format!(
                    "{:>4} ({:>6}%)",
                    row.total(s),
                    format_percent(row.mean_percent[&s])
                )
            })
            .collect();
        println!("{:<34}{}", kind.label(), cells.join("  "));
    }
    println!();
    write_comparison_csv(&table, std::io::stdout().lock())?;
    std::fs::remove_dir_all(scratch)?;
    Ok(())
}
