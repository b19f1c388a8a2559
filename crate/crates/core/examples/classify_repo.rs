//! Classifies a repository as developing or established from a metadata file or a git log dump.
//!
//! `cargo run --example classify_repo -- repo.meta`
//! `cargo run --example classify_repo -- --git-log commits.tsv`

use std::path::PathBuf;

use smellscan::repo::parse_git_log;
use smellscan::{classify, RepoMetadata};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.first().map(String::as_str) == Some("--git-log") {
        let path = args
            .get(1)
            .map(PathBuf::from)
            .unwrap_or_else(|| fixtures.join("gitlog/commits.tsv"));
        let summary = parse_git_log(&std::fs::read_to_string(path)?)?;
        println!(
            "commits {}  contributors {}",
            summary.commits, summary.contributors
        );
        if let Some(date) = summary.last_commit_date {
            println!("last commit {date}");
        }
        return Ok(());
    }

    let paths: Vec<PathBuf> = if args.is_empty() {
        ["developing", "established", "gap"]
            .iter()
            .map(|n| fixtures.join(format!("metadata/{n}.meta")))
            .collect()
    } else {
        args.iter().map(PathBuf::from).collect()
    };
    for path in paths {
        let meta = RepoMetadata::load(&path)?;
        println!("== {}", path.display());
        println!("{}", classify(&meta)?);
    }
    Ok(())
}
