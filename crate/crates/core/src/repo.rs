//! Repository metadata and maturity classification.
//!
//! Metadata file: `key = value` lines (`#` comments) with keys `commits`,
//! `contributors`, `releases`, `last_commit_date` and optionally
//! `analysis_date` (ISO-8601 dates; analysis date defaults to today).
//!
//! Git log export: one commit per line, `date<TAB>email<TAB>hash`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use chrono::{Months, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_DEVELOPING_COMMITS: u64 = 2000;
pub const MAX_DEVELOPING_CONTRIBUTORS: u64 = 30;
pub const MAX_DEVELOPING_RELEASES: u64 = 2;
pub const RECENCY_MONTHS: u32 = 9;
pub const MIN_ESTABLISHED_RELEASES: u64 = 2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepoError {
    #[error("invalid metadata: {0}")]
    InvalidMetadata(String),
    #[error("malformed git log at line {line}: {reason}")]
    MalformedLog { line: usize, reason: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepoMetadata {
    pub commits: u64,
    pub contributors: u64,
    pub releases: u64,
    pub last_commit_date: NaiveDate,
    pub analysis_date: NaiveDate,
}

impl RepoMetadata {
    pub fn validate(&self) -> Result<(), RepoError> {
        if self.last_commit_date > self.analysis_date {
            return Err(RepoError::InvalidMetadata(format!(
                "last_commit_date {} is after analysis_date {}",
                self.last_commit_date, self.analysis_date
            )));
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, RepoError> {
        let text = std::fs::read_to_string(path).map_err(|e| RepoError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text, chrono::Local::now().date_naive())
    }

    /// Parses a metadata file; `today` fills a missing `analysis_date`.
    pub fn parse(text: &str, today: NaiveDate) -> Result<Self, RepoError> {
        let mut commits = None;
        let mut contributors = None;
        let mut releases = None;
        let mut last = None;
        let mut analysis = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let invalid = |msg: String| RepoError::InvalidMetadata(format!("line {line}: {msg}"));
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| invalid("expected key=value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let count = || {
                if value.starts_with('-') {
                    return Err(invalid(format!("{key} must not be negative")));
                }
                value
                    .parse::<u64>()
                    .map_err(|_| invalid(format!("{key} is not a count: {value}")))
            };
            let date = || {
                parse_date(value)
                    .map_err(|_| invalid(format!("{key} is not an ISO-8601 date: {value}")))
            };
            let slot_taken = match key {
                "commits" => commits.replace(count()?).is_some(),
                "contributors" => contributors.replace(count()?).is_some(),
                "releases" => releases.replace(count()?).is_some(),
                "last_commit_date" => last.replace(date()?).is_some(),
                "analysis_date" => analysis.replace(date()?).is_some(),
                _ => return Err(invalid(format!("unknown key {key}"))),
            };
            if slot_taken {
                return Err(invalid(format!("{key} given twice")));
            }
        }
        let missing = |k: &str| RepoError::InvalidMetadata(format!("missing key {k}"));
        let meta = RepoMetadata {
            commits: commits.ok_or_else(|| missing("commits"))?,
            contributors: contributors.ok_or_else(|| missing("contributors"))?,
            releases: releases.ok_or_else(|| missing("releases"))?,
            last_commit_date: last.ok_or_else(|| missing("last_commit_date"))?,
            analysis_date: analysis.unwrap_or(today),
        };
        meta.validate()?;
        Ok(meta)
    }
}

/// Accepts `YYYY-MM-DD` or an RFC 3339 instant (date part is used).
fn parse_date(text: &str) -> Result<NaiveDate, chrono::ParseError> {
    NaiveDate::parse_from_str(text, "%Y-%m-%d")
        .or_else(|_| chrono::DateTime::parse_from_rfc3339(text).map(|d| d.date_naive()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stack {
    Developing,
    Established,
    Unclassified,
}

impl fmt::Display for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stack::Developing => "Developing",
            Stack::Established => "Established",
            Stack::Unclassified => "Unclassified",
        })
    }
}

impl std::str::FromStr for Stack {
    type Err = RepoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "developing" => Ok(Stack::Developing),
            "established" => Ok(Stack::Established),
            "unclassified" => Ok(Stack::Unclassified),
            other => Err(RepoError::InvalidMetadata(format!("unknown class {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion {
    pub stack: Stack,
    pub description: String,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaturityClass {
    pub stack: Stack,
    /// Every criterion of both stacks with its status.
    pub rationale: Vec<Criterion>,
}

impl fmt::Display for MaturityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.stack)?;
        for c in &self.rationale {
            let mark = if c.satisfied { "pass" } else { "fail" };
            writeln!(f, "  [{mark}] {}: {}", c.stack, c.description)?;
        }
        Ok(())
    }
}

/// Last commit plus nine calendar months (day clamped) reaches the analysis date.
pub fn recently_active(meta: &RepoMetadata) -> bool {
    meta.last_commit_date
        .checked_add_months(Months::new(RECENCY_MONTHS))
        .is_none_or(|limit| limit >= meta.analysis_date)
}

pub fn classify(meta: &RepoMetadata) -> Result<MaturityClass, RepoError> {
    meta.validate()?;
    let criterion = |stack, description: String, satisfied| Criterion {
        stack,
        description,
        satisfied,
    };
    let developing = vec![
        criterion(
            Stack::Developing,
            format!("commits {} <= {MAX_DEVELOPING_COMMITS}", meta.commits),
            meta.commits <= MAX_DEVELOPING_COMMITS,
        ),
        criterion(
            Stack::Developing,
            format!(
                "contributors {} <= {MAX_DEVELOPING_CONTRIBUTORS}",
                meta.contributors
            ),
            meta.contributors <= MAX_DEVELOPING_CONTRIBUTORS,
        ),
        criterion(
            Stack::Developing,
            format!(
                "last commit {} within {RECENCY_MONTHS} months of {}",
                meta.last_commit_date, meta.analysis_date
            ),
            recently_active(meta),
        ),
        criterion(
            Stack::Developing,
            format!("releases {} <= {MAX_DEVELOPING_RELEASES}", meta.releases),
            meta.releases <= MAX_DEVELOPING_RELEASES,
        ),
    ];
    let established = vec![
        criterion(
            Stack::Established,
            format!("commits {} > {MAX_DEVELOPING_COMMITS}", meta.commits),
            meta.commits > MAX_DEVELOPING_COMMITS,
        ),
        criterion(
            Stack::Established,
            format!(
                "contributors {} > {MAX_DEVELOPING_CONTRIBUTORS}",
                meta.contributors
            ),
            meta.contributors > MAX_DEVELOPING_CONTRIBUTORS,
        ),
        criterion(
            Stack::Established,
            format!("releases {} >= {MIN_ESTABLISHED_RELEASES}", meta.releases),
            meta.releases >= MIN_ESTABLISHED_RELEASES,
        ),
    ];
    let stack = if developing.iter().all(|c| c.satisfied) {
        Stack::Developing
    } else if established.iter().all(|c| c.satisfied) {
        Stack::Established
    } else {
        Stack::Unclassified
    };
    let mut rationale = developing;
    rationale.extend(established);
    Ok(MaturityClass { stack, rationale })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogSummary {
    pub commits: u64,
    pub contributors: u64,
    pub last_commit_date: Option<NaiveDate>,
}

/// Commit count, case-insensitively distinct author emails and newest date.
pub fn parse_git_log(log_text: &str) -> Result<LogSummary, RepoError> {
    let mut commits = 0;
    let mut emails = BTreeSet::new();
    let mut last: Option<NaiveDate> = None;
    for (i, raw) in log_text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let malformed = |reason: &str| RepoError::MalformedLog {
            line,
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = raw.split('\t').collect();
        let [date, email, hash] = fields[..] else {
            return Err(malformed("expected 3 tab-separated fields"));
        };
        let date = parse_date(date.trim()).map_err(|_| malformed("bad date"))?;
        let email = email.trim();
        if email.is_empty() {
            return Err(malformed("empty author email"));
        }
        if hash.trim().is_empty() {
            return Err(malformed("empty commit hash"));
        }
        commits += 1;
        emails.insert(email.to_lowercase());
        last = last.max(Some(date));
    }
    Ok(LogSummary {
        commits,
        contributors: emails.len() as u64,
        last_commit_date: last,
    })
}
