//! `provenance.log`: `#`-prefixed header lines, then one finding per line.
//!
//! Record fields are tab-separated: smell, subject, file, line, then evidence
//! as `key=value`, then `@cycle_members=a,b` when present. Inside fields a
//! backslash escapes `\`, tab (`\t`), newline (`\n`) and carriage return
//! (`\r`); keys additionally escape `=` and a leading `@`, and cycle members
//! escape `,`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::smells::SmellFinding;

pub const PROVENANCE_FILE: &str = "provenance.log";
const TITLE: &str = "# smellscan provenance log";
const CYCLE_KEY: &str = "@cycle_members";

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProvenanceHeader {
    pub tool_version: String,
    pub config_hash: String,
    pub project: String,
    pub timestamp: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProvenanceError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

fn escape_into(out: &mut String, text: &str, extra: &[char]) {
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c if extra.contains(&c) => {
                out.push('\\');
                out.push(c);
            }
            c => out.push(c),
        }
    }
}

fn escape(text: &str, extra: &[char]) -> String {
    let mut out = String::with_capacity(text.len());
    escape_into(&mut out, text, extra);
    out
}

fn escape_key(key: &str) -> String {
    let mut out = String::with_capacity(key.len() + 1);
    if key.starts_with('@') {
        out.push('\\');
    }
    escape_into(&mut out, key, &['=']);
    out
}

/// Unescapes up to the first unescaped `stop` character; returns the text and
/// the remainder after the stop character, if one was found.
fn unescape_until(text: &str, stop: Option<char>) -> Result<(String, Option<&str>), String> {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.char_indices();
    while let Some((i, c)) = chars.next() {
        if Some(c) == stop {
            return Ok((out, Some(&text[i + c.len_utf8()..])));
        }
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some((_, 't')) => out.push('\t'),
            Some((_, 'n')) => out.push('\n'),
            Some((_, 'r')) => out.push('\r'),
            Some((_, e @ ('\\' | '=' | ',' | '@'))) => out.push(e),
            Some((_, e)) => return Err(format!("unknown escape \\{e}")),
            None => return Err("dangling backslash".into()),
        }
    }
    Ok((out, None))
}

fn unescape(text: &str) -> Result<String, String> {
    unescape_until(text, None).map(|(s, _)| s)
}

pub fn render_provenance(header: &ProvenanceHeader, findings: &[SmellFinding]) -> String {
    let mut out = String::new();
    out.push_str(TITLE);
    out.push('\n');
    for (key, value) in [
        ("tool_version", &header.tool_version),
        ("config_hash", &header.config_hash),
        ("project", &header.project),
        ("timestamp", &header.timestamp),
    ] {
        let _ = writeln!(out, "# {key}={}", escape(value, &[]));
    }
    for f in findings {
        out.push_str(f.kind.name());
        out.push('\t');
        escape_into(&mut out, &f.subject, &[]);
        out.push('\t');
        escape_into(&mut out, &f.file.to_string_lossy(), &[]);
        let _ = write!(out, "\t{}", f.line);
        for (k, v) in &f.evidence {
            out.push('\t');
            out.push_str(&escape_key(k));
            out.push('=');
            escape_into(&mut out, v, &[]);
        }
        if !f.cycle_members.is_empty() {
            let members: Vec<String> = f.cycle_members.iter().map(|m| escape(m, &[','])).collect();
            let _ = write!(out, "\t{CYCLE_KEY}={}", members.join(","));
        }
        out.push('\n');
    }
    out
}

/// Writes a fresh `provenance.log` at `path`.
pub fn write_provenance(
    findings: &[SmellFinding],
    header: &ProvenanceHeader,
    path: &Path,
) -> std::io::Result<()> {
    std::fs::write(path, render_provenance(header, findings))
}

pub fn parse_provenance(
    text: &str,
) -> Result<(ProvenanceHeader, Vec<SmellFinding>), ProvenanceError> {
    let mut header = ProvenanceHeader::default();
    let mut findings = Vec::new();
    for (i, raw) in text.split('\n').enumerate() {
        let line = i + 1;
        let malformed = |reason: String| ProvenanceError::Malformed { line, reason };
        if raw.is_empty() {
            continue;
        }
        if let Some(rest) = raw.strip_prefix('#') {
            if let Some((key, value)) = rest.trim_start().split_once('=') {
                let value = unescape(value).map_err(malformed)?;
                match key {
                    "tool_version" => header.tool_version = value,
                    "config_hash" => header.config_hash = value,
                    "project" => header.project = value,
                    "timestamp" => header.timestamp = value,
                    _ => {}
                }
            }
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() < 4 {
            return Err(malformed("expected at least 4 tab-separated fields".into()));
        }
        let kind = fields[0].parse().map_err(|e| malformed(format!("{e}")))?;
        let subject = unescape(fields[1]).map_err(malformed)?;
        let file = PathBuf::from(unescape(fields[2]).map_err(malformed)?);
        let line_no = fields[3]
            .parse()
            .map_err(|_| malformed(format!("bad line number {}", fields[3])))?;
        let mut evidence = BTreeMap::new();
        let mut cycle_members = Vec::new();
        for field in &fields[4..] {
            if let Some(members) = field
                .strip_prefix(CYCLE_KEY)
                .and_then(|r| r.strip_prefix('='))
            {
                let mut rest = Some(members);
                while let Some(text) = rest {
                    let (member, next) = unescape_until(text, Some(',')).map_err(malformed)?;
                    cycle_members.push(member);
                    rest = next;
                }
                continue;
            }
            let (key, value) = unescape_until(field, Some('=')).map_err(malformed)?;
            let value = value.ok_or_else(|| malformed(format!("evidence without '=': {field}")))?;
            evidence.insert(key, unescape(value).map_err(malformed)?);
        }
        findings.push(SmellFinding {
            kind,
            subject,
            file,
            line: line_no,
            evidence,
            cycle_members,
        });
    }
    Ok((header, findings))
}
