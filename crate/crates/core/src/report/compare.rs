use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use super::{format_percent, percentages, ProjectReport};
use crate::repo::Stack;
use crate::smells::SmellKind;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectColumn {
    pub name: String,
    pub stack: Stack,
    pub counts: BTreeMap<SmellKind, usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub totals: BTreeMap<Stack, usize>,
    /// Mean over member projects of the kind's share of each project's findings;
    /// projects without findings are left out of the mean.
    pub mean_percent: BTreeMap<Stack, Option<f64>>,
}

impl ComparisonRow {
    pub fn total(&self, stack: Stack) -> usize {
        self.totals.get(&stack).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    /// Grouped by stack (developing, established, unclassified), input order within a group.
    pub projects: Vec<ProjectColumn>,
    pub rows: BTreeMap<SmellKind, ComparisonRow>,
}

impl ComparisonReport {
    pub fn stack_total(&self, stack: Stack) -> usize {
        self.rows.values().map(|r| r.total(stack)).sum()
    }

    pub fn stacks(&self) -> Vec<Stack> {
        let mut stacks: Vec<Stack> = self.projects.iter().map(|p| p.stack).collect();
        stacks.sort();
        stacks.dedup();
        stacks
    }
}

/// Aggregates per-project counts into per-stack totals; each project lands in
/// exactly the stack it is paired with.
pub fn comparison(projects: &[(ProjectReport, Stack)]) -> ComparisonReport {
    let columns: Vec<ProjectColumn> = projects
        .iter()
        .map(|(report, stack)| ProjectColumn {
            name: report.project_name.clone(),
            stack: *stack,
            counts: SmellKind::ALL
                .into_iter()
                .map(|k| (k, report.smell_counts.get(&k).copied().unwrap_or(0)))
                .collect(),
        })
        .collect();
    from_columns(columns)
}

pub(crate) fn from_columns(mut columns: Vec<ProjectColumn>) -> ComparisonReport {
    columns.sort_by_key(|c| c.stack);
    let shares: Vec<Option<BTreeMap<SmellKind, f64>>> =
        columns.iter().map(|c| percentages(&c.counts)).collect();
    let mut rows = BTreeMap::new();
    for kind in SmellKind::ALL {
        let mut row = ComparisonRow::default();
        for stack in [Stack::Developing, Stack::Established, Stack::Unclassified] {
            let members: Vec<usize> = (0..columns.len())
                .filter(|&i| columns[i].stack == stack)
                .collect();
            if members.is_empty() {
                continue;
            }
            row.totals.insert(
                stack,
                members.iter().map(|&i| columns[i].counts[&kind]).sum(),
            );
            let pcts: Vec<f64> = members
                .iter()
                .filter_map(|&i| shares[i].as_ref().map(|s| s[&kind]))
                .collect();
            let mean = (!pcts.is_empty()).then(|| pcts.iter().sum::<f64>() / pcts.len() as f64);
            row.mean_percent.insert(stack, mean);
        }
        rows.insert(kind, row);
    }
    ComparisonReport {
        projects: columns,
        rows,
    }
}

/// Table layout: a stack row and a project row as headers, one row per smell,
/// a total row last. Each stack group ends with a `total` column.
pub fn write_comparison_csv<W: Write>(report: &ComparisonReport, out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let stacks = report.stacks();
    let mut stack_row = vec!["stack".to_string()];
    let mut name_row = vec!["smell".to_string()];
    for &stack in &stacks {
        for p in report.projects.iter().filter(|p| p.stack == stack) {
            stack_row.push(stack.to_string());
            name_row.push(p.name.clone());
        }
        stack_row.push(stack.to_string());
        name_row.push("total".into());
        stack_row.push(stack.to_string());
        name_row.push("mean %".into());
    }
    writer.write_record(&stack_row)?;
    writer.write_record(&name_row)?;
    for (kind, row) in &report.rows {
        let mut record = vec![kind.label().to_string()];
        for &stack in &stacks {
            for p in report.projects.iter().filter(|p| p.stack == stack) {
                record.push(p.counts[kind].to_string());
            }
            record.push(row.total(stack).to_string());
            record.push(format_percent(
                row.mean_percent.get(&stack).copied().flatten(),
            ));
        }
        writer.write_record(&record)?;
    }
    let mut total = vec!["Total".to_string()];
    for &stack in &stacks {
        for p in report.projects.iter().filter(|p| p.stack == stack) {
            total.push(p.counts.values().sum::<usize>().to_string());
        }
        total.push(report.stack_total(stack).to_string());
        total.push(String::new());
    }
    writer.write_record(&total)?;
    writer.flush()?;
    Ok(())
}
