//! Design-smell rule engine.

mod config;
mod rules;
pub mod scc;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::metrics::MetricsTable;
use crate::model::PseudoModel;

pub use config::{ConfigError, RuleConfig, CONFIG_KEYS};
pub use rules::{
    detect_broken_hierarchy, detect_cyclic_modularization, detect_deficient_encapsulation,
    detect_imperative_abstraction, detect_insufficient_modularization, detect_missing_hierarchy,
    detect_multifaceted_abstraction, detect_unnecessary_abstraction, detect_unutilized_abstraction,
    detect_wide_hierarchy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SmellKind {
    UnutilizedAbstraction,
    InsufficientModularization,
    BrokenHierarchy,
    DeficientEncapsulation,
    CyclicDependentModularization,
    UnnecessaryAbstraction,
    WideHierarchy,
    ImperativeAbstraction,
    MultifacetedAbstraction,
    MissingHierarchy,
}

impl SmellKind {
    pub const ALL: [SmellKind; 10] = [
        SmellKind::UnutilizedAbstraction,
        SmellKind::InsufficientModularization,
        SmellKind::BrokenHierarchy,
        SmellKind::DeficientEncapsulation,
        SmellKind::CyclicDependentModularization,
        SmellKind::UnnecessaryAbstraction,
        SmellKind::WideHierarchy,
        SmellKind::ImperativeAbstraction,
        SmellKind::MultifacetedAbstraction,
        SmellKind::MissingHierarchy,
    ];

    /// Stable serialized name.
    pub fn name(self) -> &'static str {
        match self {
            SmellKind::UnutilizedAbstraction => "UnutilizedAbstraction",
            SmellKind::InsufficientModularization => "InsufficientModularization",
            SmellKind::BrokenHierarchy => "BrokenHierarchy",
            SmellKind::DeficientEncapsulation => "DeficientEncapsulation",
            SmellKind::CyclicDependentModularization => "CyclicDependentModularization",
            SmellKind::UnnecessaryAbstraction => "UnnecessaryAbstraction",
            SmellKind::WideHierarchy => "WideHierarchy",
            SmellKind::ImperativeAbstraction => "ImperativeAbstraction",
            SmellKind::MultifacetedAbstraction => "MultifacetedAbstraction",
            SmellKind::MissingHierarchy => "MissingHierarchy",
        }
    }

    /// Human-readable row label.
    pub fn label(self) -> &'static str {
        match self {
            SmellKind::UnutilizedAbstraction => "Unutilized Abstraction",
            SmellKind::InsufficientModularization => "Insufficient Modularization",
            SmellKind::BrokenHierarchy => "Broken Hierarchy",
            SmellKind::DeficientEncapsulation => "Deficient Encapsulation",
            SmellKind::CyclicDependentModularization => "Cyclic-Dependent Modularization",
            SmellKind::UnnecessaryAbstraction => "Unnecessary Abstraction",
            SmellKind::WideHierarchy => "Wide Hierarchy",
            SmellKind::ImperativeAbstraction => "Imperative Abstraction",
            SmellKind::MultifacetedAbstraction => "Multifaceted Abstraction",
            SmellKind::MissingHierarchy => "Missing Hierarchy",
        }
    }
}

impl fmt::Display for SmellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown smell `{0}`")]
pub struct UnknownSmell(pub String);

impl FromStr for SmellKind {
    type Err = UnknownSmell;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SmellKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownSmell(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SmellFinding {
    pub kind: SmellKind,
    pub subject: String,
    pub file: PathBuf,
    pub line: u32,
    pub evidence: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cycle_members: Vec<String>,
}

impl SmellFinding {
    /// Canonical ordering key.
    pub fn sort_key(&self) -> (SmellKind, &str, &std::path::Path, u32) {
        (self.kind, &self.subject, &self.file, self.line)
    }
}

type Rule = fn(&PseudoModel, &MetricsTable, &RuleConfig) -> Vec<SmellFinding>;

const RULES: [Rule; 10] = [
    |m, _, c| detect_unutilized_abstraction(m, c),
    |m, t, c| detect_insufficient_modularization(m, t, c),
    |m, _, c| detect_broken_hierarchy(m, c),
    |_, t, c| detect_deficient_encapsulation(t, c),
    |m, _, c| detect_cyclic_modularization(m, c),
    |m, t, c| detect_unnecessary_abstraction(m, t, c),
    |_, t, c| detect_wide_hierarchy(t, c),
    |_, t, c| detect_imperative_abstraction(t, c),
    |_, t, c| detect_multifaceted_abstraction(t, c),
    |m, _, c| detect_missing_hierarchy(m, c),
];

/// All rule outputs, sorted by (kind, subject, file, line).
pub fn detect_all(
    model: &PseudoModel,
    metrics: &MetricsTable,
    config: &RuleConfig,
) -> Vec<SmellFinding> {
    let mut findings: Vec<SmellFinding> = RULES
        .par_iter()
        .flat_map_iter(|rule| rule(model, metrics, config))
        .collect();
    findings.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()).then_with(|| a.cmp(b)));
    findings
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for kind in SmellKind::ALL {
            assert_eq!(kind.name().parse::<SmellKind>(), Ok(kind));
        }
        assert!("Nope".parse::<SmellKind>().is_err());
        let unique: std::collections::BTreeSet<_> =
            SmellKind::ALL.iter().map(|k| k.name()).collect();
        assert_eq!(unique.len(), 10);
    }

    #[test]
    fn empty_project_has_no_findings() {
        let model = crate::model::build_model(Vec::new());
        let metrics = crate::metrics::compute_metrics(&model);
        assert!(detect_all(&model, &metrics, &RuleConfig::default()).is_empty());
    }
}
