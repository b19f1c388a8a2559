use std::collections::{BTreeMap, BTreeSet};

use crate::frontend::ast::{Modifiers, Node, NodeKind, TypeKind};
use crate::metrics::{MetricsTable, TypeMetrics};
use crate::model::{PseudoModel, TypeEntry};

use super::scc::strongly_connected_components;
use super::{RuleConfig, SmellFinding, SmellKind};

const LCOM_EPSILON: f64 = 1e-9;

fn finding(
    kind: SmellKind,
    entry: &TypeEntry,
    model: &PseudoModel,
    evidence: Vec<(&str, String)>,
) -> SmellFinding {
    SmellFinding {
        kind,
        subject: entry.qualified_name.clone(),
        file: model.file_path(entry).to_path_buf(),
        line: entry.line,
        evidence: evidence
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        cycle_members: Vec::new(),
    }
}

fn metric_finding(kind: SmellKind, t: &TypeMetrics, evidence: Vec<(&str, String)>) -> SmellFinding {
    SmellFinding {
        kind,
        subject: t.qualified_name.clone(),
        file: t.file.clone(),
        line: t.line,
        evidence: evidence
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        cycle_members: Vec::new(),
    }
}

/// `static void main(String[] args)` or `static void main(String... args)`.
fn declares_main(node: &Node) -> bool {
    node.children.iter().any(|m| {
        let Some(info) = m.method_info() else {
            return false;
        };
        let params: Vec<_> = m.parameters().collect();
        matches!(m.kind, NodeKind::MethodDecl(_))
            && info.name == "main"
            && info.modifiers.is_static()
            && info.return_type.as_deref() == Some("void")
            && params.len() == 1
            && matches!(&params[0].kind, NodeKind::Parameter { type_name, .. }
                if type_name.ends_with("String[]") || type_name.ends_with("String..."))
    })
}

pub fn detect_unutilized_abstraction(
    model: &PseudoModel,
    config: &RuleConfig,
) -> Vec<SmellFinding> {
    model
        .types
        .values()
        .filter(|e| !config.entry_point_allowlist.contains(&e.qualified_name))
        .filter(|e| model.dependencies.fan_in(&e.qualified_name) == 0)
        .filter(|e| !declares_main(model.type_node(e)))
        .map(|e| {
            finding(
                SmellKind::UnutilizedAbstraction,
                e,
                model,
                vec![("fan_in", "0".into())],
            )
        })
        .collect()
}

pub fn detect_insufficient_modularization(
    model: &PseudoModel,
    metrics: &MetricsTable,
    config: &RuleConfig,
) -> Vec<SmellFinding> {
    metrics
        .types
        .values()
        .filter_map(|t| {
            let mut evidence = Vec::new();
            if config.im_loc.is_some_and(|n| t.loc >= n) {
                evidence.push(("loc", t.loc.to_string()));
            }
            if config.im_nom.is_some_and(|n| t.nom >= n) {
                evidence.push(("nom", t.nom.to_string()));
            }
            if config.im_wmc.is_some_and(|n| t.wmc >= n) {
                evidence.push(("wmc", t.wmc.to_string()));
            }
            if config.im_max_cc.is_some_and(|n| t.max_cc >= n) {
                evidence.push(("max_cc", t.max_cc.to_string()));
            }
            let top_level = model
                .type_entry(&t.qualified_name)
                .is_some_and(TypeEntry::is_top_level);
            if top_level
                && config
                    .im_types_in_file
                    .is_some_and(|n| t.types_in_file >= n)
            {
                evidence.push(("types_in_file", t.types_in_file.to_string()));
            }
            (!evidence.is_empty())
                .then(|| metric_finding(SmellKind::InsufficientModularization, t, evidence))
        })
        .collect()
}

/// Body is `{}` or `{ throw ...; }`.
fn rejects_bequest(method: &Node) -> bool {
    match method.body() {
        Some(body) => {
            body.children.is_empty()
                || (body.children.len() == 1 && matches!(body.children[0].kind, NodeKind::Throw))
        }
        None => false,
    }
}

fn concrete_methods(node: &Node) -> impl Iterator<Item = (&str, usize)> {
    node.children.iter().filter_map(|m| match &m.kind {
        NodeKind::MethodDecl(info)
            if info.has_body && !info.modifiers.contains(Modifiers::ABSTRACT) =>
        {
            Some((info.name.as_str(), m.parameters().count()))
        }
        _ => None,
    })
}

pub fn detect_broken_hierarchy(model: &PseudoModel, _config: &RuleConfig) -> Vec<SmellFinding> {
    model
        .types
        .values()
        .filter_map(|e| {
            let inherited: BTreeSet<(&str, usize)> = model
                .ancestors(&e.qualified_name)
                .into_iter()
                .filter_map(|a| model.type_entry(a))
                .flat_map(|a| concrete_methods(model.type_node(a)))
                .collect();
            if inherited.is_empty() {
                return None;
            }
            let rejected: Vec<&str> = model
                .type_node(e)
                .children
                .iter()
                .filter(|m| matches!(m.kind, NodeKind::MethodDecl(_)) && rejects_bequest(m))
                .filter_map(|m| {
                    let info = m.method_info()?;
                    inherited
                        .contains(&(info.name.as_str(), m.parameters().count()))
                        .then_some(info.name.as_str())
                })
                .collect();
            (!rejected.is_empty()).then(|| {
                finding(
                    SmellKind::BrokenHierarchy,
                    e,
                    model,
                    vec![
                        ("rejected_overrides", rejected.len().to_string()),
                        ("methods", rejected.join(",")),
                    ],
                )
            })
        })
        .collect()
}

pub fn detect_deficient_encapsulation(
    metrics: &MetricsTable,
    config: &RuleConfig,
) -> Vec<SmellFinding> {
    metrics
        .types
        .values()
        .filter(|t| t.nopf_nonconst >= config.de_min_public_fields)
        .map(|t| {
            metric_finding(
                SmellKind::DeficientEncapsulation,
                t,
                vec![
                    ("nopf_nonconst", t.nopf_nonconst.to_string()),
                    ("fields", t.public_nonconst_fields.join(",")),
                ],
            )
        })
        .collect()
}

pub fn detect_cyclic_modularization(model: &PseudoModel, config: &RuleConfig) -> Vec<SmellFinding> {
    let names: Vec<&str> = model.types.keys().map(String::as_str).collect();
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let adj: Vec<Vec<usize>> = names
        .iter()
        .map(|n| {
            model
                .dependencies
                .internal_successors(n)
                .filter_map(|s| index.get(s).copied())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for component in strongly_connected_components(&adj) {
        if component.len() < 2 {
            continue;
        }
        let members: Vec<String> = component.iter().map(|&i| names[i].to_string()).collect();
        let subjects = if config.cdm_report_each_member {
            &members[..]
        } else {
            &members[..1]
        };
        for subject in subjects {
            let mut f = finding(
                SmellKind::CyclicDependentModularization,
                &model.types[subject],
                model,
                vec![("cycle_size", members.len().to_string())],
            );
            f.cycle_members = members.clone();
            out.push(f);
        }
    }
    out
}

pub fn detect_unnecessary_abstraction(
    model: &PseudoModel,
    metrics: &MetricsTable,
    config: &RuleConfig,
) -> Vec<SmellFinding> {
    metrics
        .types
        .values()
        .filter_map(|t| {
            if t.kind == TypeKind::Interface {
                let node = model.type_node(model.type_entry(&t.qualified_name)?);
                return node.children.is_empty().then(|| {
                    metric_finding(
                        SmellKind::UnnecessaryAbstraction,
                        t,
                        vec![("members", "0".into())],
                    )
                });
            }
            (t.nom == 0 && t.nof >= config.una_min_fields).then(|| {
                metric_finding(
                    SmellKind::UnnecessaryAbstraction,
                    t,
                    vec![("nom", "0".into()), ("nof", t.nof.to_string())],
                )
            })
        })
        .collect()
}

pub fn detect_wide_hierarchy(metrics: &MetricsTable, config: &RuleConfig) -> Vec<SmellFinding> {
    metrics
        .types
        .values()
        .filter(|t| t.nc >= config.wh_min_children)
        .map(|t| metric_finding(SmellKind::WideHierarchy, t, vec![("nc", t.nc.to_string())]))
        .collect()
}

pub fn detect_imperative_abstraction(
    metrics: &MetricsTable,
    config: &RuleConfig,
) -> Vec<SmellFinding> {
    metrics
        .types
        .values()
        .filter(|t| {
            t.kind == TypeKind::Class && t.nom == 1 && t.nopm == 1 && t.nof <= config.ia_max_fields
        })
        .map(|t| {
            metric_finding(
                SmellKind::ImperativeAbstraction,
                t,
                vec![
                    ("nom", "1".into()),
                    ("nopm", "1".into()),
                    ("nof", t.nof.to_string()),
                    ("method", t.methods[0].name.clone()),
                ],
            )
        })
        .collect()
}

pub fn detect_multifaceted_abstraction(
    metrics: &MetricsTable,
    config: &RuleConfig,
) -> Vec<SmellFinding> {
    metrics
        .types
        .values()
        .filter_map(|t| {
            let lcom = t.lcom?;
            (lcom + LCOM_EPSILON >= config.ma_min_lcom
                && t.nom >= config.ma_min_methods
                && t.nof >= config.ma_min_fields)
                .then(|| {
                    metric_finding(
                        SmellKind::MultifacetedAbstraction,
                        t,
                        vec![
                            ("lcom", format!("{lcom:.4}")),
                            ("nom", t.nom.to_string()),
                            ("nof", t.nof.to_string()),
                        ],
                    )
                })
        })
        .collect()
}

struct TagScan<'a> {
    source: &'a str,
    patterns: Vec<String>,
    min_branches: usize,
    /// Largest ladder or tag switch found, in branches.
    best: usize,
}

impl TagScan<'_> {
    fn text(&self, node: &Node) -> String {
        self.source
            .get(node.span.start..node.span.end)
            .unwrap_or_default()
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect()
    }

    fn instanceof_operand(&self, cond: &Node) -> Option<String> {
        match cond.kind {
            NodeKind::InstanceOf { .. } => cond.children.first().map(|o| self.text(o)),
            _ => None,
        }
    }

    fn ladder_len(&self, node: &Node, operand: &str) -> usize {
        if !matches!(node.kind, NodeKind::If) {
            return 0;
        }
        match node
            .children
            .first()
            .and_then(|c| self.instanceof_operand(c))
        {
            Some(o) if o == operand => {
                1 + node
                    .children
                    .get(2)
                    .map_or(0, |e| self.ladder_len(e, operand))
            }
            _ => 0,
        }
    }

    fn walk(&mut self, node: &Node, continuation: Option<&str>) {
        match &node.kind {
            NodeKind::TypeDecl(_) => return,
            NodeKind::If => {
                let operand = node
                    .children
                    .first()
                    .and_then(|c| self.instanceof_operand(c));
                if let Some(op) = &operand {
                    if continuation != Some(op.as_str()) {
                        let len = self.ladder_len(node, op);
                        if len >= self.min_branches {
                            self.best = self.best.max(len);
                        }
                    }
                }
                for (i, c) in node.children.iter().enumerate() {
                    let cont = if i == 2 { operand.as_deref() } else { None };
                    self.walk(c, cont);
                }
                return;
            }
            NodeKind::Switch => {
                let cases = node.children[1..]
                    .iter()
                    .filter(|c| matches!(c.kind, NodeKind::Case { labels } if labels > 0))
                    .count();
                let tagged = node
                    .children
                    .first()
                    .and_then(Node::terminal_name)
                    .is_some_and(|name| {
                        let lower = name.to_lowercase();
                        self.patterns.iter().any(|p| lower.contains(p.as_str()))
                    });
                if tagged && cases >= self.min_branches {
                    self.best = self.best.max(cases);
                }
            }
            _ => {}
        }
        for c in &node.children {
            self.walk(c, None);
        }
    }
}

pub fn detect_missing_hierarchy(model: &PseudoModel, config: &RuleConfig) -> Vec<SmellFinding> {
    let patterns: Vec<String> = config
        .mh_tag_patterns
        .iter()
        .map(|p| p.to_lowercase())
        .collect();
    model
        .types
        .values()
        .filter_map(|e| {
            let source = model.file_of(e).file.content();
            let mut offending = Vec::new();
            let mut branches = 0;
            for m in model.type_node(e).children.iter() {
                let (Some(info), Some(body)) = (m.method_info(), m.body()) else {
                    continue;
                };
                let mut scan = TagScan {
                    source,
                    patterns: patterns.clone(),
                    min_branches: config.mh_min_branches,
                    best: 0,
                };
                scan.walk(body, None);
                if scan.best > 0 {
                    offending.push(info.name.as_str());
                    branches = branches.max(scan.best);
                }
            }
            (!offending.is_empty()).then(|| {
                finding(
                    SmellKind::MissingHierarchy,
                    e,
                    model,
                    vec![
                        ("branches", branches.to_string()),
                        ("methods", offending.join(",")),
                    ],
                )
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_str;
    use crate::metrics::compute_metrics;
    use crate::model::build_model;
    use crate::smells::detect_all;

    fn run(files: &[(&str, &str)], config: &RuleConfig) -> Vec<SmellFinding> {
        let model = build_model(
            files
                .iter()
                .map(|(p, s)| parse_str(*p, s).expect("parse"))
                .collect(),
        );
        let metrics = compute_metrics(&model);
        detect_all(&model, &metrics, config)
    }

    fn of_kind(findings: &[SmellFinding], kind: SmellKind) -> Vec<&str> {
        findings
            .iter()
            .filter(|f| f.kind == kind)
            .map(|f| f.subject.as_str())
            .collect()
    }

    #[test]
    fn unutilized_abstraction() {
        let f = run(
            &[
                (
                    "A.java",
                    "class A { B b; public static void main(String[] args) {} }",
                ),
                ("B.java", "class B {}"),
                ("C.java", "class C {}"),
            ],
            &RuleConfig::default(),
        );
        assert_eq!(of_kind(&f, SmellKind::UnutilizedAbstraction), ["C"]);
        let allow = RuleConfig {
            entry_point_allowlist: ["C".to_string()].into(),
            ..RuleConfig::default()
        };
        let f = run(&[("C.java", "class C {}")], &allow);
        assert!(of_kind(&f, SmellKind::UnutilizedAbstraction).is_empty());
    }

    #[test]
    fn insufficient_modularization_clauses() {
        let f = run(
            &[("A.java", "class A { void f() {} } class B {}")],
            &RuleConfig::default(),
        );
        let im: Vec<_> = f
            .iter()
            .filter(|x| x.kind == SmellKind::InsufficientModularization)
            .collect();
        assert_eq!(im.len(), 2);
        assert!(im.iter().all(|x| x.evidence["types_in_file"] == "2"));

        let big = format!(
            "class W {{ {} }}",
            (0..21)
                .map(|i| format!("void m{i}() {{ {} }}", "if (true) {} ".repeat(4)))
                .collect::<String>()
        );
        let f = run(&[("W.java", &big)], &RuleConfig::default());
        let im: Vec<_> = f
            .iter()
            .filter(|x| x.kind == SmellKind::InsufficientModularization)
            .collect();
        assert_eq!(im[0].evidence["wmc"], "105");
        assert!(!im[0].evidence.contains_key("nom"));
    }

    #[test]
    fn broken_hierarchy() {
        let base = (
            "A.java",
            "class A { void m() { run(); } void n() { run(); } void run() {} }",
        );
        let f = run(
            &[
                base,
                (
                    "B.java",
                    "class B extends A { void m() { throw new RuntimeException(); } }",
                ),
            ],
            &RuleConfig::default(),
        );
        assert_eq!(of_kind(&f, SmellKind::BrokenHierarchy), ["B"]);
        let f = run(
            &[
                base,
                ("B.java", "class B extends A { void m() { super.m(); } }"),
            ],
            &RuleConfig::default(),
        );
        assert!(of_kind(&f, SmellKind::BrokenHierarchy).is_empty());
    }

    #[test]
    fn deficient_encapsulation_exempts_constants() {
        let f = run(
            &[
                (
                    "A.java",
                    "class A { public int x; void f() {} void g() {} }",
                ),
                (
                    "B.java",
                    "class B { public static final int K = 1; void f() {} void g() {} }",
                ),
            ],
            &RuleConfig::default(),
        );
        assert_eq!(of_kind(&f, SmellKind::DeficientEncapsulation), ["A"]);
    }

    #[test]
    fn cyclic_modularization_per_member_and_per_cycle() {
        let files = [
            ("A.java", "class A { B b; }"),
            ("B.java", "class B { A a; }"),
        ];
        let f = run(&files, &RuleConfig::default());
        let cdm: Vec<_> = f
            .iter()
            .filter(|x| x.kind == SmellKind::CyclicDependentModularization)
            .collect();
        assert_eq!(cdm.len(), 2);
        assert!(cdm.iter().all(|x| x.cycle_members == ["A", "B"]));

        let once = RuleConfig {
            cdm_report_each_member: false,
            ..RuleConfig::default()
        };
        let f = run(&files, &once);
        assert_eq!(of_kind(&f, SmellKind::CyclicDependentModularization), ["A"]);
    }

    #[test]
    fn unnecessary_abstraction() {
        let f = run(
            &[
                ("D.java", "class D { int a; int b; }"),
                ("M.java", "interface M {}"),
                ("E.java", "class E {}"),
            ],
            &RuleConfig::default(),
        );
        assert_eq!(of_kind(&f, SmellKind::UnnecessaryAbstraction), ["D", "M"]);
    }

    #[test]
    fn wide_hierarchy_boundary() {
        for (n, expected) in [(9, false), (10, true)] {
            let subs: String = (0..n)
                .map(|i| format!("static class S{i} extends W {{}} "))
                .collect();
            let f = run(
                &[("W.java", &format!("class W {{ {subs} }}"))],
                &RuleConfig::default(),
            );
            let wh = f.iter().find(|x| x.kind == SmellKind::WideHierarchy);
            assert_eq!(wh.is_some(), expected, "n={n}");
            if let Some(wh) = wh {
                assert_eq!(wh.evidence["nc"], "10");
            }
        }
    }

    #[test]
    fn imperative_abstraction() {
        let f = run(
            &[
                ("S.java", "class S { public void sort(int[] a) {} }"),
                (
                    "T.java",
                    "class T { public void a() {} public void b() {} }",
                ),
            ],
            &RuleConfig::default(),
        );
        assert_eq!(of_kind(&f, SmellKind::ImperativeAbstraction), ["S"]);
    }

    #[test]
    fn multifaceted_abstraction_at_boundary() {
        let fields: String = (0..5).map(|i| format!("private int f{i}; ")).collect();
        let methods: String = (0..10)
            .map(|i| format!("int m{i}() {{ return f{}; }} ", i % 5))
            .collect();
        let f = run(
            &[("M.java", &format!("class M {{ {fields}{methods} }}"))],
            &RuleConfig::default(),
        );
        let ma = f
            .iter()
            .find(|x| x.kind == SmellKind::MultifacetedAbstraction)
            .expect("flagged");
        assert_eq!(ma.evidence["lcom"], "0.8000");
    }

    #[test]
    fn missing_hierarchy_ladders_and_tag_switches() {
        let three = "class R { void r(Object s) { if (s instanceof String) {} else if (s instanceof Integer) {} else if (s instanceof Long) {} } }";
        let f = run(&[("R.java", three)], &RuleConfig::default());
        let mh = f
            .iter()
            .find(|x| x.kind == SmellKind::MissingHierarchy)
            .expect("flagged");
        assert_eq!(mh.evidence["branches"], "3");
        assert_eq!(mh.evidence["methods"], "r");

        let two = "class R { void r(Object s) { if (s instanceof String) {} else if (s instanceof Integer) {} } }";
        assert!(of_kind(
            &run(&[("R.java", two)], &RuleConfig::default()),
            SmellKind::MissingHierarchy
        )
        .is_empty());

        let mixed = "class R { void r(Object s, Object t) { if (s instanceof String) {} else if (t instanceof Integer) {} else if (s instanceof Long) {} } }";
        assert!(of_kind(
            &run(&[("R.java", mixed)], &RuleConfig::default()),
            SmellKind::MissingHierarchy
        )
        .is_empty());

        let tag = "class R { int shapeType; void r() { switch (this.shapeType) { case 1: break; case 2: break; case 3: break; default: } } }";
        assert_eq!(
            of_kind(
                &run(&[("R.java", tag)], &RuleConfig::default()),
                SmellKind::MissingHierarchy
            ),
            ["R"]
        );
        let plain = "class R { int n; void r() { switch (n) { case 1: break; case 2: break; case 3: break; } } }";
        assert!(of_kind(
            &run(&[("R.java", plain)], &RuleConfig::default()),
            SmellKind::MissingHierarchy
        )
        .is_empty());
    }
}
