//! Per-method, per-type and project-level metrics over a [`PseudoModel`].

mod csv_export;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::frontend::ast::{Modifiers, Node, NodeKind, TypeKind};
use crate::model::{PseudoModel, TypeEntry};

pub use csv_export::{write_metrics_csv, METRICS_COLUMNS};

/// Lower bounds of the CC buckets `[1,19]`, `[20,39]`, `[40,∞)`.
pub const CC_BUCKETS: [u32; 3] = [1, 20, 40];
/// DIT buckets are `[0,6]` and `(6,∞)`.
pub const DIT_BUCKET_LIMIT: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Visibility {
    Public,
    Protected,
    Package,
    Private,
}

impl Visibility {
    fn of(modifiers: Modifiers) -> Self {
        if modifiers.contains(Modifiers::PUBLIC) {
            Visibility::Public
        } else if modifiers.contains(Modifiers::PROTECTED) {
            Visibility::Protected
        } else if modifiers.contains(Modifiers::PRIVATE) {
            Visibility::Private
        } else {
            Visibility::Package
        }
    }
}

impl fmt::Display for Visibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Visibility::Public => "public",
            Visibility::Protected => "protected",
            Visibility::Package => "package",
            Visibility::Private => "private",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodMetrics {
    pub qualified_name: String,
    pub name: String,
    pub line: u32,
    pub arity: usize,
    pub cc: u32,
    pub loc: usize,
    pub visibility: Visibility,
    pub is_static: bool,
    pub has_body: bool,
    pub is_override: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeMetrics {
    pub qualified_name: String,
    pub kind: TypeKind,
    pub file: PathBuf,
    pub line: u32,
    pub loc: usize,
    pub nof: usize,
    pub nopf: usize,
    pub nopf_nonconst: usize,
    pub nom: usize,
    pub nopm: usize,
    pub nc: usize,
    pub dit: usize,
    pub wmc: u32,
    pub max_cc: u32,
    pub lcom: Option<f64>,
    pub types_in_file: usize,
    /// Names of public fields that are not `static final`.
    pub public_nonconst_fields: Vec<String>,
    pub methods: Vec<MethodMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectMetrics {
    pub total_types: usize,
    pub total_fields: usize,
    pub total_methods: usize,
    pub total_loc: usize,
    pub pct_child_classes: Option<f64>,
    pub pct_public_fields: Option<f64>,
    pub pct_public_methods: Option<f64>,
    /// Method counts with cc in `[1,19]`, `[20,39]`, `[40,∞)`.
    pub cc_histogram: [usize; 3],
    /// Type counts with dit in `[0,6]`, `(6,∞)`.
    pub dit_histogram: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsTable {
    pub types: BTreeMap<String, TypeMetrics>,
    pub project: ProjectMetrics,
}

impl MetricsTable {
    pub fn get(&self, qualified_name: &str) -> Option<&TypeMetrics> {
        self.types.get(qualified_name)
    }
}

pub fn compute_metrics(model: &PseudoModel) -> MetricsTable {
    let types: BTreeMap<String, TypeMetrics> = model
        .types
        .par_iter()
        .map(|(q, entry)| (q.clone(), type_metrics(model, entry)))
        .collect();
    let project = project_metrics(model, &types);
    MetricsTable { types, project }
}

/// `1 +` the decision points of the method body; bodiless methods get 1.
pub fn cyclomatic_complexity(method: &Node) -> u32 {
    1 + method.body().map_or(0, decision_points)
}

/// if, for, enhanced for, while, do, case labels, catch clauses, `?:`, `&&`, `||`.
/// Nested type declarations and lambda bodies are not part of the count.
pub fn decision_points(node: &Node) -> u32 {
    let own = match &node.kind {
        NodeKind::TypeDecl(_) => return 0,
        NodeKind::If
        | NodeKind::For
        | NodeKind::ForEach
        | NodeKind::While
        | NodeKind::Do
        | NodeKind::Catch { .. }
        | NodeKind::Conditional => 1,
        NodeKind::Case { labels } => *labels,
        NodeKind::Binary { op } if op == "&&" || op == "||" => 1,
        _ => 0,
    };
    own + node.children.iter().map(decision_points).sum::<u32>()
}

/// Length of the project-internal `extends` chain, stopping at a revisit.
pub fn dit(model: &PseudoModel, qualified_name: &str) -> usize {
    model.superclass_chain(qualified_name).len()
}

/// `1 − Σ_f methods_accessing(f) / (nom·nof)`; absent when either count is 0.
pub fn lcom(model: &PseudoModel, qualified_name: &str) -> Option<f64> {
    let entry = model.type_entry(qualified_name)?;
    let node = model.type_node(entry);
    let fields = field_names(node);
    let methods: Vec<&Node> = methods_of(node).collect();
    lcom_of(&fields, &methods)
}

fn lcom_of(fields: &[String], methods: &[&Node]) -> Option<f64> {
    if fields.is_empty() || methods.is_empty() {
        return None;
    }
    let field_set: BTreeSet<&str> = fields.iter().map(String::as_str).collect();
    let accesses: usize = methods
        .iter()
        .map(|m| accessed_fields(m, &field_set).len())
        .sum();
    let value = 1.0 - accesses as f64 / (fields.len() * methods.len()) as f64;
    Some(value.clamp(0.0, 1.0))
}

/// Own fields read or written in the method body. A bare name counts unless a
/// parameter or local of the same name exists; `this.f` always counts.
fn accessed_fields<'a>(method: &Node, fields: &BTreeSet<&'a str>) -> BTreeSet<&'a str> {
    let mut out = BTreeSet::new();
    let Some(body) = method.body() else {
        return out;
    };
    let mut shadowed: BTreeSet<&str> = BTreeSet::new();
    for n in method.children.iter().flat_map(Node::descendants) {
        match &n.kind {
            NodeKind::Parameter { name, .. } => {
                shadowed.insert(name);
            }
            NodeKind::LocalVarDecl { names, .. } => {
                shadowed.extend(names.iter().map(String::as_str))
            }
            _ => {}
        }
    }
    visit_accesses(body, fields, &shadowed, &mut out);
    out
}

fn visit_accesses<'a>(
    node: &Node,
    fields: &BTreeSet<&'a str>,
    shadowed: &BTreeSet<&str>,
    out: &mut BTreeSet<&'a str>,
) {
    match &node.kind {
        NodeKind::TypeDecl(_) => return,
        NodeKind::Name { name } if !shadowed.contains(name.as_str()) => {
            if let Some(f) = fields.get(name.as_str()) {
                out.insert(f);
            }
        }
        NodeKind::FieldAccess { name }
            if matches!(node.children.first().map(|c| &c.kind), Some(NodeKind::This)) =>
        {
            if let Some(f) = fields.get(name.as_str()) {
                out.insert(f);
            }
        }
        _ => {}
    }
    for c in &node.children {
        visit_accesses(c, fields, shadowed, out);
    }
}

fn field_names(type_node: &Node) -> Vec<String> {
    type_node
        .children
        .iter()
        .filter_map(|c| match &c.kind {
            NodeKind::FieldDecl { names, .. } => Some(names.clone()),
            _ => None,
        })
        .flatten()
        .collect()
}

fn methods_of(type_node: &Node) -> impl Iterator<Item = &Node> {
    type_node
        .children
        .iter()
        .filter(|c| matches!(c.kind, NodeKind::MethodDecl(_)))
}

/// Interface members are implicitly public; interface fields are constants.
fn effective_field_modifiers(kind: TypeKind, declared: Modifiers) -> Modifiers {
    let mut m = declared;
    if kind == TypeKind::Interface {
        m.insert(Modifiers::PUBLIC);
        m.insert(Modifiers::STATIC);
        m.insert(Modifiers::FINAL);
    }
    m
}

fn effective_method_modifiers(kind: TypeKind, declared: Modifiers) -> Modifiers {
    let mut m = declared;
    if kind == TypeKind::Interface && !declared.contains(Modifiers::PRIVATE) {
        m.insert(Modifiers::PUBLIC);
    }
    m
}

/// Concrete-or-abstract method signatures (name, arity) of every resolved ancestor.
fn inherited_signatures(model: &PseudoModel, qualified_name: &str) -> BTreeSet<(String, usize)> {
    model
        .ancestors(qualified_name)
        .into_iter()
        .filter_map(|a| model.type_entry(a))
        .flat_map(|e| methods_of(model.type_node(e)))
        .filter_map(|m| {
            m.method_info()
                .map(|i| (i.name.clone(), m.parameters().count()))
        })
        .collect()
}

fn type_metrics(model: &PseudoModel, entry: &TypeEntry) -> TypeMetrics {
    let node = model.type_node(entry);
    let file = model.file_of(entry);
    let kind = entry.kind();
    let q = &entry.qualified_name;

    let mut nof = 0;
    let mut nopf = 0;
    let mut public_nonconst_fields = Vec::new();
    for c in &node.children {
        if let NodeKind::FieldDecl {
            modifiers, names, ..
        } = &c.kind
        {
            let m = effective_field_modifiers(kind, *modifiers);
            nof += names.len();
            if m.is_public() {
                nopf += names.len();
                if !(m.is_static() && m.is_final()) {
                    public_nonconst_fields.extend(names.iter().cloned());
                }
            }
        }
    }

    let inherited = inherited_signatures(model, q);
    let methods: Vec<MethodMetrics> = methods_of(node)
        .map(|m| {
            let info = m.method_info().expect("method");
            let modifiers = effective_method_modifiers(kind, info.modifiers);
            let arity = m.parameters().count();
            MethodMetrics {
                qualified_name: format!("{q}#{}", info.name),
                name: info.name.clone(),
                line: m.line(),
                arity,
                cc: cyclomatic_complexity(m),
                loc: file.tokens.loc_between(m.span.line, m.span.end_line),
                visibility: Visibility::of(modifiers),
                is_static: modifiers.is_static(),
                has_body: info.has_body,
                is_override: inherited.contains(&(info.name.clone(), arity)),
            }
        })
        .collect();

    let nopm = methods
        .iter()
        .filter(|m| m.visibility == Visibility::Public)
        .count();
    let wmc = methods.iter().map(|m| m.cc).sum();
    let max_cc = methods.iter().map(|m| m.cc).max().unwrap_or(0);
    let method_nodes: Vec<&Node> = methods_of(node).collect();
    let types_in_file = file
        .unit
        .children
        .iter()
        .filter(|c| c.is_type_decl())
        .count();

    TypeMetrics {
        qualified_name: q.clone(),
        kind,
        file: file.path().to_path_buf(),
        line: entry.line,
        loc: file.tokens.loc_between(node.span.line, node.span.end_line),
        nof,
        nopf,
        nopf_nonconst: public_nonconst_fields.len(),
        nom: methods.len(),
        nopm,
        nc: model.subtypes(q).count(),
        dit: dit(model, q),
        wmc,
        max_cc,
        lcom: lcom_of(&field_names(node), &method_nodes),
        types_in_file,
        public_nonconst_fields,
        methods,
    }
}

fn percent(part: usize, whole: usize) -> Option<f64> {
    (whole > 0).then(|| 100.0 * part as f64 / whole as f64)
}

fn project_metrics(model: &PseudoModel, types: &BTreeMap<String, TypeMetrics>) -> ProjectMetrics {
    let total_types = types.len();
    let total_fields = types.values().map(|t| t.nof).sum();
    let total_methods = types.values().map(|t| t.nom).sum();
    let public_fields = types.values().map(|t| t.nopf).sum();
    let public_methods = types.values().map(|t| t.nopm).sum();
    let children = types
        .keys()
        .filter(|q| model.supertype(q).is_some())
        .count();

    let mut cc_histogram = [0; 3];
    for m in types.values().flat_map(|t| &t.methods) {
        let bucket = CC_BUCKETS.iter().rposition(|&lo| m.cc >= lo).unwrap_or(0);
        cc_histogram[bucket] += 1;
    }
    let mut dit_histogram = [0; 2];
    for t in types.values() {
        dit_histogram[usize::from(t.dit > DIT_BUCKET_LIMIT)] += 1;
    }

    ProjectMetrics {
        total_types,
        total_fields,
        total_methods,
        total_loc: model.files.iter().map(|f| f.loc()).sum(),
        pct_child_classes: percent(children, total_types),
        pct_public_fields: percent(public_fields, total_fields),
        pct_public_methods: percent(public_methods, total_methods),
        cc_histogram,
        dit_histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_str;
    use crate::model::build_model;

    fn table(files: &[(&str, &str)]) -> (PseudoModel, MetricsTable) {
        let model = build_model(
            files
                .iter()
                .map(|(p, s)| parse_str(*p, s).expect("parse"))
                .collect(),
        );
        let metrics = compute_metrics(&model);
        (model, metrics)
    }

    fn method_cc(body: &str) -> u32 {
        let (_, t) = table(&[(
            "A.java",
            &format!("class A {{ int m(int x, boolean a, boolean b) {body} }}"),
        )]);
        t.types["A"].methods[0].cc
    }

    #[test]
    fn cc_of_straight_line_body_is_one() {
        assert_eq!(method_cc("{ return x; }"), 1);
    }

    #[test]
    fn cc_counts_if_and_switch_labels() {
        let body = "{ if (a && b) { x++; } switch (x) { case 1: break; case 2: break; case 3: break; } return x; }";
        assert_eq!(method_cc(body), 6);
    }

    #[test]
    fn cc_forty_decision_points() {
        let body = format!("{{ {} return x; }}", "if (a) x++; ".repeat(40));
        let cc = method_cc(&body);
        assert_eq!(cc, 41);
        assert!(cc >= CC_BUCKETS[2]);
    }

    #[test]
    fn cc_skips_lambdas_and_local_classes() {
        let body = "{ Runnable r = () -> { if (a) x++; }; return a ? 1 : 0; }";
        assert_eq!(method_cc(body), 2);
    }

    #[test]
    fn dit_follows_internal_chain() {
        let (model, t) = table(&[
            ("A.java", "class A extends B {}"),
            ("B.java", "class B extends C {}"),
            ("C.java", "class C extends java.util.ArrayList {}"),
        ]);
        assert_eq!(dit(&model, "A"), 2);
        assert_eq!(t.types["C"].dit, 0);
        assert_eq!(t.types["C"].nc, 1);
    }

    #[test]
    fn seven_deep_chain_lands_in_upper_dit_bucket() {
        let mut files: Vec<(String, String)> = (0..7)
            .map(|i| {
                (
                    format!("T{i}.java"),
                    format!("class T{i} extends T{} {{}}", i + 1),
                )
            })
            .collect();
        files.push(("T7.java".into(), "class T7 {}".into()));
        let refs: Vec<(&str, &str)> = files
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let (_, t) = table(&refs);
        assert_eq!(t.types["T0"].dit, 7);
        assert_eq!(t.project.dit_histogram, [7, 1]);
    }

    #[test]
    fn lcom_examples() {
        let (_, t) = table(&[
            ("A.java", "class A { int f; int get() { return f; } }"),
            (
                "B.java",
                "class B { int f; int g; int a() { return f; } int b() { return this.g; } }",
            ),
            ("C.java", "class C { int f; }"),
            ("D.java", "class D { int f; int a(int f) { return f; } }"),
        ]);
        assert_eq!(t.types["A"].lcom, Some(0.0));
        assert_eq!(t.types["B"].lcom, Some(0.5));
        assert_eq!(t.types["C"].lcom, None);
        assert_eq!(t.types["D"].lcom, Some(1.0));
    }

    #[test]
    fn field_and_method_counts() {
        let (_, t) = table(&[(
            "A.java",
            "public class A { public int a, b; public static final int K = 1; private int c; A() {} public void f() {} void g() {} }",
        )]);
        let a = &t.types["A"];
        assert_eq!(
            (a.nof, a.nopf, a.nopf_nonconst, a.nom, a.nopm),
            (4, 3, 2, 2, 1)
        );
        assert_eq!(a.public_nonconst_fields, ["a", "b"]);
        assert_eq!(a.types_in_file, 1);
    }

    #[test]
    fn interface_members_are_public_constants() {
        let (_, t) = table(&[("I.java", "interface I { int K = 1; void run(); }")]);
        let i = &t.types["I"];
        assert_eq!((i.nopf, i.nopf_nonconst, i.nopm), (1, 0, 1));
        assert_eq!(i.methods[0].cc, 1);
    }

    #[test]
    fn override_detection_by_name_and_arity() {
        let (_, t) = table(&[
            ("A.java", "class A { void f(int x) {} void g() {} }"),
            (
                "B.java",
                "class B extends A { void f(String s) {} void g(int y) {} }",
            ),
        ]);
        let overrides: Vec<_> = t.types["B"].methods.iter().map(|m| m.is_override).collect();
        assert_eq!(overrides, [true, false]);
    }

    #[test]
    fn project_percentages() {
        let (_, t) = table(&[
            (
                "A.java",
                "class A extends B { public int x; int y; public void f() {} }",
            ),
            ("B.java", "class B { int z; int w; void g() {} }"),
        ]);
        let p = &t.project;
        assert_eq!(p.total_types, 2);
        assert_eq!(p.pct_child_classes, Some(50.0));
        assert_eq!(p.pct_public_fields, Some(25.0));
        assert_eq!(p.pct_public_methods, Some(50.0));
        assert_eq!(p.cc_histogram, [2, 0, 0]);
    }

    #[test]
    fn empty_project_reports_absent_percentages() {
        let (_, t) = table(&[]);
        assert_eq!(t.project.pct_child_classes, None);
        assert_eq!(t.project.pct_public_fields, None);
    }
}
