//! Three-layer pseudo-model of a project.
//!
//! * layer 1: declared elements (types, fields, methods, constructors) with a
//!   back-reference into the owning file's syntax tree;
//! * layer 2: one [`Descriptor`] per element;
//! * layer 3: package index, per-file import scopes and every resolved type
//!   reference.
//!
//! On top of the layers the model keeps the inheritance graph (class
//! `extends` edges between project types) and the type dependency graph.
//! Everything is keyed by sorted containers so the model is independent of
//! the order in which files were supplied.

pub mod resolve;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::frontend::ast::{Modifiers, Node, NodeKind, TypeInfo, TypeKind};
use crate::frontend::parser::dotted_name;
use crate::frontend::ParsedFile;

pub use resolve::{qualify, simple_name, FileScope, Resolution, TypeRef};
use resolve::{Outcome, Resolver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Type,
    Field,
    Method,
    Constructor,
}

/// Location of a node: file index plus child indices from the unit root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AstRef {
    pub file: usize,
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub kind: ElementKind,
    pub ast: AstRef,
    pub descriptor: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Descriptor {
    pub qualified_name: String,
    pub kind: ElementKind,
    #[serde(serialize_with = "serialize_modifiers")]
    pub modifiers: Modifiers,
    /// Type kind for types, declared type for fields, erased
    /// `(params)return` for methods and constructors.
    pub signature: String,
    pub declaring_type: Option<String>,
    pub file: PathBuf,
    pub line: u32,
}

fn serialize_modifiers<S: serde::Serializer>(m: &Modifiers, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(m)
}

/// Layer-3 entry for one declared type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeEntry {
    pub qualified_name: String,
    pub package: String,
    pub info: TypeInfo,
    pub ast: AstRef,
    pub element: usize,
    /// Innermost enclosing type, `None` for top-level types.
    pub outer: Option<String>,
    pub line: u32,
}

impl TypeEntry {
    pub fn simple_name(&self) -> &str {
        &self.info.name
    }

    pub fn is_top_level(&self) -> bool {
        self.outer.is_none()
    }

    pub fn kind(&self) -> TypeKind {
        self.info.kind
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RefKind {
    Extends,
    Implements,
    FieldType,
    ParameterType,
    ReturnType,
    Throws,
    LocalVariable,
    ObjectCreation,
    StaticAccess,
    Cast,
    InstanceOf,
    Catch,
    ClassLiteral,
}

/// One type mention inside a declared type; the evidence for a dependency edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Reference {
    pub from: String,
    pub target: TypeRef,
    pub kind: RefKind,
    pub file: usize,
    pub line: u32,
    pub column: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Namespaces {
    /// Package name to the qualified names of every type it declares.
    pub packages: BTreeMap<String, BTreeSet<String>>,
    /// Import scope per file, index-aligned with [`PseudoModel::files`].
    pub scopes: Vec<FileScope>,
    pub references: Vec<Reference>,
}

/// Directed type-to-type edges. Self-edges are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DependencyGraph {
    edges: BTreeMap<String, BTreeSet<Resolution>>,
}

impl DependencyGraph {
    fn add_node(&mut self, node: &str) {
        self.edges.entry(node.to_string()).or_default();
    }

    fn add_edge(&mut self, from: &str, to: Resolution) {
        if to.internal() == Some(from) {
            return;
        }
        self.edges.entry(from.to_string()).or_default().insert(to);
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.edges.keys().map(String::as_str)
    }

    pub fn successors(&self, from: &str) -> impl Iterator<Item = &Resolution> {
        self.edges.get(from).into_iter().flatten()
    }

    pub fn internal_successors(&self, from: &str) -> impl Iterator<Item = &str> {
        self.successors(from).filter_map(Resolution::internal)
    }

    /// Number of project types with an edge into `to`.
    pub fn fan_in(&self, to: &str) -> usize {
        self.edges
            .values()
            .filter(|targets| targets.iter().any(|t| t.internal() == Some(to)))
            .count()
    }

    pub fn fan_out(&self, from: &str) -> usize {
        self.edges.get(from).map_or(0, BTreeSet::len)
    }

    pub fn edge_set(&self) -> BTreeSet<(String, Resolution)> {
        self.edges
            .iter()
            .flat_map(|(from, targets)| targets.iter().map(move |t| (from.clone(), t.clone())))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().map(BTreeSet::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModelDiagnostic {
    DuplicateType {
        name: String,
        kept: PathBuf,
        dropped: PathBuf,
    },
    DuplicateMember {
        name: String,
        file: PathBuf,
        line: u32,
    },
    InheritanceCycle {
        members: Vec<String>,
    },
    AmbiguousReference {
        name: String,
        candidates: Vec<String>,
        file: PathBuf,
        line: u32,
    },
}

impl fmt::Display for ModelDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelDiagnostic::DuplicateType {
                name,
                kept,
                dropped,
            } => write!(
                f,
                "duplicate type {name}: declaration in {} ignored, keeping {}",
                dropped.display(),
                kept.display()
            ),
            ModelDiagnostic::DuplicateMember { name, file, line } => {
                write!(f, "{}:{line}: duplicate member {name}", file.display())
            }
            ModelDiagnostic::InheritanceCycle { members } => {
                write!(f, "inheritance cycle: {}", members.join(" -> "))
            }
            ModelDiagnostic::AmbiguousReference {
                name,
                candidates,
                file,
                line,
            } => write!(
                f,
                "{}:{line}: ambiguous type {name}, candidates {}",
                file.display(),
                candidates.join(", ")
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PseudoModel {
    /// Parsed files sorted by path.
    pub files: Vec<ParsedFile>,
    pub elements: Vec<Element>,
    pub descriptors: Vec<Descriptor>,
    pub namespaces: Namespaces,
    pub types: BTreeMap<String, TypeEntry>,
    /// Subtype to supertype, class `extends` between project types only.
    pub inheritance: BTreeMap<String, String>,
    /// Type to the project interfaces it implements (or extends, for interfaces).
    pub realizations: BTreeMap<String, BTreeSet<String>>,
    pub dependencies: DependencyGraph,
    pub diagnostics: BTreeSet<ModelDiagnostic>,
    subtypes: BTreeMap<String, BTreeSet<String>>,
    type_names: BTreeSet<String>,
}

impl PseudoModel {
    pub fn type_entry(&self, qualified_name: &str) -> Option<&TypeEntry> {
        self.types.get(qualified_name)
    }

    pub fn node(&self, ast: &AstRef) -> &Node {
        let mut node = &self.files[ast.file].unit;
        for &i in &ast.path {
            node = &node.children[i];
        }
        node
    }

    pub fn type_node(&self, entry: &TypeEntry) -> &Node {
        self.node(&entry.ast)
    }

    pub fn file_of(&self, entry: &TypeEntry) -> &ParsedFile {
        &self.files[entry.ast.file]
    }

    pub fn file_path(&self, entry: &TypeEntry) -> &Path {
        self.files[entry.ast.file].path()
    }

    pub fn descriptor(&self, element: &Element) -> &Descriptor {
        &self.descriptors[element.descriptor]
    }

    pub fn supertype(&self, qualified_name: &str) -> Option<&str> {
        self.inheritance.get(qualified_name).map(String::as_str)
    }

    /// Direct project-internal subclasses.
    pub fn subtypes(&self, qualified_name: &str) -> impl Iterator<Item = &str> {
        self.subtypes
            .get(qualified_name)
            .into_iter()
            .flatten()
            .map(String::as_str)
    }

    /// The `extends` chain above `qualified_name`, stopping before any revisit.
    pub fn superclass_chain(&self, qualified_name: &str) -> Vec<&str> {
        let mut chain = Vec::new();
        let mut seen = BTreeSet::from([qualified_name]);
        let mut current = qualified_name;
        while let Some(sup) = self.supertype(current) {
            if !seen.insert(sup) {
                break;
            }
            chain.push(sup);
            current = sup;
        }
        chain
    }

    /// Every project supertype reachable via `extends` or `implements`.
    pub fn ancestors(&self, qualified_name: &str) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        let mut stack = vec![qualified_name];
        while let Some(t) = stack.pop() {
            let parents = self.supertype(t).into_iter().chain(
                self.realizations
                    .get(t)
                    .into_iter()
                    .flatten()
                    .map(String::as_str),
            );
            for p in parents {
                if p != qualified_name && out.insert(p) {
                    stack.push(p);
                }
            }
        }
        out
    }

    /// Resolves a written type name as if it appeared inside `context_type`.
    pub fn resolve(&self, raw: &str, context_type: &str) -> Resolution {
        let Some(entry) = self.types.get(context_type) else {
            return match (Resolver {
                types: &self.type_names,
            })
            .resolve(raw, &FileScope::default(), &[], &BTreeSet::new())
            {
                Outcome::Resolved(r) => r,
                _ => Resolution::External(raw.to_string()),
            };
        };
        let enclosing = self.enclosing_chain(context_type);
        let scope = &self.namespaces.scopes[entry.ast.file];
        match (Resolver {
            types: &self.type_names,
        })
        .resolve(
            raw,
            scope,
            &enclosing,
            &self.type_params_in_scope(context_type),
        ) {
            Outcome::Resolved(r) => r,
            Outcome::NotAType | Outcome::Ambiguous { .. } => {
                let base = crate::frontend::ast::erase_type_arguments(raw);
                Resolution::External(crate::frontend::ast::base_type_name(&base).to_string())
            }
        }
    }

    /// References recorded from `from` whose target resolved to `to`.
    pub fn evidence<'a>(
        &'a self,
        from: &'a str,
        to: &'a Resolution,
    ) -> impl Iterator<Item = &'a Reference> + 'a {
        self.namespaces
            .references
            .iter()
            .filter(move |r| r.from == from && &r.target.resolved == to)
    }

    fn enclosing_chain(&self, qualified_name: &str) -> Vec<String> {
        let mut chain = vec![qualified_name.to_string()];
        let mut current = qualified_name;
        while let Some(outer) = self.types.get(current).and_then(|e| e.outer.as_deref()) {
            chain.push(outer.to_string());
            current = outer;
        }
        chain
    }

    fn type_params_in_scope(&self, qualified_name: &str) -> BTreeSet<String> {
        self.enclosing_chain(qualified_name)
            .iter()
            .filter_map(|q| self.types.get(q))
            .flat_map(|e| e.info.type_params.iter().cloned())
            .collect()
    }
}

/// Builds the pseudo-model. Files are sorted by path first, so any
/// permutation of the input yields the same model.
pub fn build_model(mut files: Vec<ParsedFile>) -> PseudoModel {
    files.sort_by(|a, b| a.path().cmp(b.path()));
    let mut builder = Builder::default();
    builder.collect_types(&files);
    let type_names: BTreeSet<String> = builder.types.keys().cloned().collect();
    let scopes = files
        .iter()
        .enumerate()
        .map(|(i, f)| file_scope(i, &f.unit, &builder.types))
        .collect::<Vec<_>>();

    let mut model = PseudoModel {
        files,
        elements: Vec::new(),
        descriptors: Vec::new(),
        namespaces: Namespaces {
            packages: BTreeMap::new(),
            scopes,
            references: Vec::new(),
        },
        types: builder.types,
        inheritance: BTreeMap::new(),
        realizations: BTreeMap::new(),
        dependencies: DependencyGraph::default(),
        diagnostics: builder.diagnostics,
        subtypes: BTreeMap::new(),
        type_names,
    };
    for (q, entry) in &model.types {
        model
            .namespaces
            .packages
            .entry(entry.package.clone())
            .or_default()
            .insert(q.clone());
    }
    populate_layers(&mut model);
    collect_references(&mut model);
    build_graphs(&mut model);
    model
}

#[derive(Default)]
struct Builder {
    types: BTreeMap<String, TypeEntry>,
    diagnostics: BTreeSet<ModelDiagnostic>,
}

impl Builder {
    fn collect_types(&mut self, files: &[ParsedFile]) {
        for (index, file) in files.iter().enumerate() {
            let package = package_of(&file.unit);
            for (i, child) in file.unit.children.iter().enumerate() {
                if child.is_type_decl() {
                    self.collect_type(files, index, &package, None, child, vec![i]);
                }
            }
        }
    }

    fn collect_type(
        &mut self,
        files: &[ParsedFile],
        file: usize,
        package: &str,
        outer: Option<&str>,
        node: &Node,
        path: Vec<usize>,
    ) {
        let info = node.type_info().expect("type declaration").clone();
        let qualified_name = match outer {
            Some(o) => format!("{o}.{}", info.name),
            None => qualify(package, &info.name),
        };
        if let Some(existing) = self.types.get(&qualified_name) {
            self.diagnostics.insert(ModelDiagnostic::DuplicateType {
                name: qualified_name,
                kept: files[existing.ast.file].path().to_path_buf(),
                dropped: files[file].path().to_path_buf(),
            });
            return;
        }
        for (i, child) in node.children.iter().enumerate() {
            if child.is_type_decl() {
                let mut child_path = path.clone();
                child_path.push(i);
                self.collect_type(
                    files,
                    file,
                    package,
                    Some(&qualified_name),
                    child,
                    child_path,
                );
            }
        }
        self.types.insert(
            qualified_name.clone(),
            TypeEntry {
                qualified_name,
                package: package.to_string(),
                info,
                ast: AstRef { file, path },
                element: usize::MAX,
                outer: outer.map(str::to_string),
                line: node.line(),
            },
        );
    }
}

fn package_of(unit: &Node) -> String {
    unit.children
        .iter()
        .find_map(|c| match &c.kind {
            NodeKind::PackageDecl { name } => Some(name.clone()),
            _ => None,
        })
        .unwrap_or_default()
}

fn file_scope(index: usize, unit: &Node, types: &BTreeMap<String, TypeEntry>) -> FileScope {
    let mut scope = FileScope {
        package: package_of(unit),
        ..Default::default()
    };
    for child in &unit.children {
        if let NodeKind::ImportDecl {
            path,
            is_static,
            on_demand,
        } = &child.kind
        {
            match (is_static, on_demand) {
                (false, true) => scope.on_demand.push(path.clone()),
                (false, false) => {
                    scope
                        .single_imports
                        .entry(simple_name(path).to_string())
                        .or_insert_with(|| path.clone());
                }
                // static imports bring members, not types; a static import of
                // a nested type is still usable by its simple name
                (true, false) if types.contains_key(path) => {
                    scope
                        .single_imports
                        .entry(simple_name(path).to_string())
                        .or_insert_with(|| path.clone());
                }
                (true, true) if types.contains_key(path) => scope.on_demand.push(path.clone()),
                _ => {}
            }
        }
    }
    scope.declared = types
        .values()
        .filter(|e| e.ast.file == index)
        .map(|e| e.qualified_name.clone())
        .collect();
    scope
}

fn populate_layers(model: &mut PseudoModel) {
    let mut seen = BTreeSet::new();
    let names: Vec<String> = model.types.keys().cloned().collect();
    for q in names {
        let entry = model.types[&q].clone();
        let file_path = model.files[entry.ast.file].path().to_path_buf();
        let element = push_element(
            model,
            &mut seen,
            ElementKind::Type,
            entry.ast.clone(),
            Descriptor {
                qualified_name: q.clone(),
                kind: ElementKind::Type,
                modifiers: entry.info.modifiers,
                signature: entry.info.kind.to_string(),
                declaring_type: entry.outer.clone(),
                file: file_path.clone(),
                line: entry.line,
            },
        );
        model.types.get_mut(&q).expect("type").element = element;

        let node = model.node(&entry.ast).clone();
        for (i, member) in node.children.iter().enumerate() {
            let mut path = entry.ast.path.clone();
            path.push(i);
            let ast = AstRef {
                file: entry.ast.file,
                path,
            };
            match &member.kind {
                NodeKind::FieldDecl {
                    modifiers,
                    type_name,
                    names,
                } => {
                    for name in names {
                        push_element(
                            model,
                            &mut seen,
                            ElementKind::Field,
                            ast.clone(),
                            Descriptor {
                                qualified_name: format!("{q}#{name}"),
                                kind: ElementKind::Field,
                                modifiers: *modifiers,
                                signature: type_name.clone(),
                                declaring_type: Some(q.clone()),
                                file: file_path.clone(),
                                line: member.line(),
                            },
                        );
                    }
                }
                NodeKind::EnumConstant { name } => {
                    let mut modifiers = Modifiers::PUBLIC;
                    modifiers.insert(Modifiers::STATIC);
                    modifiers.insert(Modifiers::FINAL);
                    push_element(
                        model,
                        &mut seen,
                        ElementKind::Field,
                        ast,
                        Descriptor {
                            qualified_name: format!("{q}#{name}"),
                            kind: ElementKind::Field,
                            modifiers,
                            signature: entry.info.name.clone(),
                            declaring_type: Some(q.clone()),
                            file: file_path.clone(),
                            line: member.line(),
                        },
                    );
                }
                NodeKind::MethodDecl(info) | NodeKind::ConstructorDecl(info) => {
                    let is_ctor = matches!(member.kind, NodeKind::ConstructorDecl(_));
                    let params = parameter_types(member);
                    let (kind, name, ret) = if is_ctor {
                        (ElementKind::Constructor, "<init>", String::new())
                    } else {
                        (
                            ElementKind::Method,
                            info.name.as_str(),
                            info.return_type.clone().unwrap_or_default(),
                        )
                    };
                    push_element(
                        model,
                        &mut seen,
                        kind,
                        ast,
                        Descriptor {
                            qualified_name: format!("{q}#{name}({})", params.join(",")),
                            kind,
                            modifiers: info.modifiers,
                            signature: format!("({}){ret}", params.join(",")),
                            declaring_type: Some(q.clone()),
                            file: file_path.clone(),
                            line: member.line(),
                        },
                    );
                }
                _ => {}
            }
        }
    }
}

fn push_element(
    model: &mut PseudoModel,
    seen: &mut BTreeSet<String>,
    kind: ElementKind,
    ast: AstRef,
    mut descriptor: Descriptor,
) -> usize {
    if !seen.insert(descriptor.qualified_name.clone()) {
        model.diagnostics.insert(ModelDiagnostic::DuplicateMember {
            name: descriptor.qualified_name.clone(),
            file: descriptor.file.clone(),
            line: descriptor.line,
        });
        let mut n = 2;
        while !seen.insert(format!("{}~{n}", descriptor.qualified_name)) {
            n += 1;
        }
        descriptor.qualified_name = format!("{}~{n}", descriptor.qualified_name);
    }
    model.descriptors.push(descriptor);
    model.elements.push(Element {
        kind,
        ast,
        descriptor: model.descriptors.len() - 1,
    });
    model.elements.len() - 1
}

/// Erased parameter types of a method or constructor, in order.
pub fn parameter_types(method: &Node) -> Vec<String> {
    method
        .parameters()
        .filter_map(|p| match &p.kind {
            NodeKind::Parameter { type_name, .. } => {
                Some(crate::frontend::ast::erase_type_arguments(type_name))
            }
            _ => None,
        })
        .collect()
}

struct RefCollector<'m> {
    resolver: Resolver<'m>,
    scope: &'m FileScope,
    enclosing: Vec<String>,
    type_params: BTreeSet<String>,
    file: usize,
    path: &'m Path,
    from: String,
    /// Field, parameter and local names of the current member; they shadow
    /// type names in expression position.
    values: BTreeSet<String>,
    refs: Vec<Reference>,
    diagnostics: Vec<ModelDiagnostic>,
}

impl RefCollector<'_> {
    fn record(&mut self, raw: &str, kind: RefKind, node: &Node) {
        match self
            .resolver
            .resolve(raw, self.scope, &self.enclosing, &self.type_params)
        {
            Outcome::NotAType => {}
            Outcome::Resolved(resolved) => self.push(raw.to_string(), resolved, kind, node),
            Outcome::Ambiguous { name, candidates } => {
                self.diagnostics.push(ModelDiagnostic::AmbiguousReference {
                    name: name.clone(),
                    candidates,
                    file: self.path.to_path_buf(),
                    line: node.line(),
                });
                self.push(raw.to_string(), Resolution::External(name), kind, node);
            }
        }
    }

    fn push(&mut self, raw_name: String, resolved: Resolution, kind: RefKind, node: &Node) {
        self.refs.push(Reference {
            from: self.from.clone(),
            target: TypeRef { raw_name, resolved },
            kind,
            file: self.file,
            line: node.span.line,
            column: node.span.column,
        });
    }

    /// Static access through a type name only counts when it names a project type.
    fn record_static(&mut self, name: &str, node: &Node) {
        if let Outcome::Resolved(Resolution::Internal(q)) =
            self.resolver
                .resolve(name, self.scope, &self.enclosing, &self.type_params)
        {
            self.push(
                name.to_string(),
                Resolution::Internal(q),
                RefKind::StaticAccess,
                node,
            );
        }
    }

    fn walk(&mut self, node: &Node) {
        match &node.kind {
            NodeKind::TypeDecl(_) | NodeKind::Lambda | NodeKind::Opaque { .. } => return,
            NodeKind::Parameter { type_name, name } => {
                self.values.insert(name.clone());
                self.record(type_name, RefKind::LocalVariable, node);
            }
            NodeKind::LocalVarDecl { type_name, names } => {
                self.values.extend(names.iter().cloned());
                self.record(type_name, RefKind::LocalVariable, node);
            }
            NodeKind::New { type_name } | NodeKind::NewArray { type_name } => {
                self.record(type_name, RefKind::ObjectCreation, node)
            }
            NodeKind::Cast { type_name } => self.record(type_name, RefKind::Cast, node),
            NodeKind::InstanceOf { type_name } => self.record(type_name, RefKind::InstanceOf, node),
            NodeKind::ClassLiteral { type_name } => {
                self.record(type_name, RefKind::ClassLiteral, node)
            }
            NodeKind::Catch { types } => {
                for t in types {
                    self.record(t, RefKind::Catch, node);
                }
            }
            NodeKind::Name { name } => {
                if starts_upper(name) && !self.values.contains(name) {
                    self.record_static(name, node);
                }
                return;
            }
            NodeKind::FieldAccess { .. } => {
                if let Some(dotted) = dotted_name(node) {
                    let first = dotted.split('.').next().unwrap_or_default();
                    if !self.values.contains(first) && self.resolver.types.contains(&dotted) {
                        self.push(
                            dotted.clone(),
                            Resolution::Internal(dotted),
                            RefKind::StaticAccess,
                            node,
                        );
                        return;
                    }
                }
            }
            _ => {}
        }
        for child in &node.children {
            self.walk(child);
        }
    }
}

fn starts_upper(name: &str) -> bool {
    name.chars().next().is_some_and(char::is_uppercase)
}

fn collect_references(model: &mut PseudoModel) {
    let resolver = Resolver {
        types: &model.type_names,
    };
    let mut refs = Vec::new();
    let mut diagnostics = Vec::new();
    for (q, entry) in &model.types {
        let node = model.node(&entry.ast);
        let scope = &model.namespaces.scopes[entry.ast.file];
        let field_names: BTreeSet<String> = node
            .children
            .iter()
            .flat_map(|c| match &c.kind {
                NodeKind::FieldDecl { names, .. } => names.clone(),
                NodeKind::EnumConstant { name } => vec![name.clone()],
                _ => Vec::new(),
            })
            .collect();
        let mut collector = RefCollector {
            resolver: Resolver {
                types: resolver.types,
            },
            scope,
            enclosing: model.enclosing_chain(q),
            type_params: model.type_params_in_scope(q),
            file: entry.ast.file,
            path: model.files[entry.ast.file].path(),
            from: q.clone(),
            values: BTreeSet::new(),
            refs: Vec::new(),
            diagnostics: Vec::new(),
        };
        if let Some(sup) = &entry.info.supertype {
            collector.record(sup, RefKind::Extends, node);
        }
        for i in &entry.info.interfaces {
            collector.record(i, RefKind::Implements, node);
        }
        for member in &node.children {
            collector.values = field_names.clone();
            match &member.kind {
                NodeKind::FieldDecl { type_name, .. } => {
                    collector.record(type_name, RefKind::FieldType, member);
                    for c in &member.children {
                        collector.walk(c);
                    }
                }
                NodeKind::MethodDecl(info) | NodeKind::ConstructorDecl(info) => {
                    let saved = collector.type_params.clone();
                    collector
                        .type_params
                        .extend(info.type_params.iter().cloned());
                    if let Some(ret) = &info.return_type {
                        collector.record(ret, RefKind::ReturnType, member);
                    }
                    for t in &info.throws {
                        collector.record(t, RefKind::Throws, member);
                    }
                    for p in member.parameters() {
                        if let NodeKind::Parameter { type_name, name } = &p.kind {
                            collector.values.insert(name.clone());
                            collector.record(type_name, RefKind::ParameterType, p);
                        }
                    }
                    if let Some(body) = member.body() {
                        collector.walk(body);
                    }
                    collector.type_params = saved;
                }
                NodeKind::Initializer { .. } | NodeKind::EnumConstant { .. } => {
                    for c in &member.children {
                        collector.walk(c);
                    }
                }
                _ => {}
            }
        }
        refs.append(&mut collector.refs);
        diagnostics.append(&mut collector.diagnostics);
    }
    refs.sort();
    model.namespaces.references = refs;
    model.diagnostics.extend(diagnostics);
}

fn build_graphs(model: &mut PseudoModel) {
    for q in model.types.keys() {
        model.dependencies.add_node(q);
    }
    for r in &model.namespaces.references {
        model
            .dependencies
            .add_edge(&r.from, r.target.resolved.clone());
        let Some(target) = r.target.resolved.internal() else {
            continue;
        };
        if target == r.from {
            continue;
        }
        match r.kind {
            RefKind::Extends => {
                model.inheritance.insert(r.from.clone(), target.to_string());
            }
            RefKind::Implements => {
                model
                    .realizations
                    .entry(r.from.clone())
                    .or_default()
                    .insert(target.to_string());
            }
            _ => {}
        }
    }
    for (sub, sup) in &model.inheritance {
        model
            .subtypes
            .entry(sup.clone())
            .or_default()
            .insert(sub.clone());
    }
    for cycle in inheritance_cycles(&model.inheritance) {
        model
            .diagnostics
            .insert(ModelDiagnostic::InheritanceCycle { members: cycle });
    }
}

/// Each cycle of the functional graph `sub -> sup`, rotated to start at its
/// smallest member.
fn inheritance_cycles(inheritance: &BTreeMap<String, String>) -> Vec<Vec<String>> {
    let mut cycles = BTreeSet::new();
    for start in inheritance.keys() {
        let mut order: Vec<&str> = vec![start];
        let mut current = start.as_str();
        while let Some(next) = inheritance.get(current) {
            if let Some(pos) = order.iter().position(|n| *n == next) {
                let mut cycle: Vec<String> = order[pos..].iter().map(|s| s.to_string()).collect();
                let min = cycle
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, s)| *s)
                    .map_or(0, |(i, _)| i);
                cycle.rotate_left(min);
                cycles.insert(cycle);
                break;
            }
            order.push(next);
            current = next;
        }
    }
    cycles.into_iter().collect()
}
