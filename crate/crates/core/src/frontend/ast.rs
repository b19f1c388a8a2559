//! Syntax tree for the supported Java subset.
//!
//! The tree is uniform: every node has a kind (carrying kind-specific
//! attributes), a source span and ordered children. Child layout per kind:
//!
//! | kind                | children                                        |
//! |---------------------|-------------------------------------------------|
//! | `TypeDecl`          | members (fields, methods, ctors, nested types)  |
//! | `MethodDecl`/ctor   | parameters, then the body `Block` if present    |
//! | `If`                | condition, then-branch, optional else-branch    |
//! | `For`               | init..., condition?, update... then body (last) |
//! | `ForEach`           | variable `Parameter`, iterable, body            |
//! | `While`             | condition, body                                 |
//! | `Do`                | body, condition                                 |
//! | `Switch`            | selector, then `Case` nodes                     |
//! | `Case`              | label expressions, then statements              |
//! | `Try`               | resources..., `Block`, `Catch`..., `Finally`?   |
//! | `MethodCall`        | target (when `has_target`), then arguments      |
//! | `InstanceOf`/`Cast` | operand                                         |

use std::fmt;

use super::lexer::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Modifiers(u16);

impl Modifiers {
    pub const PUBLIC: Modifiers = Modifiers(1);
    pub const PROTECTED: Modifiers = Modifiers(1 << 1);
    pub const PRIVATE: Modifiers = Modifiers(1 << 2);
    pub const STATIC: Modifiers = Modifiers(1 << 3);
    pub const FINAL: Modifiers = Modifiers(1 << 4);
    pub const ABSTRACT: Modifiers = Modifiers(1 << 5);
    pub const NATIVE: Modifiers = Modifiers(1 << 6);
    pub const SYNCHRONIZED: Modifiers = Modifiers(1 << 7);
    pub const TRANSIENT: Modifiers = Modifiers(1 << 8);
    pub const VOLATILE: Modifiers = Modifiers(1 << 9);
    pub const STRICTFP: Modifiers = Modifiers(1 << 10);
    pub const DEFAULT: Modifiers = Modifiers(1 << 11);
    pub const SEALED: Modifiers = Modifiers(1 << 12);
    pub const NON_SEALED: Modifiers = Modifiers(1 << 13);

    const NAMES: [(&'static str, Modifiers); 14] = [
        ("public", Self::PUBLIC),
        ("protected", Self::PROTECTED),
        ("private", Self::PRIVATE),
        ("static", Self::STATIC),
        ("final", Self::FINAL),
        ("abstract", Self::ABSTRACT),
        ("native", Self::NATIVE),
        ("synchronized", Self::SYNCHRONIZED),
        ("transient", Self::TRANSIENT),
        ("volatile", Self::VOLATILE),
        ("strictfp", Self::STRICTFP),
        ("default", Self::DEFAULT),
        ("sealed", Self::SEALED),
        ("non-sealed", Self::NON_SEALED),
    ];

    pub const fn empty() -> Self {
        Modifiers(0)
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::NAMES
            .iter()
            .find(|(name, _)| *name == word)
            .map(|(_, m)| *m)
    }

    pub const fn contains(self, other: Modifiers) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn insert(&mut self, other: Modifiers) {
        self.0 |= other.0;
    }

    pub fn is_public(self) -> bool {
        self.contains(Self::PUBLIC)
    }

    pub fn is_static(self) -> bool {
        self.contains(Self::STATIC)
    }

    pub fn is_final(self) -> bool {
        self.contains(Self::FINAL)
    }

    pub fn names(self) -> impl Iterator<Item = &'static str> {
        Self::NAMES
            .into_iter()
            .filter(move |(_, m)| self.contains(*m))
            .map(|(name, _)| name)
    }
}

impl fmt::Display for Modifiers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.names().collect();
        f.write_str(&names.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeKind {
    Class,
    Interface,
    Enum,
}

impl fmt::Display for TypeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeKind::Class => "class",
            TypeKind::Interface => "interface",
            TypeKind::Enum => "enum",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeInfo {
    pub name: String,
    pub kind: TypeKind,
    pub modifiers: Modifiers,
    /// `extends` target of a class. Interfaces list what they extend in `interfaces`.
    pub supertype: Option<String>,
    pub interfaces: Vec<String>,
    pub type_params: Vec<String>,
    pub is_annotation: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodInfo {
    pub name: String,
    pub modifiers: Modifiers,
    /// Erased return type; `None` for constructors.
    pub return_type: Option<String>,
    pub type_params: Vec<String>,
    pub throws: Vec<String>,
    pub has_body: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    CompilationUnit,
    PackageDecl {
        name: String,
    },
    ImportDecl {
        path: String,
        is_static: bool,
        on_demand: bool,
    },
    TypeDecl(TypeInfo),
    EnumConstant {
        name: String,
    },
    FieldDecl {
        modifiers: Modifiers,
        type_name: String,
        names: Vec<String>,
    },
    MethodDecl(MethodInfo),
    ConstructorDecl(MethodInfo),
    Parameter {
        type_name: String,
        name: String,
    },
    Initializer {
        is_static: bool,
    },
    Block,

    LocalVarDecl {
        type_name: String,
        names: Vec<String>,
    },
    If,
    For,
    ForEach,
    While,
    Do,
    Switch,
    /// `labels` is 0 for `default`.
    Case {
        labels: u32,
    },
    Try,
    Catch {
        types: Vec<String>,
    },
    Finally,
    Return,
    Throw,
    Break,
    Continue,
    Yield,
    ExprStmt,
    Labeled {
        label: String,
    },
    Synchronized,
    Assert,
    Empty,
    /// Skipped input: unsupported constructs or recovered syntax errors.
    Opaque {
        reason: String,
    },

    Name {
        name: String,
    },
    FieldAccess {
        name: String,
    },
    MethodCall {
        name: String,
        has_target: bool,
    },
    New {
        type_name: String,
    },
    NewArray {
        type_name: String,
    },
    ArrayInit,
    Cast {
        type_name: String,
    },
    InstanceOf {
        type_name: String,
    },
    Conditional,
    Binary {
        op: String,
    },
    Unary {
        op: String,
        postfix: bool,
    },
    Assign {
        op: String,
    },
    Literal {
        text: String,
    },
    This,
    Super,
    ArrayAccess,
    /// Lambda bodies are not descended into.
    Lambda,
    MethodRef {
        name: String,
    },
    ClassLiteral {
        type_name: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub kind: NodeKind,
    pub span: Span,
    pub children: Vec<Node>,
}

impl Node {
    pub fn new(kind: NodeKind, span: Span) -> Self {
        Self {
            kind,
            span,
            children: Vec::new(),
        }
    }

    pub fn with_children(kind: NodeKind, span: Span, children: Vec<Node>) -> Self {
        Self {
            kind,
            span,
            children,
        }
    }

    pub fn line(&self) -> u32 {
        self.span.line
    }

    /// Pre-order traversal including `self`.
    pub fn descendants(&self) -> Descendants<'_> {
        Descendants { stack: vec![self] }
    }

    pub fn type_info(&self) -> Option<&TypeInfo> {
        match &self.kind {
            NodeKind::TypeDecl(info) => Some(info),
            _ => None,
        }
    }

    pub fn method_info(&self) -> Option<&MethodInfo> {
        match &self.kind {
            NodeKind::MethodDecl(info) | NodeKind::ConstructorDecl(info) => Some(info),
            _ => None,
        }
    }

    pub fn is_type_decl(&self) -> bool {
        matches!(self.kind, NodeKind::TypeDecl(_))
    }

    /// Body block of a method or constructor.
    pub fn body(&self) -> Option<&Node> {
        match self.method_info() {
            Some(info) if info.has_body => self.children.last(),
            _ => None,
        }
    }

    pub fn parameters(&self) -> impl Iterator<Item = &Node> {
        self.children
            .iter()
            .filter(|c| matches!(c.kind, NodeKind::Parameter { .. }))
    }

    /// Structural equality ignoring spans.
    pub fn same_shape(&self, other: &Node) -> bool {
        self.kind == other.kind
            && self.children.len() == other.children.len()
            && self
                .children
                .iter()
                .zip(&other.children)
                .all(|(a, b)| a.same_shape(b))
    }

    /// Last identifier of an expression chain: `a.b.getType()` gives `getType`.
    pub fn terminal_name(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::Name { name }
            | NodeKind::FieldAccess { name }
            | NodeKind::MethodCall { name, .. } => Some(name),
            _ => None,
        }
    }
}

pub struct Descendants<'a> {
    stack: Vec<&'a Node>,
}

impl<'a> Iterator for Descendants<'a> {
    type Item = &'a Node;

    fn next(&mut self) -> Option<&'a Node> {
        let node = self.stack.pop()?;
        self.stack.extend(node.children.iter().rev());
        Some(node)
    }
}

/// Strips type arguments and annotations from written type text, keeping array
/// dimensions: `Map<K, List<V>>[]` becomes `Map[]`.
pub fn erase_type_arguments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut depth = 0usize;
    for c in text.chars() {
        match c {
            '<' => depth += 1,
            '>' => depth = depth.saturating_sub(1),
            _ if depth == 0 && !c.is_whitespace() => out.push(c),
            _ => {}
        }
    }
    out
}

/// Element type name of a written type: `java.util.List[]` gives `java.util.List`.
pub fn base_type_name(text: &str) -> &str {
    let end = text.find('[').unwrap_or(text.len());
    text[..end].trim_end_matches("...")
}

pub const PRIMITIVES: &[&str] = &[
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void", "var",
];

pub fn is_primitive(name: &str) -> bool {
    PRIMITIVES.contains(&name)
}
