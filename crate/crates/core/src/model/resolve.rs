//! Type-name resolution against the project's namespace index.
//!
//! Precedence, first match wins:
//! 1. member types of the enclosing types (innermost first), then any type
//!    declared in the same file;
//! 2. top-level types of the same package;
//! 3. single-type imports;
//! 4. on-demand (`.*`) imports; more than one project match is ambiguous
//!    and resolves to `External` with a diagnostic;
//! 5. `External`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::frontend::ast::{base_type_name, erase_type_arguments, is_primitive};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Resolution {
    Internal(String),
    External(String),
}

impl Resolution {
    pub fn internal(&self) -> Option<&str> {
        match self {
            Resolution::Internal(q) => Some(q),
            Resolution::External(_) => None,
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Resolution::Internal(_))
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resolution::Internal(q) => f.write_str(q),
            Resolution::External(raw) => write!(f, "External({raw})"),
        }
    }
}

impl Serialize for Resolution {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A type name as written, together with what it resolved to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeRef {
    pub raw_name: String,
    pub resolved: Resolution,
}

/// Import tables and location of one file, the input to resolution.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileScope {
    pub package: String,
    /// Simple name to full imported name.
    pub single_imports: BTreeMap<String, String>,
    /// Prefixes of `import prefix.*;`.
    pub on_demand: Vec<String>,
    /// Qualified names of every type declared in the file.
    pub declared: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Outcome {
    NotAType,
    Resolved(Resolution),
    Ambiguous {
        name: String,
        candidates: Vec<String>,
    },
}

pub(crate) struct Resolver<'a> {
    pub types: &'a BTreeSet<String>,
}

impl Resolver<'_> {
    /// Resolves `raw` written inside the type `enclosing` (qualified name),
    /// whose outer types are `outers` (innermost first).
    pub fn resolve(
        &self,
        raw: &str,
        scope: &FileScope,
        enclosing: &[String],
        type_params: &BTreeSet<String>,
    ) -> Outcome {
        let erased = erase_type_arguments(raw);
        let base = base_type_name(&erased);
        if base.is_empty() || base == "?" || is_primitive(base) || type_params.contains(base) {
            return Outcome::NotAType;
        }
        if let Some((first, rest)) = base.split_once('.') {
            if self.types.contains(base) {
                return Outcome::Resolved(Resolution::Internal(base.to_string()));
            }
            return match self.resolve_simple(first, scope, enclosing) {
                Outcome::Resolved(Resolution::Internal(outer)) => {
                    let candidate = format!("{outer}.{rest}");
                    if self.types.contains(&candidate) {
                        Outcome::Resolved(Resolution::Internal(candidate))
                    } else {
                        Outcome::Resolved(Resolution::External(base.to_string()))
                    }
                }
                Outcome::Ambiguous { name, candidates } => Outcome::Ambiguous { name, candidates },
                _ => Outcome::Resolved(Resolution::External(base.to_string())),
            };
        }
        self.resolve_simple(base, scope, enclosing)
    }

    fn resolve_simple(&self, name: &str, scope: &FileScope, enclosing: &[String]) -> Outcome {
        let internal = |q: String| Outcome::Resolved(Resolution::Internal(q));

        for outer in enclosing {
            let member = format!("{outer}.{name}");
            if self.types.contains(&member) {
                return internal(member);
            }
            if simple_name(outer) == name {
                return internal(outer.clone());
            }
        }
        if let Some(q) = scope.declared.iter().find(|q| simple_name(q) == name) {
            return internal(q.clone());
        }

        let same_package = qualify(&scope.package, name);
        if self.types.contains(&same_package) {
            return internal(same_package);
        }

        if let Some(full) = scope.single_imports.get(name) {
            return if self.types.contains(full) {
                internal(full.clone())
            } else {
                Outcome::Resolved(Resolution::External(name.to_string()))
            };
        }

        let candidates: BTreeSet<String> = scope
            .on_demand
            .iter()
            .map(|prefix| format!("{prefix}.{name}"))
            .filter(|q| self.types.contains(q))
            .collect();
        match candidates.len() {
            0 => Outcome::Resolved(Resolution::External(name.to_string())),
            1 => internal(candidates.into_iter().next().expect("one candidate")),
            _ => Outcome::Ambiguous {
                name: name.to_string(),
                candidates: candidates.into_iter().collect(),
            },
        }
    }
}

pub fn qualify(package: &str, name: &str) -> String {
    if package.is_empty() {
        name.to_string()
    } else {
        format!("{package}.{name}")
    }
}

pub fn simple_name(qualified: &str) -> &str {
    qualified.rsplit('.').next().unwrap_or(qualified)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn types(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn resolved(outcome: Outcome) -> Resolution {
        match outcome {
            Outcome::Resolved(r) => r,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn same_package_type() {
        let t = types(&["p.A", "p.B"]);
        let r = Resolver { types: &t };
        let scope = FileScope {
            package: "p".into(),
            ..Default::default()
        };
        let got = resolved(r.resolve("B", &scope, &["p.A".into()], &BTreeSet::new()));
        assert_eq!(got, Resolution::Internal("p.B".into()));
    }

    #[test]
    fn unknown_name_is_external() {
        let t = types(&["p.A"]);
        let r = Resolver { types: &t };
        let scope = FileScope::default();
        let got = resolved(r.resolve("List<String>", &scope, &[], &BTreeSet::new()));
        assert_eq!(got, Resolution::External("List".into()));
    }

    #[test]
    fn nested_types_take_precedence_over_package() {
        let t = types(&["p.A", "p.A.Node", "p.Node"]);
        let r = Resolver { types: &t };
        let scope = FileScope {
            package: "p".into(),
            ..Default::default()
        };
        let got = resolved(r.resolve("Node", &scope, &["p.A".into()], &BTreeSet::new()));
        assert_eq!(got, Resolution::Internal("p.A.Node".into()));
    }

    #[test]
    fn same_package_beats_single_import() {
        let t = types(&["p.X", "q.X"]);
        let r = Resolver { types: &t };
        let mut scope = FileScope {
            package: "p".into(),
            ..Default::default()
        };
        scope.single_imports.insert("X".into(), "q.X".into());
        let got = resolved(r.resolve("X", &scope, &[], &BTreeSet::new()));
        assert_eq!(got, Resolution::Internal("p.X".into()));
    }

    #[test]
    fn single_import_of_foreign_type_shadows_on_demand() {
        let t = types(&["q.List"]);
        let r = Resolver { types: &t };
        let mut scope = FileScope {
            package: "p".into(),
            on_demand: vec!["q".into()],
            ..Default::default()
        };
        scope
            .single_imports
            .insert("List".into(), "java.util.List".into());
        let got = resolved(r.resolve("List", &scope, &[], &BTreeSet::new()));
        assert_eq!(got, Resolution::External("List".into()));
    }

    #[test]
    fn ambiguous_on_demand_imports() {
        // candidate set enumerated by hand: {a.X, b.X} both project types
        let t = types(&["a.X", "b.X", "c.Y"]);
        let r = Resolver { types: &t };
        let scope = FileScope {
            package: "p".into(),
            on_demand: vec!["a".into(), "b".into(), "c".into()],
            ..Default::default()
        };
        match r.resolve("X", &scope, &[], &BTreeSet::new()) {
            Outcome::Ambiguous { name, candidates } => {
                assert_eq!(name, "X");
                assert_eq!(candidates, ["a.X", "b.X"]);
            }
            other => panic!("unexpected {other:?}"),
        }
        let got = resolved(r.resolve("Y", &scope, &[], &BTreeSet::new()));
        assert_eq!(got, Resolution::Internal("c.Y".into()));
    }

    #[test]
    fn qualified_names() {
        let t = types(&["p.Outer", "p.Outer.Inner"]);
        let r = Resolver { types: &t };
        let scope = FileScope {
            package: "q".into(),
            single_imports: [("Outer".to_string(), "p.Outer".to_string())].into(),
            ..Default::default()
        };
        assert_eq!(
            resolved(r.resolve("p.Outer.Inner", &scope, &[], &BTreeSet::new())),
            Resolution::Internal("p.Outer.Inner".into())
        );
        assert_eq!(
            resolved(r.resolve("Outer.Inner[]", &scope, &[], &BTreeSet::new())),
            Resolution::Internal("p.Outer.Inner".into())
        );
        assert_eq!(
            resolved(r.resolve("java.util.List", &scope, &[], &BTreeSet::new())),
            Resolution::External("java.util.List".into())
        );
    }

    #[test]
    fn primitives_and_type_parameters_are_not_types() {
        let t = types(&[]);
        let r = Resolver { types: &t };
        let scope = FileScope::default();
        assert_eq!(
            r.resolve("int[]", &scope, &[], &BTreeSet::new()),
            Outcome::NotAType
        );
        let params = types(&["T"]);
        assert_eq!(r.resolve("T", &scope, &[], &params), Outcome::NotAType);
    }
}
