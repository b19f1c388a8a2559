#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use smellscan::frontend::{discover_java_files, parse_str, ParsedFile};
use smellscan::{SmellFinding, SmellKind};

pub fn fixture(relative: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(relative)
}

/// Parses every `.java` file under `root`, panicking on any failure.
pub fn parse_tree(root: &Path) -> Vec<ParsedFile> {
    discover_java_files(root)
        .unwrap()
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            parse_str(p.strip_prefix(root).unwrap(), &text).unwrap()
        })
        .collect()
}

/// Random method body whose decision-point count is known by construction.
pub struct BodyGen<'a> {
    rng: &'a mut ChaCha8Rng,
    pub statements: usize,
    pub max_statements: usize,
    pub decisions: u32,
    locals: usize,
}

impl<'a> BodyGen<'a> {
    pub fn new(rng: &'a mut ChaCha8Rng, max_statements: usize) -> Self {
        Self {
            rng,
            statements: 0,
            max_statements,
            decisions: 0,
            locals: 0,
        }
    }

    fn condition(&mut self) -> String {
        let atoms = ["n > 0", "flag", "!flag", "arr.length == 0", "n % 2 == 1"];
        let mut text = atoms.choose(self.rng).unwrap().to_string();
        for _ in 0..self.rng.gen_range(0..3) {
            let op = if self.rng.gen_bool(0.5) { "&&" } else { "||" };
            self.decisions += 1;
            let atom = atoms.choose(self.rng).unwrap();
            text = if self.rng.gen_bool(0.3) {
                format!("({text}) {op} {atom}")
            } else {
                format!("{text} {op} {atom}")
            };
        }
        text
    }

    fn expression(&mut self) -> String {
        match self.rng.gen_range(0..4) {
            0 => {
                self.decisions += 1;
                let c = self.condition();
                format!("({c}) ? 1 : 2")
            }
            1 => "n + 1".into(),
            2 => "\"if (a && b) || c ? d : e\".length()".into(),
            _ => "'?' + n".into(),
        }
    }

    fn block(&mut self, depth: usize, indent: &str) -> String {
        let mut out = String::from("{\n");
        let count = self.rng.gen_range(0..4);
        for _ in 0..count {
            if self.statements >= self.max_statements {
                break;
            }
            out.push_str(&self.statement(depth + 1, &format!("{indent}    ")));
        }
        out.push_str(indent);
        out.push('}');
        out
    }

    pub fn statement(&mut self, depth: usize, indent: &str) -> String {
        self.statements += 1;
        let choice = if depth >= 3 {
            self.rng.gen_range(0..5)
        } else {
            self.rng.gen_range(0..14)
        };
        let body = match choice {
            0 => "n++;".to_string(),
            1 => {
                self.locals += 1;
                let e = self.expression();
                format!("int v{} = {e};", self.locals)
            }
            2 => "// if (x) while (y) && z || w ? q : r".to_string(),
            3 => {
                self.decisions += 1;
                let c = self.condition();
                format!("System.out.println(n > 1 ? {c} : false);")
            }
            4 => "Runnable r = () -> { if (flag && n > 0) { n++; } };".to_string(),
            5 => {
                self.decisions += 1;
                let c = self.condition();
                let then = self.block(depth, indent);
                if self.rng.gen_bool(0.5) {
                    let other = self.block(depth, indent);
                    format!("if ({c}) {then} else {other}")
                } else {
                    format!("if ({c}) {then}")
                }
            }
            6 => {
                self.decisions += 1;
                let b = self.block(depth, indent);
                format!("for (int i = 0; i < n; i++) {b}")
            }
            7 => {
                self.decisions += 1;
                let b = self.block(depth, indent);
                format!("for (int x : arr) {b}")
            }
            8 => {
                self.decisions += 1;
                let c = self.condition();
                let b = self.block(depth, indent);
                format!("while ({c}) {b}")
            }
            9 => {
                self.decisions += 1;
                let b = self.block(depth, indent);
                let c = self.condition();
                format!("do {b} while ({c});")
            }
            10 => {
                let cases = self.rng.gen_range(1..5);
                self.decisions += cases;
                let mut text = String::from("switch (n) {\n");
                for k in 0..cases {
                    text.push_str(&format!(
                        "{indent}    case {k}:\n{indent}        n--;\n{indent}        break;\n"
                    ));
                }
                if self.rng.gen_bool(0.5) {
                    text.push_str(&format!("{indent}    default:\n{indent}        break;\n"));
                }
                text.push_str(indent);
                text.push('}');
                text
            }
            11 => {
                let catches = self.rng.gen_range(1..3);
                self.decisions += catches;
                let mut text = format!("try {}", self.block(depth, indent));
                for k in 0..catches {
                    let ty = ["IllegalStateException", "RuntimeException"][k as usize];
                    text.push_str(&format!(" catch ({ty} e{k}) {}", self.block(depth, indent)));
                }
                if self.rng.gen_bool(0.5) {
                    text.push_str(&format!(" finally {}", self.block(depth, indent)));
                }
                text
            }
            12 => {
                let b = self.block(depth, indent);
                format!("synchronized (this) {b}")
            }
            _ => self.block(depth, indent),
        };
        format!("{indent}{body}\n")
    }
}

/// A Java class with one method `m` holding a random body of at most
/// `max_statements` statements; returns the source and its decision-point count.
pub fn random_method(rng: &mut ChaCha8Rng, max_statements: usize) -> (String, u32) {
    let mut generator = BodyGen::new(rng, max_statements);
    let mut body = String::new();
    while generator.statements < max_statements && generator.rng.gen_bool(0.85) {
        body.push_str(&generator.statement(0, "        "));
    }
    let source =
        format!("class G {{\n    void m(int n, boolean flag, int[] arr) {{\n{body}    }}\n}}\n");
    (source, generator.decisions)
}

/// Random digraph on `n` nodes as adjacency lists (self-loops allowed).
pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<usize>> {
    let density = rng.gen_range(0.05..0.5);
    (0..n)
        .map(|_| (0..n).filter(|_| rng.gen_bool(density)).collect())
        .collect()
}

/// One Java file per node; an edge u→v becomes a field of type Tv in Tu.
pub fn digraph_sources(adj: &[Vec<usize>]) -> Vec<ParsedFile> {
    adj.iter()
        .enumerate()
        .map(|(u, succ)| {
            let fields: String = succ.iter().map(|v| format!("    T{v} f{v};\n")).collect();
            let text = format!("package g;\n\nclass T{u} {{\n{fields}}}\n");
            parse_str(format!("g/T{u}.java"), &text).unwrap()
        })
        .collect()
}

/// Nodes that share a cycle with some other node, by exhaustive reachability.
pub fn mutually_reachable_nodes(adj: &[Vec<usize>]) -> BTreeSet<usize> {
    let n = adj.len();
    let mut reach = vec![vec![false; n]; n];
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            if u != v {
                reach[u][v] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    (0..n)
        .filter(|&u| (0..n).any(|v| v != u && reach[u][v] && reach[v][u]))
        .collect()
}

fn awkward_string(rng: &mut ChaCha8Rng) -> String {
    let alphabet = [
        "a",
        "Z",
        "0",
        ".",
        "\t",
        "\n",
        "\r",
        "\\",
        "=",
        ",",
        "@",
        "#",
        " ",
        "\u{e9}",
        "\u{1f600}",
        "$",
        "<",
        ">",
    ];
    let len = rng.gen_range(0..12);
    (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

pub fn random_finding(rng: &mut ChaCha8Rng) -> SmellFinding {
    let kind = *SmellKind::ALL.choose(rng).unwrap();
    let evidence: BTreeMap<String, String> = (0..rng.gen_range(0..4))
        .map(|_| (awkward_string(rng), awkward_string(rng)))
        .collect();
    let cycle_members = if rng.gen_bool(0.3) {
        (0..rng.gen_range(1..4))
            .map(|_| awkward_string(rng))
            .collect()
    } else {
        Vec::new()
    };
    SmellFinding {
        kind,
        subject: awkward_string(rng),
        file: PathBuf::from(awkward_string(rng)),
        line: rng.gen_range(0..100_000),
        evidence,
        cycle_members,
    }
}
