//! Java front end: tokenizer, parser and source discovery.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod source;

use std::path::{Path, PathBuf};

use thiserror::Error;
use walkdir::WalkDir;

pub use ast::{Modifiers, Node, NodeKind, TypeInfo, TypeKind};
pub use lexer::{tokenize, LexError, Span, Token, TokenKind, TokenStream};
pub use parser::{parse, Diagnostic, ParseError, ParseOutput};
pub use source::{SourceError, SourceFile};

#[derive(Debug, Error)]
pub enum FrontendError {
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error("{path}: lexical error at {source}")]
    Lex {
        path: PathBuf,
        #[source]
        source: LexError,
    },
    #[error("{path}: parse error at {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
}

/// A tokenized and parsed compilation unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedFile {
    pub file: SourceFile,
    pub tokens: TokenStream,
    pub unit: Node,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParsedFile {
    pub fn path(&self) -> &Path {
        self.file.path()
    }

    pub fn loc(&self) -> usize {
        self.tokens.loc()
    }
}

pub fn parse_source(file: SourceFile) -> Result<ParsedFile, FrontendError> {
    let tokens = tokenize(&file).map_err(|source| FrontendError::Lex {
        path: file.path().to_path_buf(),
        source,
    })?;
    let output = parse(&tokens, &file).map_err(|source| FrontendError::Parse {
        path: file.path().to_path_buf(),
        source,
    })?;
    Ok(ParsedFile {
        file,
        tokens,
        unit: output.unit,
        diagnostics: output.diagnostics,
    })
}

/// Convenience for tests and examples: parses in-memory text.
pub fn parse_str(path: impl Into<PathBuf>, content: &str) -> Result<ParsedFile, FrontendError> {
    parse_source(SourceFile::new(path, content))
}

/// All regular files under `root` whose extension is exactly `java`, sorted.
/// Symbolic links are not followed.
pub fn discover_java_files(root: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in WalkDir::new(root).follow_links(false) {
        let entry = entry.map_err(std::io::Error::other)?;
        if entry.file_type().is_file() && entry.path().extension().is_some_and(|e| e == "java") {
            files.push(entry.into_path());
        }
    }
    files.sort();
    Ok(files)
}
