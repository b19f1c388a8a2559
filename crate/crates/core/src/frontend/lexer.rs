//! Java tokenizer.
//!
//! Every byte of the input ends up in exactly one token: whitespace and
//! comments are kept as skippable tokens so the stream reconstructs the file.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::source::SourceFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TokenKind {
    Keyword,
    Identifier,
    Literal,
    Operator,
    Separator,
    Comment,
    Whitespace,
}

/// Byte range plus the 1-based position of its first character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub column: u32,
    pub end_line: u32,
}

impl Span {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// Smallest span covering both.
    pub fn to(self, other: Span) -> Span {
        let (first, last) = if self.start <= other.start {
            (self, other)
        } else {
            (other, self)
        };
        Span {
            start: first.start,
            end: last.end.max(first.end),
            line: first.line,
            column: first.column,
            end_line: last.end_line.max(first.end_line),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
}

impl Token {
    pub fn is_skippable(&self) -> bool {
        matches!(self.kind, TokenKind::Comment | TokenKind::Whitespace)
    }

    pub fn is(&self, text: &str) -> bool {
        !self.is_skippable() && self.lexeme == text
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} `{}`", self.kind, self.lexeme)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct LexError {
    pub line: u32,
    pub column: u32,
    pub message: String,
}

/// Result of tokenizing one file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
    pub physical_lines: usize,
    /// `code_lines[i]` is true when line `i + 1` holds a non-comment token.
    pub code_lines: Vec<bool>,
}

impl TokenStream {
    /// Non-blank, non-comment physical lines.
    pub fn loc(&self) -> usize {
        self.code_lines.iter().filter(|c| **c).count()
    }

    /// Code lines within an inclusive 1-based line range.
    pub fn loc_between(&self, first: u32, last: u32) -> usize {
        if first == 0 || last < first {
            return 0;
        }
        let lo = (first as usize - 1).min(self.code_lines.len());
        let hi = (last as usize).min(self.code_lines.len());
        self.code_lines[lo..hi].iter().filter(|c| **c).count()
    }

    pub fn significant(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| !t.is_skippable())
    }
}

pub const KEYWORDS: &[&str] = &[
    "abstract",
    "assert",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "final",
    "finally",
    "float",
    "for",
    "goto",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "try",
    "void",
    "volatile",
    "while",
];

const OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "->", "++", "--", "&&", "||", "==", "!=", "<=", ">=", "+=", "-=",
    "*=", "/=", "&=", "|=", "^=", "%=", "<<", ">>", "=", ">", "<", "!", "~", "?", ":", "+", "-",
    "*", "/", "&", "|", "^", "%",
];

const SEPARATORS: &[&str] = &[
    "...", "::", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@",
];

pub fn tokenize(file: &SourceFile) -> Result<TokenStream, LexError> {
    let mut lexer = Lexer {
        file,
        src: file.content(),
        pos: 0,
        tokens: Vec::new(),
    };
    lexer.run()?;
    let physical_lines = file.physical_lines();
    let mut code_lines = vec![false; physical_lines];
    for tok in lexer.tokens.iter().filter(|t| !t.is_skippable()) {
        for line in tok.span.line..=tok.span.end_line {
            if let Some(slot) = code_lines.get_mut(line as usize - 1) {
                *slot = true;
            }
        }
    }
    Ok(TokenStream {
        tokens: lexer.tokens,
        physical_lines,
        code_lines,
    })
}

struct Lexer<'a> {
    file: &'a SourceFile,
    src: &'a str,
    pos: usize,
    tokens: Vec<Token>,
}

impl Lexer<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn error(&self, at: usize, message: impl Into<String>) -> LexError {
        let (line, column) = self.file.line_col(at);
        LexError {
            line,
            column,
            message: message.into(),
        }
    }

    fn push(&mut self, kind: TokenKind, start: usize) {
        let (line, column) = self.file.line_col(start);
        let end_line = if self.pos > start {
            self.file.line_col(self.pos - 1).0
        } else {
            line
        };
        self.tokens.push(Token {
            kind,
            lexeme: self.src[start..self.pos].to_string(),
            span: Span {
                start,
                end: self.pos,
                line,
                column,
                end_line,
            },
        });
    }

    fn run(&mut self) -> Result<(), LexError> {
        while let Some(c) = self.peek() {
            let start = self.pos;
            if is_java_whitespace(c) {
                while self.peek().is_some_and(is_java_whitespace) {
                    self.bump();
                }
                self.push(TokenKind::Whitespace, start);
            } else if self.src[self.pos..].starts_with("//") {
                while self.peek().is_some_and(|c| c != '\n' && c != '\r') {
                    self.bump();
                }
                self.push(TokenKind::Comment, start);
            } else if self.src[self.pos..].starts_with("/*") {
                match self.src[self.pos + 2..].find("*/") {
                    Some(rel) => self.pos += 2 + rel + 2,
                    None => return Err(self.error(start, "unterminated block comment")),
                }
                self.push(TokenKind::Comment, start);
            } else if c == '"' {
                self.string(start)?;
                self.push(TokenKind::Literal, start);
            } else if c == '\'' {
                self.char_literal(start)?;
                self.push(TokenKind::Literal, start);
            } else if c.is_ascii_digit()
                || (c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()))
            {
                self.number();
                self.push(TokenKind::Literal, start);
            } else if is_ident_start(c) {
                while self.peek().is_some_and(is_ident_part) {
                    self.bump();
                }
                let word = &self.src[start..self.pos];
                let kind = if matches!(word, "true" | "false" | "null") {
                    TokenKind::Literal
                } else if KEYWORDS.contains(&word) {
                    TokenKind::Keyword
                } else {
                    TokenKind::Identifier
                };
                self.push(kind, start);
            } else if let Some(sep) = SEPARATORS
                .iter()
                .find(|s| self.src[self.pos..].starts_with(**s))
            {
                self.pos += sep.len();
                self.push(TokenKind::Separator, start);
            } else if let Some(op) = OPERATORS
                .iter()
                .find(|s| self.src[self.pos..].starts_with(**s))
            {
                self.pos += op.len();
                self.push(TokenKind::Operator, start);
            } else {
                return Err(self.error(start, format!("illegal character {c:?}")));
            }
        }
        Ok(())
    }

    fn string(&mut self, start: usize) -> Result<(), LexError> {
        if self.src[self.pos..].starts_with("\"\"\"") {
            self.pos += 3;
            loop {
                match self.bump() {
                    None => return Err(self.error(start, "unterminated text block")),
                    Some('\\') => {
                        self.bump();
                    }
                    Some('"') if self.src[self.pos..].starts_with("\"\"") => {
                        self.pos += 2;
                        return Ok(());
                    }
                    Some(_) => {}
                }
            }
        }
        self.bump();
        loop {
            match self.bump() {
                None | Some('\n') | Some('\r') => {
                    return Err(self.error(start, "unterminated string literal"))
                }
                Some('\\') => {
                    if matches!(self.peek(), None | Some('\n') | Some('\r')) {
                        return Err(self.error(start, "unterminated string literal"));
                    }
                    self.bump();
                }
                Some('"') => return Ok(()),
                Some(_) => {}
            }
        }
    }

    fn char_literal(&mut self, start: usize) -> Result<(), LexError> {
        self.bump();
        loop {
            match self.bump() {
                None | Some('\n') | Some('\r') => {
                    return Err(self.error(start, "unterminated character literal"))
                }
                Some('\\') => {
                    if matches!(self.peek(), None | Some('\n') | Some('\r')) {
                        return Err(self.error(start, "unterminated character literal"));
                    }
                    self.bump();
                }
                Some('\'') => return Ok(()),
                Some(_) => {}
            }
        }
    }

    fn number(&mut self) {
        let radix_prefix = self.src[self.pos..]
            .get(..2)
            .map(|p| p.to_ascii_lowercase());
        if matches!(radix_prefix.as_deref(), Some("0x") | Some("0b")) {
            self.pos += 2;
            while self
                .peek()
                .is_some_and(|c| c.is_ascii_hexdigit() || c == '_' || c == '.')
            {
                self.bump();
            }
            if self.peek().is_some_and(|c| c == 'p' || c == 'P') {
                self.exponent();
            }
        } else {
            while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
                self.bump();
            }
            if self.peek() == Some('.') && self.peek_at(1).is_none_or(|c| !is_ident_start(c)) {
                self.bump();
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
                    self.bump();
                }
            }
            if self.peek().is_some_and(|c| c == 'e' || c == 'E') {
                self.exponent();
            }
        }
        if self
            .peek()
            .is_some_and(|c| matches!(c, 'l' | 'L' | 'f' | 'F' | 'd' | 'D'))
        {
            self.bump();
        }
    }

    fn exponent(&mut self) {
        self.bump();
        if self.peek().is_some_and(|c| c == '+' || c == '-') {
            self.bump();
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
            self.bump();
        }
    }
}

fn is_java_whitespace(c: char) -> bool {
    matches!(c, ' ' | '\t' | '\n' | '\r' | '\x0c')
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}
