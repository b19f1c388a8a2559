//! Recursive-descent parser for the supported Java subset.
//!
//! Syntax errors inside a member or a statement are recovered from: the
//! offending tokens become an `Opaque` node and a diagnostic is recorded.
//! Errors that cannot be localised (an unclosed type body, garbage at the top
//! level) abort the file with a [`ParseError`].

use thiserror::Error;

use super::ast::{
    erase_type_arguments, is_primitive, MethodInfo, Modifiers, Node, NodeKind, TypeInfo, TypeKind,
};
use super::lexer::{Span, Token, TokenKind, TokenStream};
use super::source::SourceFile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: expected {expected}, found {found}")]
pub struct ParseError {
    pub expected: String,
    pub found: String,
    pub line: u32,
    pub column: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: u32,
    pub column: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseOutput {
    pub unit: Node,
    pub diagnostics: Vec<Diagnostic>,
}

type PResult<T> = Result<T, ParseError>;

pub fn parse(tokens: &TokenStream, file: &SourceFile) -> Result<ParseOutput, ParseError> {
    let toks: Vec<Token> = tokens.significant().cloned().collect();
    let (line, column) = file.line_col(file.content().len());
    let eof = Span {
        start: file.content().len(),
        end: file.content().len(),
        line,
        column,
        end_line: line,
    };
    let mut parser = Parser {
        toks,
        pos: 0,
        undo: Vec::new(),
        diagnostics: Vec::new(),
        eof,
        no_lambda: false,
    };
    let unit = parser.compilation_unit()?;
    Ok(ParseOutput {
        unit,
        diagnostics: parser.diagnostics,
    })
}

struct Checkpoint {
    pos: usize,
    undo: usize,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    // Tokens rewritten by `>>` splitting, so speculation can be undone.
    undo: Vec<(usize, Token)>,
    diagnostics: Vec<Diagnostic>,
    eof: Span,
    no_lambda: bool,
}

const ASSIGN_OPS: &[&str] = &[
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
];

fn binary_precedence(op: &str) -> Option<u8> {
    Some(match op {
        "||" => 1,
        "&&" => 2,
        "|" => 3,
        "^" => 4,
        "&" => 5,
        "==" | "!=" => 6,
        "<" | ">" | "<=" | ">=" | "instanceof" => 7,
        "<<" | ">>" | ">>>" => 8,
        "+" | "-" => 9,
        "*" | "/" | "%" => 10,
        _ => return None,
    })
}

impl Parser {
    // ---- token cursor -------------------------------------------------

    fn at_eof(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn tok(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn nth(&self, n: usize) -> Option<&Token> {
        self.toks.get(self.pos + n)
    }

    fn text(&self) -> &str {
        self.tok().map_or("", |t| t.lexeme.as_str())
    }

    fn nth_text(&self, n: usize) -> &str {
        self.nth(n).map_or("", |t| t.lexeme.as_str())
    }

    fn kind(&self) -> Option<TokenKind> {
        self.tok().map(|t| t.kind)
    }

    fn at(&self, text: &str) -> bool {
        self.tok()
            .is_some_and(|t| t.lexeme == text && t.kind != TokenKind::Literal)
    }

    fn nth_is(&self, n: usize, text: &str) -> bool {
        self.nth(n)
            .is_some_and(|t| t.lexeme == text && t.kind != TokenKind::Literal)
    }

    fn at_ident(&self) -> bool {
        self.kind() == Some(TokenKind::Identifier)
    }

    fn at_contextual(&self, word: &str) -> bool {
        self.at_ident() && self.text() == word
    }

    fn span(&self) -> Span {
        self.tok().map_or(self.eof, |t| t.span)
    }

    fn prev_span(&self) -> Span {
        if self.pos == 0 {
            self.span()
        } else {
            self.toks[self.pos - 1].span
        }
    }

    fn span_from(&self, start: Span) -> Span {
        if self.pos == 0 {
            return start;
        }
        let prev = self.prev_span();
        if prev.end < start.start {
            start
        } else {
            start.to(prev)
        }
    }

    fn bump(&mut self) -> Span {
        let span = self.span();
        if !self.at_eof() {
            self.pos += 1;
        }
        span
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        let span = self.span();
        ParseError {
            expected: expected.into(),
            found: match self.tok() {
                Some(t) => format!("`{}`", t.lexeme),
                None => "end of file".to_string(),
            },
            line: span.line,
            column: span.column,
        }
    }

    fn expect(&mut self, text: &str) -> PResult<Span> {
        if self.at(text) {
            Ok(self.bump())
        } else {
            Err(self.error(format!("`{text}`")))
        }
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        if self.at_ident() {
            let name = self.text().to_string();
            Ok((name, self.bump()))
        } else {
            Err(self.error("identifier"))
        }
    }

    fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            pos: self.pos,
            undo: self.undo.len(),
        }
    }

    fn restore(&mut self, cp: Checkpoint) {
        while self.undo.len() > cp.undo {
            let (idx, tok) = self.undo.pop().expect("undo entry");
            self.toks[idx] = tok;
        }
        self.pos = cp.pos;
    }

    /// Consumes one `>` closing a type argument list, splitting `>>`, `>>>`,
    /// `>=` and friends when needed.
    fn expect_close_angle(&mut self) -> PResult<()> {
        let Some(tok) = self.tok() else {
            return Err(self.error("`>`"));
        };
        if tok.kind != TokenKind::Operator || !tok.lexeme.starts_with('>') {
            return Err(self.error("`>`"));
        }
        if tok.lexeme == ">" {
            self.pos += 1;
            return Ok(());
        }
        let original = tok.clone();
        let mut rest = original.clone();
        rest.lexeme.remove(0);
        rest.span.start += 1;
        rest.span.column += 1;
        self.undo.push((self.pos, original));
        self.toks[self.pos] = rest;
        Ok(())
    }

    fn diagnose(&mut self, span: Span, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic {
            line: span.line,
            column: span.column,
            message: message.into(),
        });
    }

    /// Skips a balanced `{ ... }` (or `( ... )`, `[ ... ]`) group starting at
    /// the current opening token.
    fn skip_balanced(&mut self) -> PResult<()> {
        let open = self.text().to_string();
        let close = match open.as_str() {
            "{" => "}",
            "(" => ")",
            "[" => "]",
            _ => return Err(self.error("`{`")),
        };
        let mut depth = 0usize;
        loop {
            if self.at_eof() {
                return Err(self.error(format!("`{close}`")));
            }
            if self.at(&open) {
                depth += 1;
            } else if self.at(close) {
                depth -= 1;
                if depth == 0 {
                    self.bump();
                    return Ok(());
                }
            }
            self.bump();
        }
    }

    /// Skips a declaration we do not model: everything up to a top-level `;`
    /// or through the first balanced brace block.
    fn skip_declaration(&mut self) -> PResult<()> {
        loop {
            if self.at_eof() {
                return Err(self.error("`{` or `;`"));
            }
            if self.at(";") {
                self.bump();
                return Ok(());
            }
            if self.at("{") {
                return self.skip_balanced();
            }
            if self.at("(") || self.at("[") {
                self.skip_balanced()?;
                continue;
            }
            self.bump();
        }
    }

    /// Recovery: skips to just past the next `;` or balanced brace block at
    /// the current nesting level, stopping before an unmatched `}`. Always
    /// consumes at least one token unless already at `}` or end of file.
    fn recover(&mut self) -> PResult<()> {
        let mut depth = 0usize;
        loop {
            if self.at_eof() {
                return Err(self.error("`}`"));
            }
            match self.text() {
                "(" | "[" | "{" if self.kind() == Some(TokenKind::Separator) => depth += 1,
                ")" | "]" if self.kind() == Some(TokenKind::Separator) => {
                    depth = depth.saturating_sub(1)
                }
                "}" if self.kind() == Some(TokenKind::Separator) => {
                    if depth == 0 {
                        return Ok(());
                    }
                    depth -= 1;
                    if depth == 0 {
                        self.bump();
                        return Ok(());
                    }
                }
                ";" if depth == 0 => {
                    self.bump();
                    return Ok(());
                }
                _ => {}
            }
            self.bump();
        }
    }

    // ---- compilation unit ---------------------------------------------

    fn compilation_unit(&mut self) -> PResult<Node> {
        let mut children = Vec::new();

        let cp = self.checkpoint();
        self.skip_annotations()?;
        if self.at("package") {
            let s = self.span();
            self.bump();
            let name = self.qualified_name()?;
            self.expect(";")?;
            children.push(Node::new(NodeKind::PackageDecl { name }, self.span_from(s)));
        } else {
            self.restore(cp);
        }

        while self.at("import") {
            let s = self.bump();
            let is_static = self.eat("static");
            let mut path = self.ident()?.0;
            let mut on_demand = false;
            while self.eat(".") {
                if self.eat("*") {
                    on_demand = true;
                    break;
                }
                path.push('.');
                path.push_str(&self.ident()?.0);
            }
            self.expect(";")?;
            children.push(Node::new(
                NodeKind::ImportDecl {
                    path,
                    is_static,
                    on_demand,
                },
                self.span_from(s),
            ));
        }

        while !self.at_eof() {
            if self.eat(";") {
                continue;
            }
            if self.at_contextual("module")
                || (self.at_contextual("open") && self.nth_text(1) == "module")
            {
                let s = self.span();
                self.skip_declaration()?;
                let span = self.span_from(s);
                self.diagnose(span, "module declaration not analyzed");
                children.push(Node::new(
                    NodeKind::Opaque {
                        reason: "module declaration".into(),
                    },
                    span,
                ));
                continue;
            }
            let node = self.type_declaration_or_opaque()?;
            children.push(node);
        }

        let span = Span {
            start: 0,
            end: self.eof.end,
            line: 1,
            column: 1,
            end_line: self.eof.line,
        };
        Ok(Node::with_children(
            NodeKind::CompilationUnit,
            span,
            children,
        ))
    }

    fn qualified_name(&mut self) -> PResult<String> {
        let mut name = self.ident()?.0;
        while self.at(".") && self.nth(1).is_some_and(|t| t.kind == TokenKind::Identifier) {
            self.bump();
            name.push('.');
            name.push_str(&self.ident()?.0);
        }
        Ok(name)
    }

    fn skip_annotations(&mut self) -> PResult<()> {
        while self.at("@") && !self.nth_is(1, "interface") {
            self.bump();
            self.qualified_name()?;
            if self.at("(") {
                self.skip_balanced()?;
            }
        }
        Ok(())
    }

    fn modifiers(&mut self) -> PResult<Modifiers> {
        let mut mods = Modifiers::empty();
        loop {
            self.skip_annotations()?;
            if self.kind() == Some(TokenKind::Keyword) {
                // `default` is only a modifier in front of a member, not `default:`
                if self.at("default") && (self.nth_is(1, ":") || self.nth_is(1, "->")) {
                    break;
                }
                if let Some(m) = Modifiers::from_keyword(self.text()) {
                    mods.insert(m);
                    self.bump();
                    continue;
                }
            }
            if self.at_contextual("sealed")
                && self.nth(1).is_some_and(|t| t.kind == TokenKind::Keyword)
            {
                mods.insert(Modifiers::SEALED);
                self.bump();
                continue;
            }
            if self.at_contextual("non") && self.nth_is(1, "-") && self.nth_text(2) == "sealed" {
                mods.insert(Modifiers::NON_SEALED);
                self.pos += 3;
                continue;
            }
            break;
        }
        Ok(mods)
    }

    fn at_type_keyword(&self) -> bool {
        self.at("class")
            || self.at("interface")
            || self.at("enum")
            || (self.at("@") && self.nth_is(1, "interface"))
    }

    fn at_record(&self) -> bool {
        self.at_contextual("record") && self.nth(1).is_some_and(|t| t.kind == TokenKind::Identifier)
    }

    fn type_declaration_or_opaque(&mut self) -> PResult<Node> {
        let start = self.span();
        let mods = self.modifiers()?;
        if self.at_record() {
            self.skip_declaration()?;
            let span = self.span_from(start);
            self.diagnose(span, "record declaration not analyzed");
            return Ok(Node::new(
                NodeKind::Opaque {
                    reason: "record".into(),
                },
                span,
            ));
        }
        if !self.at_type_keyword() {
            return Err(self.error("type declaration"));
        }
        if mods.contains(Modifiers::SEALED) || mods.contains(Modifiers::NON_SEALED) {
            self.skip_declaration()?;
            let span = self.span_from(start);
            self.diagnose(span, "sealed type declaration not analyzed");
            return Ok(Node::new(
                NodeKind::Opaque {
                    reason: "sealed type".into(),
                },
                span,
            ));
        }
        self.type_declaration(start, mods)
    }

    fn type_declaration(&mut self, start: Span, modifiers: Modifiers) -> PResult<Node> {
        let mut is_annotation = false;
        let kind = if self.eat("class") {
            TypeKind::Class
        } else if self.eat("interface") {
            TypeKind::Interface
        } else if self.eat("enum") {
            TypeKind::Enum
        } else {
            self.expect("@")?;
            self.expect("interface")?;
            is_annotation = true;
            TypeKind::Interface
        };
        let (name, _) = self.ident()?;
        let type_params = if self.at("<") {
            self.type_parameters()?
        } else {
            Vec::new()
        };
        let mut supertype = None;
        let mut interfaces = Vec::new();
        if self.eat("extends") {
            if kind == TypeKind::Interface {
                interfaces = self.type_list()?;
            } else {
                supertype = Some(self.parse_type()?);
            }
        }
        if self.eat("implements") {
            interfaces.extend(self.type_list()?);
        }
        if self.at_contextual("permits") {
            self.bump();
            self.type_list()?;
        }
        let info = TypeInfo {
            name: name.clone(),
            kind,
            modifiers,
            supertype,
            interfaces,
            type_params,
            is_annotation,
        };
        let members = if kind == TypeKind::Enum {
            self.enum_body()?
        } else {
            self.class_body()?
        };
        Ok(Node::with_children(
            NodeKind::TypeDecl(info),
            self.span_from(start),
            members,
        ))
    }

    fn type_list(&mut self) -> PResult<Vec<String>> {
        let mut list = vec![self.parse_type()?];
        while self.eat(",") {
            list.push(self.parse_type()?);
        }
        Ok(list)
    }

    fn type_parameters(&mut self) -> PResult<Vec<String>> {
        self.expect("<")?;
        let mut names = Vec::new();
        loop {
            self.skip_annotations()?;
            names.push(self.ident()?.0);
            if self.eat("extends") {
                self.parse_type()?;
                while self.eat("&") {
                    self.parse_type()?;
                }
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect_close_angle()?;
        Ok(names)
    }

    fn class_body(&mut self) -> PResult<Vec<Node>> {
        self.expect("{")?;
        let members = self.members_until_close()?;
        self.expect("}")?;
        Ok(members)
    }

    fn members_until_close(&mut self) -> PResult<Vec<Node>> {
        let mut members = Vec::new();
        loop {
            if self.at_eof() {
                return Err(self.error("`}`"));
            }
            if self.at("}") {
                return Ok(members);
            }
            if self.eat(";") {
                continue;
            }
            let cp = self.checkpoint();
            let before = self.pos;
            let start = self.span();
            match self.member() {
                Ok(node) => members.push(node),
                Err(err) => {
                    self.restore(cp);
                    self.recover().map_err(|_| err.clone())?;
                    if self.pos == before {
                        // recovery made no progress: a stray `}` ends the body
                        return Ok(members);
                    }
                    let span = self.span_from(start);
                    self.diagnose(span, format!("skipped malformed member: {err}"));
                    members.push(Node::new(
                        NodeKind::Opaque {
                            reason: "malformed member".into(),
                        },
                        span,
                    ));
                }
            }
        }
    }

    fn enum_body(&mut self) -> PResult<Vec<Node>> {
        self.expect("{")?;
        let mut members = Vec::new();
        loop {
            self.skip_annotations()?;
            if !self.at_ident() {
                break;
            }
            let (name, s) = self.ident()?;
            let mut args = Vec::new();
            if self.at("(") {
                args = self.arguments()?;
            }
            if self.at("{") {
                self.skip_balanced()?;
            }
            members.push(Node::with_children(
                NodeKind::EnumConstant { name },
                self.span_from(s),
                args,
            ));
            if !self.eat(",") {
                break;
            }
        }
        if self.eat(";") {
            members.extend(self.members_until_close()?);
        }
        self.expect("}")?;
        Ok(members)
    }

    fn member(&mut self) -> PResult<Node> {
        let start = self.span();
        let mods = self.modifiers()?;
        if self.at("{") {
            let body = self.block()?;
            return Ok(Node::with_children(
                NodeKind::Initializer {
                    is_static: mods.is_static(),
                },
                self.span_from(start),
                vec![body],
            ));
        }
        if self.at_record()
            || ((mods.contains(Modifiers::SEALED) || mods.contains(Modifiers::NON_SEALED))
                && self.at_type_keyword())
        {
            self.skip_declaration()?;
            let span = self.span_from(start);
            self.diagnose(span, "record or sealed type not analyzed");
            return Ok(Node::new(
                NodeKind::Opaque {
                    reason: "record or sealed type".into(),
                },
                span,
            ));
        }
        if self.at_type_keyword() {
            return self.type_declaration(start, mods);
        }
        let type_params = if self.at("<") {
            self.type_parameters()?
        } else {
            Vec::new()
        };
        if self.at_ident() && self.nth_is(1, "(") {
            let (name, _) = self.ident()?;
            return self.method_rest(start, mods, name, None, type_params);
        }
        let ty = self.parse_type()?;
        let (name, _) = self.ident()?;
        if self.at("(") {
            return self.method_rest(start, mods, name, Some(ty), type_params);
        }
        // field
        let mut names = vec![name];
        let mut inits = Vec::new();
        self.declarator_rest(&mut inits)?;
        while self.eat(",") {
            names.push(self.ident()?.0);
            self.declarator_rest(&mut inits)?;
        }
        self.expect(";")?;
        Ok(Node::with_children(
            NodeKind::FieldDecl {
                modifiers: mods,
                type_name: ty,
                names,
            },
            self.span_from(start),
            inits,
        ))
    }

    fn declarator_rest(&mut self, inits: &mut Vec<Node>) -> PResult<()> {
        while self.at("[") && self.nth_is(1, "]") {
            self.pos += 2;
        }
        if self.eat("=") {
            inits.push(self.variable_initializer()?);
        }
        Ok(())
    }

    fn variable_initializer(&mut self) -> PResult<Node> {
        if self.at("{") {
            self.array_initializer()
        } else {
            self.expression()
        }
    }

    fn array_initializer(&mut self) -> PResult<Node> {
        let start = self.expect("{")?;
        let mut items = Vec::new();
        while !self.at("}") {
            items.push(self.variable_initializer()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect("}")?;
        Ok(Node::with_children(
            NodeKind::ArrayInit,
            self.span_from(start),
            items,
        ))
    }

    fn method_rest(
        &mut self,
        start: Span,
        modifiers: Modifiers,
        name: String,
        return_type: Option<String>,
        type_params: Vec<String>,
    ) -> PResult<Node> {
        let mut children = self.formal_parameters()?;
        while self.at("[") && self.nth_is(1, "]") {
            self.pos += 2;
        }
        let mut throws = Vec::new();
        if self.eat("throws") {
            throws = self.type_list()?;
        }
        let has_body = if self.at("{") {
            children.push(self.block()?);
            true
        } else {
            if self.eat("default") {
                // annotation element default value
                while !self.at(";") && !self.at_eof() {
                    if self.at("{") || self.at("(") {
                        self.skip_balanced()?;
                    } else {
                        self.bump();
                    }
                }
            }
            self.expect(";")?;
            false
        };
        let is_ctor = return_type.is_none();
        let info = MethodInfo {
            name,
            modifiers,
            return_type,
            type_params,
            throws,
            has_body,
        };
        let kind = if is_ctor {
            NodeKind::ConstructorDecl(info)
        } else {
            NodeKind::MethodDecl(info)
        };
        Ok(Node::with_children(kind, self.span_from(start), children))
    }

    fn formal_parameters(&mut self) -> PResult<Vec<Node>> {
        self.expect("(")?;
        let mut params = Vec::new();
        if self.eat(")") {
            return Ok(params);
        }
        loop {
            let start = self.span();
            self.modifiers()?;
            let mut ty = self.parse_type()?;
            if self.eat("...") {
                ty.push_str("[]");
            }
            if self.at("this") {
                // receiver parameter
                self.bump();
            } else {
                let (name, _) = self.ident()?;
                while self.at("[") && self.nth_is(1, "]") {
                    self.pos += 2;
                    ty.push_str("[]");
                }
                params.push(Node::new(
                    NodeKind::Parameter {
                        type_name: ty,
                        name,
                    },
                    self.span_from(start),
                ));
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(params)
    }

    // ---- types --------------------------------------------------------

    /// Parses a type and returns its erased text, e.g. `java.util.Map[]`.
    fn parse_type(&mut self) -> PResult<String> {
        self.skip_annotations()?;
        let mut text = String::new();
        if self.kind() == Some(TokenKind::Keyword) && is_primitive(self.text()) {
            text.push_str(self.text());
            self.bump();
        } else if self.at("?") {
            self.bump();
            text.push('?');
            if self.eat("extends") || self.eat("super") {
                return self.parse_type();
            }
            return Ok(text);
        } else {
            text.push_str(&self.ident()?.0);
            if self.at("<") {
                self.type_arguments()?;
            }
            while self.at(".")
                && (self.nth(1).is_some_and(|t| t.kind == TokenKind::Identifier)
                    || self.nth_is(1, "@"))
            {
                self.bump();
                self.skip_annotations()?;
                text.push('.');
                text.push_str(&self.ident()?.0);
                if self.at("<") {
                    self.type_arguments()?;
                }
            }
        }
        loop {
            self.skip_annotations()?;
            if self.at("[") && self.nth_is(1, "]") {
                self.pos += 2;
                text.push_str("[]");
            } else {
                break;
            }
        }
        Ok(erase_type_arguments(&text))
    }

    fn type_arguments(&mut self) -> PResult<()> {
        self.expect("<")?;
        if self.at(">") {
            return self.expect_close_angle();
        }
        loop {
            self.parse_type()?;
            while self.eat("&") {
                self.parse_type()?;
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect_close_angle()
    }

    // ---- statements ---------------------------------------------------

    fn block(&mut self) -> PResult<Node> {
        let start = self.expect("{")?;
        let mut stmts = Vec::new();
        loop {
            if self.at_eof() {
                return Err(self.error("`}`"));
            }
            if self.at("}") {
                break;
            }
            stmts.push(self.recovering_statement()?);
        }
        self.expect("}")?;
        Ok(Node::with_children(
            NodeKind::Block,
            self.span_from(start),
            stmts,
        ))
    }

    /// Parses one block statement; on a syntax error the statement becomes
    /// an `Opaque` node. Returns an error only when recovery is impossible.
    fn recovering_statement(&mut self) -> PResult<Node> {
        let cp = self.checkpoint();
        let before = self.pos;
        let start = self.span();
        match self.block_statement() {
            Ok(node) => Ok(node),
            Err(err) => {
                self.restore(cp);
                self.recover().map_err(|_| err.clone())?;
                if self.pos == before {
                    // nothing consumable before the closing brace
                    return Err(err);
                }
                let span = self.span_from(start);
                self.diagnose(span, format!("skipped malformed statement: {err}"));
                Ok(Node::new(
                    NodeKind::Opaque {
                        reason: "malformed statement".into(),
                    },
                    span,
                ))
            }
        }
    }

    fn block_statement(&mut self) -> PResult<Node> {
        if self.at_local_type_declaration()? {
            let start = self.span();
            self.modifiers()?;
            self.skip_declaration()?;
            let span = self.span_from(start);
            self.diagnose(span, "local type declaration not analyzed");
            return Ok(Node::new(
                NodeKind::Opaque {
                    reason: "local type declaration".into(),
                },
                span,
            ));
        }
        if self.looks_like_local_var()? {
            let node = self.local_var_decl()?;
            self.expect(";")?;
            return Ok(node);
        }
        self.statement()
    }

    fn at_local_type_declaration(&mut self) -> PResult<bool> {
        let cp = self.checkpoint();
        let mods = self.modifiers();
        let result = mods.is_ok() && (self.at_type_keyword() || self.at_record());
        self.restore(cp);
        Ok(result)
    }

    fn looks_like_local_var(&mut self) -> PResult<bool> {
        let cp = self.checkpoint();
        let result = (|| -> PResult<bool> {
            self.modifiers()?;
            if !(self.at_ident()
                || (self.kind() == Some(TokenKind::Keyword) && is_primitive(self.text())))
            {
                return Ok(false);
            }
            if self.at_contextual("yield")
                && !self.nth(1).is_some_and(|t| t.kind == TokenKind::Identifier)
            {
                return Ok(false);
            }
            self.parse_type()?;
            if !self.at_ident() {
                return Ok(false);
            }
            self.bump();
            Ok(self.at("=") || self.at(";") || self.at(",") || self.at("[") || self.at(":"))
        })()
        .unwrap_or(false);
        self.restore(cp);
        Ok(result)
    }

    fn local_var_decl(&mut self) -> PResult<Node> {
        let start = self.span();
        self.modifiers()?;
        let ty = self.parse_type()?;
        let mut names = vec![self.ident()?.0];
        let mut inits = Vec::new();
        self.declarator_rest(&mut inits)?;
        while self.eat(",") {
            names.push(self.ident()?.0);
            self.declarator_rest(&mut inits)?;
        }
        Ok(Node::with_children(
            NodeKind::LocalVarDecl {
                type_name: ty,
                names,
            },
            self.span_from(start),
            inits,
        ))
    }

    fn paren_expression(&mut self) -> PResult<Node> {
        self.expect("(")?;
        let e = self.expression()?;
        self.expect(")")?;
        Ok(e)
    }

    fn statement(&mut self) -> PResult<Node> {
        let start = self.span();
        let kind_text = if self.kind() == Some(TokenKind::Keyword) {
            self.text().to_string()
        } else {
            String::new()
        };
        match kind_text.as_str() {
            "if" => {
                self.bump();
                let cond = self.paren_expression()?;
                let then = self.recovering_statement()?;
                let mut children = vec![cond, then];
                if self.eat("else") {
                    children.push(self.recovering_statement()?);
                }
                Ok(Node::with_children(
                    NodeKind::If,
                    self.span_from(start),
                    children,
                ))
            }
            "for" => self.for_statement(),
            "while" => {
                self.bump();
                let cond = self.paren_expression()?;
                let body = self.recovering_statement()?;
                Ok(Node::with_children(
                    NodeKind::While,
                    self.span_from(start),
                    vec![cond, body],
                ))
            }
            "do" => {
                self.bump();
                let body = self.recovering_statement()?;
                self.expect("while")?;
                let cond = self.paren_expression()?;
                self.expect(";")?;
                Ok(Node::with_children(
                    NodeKind::Do,
                    self.span_from(start),
                    vec![body, cond],
                ))
            }
            "switch" => {
                let node = self.switch()?;
                // a switch expression used as a statement may carry a `;`
                self.eat(";");
                Ok(node)
            }
            "try" => self.try_statement(),
            "return" | "throw" => {
                self.bump();
                let mut children = Vec::new();
                if !self.at(";") {
                    children.push(self.expression()?);
                }
                self.expect(";")?;
                let kind = if kind_text == "return" {
                    NodeKind::Return
                } else {
                    NodeKind::Throw
                };
                Ok(Node::with_children(kind, self.span_from(start), children))
            }
            "break" | "continue" => {
                self.bump();
                if self.at_ident() {
                    self.bump();
                }
                self.expect(";")?;
                let kind = if kind_text == "break" {
                    NodeKind::Break
                } else {
                    NodeKind::Continue
                };
                Ok(Node::new(kind, self.span_from(start)))
            }
            "synchronized" => {
                self.bump();
                let lock = self.paren_expression()?;
                let body = self.block()?;
                Ok(Node::with_children(
                    NodeKind::Synchronized,
                    self.span_from(start),
                    vec![lock, body],
                ))
            }
            "assert" => {
                self.bump();
                let mut children = vec![self.expression()?];
                if self.eat(":") {
                    children.push(self.expression()?);
                }
                self.expect(";")?;
                Ok(Node::with_children(
                    NodeKind::Assert,
                    self.span_from(start),
                    children,
                ))
            }
            _ => {
                if self.at("{") {
                    return self.block();
                }
                if self.eat(";") {
                    return Ok(Node::new(NodeKind::Empty, start));
                }
                if self.at_ident() && self.nth_is(1, ":") {
                    let (label, _) = self.ident()?;
                    self.bump();
                    let body = self.recovering_statement()?;
                    return Ok(Node::with_children(
                        NodeKind::Labeled { label },
                        self.span_from(start),
                        vec![body],
                    ));
                }
                if self.at_contextual("yield")
                    && !self.nth(1).is_some_and(|t| {
                        matches!(
                            t.lexeme.as_str(),
                            "=" | "." | "(" | "[" | "++" | "--" | "+=" | "-="
                        )
                    })
                {
                    self.bump();
                    let value = self.expression()?;
                    self.expect(";")?;
                    return Ok(Node::with_children(
                        NodeKind::Yield,
                        self.span_from(start),
                        vec![value],
                    ));
                }
                let expr = self.expression()?;
                self.expect(";")?;
                Ok(Node::with_children(
                    NodeKind::ExprStmt,
                    self.span_from(start),
                    vec![expr],
                ))
            }
        }
    }

    fn for_statement(&mut self) -> PResult<Node> {
        let start = self.expect("for")?;
        self.expect("(")?;

        // enhanced for: `for (T x : xs)`
        let cp = self.checkpoint();
        let enhanced = (|| -> PResult<Option<Node>> {
            let s = self.span();
            self.modifiers()?;
            let ty = self.parse_type()?;
            let (name, _) = self.ident()?;
            if !self.eat(":") {
                return Ok(None);
            }
            Ok(Some(Node::new(
                NodeKind::Parameter {
                    type_name: ty,
                    name,
                },
                self.span_from(s),
            )))
        })();
        if let Ok(Some(var)) = enhanced {
            let iterable = self.expression()?;
            self.expect(")")?;
            let body = self.recovering_statement()?;
            return Ok(Node::with_children(
                NodeKind::ForEach,
                self.span_from(start),
                vec![var, iterable, body],
            ));
        }
        self.restore(cp);

        let mut children = Vec::new();
        if !self.at(";") {
            if self.looks_like_local_var()? {
                children.push(self.local_var_decl()?);
            } else {
                children.push(self.expression()?);
                while self.eat(",") {
                    children.push(self.expression()?);
                }
            }
        }
        self.expect(";")?;
        if !self.at(";") {
            children.push(self.expression()?);
        }
        self.expect(";")?;
        if !self.at(")") {
            children.push(self.expression()?);
            while self.eat(",") {
                children.push(self.expression()?);
            }
        }
        self.expect(")")?;
        children.push(self.recovering_statement()?);
        Ok(Node::with_children(
            NodeKind::For,
            self.span_from(start),
            children,
        ))
    }

    fn switch(&mut self) -> PResult<Node> {
        let start = self.expect("switch")?;
        let selector = self.paren_expression()?;
        self.expect("{")?;
        let mut children = vec![selector];
        loop {
            if self.at_eof() {
                return Err(self.error("`}`"));
            }
            if self.at("}") {
                break;
            }
            let case_start = self.span();
            let mut case_children = Vec::new();
            let labels = if self.eat("default") {
                0
            } else {
                self.expect("case")?;
                let saved = std::mem::replace(&mut self.no_lambda, true);
                let result = self.case_labels(&mut case_children);
                self.no_lambda = saved;
                result?
            };
            if self.eat("->") {
                if self.at("{") {
                    case_children.push(self.block()?);
                } else if self.at("throw") {
                    case_children.push(self.statement()?);
                } else {
                    let s = self.span();
                    let e = self.expression()?;
                    self.expect(";")?;
                    case_children.push(Node::with_children(
                        NodeKind::ExprStmt,
                        self.span_from(s),
                        vec![e],
                    ));
                }
            } else {
                self.expect(":")?;
                while !self.at("case")
                    && !self.at("}")
                    && !(self.at("default") && (self.nth_is(1, ":") || self.nth_is(1, "->")))
                {
                    if self.at_eof() {
                        return Err(self.error("`}`"));
                    }
                    case_children.push(self.recovering_statement()?);
                }
            }
            children.push(Node::with_children(
                NodeKind::Case { labels },
                self.span_from(case_start),
                case_children,
            ));
        }
        self.expect("}")?;
        Ok(Node::with_children(
            NodeKind::Switch,
            self.span_from(start),
            children,
        ))
    }

    fn case_labels(&mut self, out: &mut Vec<Node>) -> PResult<u32> {
        let mut labels = 0;
        loop {
            if self.eat("default") {
                labels += 1;
            } else {
                out.push(self.ternary()?);
                // type pattern binding: `case String s ->`
                if self.at_ident() {
                    self.bump();
                }
                labels += 1;
            }
            if !self.eat(",") {
                break;
            }
        }
        Ok(labels)
    }

    fn try_statement(&mut self) -> PResult<Node> {
        let start = self.expect("try")?;
        let mut children = Vec::new();
        if self.eat("(") {
            while !self.at(")") {
                if self.looks_like_local_var()? {
                    children.push(self.local_var_decl()?);
                } else {
                    children.push(self.expression()?);
                }
                if !self.eat(";") {
                    break;
                }
            }
            self.expect(")")?;
        }
        children.push(self.block()?);
        while self.at("catch") {
            let s = self.bump();
            self.expect("(")?;
            self.modifiers()?;
            let mut types = vec![self.parse_type()?];
            while self.eat("|") {
                types.push(self.parse_type()?);
            }
            self.ident()?;
            self.expect(")")?;
            let body = self.block()?;
            children.push(Node::with_children(
                NodeKind::Catch { types },
                self.span_from(s),
                vec![body],
            ));
        }
        if self.at("finally") {
            let s = self.bump();
            let body = self.block()?;
            children.push(Node::with_children(
                NodeKind::Finally,
                self.span_from(s),
                vec![body],
            ));
        }
        Ok(Node::with_children(
            NodeKind::Try,
            self.span_from(start),
            children,
        ))
    }

    // ---- expressions --------------------------------------------------

    fn expression(&mut self) -> PResult<Node> {
        let start = self.span();
        let lhs = self.ternary()?;
        if self.kind() == Some(TokenKind::Operator) && ASSIGN_OPS.contains(&self.text()) {
            let op = self.text().to_string();
            self.bump();
            let rhs = self.expression()?;
            return Ok(Node::with_children(
                NodeKind::Assign { op },
                self.span_from(start),
                vec![lhs, rhs],
            ));
        }
        Ok(lhs)
    }

    fn ternary(&mut self) -> PResult<Node> {
        let start = self.span();
        let cond = self.binary(1)?;
        if self.eat("?") {
            let saved = std::mem::replace(&mut self.no_lambda, false);
            let then = self.ternary_branch();
            self.no_lambda = saved;
            let then = then?;
            self.expect(":")?;
            let otherwise = self.ternary_branch()?;
            return Ok(Node::with_children(
                NodeKind::Conditional,
                self.span_from(start),
                vec![cond, then, otherwise],
            ));
        }
        Ok(cond)
    }

    fn ternary_branch(&mut self) -> PResult<Node> {
        if self.at_lambda() {
            self.lambda()
        } else {
            self.ternary()
        }
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Node> {
        let start = self.span();
        let mut lhs = self.unary()?;
        loop {
            let is_op = matches!(self.kind(), Some(TokenKind::Operator)) || self.at("instanceof");
            if !is_op {
                break;
            }
            let op = self.text().to_string();
            let Some(prec) = binary_precedence(&op) else {
                break;
            };
            if prec < min_prec {
                break;
            }
            self.bump();
            if op == "instanceof" {
                self.modifiers()?;
                let type_name = self.parse_type()?;
                if self.at_ident() {
                    // pattern binding
                    self.bump();
                } else if self.at("(") {
                    // record pattern
                    self.skip_balanced()?;
                    if self.at_ident() {
                        self.bump();
                    }
                }
                lhs = Node::with_children(
                    NodeKind::InstanceOf { type_name },
                    self.span_from(start),
                    vec![lhs],
                );
                continue;
            }
            let rhs = self.binary(prec + 1)?;
            lhs = Node::with_children(
                NodeKind::Binary { op },
                self.span_from(start),
                vec![lhs, rhs],
            );
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Node> {
        let start = self.span();
        if self.kind() == Some(TokenKind::Operator)
            && matches!(self.text(), "++" | "--" | "+" | "-" | "!" | "~")
        {
            let op = self.text().to_string();
            self.bump();
            let operand = self.unary()?;
            return Ok(Node::with_children(
                NodeKind::Unary { op, postfix: false },
                self.span_from(start),
                vec![operand],
            ));
        }
        if self.at("(") {
            if self.at_lambda() {
                return self.lambda();
            }
            if let Some(cast) = self.try_cast()? {
                return Ok(cast);
            }
        }
        let primary = self.primary()?;
        self.postfix(primary, start)
    }

    fn try_cast(&mut self) -> PResult<Option<Node>> {
        let start = self.span();
        let cp = self.checkpoint();
        self.bump();
        let parsed = (|| -> PResult<String> {
            let ty = self.parse_type()?;
            while self.eat("&") {
                self.parse_type()?;
            }
            self.expect(")")?;
            Ok(ty)
        })();
        let Ok(type_name) = parsed else {
            self.restore(cp);
            return Ok(None);
        };
        let primitive = is_primitive(&type_name) && type_name != "var";
        let operand_follows = match self.tok() {
            None => false,
            Some(t) => match t.kind {
                TokenKind::Identifier | TokenKind::Literal => true,
                TokenKind::Keyword => {
                    matches!(t.lexeme.as_str(), "this" | "super" | "new" | "switch")
                        || is_primitive(&t.lexeme)
                }
                TokenKind::Separator => t.lexeme == "(",
                TokenKind::Operator => {
                    matches!(t.lexeme.as_str(), "!" | "~")
                        || (primitive && matches!(t.lexeme.as_str(), "+" | "-" | "++" | "--"))
                }
                _ => false,
            },
        };
        if !operand_follows {
            self.restore(cp);
            return Ok(None);
        }
        let operand = if self.at_lambda() {
            self.lambda()?
        } else {
            self.unary()?
        };
        Ok(Some(Node::with_children(
            NodeKind::Cast { type_name },
            self.span_from(start),
            vec![operand],
        )))
    }

    fn at_lambda(&self) -> bool {
        if self.no_lambda {
            return false;
        }
        if self.at_ident() && self.nth_is(1, "->") {
            return true;
        }
        if !self.at("(") {
            return false;
        }
        let mut depth = 0usize;
        let mut i = self.pos;
        while let Some(t) = self.toks.get(i) {
            if t.kind == TokenKind::Separator {
                match t.lexeme.as_str() {
                    "(" => depth += 1,
                    ")" => {
                        depth -= 1;
                        if depth == 0 {
                            return self.toks.get(i + 1).is_some_and(|n| n.lexeme == "->");
                        }
                    }
                    "{" | "}" | ";" => return false,
                    _ => {}
                }
            }
            i += 1;
        }
        false
    }

    fn lambda(&mut self) -> PResult<Node> {
        let start = self.span();
        if self.at("(") {
            self.skip_balanced()?;
        } else {
            self.bump();
        }
        self.expect("->")?;
        if self.at("{") {
            self.skip_balanced()?;
        } else {
            self.expression()?;
        }
        Ok(Node::new(NodeKind::Lambda, self.span_from(start)))
    }

    fn arguments(&mut self) -> PResult<Vec<Node>> {
        self.expect("(")?;
        let saved = std::mem::replace(&mut self.no_lambda, false);
        let result = (|| -> PResult<Vec<Node>> {
            let mut args = Vec::new();
            if self.at(")") {
                return Ok(args);
            }
            loop {
                args.push(if self.at_lambda() {
                    self.lambda()?
                } else {
                    self.expression()?
                });
                if !self.eat(",") {
                    break;
                }
            }
            Ok(args)
        })();
        self.no_lambda = saved;
        let args = result?;
        self.expect(")")?;
        Ok(args)
    }

    fn primary(&mut self) -> PResult<Node> {
        let start = self.span();
        let Some(tok) = self.tok() else {
            return Err(self.error("expression"));
        };
        match tok.kind {
            TokenKind::Literal => {
                let text = tok.lexeme.clone();
                self.bump();
                Ok(Node::new(NodeKind::Literal { text }, start))
            }
            TokenKind::Identifier => {
                if self.at_lambda() {
                    return self.lambda();
                }
                let (name, _) = self.ident()?;
                if self.at("(") {
                    let args = self.arguments()?;
                    return Ok(Node::with_children(
                        NodeKind::MethodCall {
                            name,
                            has_target: false,
                        },
                        self.span_from(start),
                        args,
                    ));
                }
                Ok(Node::new(NodeKind::Name { name }, start))
            }
            TokenKind::Keyword => match tok.lexeme.as_str() {
                "this" | "super" => {
                    let is_this = tok.lexeme == "this";
                    self.bump();
                    if self.at("(") {
                        let args = self.arguments()?;
                        let name = if is_this { "this" } else { "super" }.to_string();
                        return Ok(Node::with_children(
                            NodeKind::MethodCall {
                                name,
                                has_target: false,
                            },
                            self.span_from(start),
                            args,
                        ));
                    }
                    Ok(Node::new(
                        if is_this {
                            NodeKind::This
                        } else {
                            NodeKind::Super
                        },
                        start,
                    ))
                }
                "new" => self.creator(),
                "switch" => self.switch(),
                w if is_primitive(w) => {
                    let type_name = self.parse_type()?;
                    if self.eat("::") {
                        let name = if self.eat("new") {
                            "new".to_string()
                        } else {
                            self.ident()?.0
                        };
                        return Ok(Node::new(
                            NodeKind::MethodRef { name },
                            self.span_from(start),
                        ));
                    }
                    self.expect(".")?;
                    self.expect("class")?;
                    Ok(Node::new(
                        NodeKind::ClassLiteral { type_name },
                        self.span_from(start),
                    ))
                }
                _ => Err(self.error("expression")),
            },
            TokenKind::Separator if tok.lexeme == "(" => {
                self.bump();
                let saved = std::mem::replace(&mut self.no_lambda, false);
                let inner = self.expression();
                self.no_lambda = saved;
                let inner = inner?;
                self.expect(")")?;
                Ok(inner)
            }
            _ => Err(self.error("expression")),
        }
    }

    fn creator(&mut self) -> PResult<Node> {
        let start = self.expect("new")?;
        if self.at("<") {
            self.type_arguments()?;
        }
        self.skip_annotations()?;
        let mut type_name = String::new();
        if self.kind() == Some(TokenKind::Keyword) && is_primitive(self.text()) {
            type_name.push_str(self.text());
            self.bump();
        } else {
            type_name.push_str(&self.ident()?.0);
            if self.at("<") {
                self.type_arguments()?;
            }
            while self.at(".") {
                self.bump();
                self.skip_annotations()?;
                type_name.push('.');
                type_name.push_str(&self.ident()?.0);
                if self.at("<") {
                    self.type_arguments()?;
                }
            }
        }
        if self.at("[") {
            let mut dims = Vec::new();
            while self.at("[") {
                self.bump();
                if !self.at("]") {
                    dims.push(self.expression()?);
                }
                self.expect("]")?;
            }
            if self.at("{") {
                dims.push(self.array_initializer()?);
            }
            return Ok(Node::with_children(
                NodeKind::NewArray { type_name },
                self.span_from(start),
                dims,
            ));
        }
        let args = self.arguments()?;
        if self.at("{") {
            // anonymous class body
            self.skip_balanced()?;
        }
        Ok(Node::with_children(
            NodeKind::New { type_name },
            self.span_from(start),
            args,
        ))
    }

    fn postfix(&mut self, mut expr: Node, start: Span) -> PResult<Node> {
        loop {
            if self.at(".") {
                self.bump();
                if self.at("<") {
                    self.type_arguments()?;
                }
                if self.at("new") {
                    let mut inner = self.creator()?;
                    inner.children.insert(0, expr);
                    inner.span = self.span_from(start);
                    expr = inner;
                } else if self.eat("class") {
                    let type_name = dotted_name(&expr).unwrap_or_default();
                    expr = Node::new(NodeKind::ClassLiteral { type_name }, self.span_from(start));
                } else if self.eat("this") {
                    expr = Node::with_children(NodeKind::This, self.span_from(start), vec![expr]);
                } else if self.eat("super") {
                    expr = Node::with_children(NodeKind::Super, self.span_from(start), vec![expr]);
                } else {
                    let (name, _) = self.ident()?;
                    if self.at("(") {
                        let mut children = vec![expr];
                        children.extend(self.arguments()?);
                        expr = Node::with_children(
                            NodeKind::MethodCall {
                                name,
                                has_target: true,
                            },
                            self.span_from(start),
                            children,
                        );
                    } else {
                        expr = Node::with_children(
                            NodeKind::FieldAccess { name },
                            self.span_from(start),
                            vec![expr],
                        );
                    }
                }
            } else if self.at("[") {
                if self.nth_is(1, "]") {
                    // array type in expression position: `String[].class`, `int[]::new`
                    let mut type_name = dotted_name(&expr).unwrap_or_default();
                    while self.at("[") && self.nth_is(1, "]") {
                        self.pos += 2;
                        type_name.push_str("[]");
                    }
                    if self.eat("::") {
                        let name = if self.eat("new") {
                            "new".to_string()
                        } else {
                            self.ident()?.0
                        };
                        expr = Node::with_children(
                            NodeKind::MethodRef { name },
                            self.span_from(start),
                            vec![expr],
                        );
                    } else {
                        self.expect(".")?;
                        self.expect("class")?;
                        expr =
                            Node::new(NodeKind::ClassLiteral { type_name }, self.span_from(start));
                    }
                    continue;
                }
                self.bump();
                let index = self.expression()?;
                self.expect("]")?;
                expr = Node::with_children(
                    NodeKind::ArrayAccess,
                    self.span_from(start),
                    vec![expr, index],
                );
            } else if self.kind() == Some(TokenKind::Operator) && matches!(self.text(), "++" | "--")
            {
                let op = self.text().to_string();
                self.bump();
                expr = Node::with_children(
                    NodeKind::Unary { op, postfix: true },
                    self.span_from(start),
                    vec![expr],
                );
            } else if self.eat("::") {
                let name = if self.eat("new") {
                    "new".to_string()
                } else {
                    self.ident()?.0
                };
                expr = Node::with_children(
                    NodeKind::MethodRef { name },
                    self.span_from(start),
                    vec![expr],
                );
            } else if self.at("<") && self.generic_type_before_method_ref() {
                // `List<String>::new`
                self.type_arguments()?;
            } else {
                return Ok(expr);
            }
        }
    }

    /// True when `<...>` at the cursor closes and is followed by `::`.
    fn generic_type_before_method_ref(&mut self) -> bool {
        let cp = self.checkpoint();
        let ok = self.type_arguments().is_ok() && self.at("::");
        self.restore(cp);
        ok
    }
}

/// Dotted text of a `Name`/`FieldAccess` chain.
pub fn dotted_name(node: &Node) -> Option<String> {
    match &node.kind {
        NodeKind::Name { name } => Some(name.clone()),
        NodeKind::FieldAccess { name } => {
            let mut prefix = dotted_name(node.children.first()?)?;
            prefix.push('.');
            prefix.push_str(name);
            Some(prefix)
        }
        _ => None,
    }
}
