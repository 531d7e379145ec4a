//! Turtle subset reader: `@prefix`/`PREFIX`, IRIs, prefixed names, blank node
//! labels, quoted literals (short and long forms) with datatype or language,
//! numeric and boolean shorthands, `a`, and the `;` / `,` abbreviations.

use std::fmt;

use thiserror::Error;

use super::{is_absolute_iri, Graph, Iri, Literal, Term, Triple, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER};
use super::RDF_TYPE;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message} (at {token})")]
pub struct TurtleError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
}

pub fn parse_turtle(text: &str) -> Result<Graph, TurtleError> {
    let mut parser = Parser::new(text)?;
    parser.document()?;
    Ok(parser.graph)
}

pub(crate) fn is_pn_chars_base(c: char) -> bool {
    matches!(c,
        'A'..='Z' | 'a'..='z'
        | '\u{C0}'..='\u{D6}' | '\u{D8}'..='\u{F6}' | '\u{F8}'..='\u{2FF}'
        | '\u{370}'..='\u{37D}' | '\u{37F}'..='\u{1FFF}' | '\u{200C}'..='\u{200D}'
        | '\u{2070}'..='\u{218F}' | '\u{2C00}'..='\u{2FEF}' | '\u{3001}'..='\u{D7FF}'
        | '\u{F900}'..='\u{FDCF}' | '\u{FDF0}'..='\u{FFFD}' | '\u{10000}'..='\u{EFFFF}')
}

fn is_pn_chars_u(c: char) -> bool {
    is_pn_chars_base(c) || c == '_'
}

pub(crate) fn is_pn_chars(c: char) -> bool {
    is_pn_chars_u(c)
        || c == '-'
        || c.is_ascii_digit()
        || c == '\u{B7}'
        || ('\u{300}'..='\u{36F}').contains(&c)
        || ('\u{203F}'..='\u{2040}').contains(&c)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    Blank(String),
    Str(String),
    LangTag(String),
    Number { lexical: String, datatype: &'static str },
    Bool(bool),
    DoubleCaret,
    Dot,
    Semicolon,
    Comma,
    A,
    AtPrefix,
    AtBase,
    SparqlPrefix,
    SparqlBase,
    Bracket(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::IriRef(i) => write!(f, "<{i}>"),
            Tok::PName { prefix, local } => write!(f, "{prefix}:{local}"),
            Tok::Blank(b) => write!(f, "_:{b}"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::LangTag(t) => write!(f, "@{t}"),
            Tok::Number { lexical, .. } => write!(f, "{lexical}"),
            Tok::Bool(b) => write!(f, "{b}"),
            Tok::DoubleCaret => write!(f, "^^"),
            Tok::Dot => write!(f, "'.'"),
            Tok::Semicolon => write!(f, "';'"),
            Tok::Comma => write!(f, "','"),
            Tok::A => write!(f, "'a'"),
            Tok::AtPrefix => write!(f, "@prefix"),
            Tok::AtBase => write!(f, "@base"),
            Tok::SparqlPrefix => write!(f, "PREFIX"),
            Tok::SparqlBase => write!(f, "BASE"),
            Tok::Bracket(c) => write!(f, "'{c}'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
    /// Dots swallowed at the end of a name; they are replayed as `.` tokens.
    trailing_dots: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.strip_prefix('\u{feff}').unwrap_or(text).chars().peekable(), line: 1, column: 1, trailing_dots: 0 }
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, column: self.column }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(&self, pos: Pos, message: impl Into<String>, token: impl Into<String>) -> TurtleError {
        TurtleError { line: pos.line, column: pos.column, message: message.into(), token: token.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<(Tok, Pos), TurtleError> {
        self.skip_ws();
        let pos = self.pos();
        let Some(c) = self.peek() else {
            return Ok((Tok::Eof, pos));
        };
        let tok = match c {
            '<' => {
                self.bump();
                Tok::IriRef(self.iri_body(pos)?)
            }
            '"' | '\'' => Tok::Str(self.string(pos)?),
            '@' => {
                self.bump();
                let mut word = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        word.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "prefix" => Tok::AtPrefix,
                    "base" => Tok::AtBase,
                    "" => return Err(self.err(pos, "empty language tag", "@")),
                    _ => Tok::LangTag(word),
                }
            }
            '^' => {
                self.bump();
                if self.bump() != Some('^') {
                    return Err(self.err(pos, "expected '^^'", "^"));
                }
                Tok::DoubleCaret
            }
            '.' if !self.peek2().is_some_and(|d| d.is_ascii_digit()) => {
                self.bump();
                Tok::Dot
            }
            ';' => {
                self.bump();
                Tok::Semicolon
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '[' | ']' | '(' | ')' | '{' | '}' => {
                self.bump();
                Tok::Bracket(c)
            }
            '_' if self.peek2() == Some(':') => {
                self.bump();
                self.bump();
                let mut label = String::new();
                while let Some(c) = self.peek() {
                    if is_pn_chars(c) || c == '.' {
                        label.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.give_back_trailing_dots(&mut label);
                if label.is_empty() {
                    return Err(self.err(pos, "empty blank node label", "_:"));
                }
                Tok::Blank(label)
            }
            c if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => self.number(pos)?,
            c if is_pn_chars_base(c) || c == ':' => self.name(pos)?,
            other => {
                self.bump();
                return Err(self.err(pos, "unexpected character", other.to_string()));
            }
        };
        Ok((tok, pos))
    }

    /// A name never ends with `.`; any trailing dots belong to the statement.
    fn give_back_trailing_dots(&mut self, s: &mut String) {
        while s.ends_with('.') {
            s.pop();
            self.trailing_dots += 1;
        }
    }

    fn iri_body(&mut self, start: Pos) -> Result<String, TurtleError> {
        let mut iri = String::new();
        loop {
            match self.bump() {
                None => return Err(self.err(start, "unterminated IRI", format!("<{iri}"))),
                Some('>') => return Ok(iri),
                Some('\\') => iri.push(self.unicode_escape(start)?),
                Some(c) if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') || (c as u32) < 0x20 => {
                    return Err(self.err(start, "illegal character in IRI", format!("<{iri}{c}")));
                }
                Some(c) => iri.push(c),
            }
        }
    }

    fn unicode_escape(&mut self, start: Pos) -> Result<char, TurtleError> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            other => return Err(self.err(start, "invalid escape", format!("\\{}", other.map(String::from).unwrap_or_default()))),
        };
        let mut hex = String::new();
        for _ in 0..width {
            match self.bump() {
                Some(c) if c.is_ascii_hexdigit() => hex.push(c),
                _ => return Err(self.err(start, "invalid unicode escape", format!("\\u{hex}"))),
            }
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.err(start, "escape is not a valid code point", format!("\\u{hex}")))
    }

    fn string(&mut self, start: Pos) -> Result<String, TurtleError> {
        let quote = self.bump().expect("caller peeked a quote");
        let long = self.peek() == Some(quote) && self.peek2() == Some(quote);
        if long {
            self.bump();
            self.bump();
        } else if self.peek() == Some(quote) {
            self.bump();
            return Ok(String::new());
        }
        let mut out = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.err(start, "unterminated string literal", format!("{quote}{out}")));
            };
            match c {
                '\\' => {
                    let esc = match self.peek() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') | Some('U') => {
                            out.push(self.unicode_escape(start)?);
                            continue;
                        }
                        other => {
                            return Err(self.err(start, "invalid string escape", format!("\\{}", other.map(String::from).unwrap_or_default())))
                        }
                    };
                    self.bump();
                    out.push(esc);
                }
                c if c == quote && !long => return Ok(out),
                c if c == quote && long => {
                    if self.peek() == Some(quote) && self.peek2() == Some(quote) {
                        self.bump();
                        self.bump();
                        // """a"""" ends with an embedded quote
                        while self.peek() == Some(quote) {
                            out.push(quote);
                            self.bump();
                        }
                        return Ok(out);
                    }
                    out.push(c);
                }
                '\n' | '\r' if !long => return Err(self.err(start, "line break in short string literal", format!("{quote}{out}"))),
                c => out.push(c),
            }
        }
    }

    fn number(&mut self, start: Pos) -> Result<Tok, TurtleError> {
        let mut lexical = String::new();
        if let Some(sign @ ('+' | '-')) = self.peek() {
            lexical.push(sign);
            self.bump();
        }
        let digits = |lx: &mut Self, out: &mut String| {
            let mut n = 0;
            while let Some(c) = lx.peek() {
                if c.is_ascii_digit() {
                    out.push(c);
                    lx.bump();
                    n += 1;
                } else {
                    break;
                }
            }
            n
        };
        let int_digits = digits(self, &mut lexical);
        let mut datatype = XSD_INTEGER;
        if self.peek() == Some('.') && self.peek2().is_some_and(|c| c.is_ascii_digit()) {
            lexical.push('.');
            self.bump();
            digits(self, &mut lexical);
            datatype = XSD_DECIMAL;
        } else if int_digits == 0 {
            return Err(self.err(start, "malformed number", lexical));
        }
        if let Some(e @ ('e' | 'E')) = self.peek() {
            lexical.push(e);
            self.bump();
            if let Some(sign @ ('+' | '-')) = self.peek() {
                lexical.push(sign);
                self.bump();
            }
            if digits(self, &mut lexical) == 0 {
                return Err(self.err(start, "malformed exponent", lexical));
            }
            datatype = XSD_DOUBLE;
        }
        Ok(Tok::Number { lexical, datatype })
    }

    fn name(&mut self, start: Pos) -> Result<Tok, TurtleError> {
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if is_pn_chars(c) || c == '.' {
                prefix.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if self.peek() != Some(':') {
            self.give_back_trailing_dots(&mut prefix);
            return match prefix.as_str() {
                "a" => Ok(Tok::A),
                "true" => Ok(Tok::Bool(true)),
                "false" => Ok(Tok::Bool(false)),
                w if w.eq_ignore_ascii_case("prefix") => Ok(Tok::SparqlPrefix),
                w if w.eq_ignore_ascii_case("base") => Ok(Tok::SparqlBase),
                _ => Err(self.err(start, "unexpected bare word", prefix)),
            };
        }
        if prefix.ends_with('.') {
            return Err(self.err(start, "prefix may not end with '.'", prefix));
        }
        self.bump();
        let mut local = String::new();
        let mut first = true;
        while let Some(c) = self.peek() {
            let ok = if first { is_pn_chars_u(c) || c == ':' || c.is_ascii_digit() } else { is_pn_chars(c) || c == '.' || c == ':' };
            if ok {
                local.push(c);
                self.bump();
            } else if c == '%' {
                self.bump();
                local.push('%');
                for _ in 0..2 {
                    match self.bump() {
                        Some(h) if h.is_ascii_hexdigit() => local.push(h),
                        _ => return Err(self.err(start, "invalid percent escape", format!("{prefix}:{local}"))),
                    }
                }
            } else if c == '\\' {
                self.bump();
                match self.bump() {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => local.push(e),
                    _ => return Err(self.err(start, "invalid local name escape", format!("{prefix}:{local}"))),
                }
            } else {
                break;
            }
            first = false;
        }
        self.give_back_trailing_dots(&mut local);
        Ok(Tok::PName { prefix, local })
    }
}

/// A term whose IRI is checked for absoluteness when its statement completes.
enum Pending {
    Iri { iri: String, pos: Pos },
    Ready(Term),
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    pos: Pos,
    prefixes: Vec<(String, String)>,
    graph: Graph,
    statement: Vec<(Pending, Pending, Pending)>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, TurtleError> {
        let mut lexer = Lexer::new(text);
        let (tok, pos) = lexer.next_token()?;
        Ok(Parser { lexer, tok, pos, prefixes: Vec::new(), graph: Graph::new(), statement: Vec::new() })
    }

    fn advance(&mut self) -> Result<Tok, TurtleError> {
        let (tok, pos) = if self.lexer.trailing_dots > 0 {
            self.lexer.trailing_dots -= 1;
            let p = self.lexer.pos();
            (Tok::Dot, Pos { line: p.line, column: p.column.saturating_sub(1) })
        } else {
            self.lexer.next_token()?
        };
        self.pos = pos;
        Ok(std::mem::replace(&mut self.tok, tok))
    }

    fn error(&self, message: impl Into<String>) -> TurtleError {
        TurtleError { line: self.pos.line, column: self.pos.column, message: message.into(), token: self.tok.to_string() }
    }

    fn expect_dot(&mut self, what: &str) -> Result<(), TurtleError> {
        if self.tok == Tok::Dot {
            self.advance()?;
            Ok(())
        } else {
            Err(self.error(format!("expected '.' to end {what}")))
        }
    }

    fn document(&mut self) -> Result<(), TurtleError> {
        loop {
            match self.tok {
                Tok::Eof => return Ok(()),
                Tok::AtPrefix => {
                    self.advance()?;
                    self.prefix_decl()?;
                    self.expect_dot("@prefix directive")?;
                }
                Tok::SparqlPrefix => {
                    self.advance()?;
                    self.prefix_decl()?;
                }
                Tok::AtBase | Tok::SparqlBase => return Err(self.error("base directives are not supported")),
                _ => {
                    self.triples()?;
                    self.expect_dot("statement")?;
                    self.flush_statement()?;
                }
            }
        }
    }

    fn prefix_decl(&mut self) -> Result<(), TurtleError> {
        let prefix = match &self.tok {
            Tok::PName { prefix, local } if local.is_empty() => prefix.clone(),
            _ => return Err(self.error("expected a prefix name such as `ex:`")),
        };
        self.advance()?;
        let iri = match &self.tok {
            Tok::IriRef(iri) => iri.clone(),
            _ => return Err(self.error("expected an IRI for the prefix")),
        };
        self.advance()?;
        self.prefixes.retain(|(p, _)| p != &prefix);
        self.prefixes.push((prefix.clone(), iri.clone()));
        if is_absolute_iri(&iri) {
            let _ = self.graph.namespaces_mut().insert(&prefix, &iri);
        }
        Ok(())
    }

    fn flush_statement(&mut self) -> Result<(), TurtleError> {
        let resolve = |p: Pending| -> Result<Term, TurtleError> {
            match p {
                Pending::Ready(t) => Ok(t),
                Pending::Iri { iri, pos } => Iri::new(iri.clone()).map(Term::Iri).map_err(|_| TurtleError {
                    line: pos.line,
                    column: pos.column,
                    message: "IRI is not absolute".into(),
                    token: format!("<{iri}>"),
                }),
            }
        };
        for (s, p, o) in std::mem::take(&mut self.statement) {
            let s = resolve(s)?;
            let p = match resolve(p)? {
                Term::Iri(iri) => iri,
                other => unreachable!("verb is always an IRI: {other}"),
            };
            let o = resolve(o)?;
            let triple = Triple::new(s, p, o).expect("subjects are never literals");
            self.graph.insert(&triple);
        }
        Ok(())
    }

    fn iri_term(&mut self) -> Result<Option<Pending>, TurtleError> {
        let pos = self.pos;
        let pending = match &self.tok {
            Tok::IriRef(iri) => Pending::Iri { iri: iri.clone(), pos },
            Tok::PName { prefix, local } => {
                let Some(ns) = self.prefixes.iter().find(|(p, _)| p == prefix).map(|(_, ns)| ns) else {
                    return Err(self.error(format!("undeclared prefix `{prefix}:`")));
                };
                Pending::Iri { iri: format!("{ns}{local}"), pos }
            }
            _ => return Ok(None),
        };
        self.advance()?;
        Ok(Some(pending))
    }

    fn triples(&mut self) -> Result<(), TurtleError> {
        let subject = match &self.tok {
            Tok::Blank(label) => {
                let t = Term::Blank(label.clone());
                self.advance()?;
                Pending::Ready(t)
            }
            Tok::Bracket('[') => return Err(self.error("blank node property lists are not supported")),
            Tok::Bracket('(') => return Err(self.error("collections are not supported")),
            _ => match self.iri_term()? {
                Some(p) => p,
                None => return Err(self.error("expected a subject")),
            },
        };
        loop {
            let verb = if self.tok == Tok::A {
                self.advance()?;
                Pending::Ready(Term::Iri(Iri::from_trusted(RDF_TYPE.to_string())))
            } else {
                match self.iri_term()? {
                    Some(p) => p,
                    None => return Err(self.error("expected a predicate")),
                }
            };
            loop {
                let object = self.object()?;
                self.statement.push((clone_pending(&subject), clone_pending(&verb), object));
                if self.tok == Tok::Comma {
                    self.advance()?;
                } else {
                    break;
                }
            }
            if self.tok != Tok::Semicolon {
                return Ok(());
            }
            while self.tok == Tok::Semicolon {
                self.advance()?;
            }
            if matches!(self.tok, Tok::Dot) {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Pending, TurtleError> {
        match self.tok.clone() {
            Tok::Blank(label) => {
                self.advance()?;
                Ok(Pending::Ready(Term::Blank(label)))
            }
            Tok::Str(lexical) => {
                self.advance()?;
                match self.tok.clone() {
                    Tok::LangTag(tag) => {
                        let lit = Literal::lang(lexical, tag).map_err(|e| self.error(e.to_string()))?;
                        self.advance()?;
                        Ok(Pending::Ready(Term::Literal(lit)))
                    }
                    Tok::DoubleCaret => {
                        self.advance()?;
                        let dt = match self.iri_term()? {
                            Some(Pending::Iri { iri, pos }) => Iri::new(iri.clone()).map_err(|_| TurtleError {
                                line: pos.line,
                                column: pos.column,
                                message: "datatype IRI is not absolute".into(),
                                token: format!("<{iri}>"),
                            })?,
                            _ => return Err(self.error("expected a datatype IRI after '^^'")),
                        };
                        Ok(Pending::Ready(Term::Literal(Literal::typed(lexical, dt))))
                    }
                    _ => Ok(Pending::Ready(Term::literal(lexical))),
                }
            }
            Tok::Number { lexical, datatype } => {
                self.advance()?;
                Ok(Pending::Ready(Term::Literal(Literal::typed(lexical, Iri::from_trusted(datatype.to_string())))))
            }
            Tok::Bool(b) => {
                self.advance()?;
                Ok(Pending::Ready(Term::Literal(Literal::typed(b.to_string(), Iri::from_trusted(XSD_BOOLEAN.to_string())))))
            }
            Tok::Bracket('[') => Err(self.error("blank node property lists are not supported")),
            Tok::Bracket('(') => Err(self.error("collections are not supported")),
            _ => match self.iri_term()? {
                Some(p) => Ok(p),
                None => Err(self.error("expected an object")),
            },
        }
    }
}

fn clone_pending(p: &Pending) -> Pending {
    match p {
        Pending::Iri { iri, pos } => Pending::Iri { iri: iri.clone(), pos: *pos },
        Pending::Ready(t) => Pending::Ready(t.clone()),
    }
}
