use crate::rdf::{Iri, Literal, Variable, RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_INTEGER};

use super::{CompareOp, GroupElement, Having, OrderKey, Projection, Query, QueryError, QueryPattern, QueryTerm};

/// Keywords that belong to SPARQL but not to the supported subset.
const UNSUPPORTED: &[&str] = &[
    "FILTER", "UNION", "MINUS", "BIND", "VALUES", "SERVICE", "GRAPH", "DISTINCT", "REDUCED", "OFFSET", "CONSTRUCT", "ASK",
    "DESCRIBE", "INSERT", "DELETE", "LOAD", "CLEAR", "DROP", "CREATE", "SUM", "AVG", "MIN", "MAX", "SAMPLE", "GROUP_CONCAT",
    "FROM", "NAMED", "BASE", "EXISTS", "NOT",
];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Iri(String),
    Pname(String, String),
    Var(String),
    Str(String),
    LangTag(String),
    DtMark,
    Number(String),
    Word(String),
    Punct(&'static str),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Iri(i) => format!("<{i}>"),
            Tok::Pname(p, l) => format!("{p}:{l}"),
            Tok::Var(v) => format!("?{v}"),
            Tok::Str(s) => format!("{s:?}"),
            Tok::LangTag(t) => format!("@{t}"),
            Tok::DtMark => "^^".into(),
            Tok::Number(n) => n.clone(),
            Tok::Word(w) => w.clone(),
            Tok::Punct(p) => p.to_string(),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_word(&self, kw: &str) -> bool {
        matches!(self, Tok::Word(w) if w.eq_ignore_ascii_case(kw))
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<Spanned>, QueryError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let syntax = |line, column, message: String| QueryError::Syntax { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                *i += 1;
            }
        };
        if c.is_whitespace() {
            advance(1, &mut i);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(1, &mut i);
            }
            continue;
        }
        let tok = match c {
            '<' => {
                let end = chars[i + 1..].iter().position(|&c| c == '>' || c.is_whitespace() || "<\"{}|^`\\".contains(c));
                match end {
                    Some(n) if chars[i + 1 + n] == '>' => {
                        let iri: String = chars[i + 1..i + 1 + n].iter().collect();
                        advance(n + 2, &mut i);
                        Tok::Iri(iri)
                    }
                    _ if chars.get(i + 1) == Some(&'=') => {
                        advance(2, &mut i);
                        Tok::Punct("<=")
                    }
                    _ => {
                        advance(1, &mut i);
                        Tok::Punct("<")
                    }
                }
            }
            '>' | '!' | '=' => {
                let two = chars.get(i + 1) == Some(&'=');
                let p = match (c, two) {
                    ('>', true) => ">=",
                    ('>', false) => ">",
                    ('!', true) => "!=",
                    ('=', _) => "=",
                    _ => return Err(syntax(line, col, "unexpected character '!'".into())),
                };
                advance(if two && c != '=' { 2 } else { 1 }, &mut i);
                Tok::Punct(p)
            }
            '{' | '}' | '(' | ')' | '.' | ';' | ',' | '*' | '[' | ']' | '/' | '|' | '+' => {
                advance(1, &mut i);
                Tok::Punct(match c {
                    '{' => "{",
                    '}' => "}",
                    '(' => "(",
                    ')' => ")",
                    '.' => ".",
                    ';' => ";",
                    ',' => ",",
                    '*' => "*",
                    '[' => "[",
                    ']' => "]",
                    '/' => "/",
                    '|' => "|",
                    _ => "+",
                })
            }
            '?' | '$' => {
                let n = chars[i + 1..].iter().take_while(|&&c| name_char(c)).count();
                if n == 0 {
                    return Err(syntax(line, col, "empty variable name".into()));
                }
                let name: String = chars[i + 1..i + 1 + n].iter().collect();
                advance(n + 1, &mut i);
                Tok::Var(name)
            }
            '"' | '\'' => {
                let quote = c;
                let mut s = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None | Some('\n') => return Err(syntax(start_line, start_col, "unterminated string".into())),
                        Some(&q) if q == quote => break,
                        Some('\\') => {
                            let e = chars.get(j + 1).copied();
                            s.push(match e {
                                Some('n') => '\n',
                                Some('t') => '\t',
                                Some('r') => '\r',
                                Some('"') => '"',
                                Some('\'') => '\'',
                                Some('\\') => '\\',
                                _ => return Err(syntax(line, col + (j - i), "invalid escape".into())),
                            });
                            j += 2;
                        }
                        Some(&c) => {
                            s.push(c);
                            j += 1;
                        }
                    }
                }
                advance(j + 1 - i, &mut i);
                Tok::Str(s)
            }
            '@' => {
                let n = chars[i + 1..].iter().take_while(|&&c| c.is_ascii_alphanumeric() || c == '-').count();
                let tag: String = chars[i + 1..i + 1 + n].iter().collect();
                advance(n + 1, &mut i);
                Tok::LangTag(tag)
            }
            '^' if chars.get(i + 1) == Some(&'^') => {
                advance(2, &mut i);
                Tok::DtMark
            }
            c if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) => {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].is_ascii_digit() || (chars[j] == '.' && chars.get(j + 1).is_some_and(|d| d.is_ascii_digit()))) {
                    j += 1;
                }
                let n: String = chars[i..j].iter().collect();
                advance(j - i, &mut i);
                Tok::Number(n)
            }
            c if name_char(c) || c == ':' => {
                let mut j = i;
                while j < chars.len() && (name_char(chars[j]) || chars[j] == '-') {
                    j += 1;
                }
                if chars.get(j) == Some(&':') {
                    let prefix: String = chars[i..j].iter().collect();
                    let mut k = j + 1;
                    while k < chars.len()
                        && (name_char(chars[k]) || chars[k] == '-' || (chars[k] == '.' && chars.get(k + 1).is_some_and(|&c| name_char(c))))
                    {
                        k += 1;
                    }
                    let local: String = chars[j + 1..k].iter().collect();
                    advance(k - i, &mut i);
                    Tok::Pname(prefix, local)
                } else {
                    let word: String = chars[i..j].iter().collect();
                    advance(j - i, &mut i);
                    Tok::Word(word)
                }
            }
            other => return Err(syntax(line, col, format!("unexpected character {other:?}"))),
        };
        out.push(Spanned { tok, line: start_line, column: start_col });
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    /// Unsupported-feature error for known SPARQL keywords, syntax error otherwise.
    fn unexpected(&self, expected: &str) -> QueryError {
        let s = &self.toks[self.pos];
        match &s.tok {
            Tok::Word(w) if UNSUPPORTED.iter().any(|k| k.eq_ignore_ascii_case(w)) => {
                QueryError::Unsupported { feature: w.to_ascii_uppercase(), line: s.line, column: s.column }
            }
            Tok::Punct(p @ ("*" | "[" | "]" | "/" | "|" | "+")) => {
                let feature = match *p {
                    "*" => "SELECT *",
                    "[" | "]" => "blank node property list",
                    _ => "property path",
                };
                QueryError::Unsupported { feature: feature.into(), line: s.line, column: s.column }
            }
            t => QueryError::Syntax { line: s.line, column: s.column, message: format!("expected {expected}, found {}", t.describe()) },
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), QueryError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{p}'")))
        }
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Tok::Punct(q) if *q == p) {
            self.next();
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, kw: &str) -> bool {
        if self.peek().is_word(kw) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, kw: &str) -> Result<(), QueryError> {
        if self.eat_word(kw) {
            Ok(())
        } else {
            Err(self.unexpected(kw))
        }
    }

    fn var(&mut self) -> Result<Variable, QueryError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.next();
                Ok(Variable::new(v).expect("lexer only yields name characters"))
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn query(&mut self) -> Result<Query, QueryError> {
        let mut prefixes = Vec::new();
        while self.eat_word("PREFIX") {
            let prefix = match self.next() {
                Tok::Pname(p, l) if l.is_empty() => p,
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("a prefix declaration like `ex:`"));
                }
            };
            let iri = match self.next() {
                Tok::Iri(i) => i,
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("an IRI"));
                }
            };
            prefixes.push((prefix, iri));
        }
        self.expect_word("SELECT")?;
        let mut projection = Vec::new();
        loop {
            match self.peek() {
                Tok::Var(_) => projection.push(Projection::Var(self.var()?)),
                Tok::Punct("(") => {
                    self.next();
                    let var = self.count()?;
                    if !self.peek().is_word("AS") {
                        return Err(self.unexpected("AS"));
                    }
                    self.next();
                    let alias = self.var()?;
                    self.expect_punct(")")?;
                    projection.push(Projection::Count { var, alias });
                }
                _ => break,
            }
        }
        if projection.is_empty() {
            return Err(self.unexpected("a projected variable"));
        }
        self.eat_word("WHERE");
        let where_clause = self.group()?;

        let mut group_by = Vec::new();
        if self.eat_word("GROUP") {
            self.expect_word("BY")?;
            while let Tok::Var(_) = self.peek() {
                group_by.push(self.var()?);
            }
            if group_by.is_empty() {
                return Err(self.unexpected("a grouping variable"));
            }
        }
        let having = if self.eat_word("HAVING") { Some(self.having()?) } else { None };
        let mut order_by = Vec::new();
        if self.eat_word("ORDER") {
            self.expect_word("BY")?;
            loop {
                let descending = if self.eat_word("DESC") {
                    true
                } else if self.eat_word("ASC") {
                    false
                } else if let Tok::Var(_) = self.peek() {
                    order_by.push(OrderKey { var: self.var()?, descending: false });
                    continue;
                } else {
                    break;
                };
                self.expect_punct("(")?;
                let var = self.var()?;
                self.expect_punct(")")?;
                order_by.push(OrderKey { var, descending });
            }
            if order_by.is_empty() {
                return Err(self.unexpected("an ordering key"));
            }
        }
        let limit = if self.eat_word("LIMIT") {
            match self.next() {
                Tok::Number(n) if n.bytes().all(|b| b.is_ascii_digit()) => Some(n.parse::<usize>().map_err(|_| {
                    self.pos -= 1;
                    self.unexpected("a LIMIT that fits in memory")
                })?),
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("a non-negative integer"));
                }
            }
        } else {
            None
        };
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected("end of query"));
        }
        let q = Query { prefixes, projection, where_clause, group_by, having, order_by, limit };
        q.check_projection()?;
        Ok(q)
    }

    /// `COUNT ( ?v )`, after the opening parenthesis of the projection.
    fn count(&mut self) -> Result<Variable, QueryError> {
        self.expect_word("COUNT")?;
        self.expect_punct("(")?;
        let v = self.var()?;
        self.expect_punct(")")?;
        Ok(v)
    }

    fn having(&mut self) -> Result<Having, QueryError> {
        let parens = self.eat_punct("(");
        let var = self.count()?;
        let op = match self.next() {
            Tok::Punct(">") => CompareOp::Gt,
            Tok::Punct(">=") => CompareOp::Ge,
            Tok::Punct("<") => CompareOp::Lt,
            Tok::Punct("<=") => CompareOp::Le,
            Tok::Punct("=") => CompareOp::Eq,
            Tok::Punct("!=") => CompareOp::Ne,
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a comparison operator"));
            }
        };
        let value = match self.next() {
            Tok::Number(n) if !n.contains('.') => n.parse::<i64>().map_err(|_| {
                self.pos -= 1;
                self.unexpected("a 64-bit integer")
            })?,
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("an integer"));
            }
        };
        if parens {
            self.expect_punct(")")?;
        }
        Ok(Having { var, op, value })
    }

    fn group(&mut self) -> Result<Vec<GroupElement>, QueryError> {
        self.expect_punct("{")?;
        let mut elements = Vec::new();
        loop {
            if self.eat_punct("}") {
                return Ok(elements);
            }
            if self.eat_word("OPTIONAL") {
                self.expect_punct("{")?;
                let patterns = self.triples_block(true)?;
                self.expect_punct("}")?;
                elements.push(GroupElement::Optional(patterns));
                continue;
            }
            let patterns = self.triples_block(false)?;
            match elements.last_mut() {
                Some(GroupElement::Triples(prev)) => prev.extend(patterns),
                _ => elements.push(GroupElement::Triples(patterns)),
            }
        }
    }

    /// Triples until `}` or OPTIONAL. Inside OPTIONAL nested groups are refused.
    fn triples_block(&mut self, nested: bool) -> Result<Vec<QueryPattern>, QueryError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Tok::Punct("}") => break,
                Tok::Word(w) if w.eq_ignore_ascii_case("OPTIONAL") => {
                    if nested {
                        let s = &self.toks[self.pos];
                        return Err(QueryError::Unsupported { feature: "nested OPTIONAL".into(), line: s.line, column: s.column });
                    }
                    break;
                }
                Tok::Punct("{") => {
                    let s = &self.toks[self.pos];
                    return Err(QueryError::Unsupported { feature: "nested group".into(), line: s.line, column: s.column });
                }
                _ => {}
            }
            let subject = self.term(false)?;
            loop {
                let predicate = if *self.peek() == Tok::Word("a".into()) {
                    self.next();
                    QueryTerm::Iri(RDF_TYPE.to_string())
                } else {
                    self.term(true)?
                };
                loop {
                    let object = self.term(false)?;
                    out.push(QueryPattern { subject: subject.clone(), predicate: predicate.clone(), object });
                    if !self.eat_punct(",") {
                        break;
                    }
                }
                if !self.eat_punct(";") {
                    break;
                }
                while self.eat_punct(";") {}
                if matches!(self.peek(), Tok::Punct(".") | Tok::Punct("}")) {
                    break;
                }
            }
            if !self.eat_punct(".") {
                if matches!(self.peek(), Tok::Punct("}")) || self.peek().is_word("OPTIONAL") {
                    continue;
                }
                return Err(self.unexpected("'.' or '}'"));
            }
        }
        Ok(out)
    }

    fn term(&mut self, predicate: bool) -> Result<QueryTerm, QueryError> {
        let what = if predicate { "a predicate" } else { "a term" };
        let t = match self.peek().clone() {
            Tok::Var(v) => {
                self.next();
                QueryTerm::Var(Variable::new(v).expect("lexer only yields name characters"))
            }
            Tok::Iri(i) => {
                self.next();
                QueryTerm::Iri(i)
            }
            Tok::Pname(p, l) => {
                self.next();
                QueryTerm::Prefixed { prefix: p, local: l }
            }
            Tok::Str(s) if !predicate => {
                self.next();
                match self.peek().clone() {
                    Tok::LangTag(tag) => {
                        self.next();
                        let lit = Literal::lang(s, tag).map_err(|e| {
                            let sp = &self.toks[self.pos - 1];
                            QueryError::Syntax { line: sp.line, column: sp.column, message: e.to_string() }
                        })?;
                        QueryTerm::Literal(lit)
                    }
                    Tok::DtMark => {
                        self.next();
                        match self.next() {
                            Tok::Iri(i) => QueryTerm::TypedLiteral { lexical: s, datatype: Box::new(QueryTerm::Iri(i)) },
                            Tok::Pname(p, l) => {
                                QueryTerm::TypedLiteral { lexical: s, datatype: Box::new(QueryTerm::Prefixed { prefix: p, local: l }) }
                            }
                            _ => {
                                self.pos -= 1;
                                return Err(self.unexpected("a datatype IRI"));
                            }
                        }
                    }
                    _ => QueryTerm::Literal(Literal::plain(s)),
                }
            }
            Tok::Number(n) if !predicate => {
                self.next();
                let dt = if n.contains('.') { XSD_DECIMAL } else { XSD_INTEGER };
                QueryTerm::Literal(Literal::typed(n, Iri::new(dt).expect("constant")))
            }
            Tok::Word(w) if !predicate && (w == "true" || w == "false") => {
                self.next();
                QueryTerm::Literal(Literal::typed(w, Iri::new(XSD_BOOLEAN).expect("constant")))
            }
            _ => return Err(self.unexpected(what)),
        };
        Ok(t)
    }
}

pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    Parser { toks: lex(text)?, pos: 0 }.query()
}
