//! A SPARQL subset: exactly what the bundled competency questions need.
//!
//! SELECT with plain variables and `(COUNT(?v) AS ?alias)`, a WHERE group of
//! triple patterns and non-nested OPTIONAL blocks, GROUP BY, HAVING on a
//! count, ORDER BY and LIMIT. Everything else is refused loudly.

mod eval;
mod parser;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::rdf::{Graph, Iri, Literal, Namespaces, PrefixMap, Term, Variable, XSD_INTEGER};

pub use eval::{compare_cells, evaluate, evaluate_with, resolve};
pub use parser::parse_query;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: unsupported feature: {feature}")]
    Unsupported { feature: String, line: usize, column: usize },
    #[error("unbound prefix {0:?}")]
    UnboundPrefix(String),
    #[error("invalid IRI {0:?}")]
    InvalidIri(String),
    #[error("{0} is projected or ordered on but is neither grouped nor aggregated")]
    NotGrouped(String),
    #[error("unknown competency question {0:?} (expected CQ1..CQ5)")]
    UnknownCq(String),
    #[error("alias table line {line}: expected `term -> term`")]
    AliasSyntax { line: usize },
}

/// A pattern position before prefix resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryTerm {
    Var(Variable),
    Iri(String),
    Prefixed { prefix: String, local: String },
    Literal(Literal),
    TypedLiteral { lexical: String, datatype: Box<QueryTerm> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryPattern {
    pub subject: QueryTerm,
    pub predicate: QueryTerm,
    pub object: QueryTerm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupElement {
    Triples(Vec<QueryPattern>),
    Optional(Vec<QueryPattern>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projection {
    Var(Variable),
    Count { var: Variable, alias: Variable },
}

impl Projection {
    pub fn name(&self) -> &Variable {
        match self {
            Projection::Var(v) => v,
            Projection::Count { alias, .. } => alias,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareOp {
    Gt,
    Ge,
    Lt,
    Le,
    Eq,
    Ne,
}

impl CompareOp {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            CompareOp::Gt => lhs > rhs,
            CompareOp::Ge => lhs >= rhs,
            CompareOp::Lt => lhs < rhs,
            CompareOp::Le => lhs <= rhs,
            CompareOp::Eq => lhs == rhs,
            CompareOp::Ne => lhs != rhs,
        }
    }
}

/// `HAVING (COUNT(?var) op value)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Having {
    pub var: Variable,
    pub op: CompareOp,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderKey {
    pub var: Variable,
    pub descending: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub prefixes: Vec<(String, String)>,
    pub projection: Vec<Projection>,
    pub where_clause: Vec<GroupElement>,
    pub group_by: Vec<Variable>,
    pub having: Option<Having>,
    pub order_by: Vec<OrderKey>,
    pub limit: Option<usize>,
}

impl Query {
    /// Aggregating queries produce one row per group.
    pub fn is_grouped(&self) -> bool {
        !self.group_by.is_empty() || self.having.is_some() || self.projection.iter().any(|p| matches!(p, Projection::Count { .. }))
    }

    fn check_projection(&self) -> Result<(), QueryError> {
        if !self.is_grouped() {
            return Ok(());
        }
        let known = |v: &Variable| {
            self.group_by.contains(v) || self.projection.iter().any(|p| matches!(p, Projection::Count { alias, .. } if alias == v))
        };
        for p in &self.projection {
            if let Projection::Var(v) = p {
                if !self.group_by.contains(v) {
                    return Err(QueryError::NotGrouped(v.to_string()));
                }
            }
        }
        for k in &self.order_by {
            if !known(&k.var) {
                return Err(QueryError::NotGrouped(k.var.to_string()));
            }
        }
        Ok(())
    }

    /// Projected column names, without the `?`.
    pub fn columns(&self) -> Vec<String> {
        self.projection.iter().map(|p| p.name().name().to_string()).collect()
    }
}

/// Predicate aliases applied when matching: a pattern on `from` also
/// matches edges asserted with `to`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AliasTable {
    entries: Vec<(QueryTerm, QueryTerm)>,
}

const BUILTIN_ALIASES: &str = include_str!("aliases.txt");

impl AliasTable {
    pub fn empty() -> Self {
        AliasTable::default()
    }

    pub fn builtin() -> Self {
        AliasTable::parse(BUILTIN_ALIASES).expect("bundled alias table parses")
    }

    /// `from -> to` per line; prefixed names or `<iri>`; `#` comments.
    pub fn parse(text: &str) -> Result<Self, QueryError> {
        let term = |s: &str| {
            let s = s.trim();
            if let Some(iri) = s.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
                Some(QueryTerm::Iri(iri.to_string()))
            } else {
                s.split_once(':').map(|(p, l)| QueryTerm::Prefixed { prefix: p.to_string(), local: l.to_string() })
            }
        };
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (from, to) = line.split_once("->").ok_or(QueryError::AliasSyntax { line: idx + 1 })?;
            match (term(from), term(to)) {
                (Some(f), Some(t)) => entries.push((f, t)),
                _ => return Err(QueryError::AliasSyntax { line: idx + 1 }),
            }
        }
        Ok(AliasTable { entries })
    }

    pub fn entries(&self) -> &[(QueryTerm, QueryTerm)] {
        &self.entries
    }
}

/// Prefix lookup order: the query's own PREFIX lines, then the graph's
/// namespace table, then the default table.
pub struct PrefixResolver<'a> {
    query: &'a [(String, String)],
    graph: &'a PrefixMap,
    defaults: PrefixMap,
}

impl<'a> PrefixResolver<'a> {
    pub fn new(query: &'a [(String, String)], graph: &'a PrefixMap) -> Self {
        PrefixResolver { query, graph, defaults: Namespaces::default().prefix_map() }
    }

    pub fn expand(&self, prefix: &str, local: &str) -> Result<Iri, QueryError> {
        let ns = self
            .query
            .iter()
            .rev()
            .find(|(p, _)| p == prefix)
            .map(|(_, ns)| ns.as_str())
            .or_else(|| self.graph.get(prefix))
            .or_else(|| self.defaults.get(prefix))
            .ok_or_else(|| QueryError::UnboundPrefix(prefix.to_string()))?;
        Iri::new(format!("{ns}{local}")).map_err(|_| QueryError::InvalidIri(format!("{ns}{local}")))
    }

    pub fn iri(&self, term: &QueryTerm) -> Result<Option<Iri>, QueryError> {
        match term {
            QueryTerm::Iri(s) => Iri::new(s.clone()).map(Some).map_err(|_| QueryError::InvalidIri(s.clone())),
            QueryTerm::Prefixed { prefix, local } => self.expand(prefix, local).map(Some),
            _ => Ok(None),
        }
    }
}

/// Query output: one column per projection, unbound cells as `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<Term>>>,
}

impl ResultTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// SPARQL TSV: `?name` header, IRIs in angle brackets, quoted literals,
    /// bare integers, empty cells for unbound values.
    pub fn to_tsv(&self) -> String {
        let mut out = self.columns.iter().map(|c| format!("?{c}")).collect::<Vec<_>>().join("\t");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.as_ref().map(tsv_cell).unwrap_or_default()).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }
}

fn tsv_cell(term: &Term) -> String {
    match term {
        Term::Literal(l) if l.datatype().is_some_and(|d| d.as_str() == XSD_INTEGER) && l.lexical().bytes().all(|b| b.is_ascii_digit()) => {
            l.lexical().to_string()
        }
        other => other.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NamedCq {
    Cq1,
    Cq2,
    Cq3,
    Cq4,
    Cq5,
}

impl NamedCq {
    pub const ALL: [NamedCq; 5] = [NamedCq::Cq1, NamedCq::Cq2, NamedCq::Cq3, NamedCq::Cq4, NamedCq::Cq5];

    /// The bundled SPARQL text.
    pub fn text(self) -> &'static str {
        match self {
            NamedCq::Cq1 => include_str!("cq/cq1.rq"),
            NamedCq::Cq2 => include_str!("cq/cq2.rq"),
            NamedCq::Cq3 => include_str!("cq/cq3.rq"),
            NamedCq::Cq4 => include_str!("cq/cq4.rq"),
            NamedCq::Cq5 => include_str!("cq/cq5.rq"),
        }
    }

    pub fn question(self) -> &'static str {
        match self {
            NamedCq::Cq1 => "Which persona is associated with which learning path, and what are the learning steps within that path?",
            NamedCq::Cq2 => "Which authors have contributed to multiple media resources?",
            NamedCq::Cq3 => "What topics have the most associated media resources?",
            NamedCq::Cq4 => "How many modules belong to each category?",
            NamedCq::Cq5 => "What are the top 10 most referenced media resources?",
        }
    }

    pub fn query(self) -> Query {
        parse_query(self.text()).expect("bundled query parses")
    }
}

impl fmt::Display for NamedCq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CQ{}", *self as u8 + 1)
    }
}

impl FromStr for NamedCq {
    type Err = QueryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NamedCq::ALL.into_iter().find(|c| c.to_string().eq_ignore_ascii_case(s.trim())).ok_or_else(|| QueryError::UnknownCq(s.to_string()))
    }
}

pub fn run_named_cq(id: NamedCq, graph: &Graph) -> Result<ResultTable, QueryError> {
    evaluate(&id.query(), graph)
}
