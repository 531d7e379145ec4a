//! Brute-force evaluator used as an oracle: every pattern is matched by a
//! full scan of the graph, in textual order, with no indexes or reordering.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use currkg::query::{GroupElement, Projection, Query, QueryPattern, QueryTerm};
use currkg::rdf::{Graph, Literal, Namespaces, Term, Variable};

type Row = BTreeMap<String, Term>;

struct Ctx<'a> {
    query: &'a Query,
    graph: &'a Graph,
    aliases: &'a [(String, String)],
}

const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";

impl Ctx<'_> {
    fn expand(&self, prefix: &str, local: &str) -> String {
        let from_query = self.query.prefixes.iter().rev().find(|(p, _)| p == prefix).map(|(_, n)| n.clone());
        let ns = from_query
            .or_else(|| self.graph.namespaces().get(prefix).map(str::to_string))
            .or_else(|| Namespaces::default().prefix_map().get(prefix).map(str::to_string))
            .unwrap_or_else(|| panic!("unbound prefix {prefix}"));
        format!("{ns}{local}")
    }

    fn constant(&self, t: &QueryTerm) -> Option<Term> {
        match t {
            QueryTerm::Var(_) => None,
            QueryTerm::Iri(s) => Some(Term::iri(s.as_str()).unwrap()),
            QueryTerm::Prefixed { prefix, local } => Some(Term::iri(self.expand(prefix, local)).unwrap()),
            QueryTerm::Literal(l) => Some(Term::Literal(l.clone())),
            QueryTerm::TypedLiteral { lexical, datatype } => {
                let Some(Term::Iri(dt)) = self.constant(datatype) else { panic!("datatype") };
                Some(Term::Literal(Literal::typed(lexical.clone(), dt)))
            }
        }
    }

    /// The predicate constants a pattern accepts: itself plus aliases.
    fn predicates(&self, p: &QueryTerm) -> Option<BTreeSet<Term>> {
        let base = self.constant(p)?;
        let mut out = BTreeSet::from([base.clone()]);
        for (from, to) in self.aliases {
            if Term::iri(from.as_str()).ok().as_ref() == Some(&base) {
                out.insert(Term::iri(to.as_str()).unwrap());
            }
        }
        Some(out)
    }

    fn bind(&self, row: &mut Row, t: &QueryTerm, value: &Term) -> bool {
        match t {
            QueryTerm::Var(v) => match row.get(v.name()) {
                Some(existing) => existing == value,
                None => {
                    row.insert(v.name().to_string(), value.clone());
                    true
                }
            },
            other => self.constant(other).as_ref() == Some(value),
        }
    }

    /// The value a position must equal under `row`, if it is fixed.
    fn fixed(&self, t: &QueryTerm, row: &Row) -> Option<Term> {
        match t {
            QueryTerm::Var(v) => row.get(v.name()).cloned(),
            other => self.constant(other),
        }
    }

    fn match_one(&self, p: &QueryPattern, row: &Row) -> Vec<Row> {
        let preds = self.predicates(&p.predicate);
        let (fs, fo) = (self.fixed(&p.subject, row), self.fixed(&p.object, row));
        let mut out = BTreeSet::new();
        for t in self.graph.iter() {
            if fs.as_ref().is_some_and(|v| v != t.subject) || fo.as_ref().is_some_and(|v| v != t.object) {
                continue;
            }
            if preds.as_ref().is_some_and(|set| !set.contains(t.predicate)) {
                continue;
            }
            let mut r = row.clone();
            let pred_ok = preds.is_some() || self.bind(&mut r, &p.predicate, t.predicate);
            if pred_ok && self.bind(&mut r, &p.subject, t.subject) && self.bind(&mut r, &p.object, t.object) {
                out.insert(r);
            }
        }
        out.into_iter().collect()
    }

    fn match_block(&self, ps: &[QueryPattern], row: &Row) -> Vec<Row> {
        let mut rows = vec![row.clone()];
        for p in ps {
            rows = rows.iter().flat_map(|r| self.match_one(p, r)).collect();
        }
        rows
    }

    fn solutions(&self) -> Vec<Row> {
        let mut rows = vec![Row::new()];
        for e in &self.query.where_clause {
            rows = match e {
                GroupElement::Triples(ps) => rows.iter().flat_map(|r| self.match_block(ps, r)).collect(),
                GroupElement::Optional(ps) => rows
                    .iter()
                    .flat_map(|r| {
                        let ext = self.match_block(ps, r);
                        if ext.is_empty() {
                            vec![r.clone()]
                        } else {
                            ext
                        }
                    })
                    .collect(),
            };
        }
        rows
    }
}

fn number(t: &Term) -> Option<f64> {
    let Term::Literal(l) = t else { return None };
    let dt = l.datatype()?.as_str();
    if dt.ends_with("#integer") || dt.ends_with("#decimal") || dt.ends_with("#double") {
        l.lexical().parse().ok()
    } else {
        None
    }
}

/// unbound < blank < IRI < literal; numbers before other literals, by value.
pub fn cell_order(a: Option<&Term>, b: Option<&Term>) -> Ordering {
    let class = |t: Option<&Term>| match t {
        None => 0,
        Some(Term::Blank(_)) => 1,
        Some(Term::Iri(_)) => 2,
        Some(Term::Literal(_)) => 3,
    };
    class(a).cmp(&class(b)).then_with(|| match (a, b) {
        (Some(x), Some(y)) => match (number(x), number(y)) {
            (Some(p), Some(q)) => p.partial_cmp(&q).unwrap().then_with(|| x.cmp(y)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => x.cmp(y),
        },
        _ => Ordering::Equal,
    })
}

/// Evaluates `query` by exhaustive scanning. `aliases` are full IRIs.
pub fn evaluate(query: &Query, graph: &Graph, aliases: &[(String, String)]) -> Vec<Vec<Option<Term>>> {
    let ctx = Ctx { query, graph, aliases };
    let sols = ctx.solutions();
    let has_count = query.projection.iter().any(|p| matches!(p, Projection::Count { .. }));
    let grouped = has_count || !query.group_by.is_empty() || query.having.is_some();

    let mut rows: Vec<Row> = if grouped {
        let key = |r: &Row| -> Vec<Option<Term>> { query.group_by.iter().map(|v| r.get(v.name()).cloned()).collect() };
        let mut keys: Vec<Vec<Option<Term>>> = Vec::new();
        for s in &sols {
            let k = key(s);
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
        if query.group_by.is_empty() && keys.is_empty() {
            keys.push(Vec::new());
        }
        let count = |k: &Vec<Option<Term>>, v: &Variable| sols.iter().filter(|s| &key(s) == k && s.contains_key(v.name())).count();
        keys.iter()
            .filter(|k| query.having.as_ref().is_none_or(|h| h.op.holds(count(k, &h.var) as i64, h.value)))
            .map(|k| {
                let mut row = Row::new();
                for (v, val) in query.group_by.iter().zip(k) {
                    if let Some(val) = val {
                        row.insert(v.name().to_string(), val.clone());
                    }
                }
                for p in &query.projection {
                    if let Projection::Count { var, alias } = p {
                        let n = count(k, var);
                        row.insert(alias.name().to_string(), Term::Literal(Literal::typed(n.to_string(), currkg::rdf::Iri::new(XSD_INTEGER).unwrap())));
                    }
                }
                row
            })
            .collect()
    } else {
        sols
    };

    let names: Vec<&str> = query.projection.iter().map(|p| p.name().name()).collect();
    rows.sort_by(|a, b| {
        for k in &query.order_by {
            let o = cell_order(a.get(k.var.name()), b.get(k.var.name()));
            let o = if k.descending { o.reverse() } else { o };
            if o != Ordering::Equal {
                return o;
            }
        }
        for n in &names {
            let o = cell_order(a.get(*n), b.get(*n));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    });
    if let Some(limit) = query.limit {
        rows.truncate(limit);
    }
    rows.iter().map(|r| names.iter().map(|n| r.get(*n).cloned()).collect()).collect()
}

/// The bundled alias table, spelled out in full IRIs.
pub fn builtin_aliases() -> Vec<(String, String)> {
    let ont = Namespaces::default().ontology().to_string();
    [("hasLearningSteps", "hasLearningStep"), ("belongsToCategory", "belongsTo")]
        .iter()
        .map(|(f, t)| (format!("{ont}{f}"), format!("{ont}{t}")))
        .collect()
}
