use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::rdf::{Binding, Graph, Iri, Literal, PatternTerm, Term, TriplePattern, Variable, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER};

use super::{AliasTable, GroupElement, PrefixResolver, Projection, Query, QueryError, QueryPattern, QueryTerm, ResultTable};

/// A pattern with IRIs resolved; `alternates` holds aliased spellings of a
/// constant predicate that match as well.
#[derive(Clone, Debug)]
pub struct ResolvedPattern {
    pub pattern: TriplePattern,
    pub alternates: Vec<Iri>,
}

#[derive(Clone, Debug)]
pub enum ResolvedElement {
    Triples(Vec<ResolvedPattern>),
    Optional(Vec<ResolvedPattern>),
}

/// Resolves every prefixed name of the WHERE clause against the query's
/// prefixes, the graph's table and the defaults, and attaches aliases.
pub fn resolve(query: &Query, graph: &Graph, aliases: &AliasTable) -> Result<Vec<ResolvedElement>, QueryError> {
    let r = PrefixResolver::new(&query.prefixes, graph.namespaces());
    let mut alias_map: BTreeMap<Iri, Vec<Iri>> = BTreeMap::new();
    for (from, to) in aliases.entries() {
        // An alias naming an unknown prefix is inert rather than fatal.
        if let (Ok(Some(f)), Ok(Some(t))) = (r.iri(from), r.iri(to)) {
            alias_map.entry(f).or_default().push(t);
        }
    }
    let term = |t: &QueryTerm| -> Result<PatternTerm, QueryError> {
        Ok(match t {
            QueryTerm::Var(v) => PatternTerm::Var(v.clone()),
            QueryTerm::Literal(l) => PatternTerm::Term(Term::Literal(l.clone())),
            QueryTerm::TypedLiteral { lexical, datatype } => {
                let dt = r.iri(datatype)?.expect("datatype is an IRI term");
                PatternTerm::Term(Term::Literal(Literal::typed(lexical.clone(), dt)))
            }
            other => PatternTerm::Term(Term::Iri(r.iri(other)?.expect("IRI term"))),
        })
    };
    let block = |ps: &[QueryPattern]| -> Result<Vec<ResolvedPattern>, QueryError> {
        ps.iter()
            .map(|p| {
                let pattern = TriplePattern::new(term(&p.subject)?, term(&p.predicate)?, term(&p.object)?);
                let alternates = match &pattern.predicate {
                    PatternTerm::Term(Term::Iri(iri)) => alias_map.get(iri).cloned().unwrap_or_default(),
                    _ => Vec::new(),
                };
                Ok(ResolvedPattern { pattern, alternates })
            })
            .collect()
    };
    query
        .where_clause
        .iter()
        .map(|e| {
            Ok(match e {
                GroupElement::Triples(ps) => ResolvedElement::Triples(block(ps)?),
                GroupElement::Optional(ps) => ResolvedElement::Optional(block(ps)?),
            })
        })
        .collect()
}

fn variants(rp: &ResolvedPattern, binding: &Binding) -> Vec<TriplePattern> {
    let base = rp.pattern.substitute(binding);
    let mut out = vec![base.clone()];
    for alt in &rp.alternates {
        out.push(TriplePattern { predicate: PatternTerm::Term(Term::Iri(alt.clone())), ..base.clone() });
    }
    out
}

/// Extends `binding` by every solution of `patterns`, cheapest pattern first.
fn extend(graph: &Graph, patterns: &[&ResolvedPattern], binding: &Binding, out: &mut Vec<Binding>) {
    if patterns.is_empty() {
        out.push(binding.clone());
        return;
    }
    let (idx, _) = patterns
        .iter()
        .enumerate()
        .map(|(i, p)| (i, variants(p, binding).iter().map(|v| graph.estimate(v)).sum::<usize>()))
        .min_by_key(|&(i, cost)| (cost, i))
        .expect("non-empty");
    let rest: Vec<&ResolvedPattern> = patterns.iter().enumerate().filter(|&(i, _)| i != idx).map(|(_, p)| *p).collect();
    let vs = variants(patterns[idx], binding);
    let matches: Vec<Binding> = if vs.len() == 1 {
        graph.match_pattern(&vs[0])
    } else {
        vs.iter().flat_map(|v| graph.match_pattern(v)).collect::<BTreeSet<_>>().into_iter().collect()
    };
    for m in matches {
        let mut next = binding.clone();
        next.extend(m);
        extend(graph, &rest, &next, out);
    }
}

fn join(graph: &Graph, patterns: &[ResolvedPattern], input: Vec<Binding>) -> Vec<Binding> {
    let refs: Vec<&ResolvedPattern> = patterns.iter().collect();
    let mut out = Vec::new();
    for b in &input {
        extend(graph, &refs, b, &mut out);
    }
    out
}

fn left_join(graph: &Graph, patterns: &[ResolvedPattern], input: Vec<Binding>) -> Vec<Binding> {
    let refs: Vec<&ResolvedPattern> = patterns.iter().collect();
    let mut out = Vec::new();
    for b in input {
        let before = out.len();
        extend(graph, &refs, &b, &mut out);
        if out.len() == before {
            out.push(b);
        }
    }
    out
}

fn solutions(graph: &Graph, elements: &[ResolvedElement]) -> Vec<Binding> {
    let mut sols = vec![Binding::new()];
    for e in elements {
        sols = match e {
            ResolvedElement::Triples(ps) => join(graph, ps, sols),
            ResolvedElement::Optional(ps) => left_join(graph, ps, sols),
        };
    }
    sols
}

fn numeric(l: &Literal) -> Option<f64> {
    let dt = l.datatype()?.as_str();
    if dt == XSD_INTEGER || dt == XSD_DECIMAL || dt == XSD_DOUBLE {
        l.lexical().trim().parse::<f64>().ok()
    } else {
        None
    }
}

/// Total order on cells: unbound, blank nodes, IRIs, then literals; numeric
/// literals first and by value, then other literals by term order.
pub fn compare_cells(a: Option<&Term>, b: Option<&Term>) -> Ordering {
    fn rank(t: Option<&Term>) -> u8 {
        match t {
            None => 0,
            Some(Term::Blank(_)) => 1,
            Some(Term::Iri(_)) => 2,
            Some(Term::Literal(_)) => 3,
        }
    }
    rank(a).cmp(&rank(b)).then_with(|| match (a, b) {
        (Some(Term::Literal(x)), Some(Term::Literal(y))) => match (numeric(x), numeric(y)) {
            (Some(p), Some(q)) => p.partial_cmp(&q).unwrap_or(Ordering::Equal).then_with(|| x.cmp(y)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => x.cmp(y),
        },
        (Some(x), Some(y)) => x.cmp(y),
        _ => Ordering::Equal,
    })
}

fn count_literal(n: usize) -> Term {
    Term::Literal(Literal::typed(n.to_string(), Iri::new(XSD_INTEGER).expect("constant")))
}

pub fn evaluate(query: &Query, graph: &Graph) -> Result<ResultTable, QueryError> {
    evaluate_with(query, graph, &AliasTable::builtin())
}

pub fn evaluate_with(query: &Query, graph: &Graph, aliases: &AliasTable) -> Result<ResultTable, QueryError> {
    query.check_projection()?;
    let elements = resolve(query, graph, aliases)?;
    let sols = solutions(graph, &elements);

    // Rows before projection: variable name to value, aggregates included.
    let mut rows: Vec<Binding> = if query.is_grouped() {
        let mut groups: BTreeMap<Vec<Option<Term>>, Vec<Binding>> = BTreeMap::new();
        if query.group_by.is_empty() {
            groups.insert(Vec::new(), Vec::new());
        }
        for s in sols {
            let key = query.group_by.iter().map(|v| s.get(v).cloned()).collect();
            groups.entry(key).or_default().push(s);
        }
        let count = |members: &[Binding], v: &Variable| members.iter().filter(|m| m.contains_key(v)).count();
        groups
            .into_iter()
            .filter(|(_, members)| {
                query.having.as_ref().is_none_or(|h| h.op.holds(i64::try_from(count(members, &h.var)).unwrap_or(i64::MAX), h.value))
            })
            .map(|(key, members)| {
                let mut row = Binding::new();
                for (v, value) in query.group_by.iter().zip(key) {
                    if let Some(value) = value {
                        row.insert(v.clone(), value);
                    }
                }
                for p in &query.projection {
                    if let Projection::Count { var, alias } = p {
                        row.insert(alias.clone(), count_literal(count(&members, var)));
                    }
                }
                row
            })
            .collect()
    } else {
        sols
    };

    let projected: Vec<&Variable> = query.projection.iter().map(Projection::name).collect();
    rows.sort_by(|a, b| {
        query
            .order_by
            .iter()
            .map(|k| {
                let o = compare_cells(a.get(&k.var), b.get(&k.var));
                if k.descending {
                    o.reverse()
                } else {
                    o
                }
            })
            .chain(projected.iter().map(|v| compare_cells(a.get(*v), b.get(*v))))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    });
    if let Some(k) = query.limit {
        rows.truncate(k);
    }
    Ok(ResultTable {
        columns: query.columns(),
        rows: rows.iter().map(|r| projected.iter().map(|v| r.get(*v).cloned()).collect()).collect(),
    })
}
