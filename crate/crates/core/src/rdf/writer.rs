use std::collections::BTreeMap;
use std::fmt::Write;

use super::{escape_string, Graph, Iri, PrefixMap, Term, RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_INTEGER};

/// Writes the graph as Turtle with canonical ordering: `@prefix` lines in
/// table order, then one block per subject (subjects sorted), predicates
/// sorted within the subject and objects sorted within the predicate.
pub fn serialize_turtle(graph: &Graph) -> String {
    let prefixes = graph.namespaces();
    let mut out = String::new();
    for (prefix, ns) in prefixes.iter() {
        writeln!(out, "@prefix {prefix}: <{ns}> .").unwrap();
    }

    let mut by_subject: BTreeMap<&Term, BTreeMap<&Term, Vec<&Term>>> = BTreeMap::new();
    for t in graph.iter() {
        by_subject.entry(t.subject).or_default().entry(t.predicate).or_default().push(t.object);
    }

    for (subject, predicates) in by_subject {
        out.push('\n');
        out.push_str(&write_term(subject, prefixes));
        let mut first = true;
        for (predicate, mut objects) in predicates {
            objects.sort();
            out.push_str(if first { " " } else { " ;\n    " });
            first = false;
            match predicate {
                Term::Iri(iri) if iri.as_str() == RDF_TYPE => out.push('a'),
                other => out.push_str(&write_term(other, prefixes)),
            }
            for (i, object) in objects.iter().enumerate() {
                out.push_str(if i == 0 { " " } else { " , " });
                out.push_str(&write_term(object, prefixes));
            }
        }
        out.push_str(" .\n");
    }
    out
}

fn write_iri(iri: &Iri, prefixes: &PrefixMap) -> String {
    prefixes.compact(iri.as_str()).unwrap_or_else(|| format!("<{}>", iri.as_str()))
}

pub(crate) fn write_term(term: &Term, prefixes: &PrefixMap) -> String {
    match term {
        Term::Iri(iri) => write_iri(iri, prefixes),
        Term::Blank(label) => format!("_:{label}"),
        Term::Literal(lit) => {
            if let Some(dt) = lit.datatype() {
                if is_canonical_shorthand(lit.lexical(), dt.as_str()) {
                    return lit.lexical().to_string();
                }
                format!("\"{}\"^^{}", escape_string(lit.lexical()), write_iri(dt, prefixes))
            } else if let Some(tag) = lit.language() {
                format!("\"{}\"@{tag}", escape_string(lit.lexical()))
            } else {
                format!("\"{}\"", escape_string(lit.lexical()))
            }
        }
    }
}

/// Numbers and booleans that read back to the identical literal when bare.
fn is_canonical_shorthand(lexical: &str, datatype: &str) -> bool {
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let unsigned = lexical.strip_prefix(['+', '-']).unwrap_or(lexical);
    match datatype {
        XSD_INTEGER => digits(unsigned),
        XSD_DECIMAL => unsigned.split_once('.').is_some_and(|(a, b)| digits(b) && (a.is_empty() || digits(a))),
        XSD_BOOLEAN => lexical == "true" || lexical == "false",
        _ => false,
    }
}
