//! Seeded random graph generators.

use currkg::rdf::{rdf_type, Graph, Iri, Literal, Namespaces, Term, Triple};
use rand::seq::SliceRandom;
use rand::Rng;

const CQ_CLASSES: &[&str] = &["Persona", "LearningPath", "LearningStep", "Media", "Video", "Module", "Category", "Topic"];
const CQ_LINKS: &[&str] = &[
    "determines",
    "hasLearningStep",
    "hasLearningSteps",
    "hasPreviousLearningStep",
    "hasNextLearningStep",
    "hasAuthor",
    "coversTopic",
    "belongsTo",
    "belongsToCategory",
    "references",
];
const CQ_LABELS: &[&str] = &["asString", "hasName", "hasTitle"];
const NAMES: &[&str] = &["Alpha", "Beta", "Gamma", "Delta", "alpha", "Ωmega", "10", "9"];

/// A graph over a small node pool using the predicates and classes the
/// competency questions touch, so that joins, groups and ties are common.
pub fn cq_graph<R: Rng>(rng: &mut R, max_triples: usize) -> Graph {
    let ns = Namespaces::default();
    let mut g = Graph::with_namespaces(ns.prefix_map());
    let nodes = rng.gen_range(3..=24);
    let node = |rng: &mut R| Term::Iri(ns.res(&format!("N{}", rng.gen_range(0..nodes))));
    let target = rng.gen_range(0..=max_triples);
    let mut attempts = 0;
    while g.len() < target && attempts < max_triples * 4 {
        attempts += 1;
        let s = node(rng);
        let t = match rng.gen_range(0..10) {
            0..=2 => Triple::new(s, rdf_type(), ns.ont(CQ_CLASSES.choose(rng).unwrap())),
            3..=4 => {
                // At most one label per node and label predicate keeps CQ1 joins bounded.
                let p = ns.ont(CQ_LABELS.choose(rng).unwrap());
                if g.objects(&s, &p).next().is_some() {
                    continue;
                }
                Triple::new(s, p, Term::literal(*NAMES.choose(rng).unwrap()))
            }
            _ => {
                let o = node(rng);
                Triple::new(s, ns.ont(CQ_LINKS.choose(rng).unwrap()), o)
            }
        };
        g.insert(&t.unwrap());
    }
    g
}

fn random_text<R: Rng>(rng: &mut R) -> String {
    const POOL: &[char] = &['a', 'Z', '0', ' ', '\t', '\n', '\r', '"', '\\', '\'', 'é', '漢', '😀', '.', ';', '#', '<', '>', '@', '_', '-', '\u{7}'];
    let len = rng.gen_range(0..12);
    (0..len).map(|_| *POOL.choose(rng).unwrap()).collect()
}

/// Arbitrary graph exercising every term shape the Turtle writer handles.
pub fn any_graph<R: Rng>(rng: &mut R, max_triples: usize) -> Graph {
    let ns = Namespaces::default();
    let mut g = Graph::with_namespaces(ns.prefix_map());
    let bases = ["http://example.org/x/", "urn:test:", "https://edugate.cs.wright.edu/lod/resource/", "https://edugate.cs.wright.edu/lod/ontology/"];
    let locals = ["a", "b", "Module_1", "x-y", "1abc", "ä", "with.dot", "end.", "p%20q", ""];
    let iri = |rng: &mut R| Iri::new(format!("{}{}", bases.choose(rng).unwrap(), locals.choose(rng).unwrap())).unwrap();
    let target = rng.gen_range(0..=max_triples);
    let mut attempts = 0;
    while g.len() < target && attempts < max_triples * 4 {
        attempts += 1;
        let s = if rng.gen_bool(0.15) { Term::blank(format!("b{}", rng.gen_range(0..5))).unwrap() } else { Term::Iri(iri(rng)) };
        let p = if rng.gen_bool(0.1) { rdf_type() } else { iri(rng) };
        let o = match rng.gen_range(0..6) {
            0 => Term::blank(format!("b{}", rng.gen_range(0..5))).unwrap(),
            1 => Term::literal(random_text(rng)),
            2 => Term::Literal(Literal::lang(random_text(rng), *["en", "fr", "en-GB"].choose(rng).unwrap()).unwrap()),
            3 => {
                let dt = *["integer", "decimal", "boolean", "date"].choose(rng).unwrap();
                let lex = match dt {
                    "integer" => rng.gen_range(-50i64..5000).to_string(),
                    "decimal" => format!("{}.{}", rng.gen_range(0..100), rng.gen_range(0..100)),
                    "boolean" => ["true", "false"].choose(rng).unwrap().to_string(),
                    _ => random_text(rng),
                };
                Term::Literal(Literal::typed(lex, Iri::new(format!("http://www.w3.org/2001/XMLSchema#{dt}")).unwrap()))
            }
            _ => Term::Iri(iri(rng)),
        };
        g.insert(&Triple::new(s, p, o).unwrap());
    }
    g
}

/// Random printable-ish strings with whitespace of every kind.
pub fn any_label<R: Rng>(rng: &mut R) -> String {
    const POOL: &[char] = &[
        'a', 'b', 'Q', '7', ' ', ' ', '\t', '\n', '\u{a0}', '\u{2003}', '_', '-', '?', '!', '.', '/', '&', '+', 'é', 'ß', 'Ж', '中', '٣', '😀', '\u{301}',
    ];
    let len = rng.gen_range(0..24);
    (0..len).map(|_| *POOL.choose(rng).unwrap()).collect()
}
