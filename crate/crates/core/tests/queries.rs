mod common;

use common::random::cq_graph;
use common::reference::{self, builtin_aliases};
use common::sample::sample_graph;
use currkg::query::{evaluate_with, parse_query, run_named_cq, AliasTable, NamedCq, ResultTable};
use currkg::rdf::Term;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cell(t: &Option<Term>) -> String {
    match t {
        None => String::new(),
        Some(Term::Literal(l)) => l.lexical().to_string(),
        Some(Term::Iri(i)) => i.as_str().rsplit('/').next().unwrap().to_string(),
        Some(other) => other.to_string(),
    }
}

fn simple(t: &ResultTable) -> Vec<Vec<String>> {
    t.rows.iter().map(|r| r.iter().map(cell).collect()).collect()
}

fn rows(expected: &[&[&str]]) -> Vec<Vec<String>> {
    expected.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

#[test]
fn cq4_on_sample() {
    let t = run_named_cq(NamedCq::Cq4, &sample_graph()).unwrap();
    assert_eq!(t.columns, ["categoryName", "moduleCount"]);
    assert_eq!(simple(&t), rows(&[&["Methodology", "2"], &["Standard", "2"], &["Foundation", "1"], &["Survey", "1"]]));
    assert_eq!(t.to_tsv(), "?categoryName\t?moduleCount\n\"Methodology\"\t2\n\"Standard\"\t2\n\"Foundation\"\t1\n\"Survey\"\t1\n");
}

#[test]
fn cq2_on_sample() {
    let t = run_named_cq(NamedCq::Cq2, &sample_graph()).unwrap();
    assert_eq!(simple(&t), rows(&[&["Dana_Reyes", "Dana Reyes", "3"], &["Sam_Okafor", "Sam Okafor", "2"]]));
}

#[test]
fn cq3_on_sample() {
    let t = run_named_cq(NamedCq::Cq3, &sample_graph()).unwrap();
    assert_eq!(
        simple(&t),
        rows(&[
            &["Knowledge_Graphs", "Knowledge Graphs", "2"],
            &["Ontologies", "Ontologies", "2"],
            &["Coding", "Coding", "1"],
            &["OWL", "OWL", "1"],
            &["RDF", "RDF", "1"],
            &["SPARQL", "SPARQL", "1"],
        ])
    );
}

#[test]
fn cq5_on_sample() {
    let t = run_named_cq(NamedCq::Cq5, &sample_graph()).unwrap();
    assert_eq!(
        simple(&t),
        rows(&[
            &["Intro_to_Knowledge_Graphs", "Intro to Knowledge Graphs", "3"],
            &["Turtle_Cheat_Sheet", "Turtle Cheat Sheet", "2"],
            &["OWL_2_Primer", "OWL 2 Primer", "1"],
            &["Ontology_Design_Patterns_Primer", "Ontology Design Patterns Primer", "1"],
            &["Python_Projects_Notebook", "Python Projects Notebook", "1"],
            &["SPARQL_by_Example", "SPARQL by Example", "1"],
        ])
    );
}

#[test]
fn cq1_on_sample_endpoints() {
    let t = run_named_cq(NamedCq::Cq1, &sample_graph()).unwrap();
    assert_eq!(t.len(), 7);
    let (step, prev, next) = (t.column_index("learningStepName").unwrap(), t.column_index("prevStep").unwrap(), t.column_index("nextStep").unwrap());
    for r in &t.rows {
        let name = cell(&r[step]);
        let n: usize = name.rsplit(' ').next().unwrap().parse().unwrap();
        let last = match name.split(' ').next().unwrap() {
            "Developer" => 4,
            "Instructor" => 2,
            _ => 1,
        };
        assert_eq!(r[prev].is_none(), n == 1, "{name}");
        assert_eq!(r[next].is_none(), n == last, "{name}");
    }
}

#[test]
fn sample_matches_reference() {
    let g = sample_graph();
    for cq in NamedCq::ALL {
        let q = cq.query();
        let ours = evaluate_with(&q, &g, &AliasTable::builtin()).unwrap();
        assert_eq!(ours.rows, reference::evaluate(&q, &g, &builtin_aliases()), "{cq}");
    }
}

#[test]
fn random_graphs_match_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    let aliases = builtin_aliases();
    for _ in 0..60 {
        let g = cq_graph(&mut rng, 300);
        for cq in NamedCq::ALL {
            let q = cq.query();
            let ours = evaluate_with(&q, &g, &AliasTable::builtin()).unwrap();
            assert_eq!(ours.rows, reference::evaluate(&q, &g, &aliases), "{cq} on\n{}", currkg::rdf::serialize_turtle(&g));
        }
        let bare = evaluate_with(&NamedCq::Cq1.query(), &g, &AliasTable::empty()).unwrap();
        assert_eq!(bare.rows, reference::evaluate(&NamedCq::Cq1.query(), &g, &[]));
    }
}

#[test]
fn optional_never_loses_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let with = parse_query("SELECT ?s ?n ?x WHERE { ?s edu-ont:asString ?n OPTIONAL { ?s edu-ont:hasNextLearningStep ?x } }").unwrap();
    let without = parse_query("SELECT ?s ?n WHERE { ?s edu-ont:asString ?n }").unwrap();
    for _ in 0..50 {
        let g = cq_graph(&mut rng, 200);
        let a = evaluate_with(&with, &g, &AliasTable::builtin()).unwrap();
        let b = evaluate_with(&without, &g, &AliasTable::builtin()).unwrap();
        assert!(a.len() >= b.len());
    }
}

#[test]
fn limit_and_order_hold_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let g = cq_graph(&mut rng, 300);
        for cq in [NamedCq::Cq3, NamedCq::Cq5] {
            let t = run_named_cq(cq, &g).unwrap();
            assert!(t.len() <= 10);
            let counts: Vec<i64> = t.rows.iter().map(|r| cell(&r[2]).parse().unwrap()).collect();
            assert!(counts.windows(2).all(|w| w[0] >= w[1]), "{cq}: {counts:?}");
        }
    }
}
