use currkg::materializer::{FieldMapping, IngestReport, Materializer};
use currkg::rdf::Graph;
use currkg::schema::builtin_catalog;

pub const SAMPLE_CSV: &str = include_str!("../../data/sample.csv");

pub fn materialize(csv: &str) -> (Graph, IngestReport) {
    let cat = builtin_catalog();
    let m = Materializer::new(&FieldMapping::default_mapping(), &cat).expect("default mapping is valid");
    let mut g = Graph::with_namespaces(cat.namespaces().prefix_map());
    let report = m.materialize_file(csv, &mut g).expect("csv parses");
    (g, report)
}

pub fn sample_graph() -> Graph {
    materialize(SAMPLE_CSV).0
}
