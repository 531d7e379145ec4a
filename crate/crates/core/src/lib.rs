//! Curriculum knowledge graph toolkit.
//!
//! Turns tabular curriculum data into an RDF graph described by the
//! Curriculum KG ontology, checks the graph against the ontology's axioms
//! under a closed-world reading, answers the bundled competency questions
//! with a small SPARQL subset engine, and linearizes persona learning paths.

pub mod rdf;
pub mod schema;
pub mod validator;
pub mod materializer;
pub mod query;
pub mod path;
