//! Tabular curriculum data to triples.
//!
//! Each row is triplified independently: every non-empty entity cell mints
//! an IRI, gets its type and label, and each link rule fires only when both
//! of its columns are present. Missing cells are skipped, not errors.

pub mod csv;
mod mapping;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::rdf::{mint_iri, rdf_type, Graph, Iri, Term, Triple};
use crate::schema::SchemaCatalog;

pub use self::csv::CsvError;
pub use mapping::{ColumnRule, FieldMapping, LinkRule, MappingError};

#[derive(Debug, Error)]
pub enum MaterializeError {
    #[error(transparent)]
    Csv(#[from] CsvError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
}

/// One data row: header to raw cell text, in header order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowRecord {
    pub row: usize,
    cells: Vec<(String, String)>,
}

impl RowRecord {
    pub fn new<H: Into<String>, V: Into<String>>(row: usize, cells: impl IntoIterator<Item = (H, V)>) -> Self {
        RowRecord { row, cells: cells.into_iter().map(|(h, v)| (h.into(), v.into())).collect() }
    }

    /// Trimmed cell text; empty and absent cells are both `None`.
    pub fn get(&self, header: &str) -> Option<&str> {
        self.cells.iter().find(|(h, _)| h == header).map(|(_, v)| v.trim()).filter(|v| !v.is_empty())
    }

    pub fn headers(&self) -> impl Iterator<Item = &str> {
        self.cells.iter().map(|(h, _)| h.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Warning {
    /// Data row number, or `None` for file-level warnings.
    pub row: Option<usize>,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.row {
            Some(r) => write!(f, "row {r}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RowOutcome {
    pub triples_added: usize,
    pub warnings: Vec<Warning>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub rows: usize,
    pub triples_added: usize,
    pub warnings: Vec<Warning>,
}

impl IngestReport {
    pub fn merge(&mut self, other: IngestReport) {
        self.rows += other.rows;
        self.triples_added += other.triples_added;
        self.warnings.extend(other.warnings);
    }
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rows read: {}", self.rows)?;
        writeln!(f, "triples added: {}", self.triples_added)?;
        writeln!(f, "warnings: {}", self.warnings.len())?;
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

enum Compiled {
    Entity { class: Iri, label: Iri, namespace: String },
    Literal { subject: String, property: Iri },
    Subtype { subject: String },
}

/// A mapping checked against a catalog, with every name resolved to an IRI.
pub struct Materializer<'c> {
    catalog: &'c SchemaCatalog,
    columns: BTreeMap<String, Compiled>,
    links: Vec<(String, Iri, String)>,
}

impl<'c> Materializer<'c> {
    pub fn new(mapping: &FieldMapping, catalog: &'c SchemaCatalog) -> Result<Self, MappingError> {
        mapping.validate(catalog)?;
        let ns = catalog.namespaces();
        let columns = mapping
            .columns()
            .map(|(header, rule)| {
                let compiled = match rule {
                    ColumnRule::Entity { class, label } => {
                        let class = catalog.class(class);
                        // Vocabulary individuals belong to the ontology, not to the data.
                        let namespace = if catalog.is_vocabulary(&class) { ns.ontology() } else { ns.resource() };
                        Compiled::Entity { class, label: catalog.property(label), namespace: namespace.to_string() }
                    }
                    ColumnRule::Literal { subject, property } => {
                        Compiled::Literal { subject: subject.clone(), property: catalog.property(property) }
                    }
                    ColumnRule::Subtype { subject } => Compiled::Subtype { subject: subject.clone() },
                };
                (header.to_string(), compiled)
            })
            .collect();
        let links = mapping.links().iter().map(|l| (l.subject.clone(), catalog.property(&l.property), l.object.clone())).collect();
        Ok(Materializer { catalog, columns, links })
    }

    pub fn is_mapped(&self, header: &str) -> bool {
        self.columns.contains_key(header)
    }

    pub fn materialize_row(&self, row: &RowRecord, graph: &mut Graph) -> RowOutcome {
        let mut out = RowOutcome::default();
        let warn = |out: &mut RowOutcome, message: String| out.warnings.push(Warning { row: Some(row.row), message });
        let mut usable = 0;
        let mut entities: BTreeMap<&str, Term> = BTreeMap::new();
        let mut emit = |out: &mut RowOutcome, t: Triple| {
            if graph.insert(&t) {
                out.triples_added += 1;
            }
        };

        for (header, rule) in &self.columns {
            let Compiled::Entity { class, label, namespace } = rule else { continue };
            let Some(text) = row.get(header) else { continue };
            match mint_iri(namespace, text) {
                Ok(iri) => {
                    let node = Term::Iri(iri);
                    emit(&mut out, Triple::new(node.clone(), rdf_type(), class.clone()).expect("IRI subject"));
                    emit(&mut out, Triple::new(node.clone(), label.clone(), Term::literal(text)).expect("IRI subject"));
                    entities.insert(header, node);
                    usable += 1;
                }
                Err(e) => warn(&mut out, format!("column {header:?}: {e}")),
            }
        }

        for (header, rule) in &self.columns {
            let Some(text) = row.get(header) else { continue };
            match rule {
                Compiled::Entity { .. } => {}
                Compiled::Literal { subject, property } => {
                    if let Some(s) = entities.get(subject.as_str()) {
                        emit(&mut out, Triple::new(s.clone(), property.clone(), Term::literal(text)).expect("IRI subject"));
                        usable += 1;
                    }
                }
                Compiled::Subtype { subject } => {
                    let Some(s) = entities.get(subject.as_str()) else { continue };
                    let Some(Compiled::Entity { class: parent, .. }) = self.columns.get(subject) else { continue };
                    match self.subclass_named(text, parent) {
                        Some(class) => {
                            emit(&mut out, Triple::new(s.clone(), rdf_type(), class).expect("IRI subject"));
                            usable += 1;
                        }
                        None => warn(&mut out, format!("column {header:?}: {text:?} is not a subclass of {}", local(parent))),
                    }
                }
            }
        }

        for (s, p, o) in &self.links {
            if let (Some(s), Some(o)) = (entities.get(s.as_str()), entities.get(o.as_str())) {
                emit(&mut out, Triple::new(s.clone(), p.clone(), o.clone()).expect("IRI subject"));
            }
        }

        if usable == 0 {
            warn(&mut out, "no usable fields".into());
        }
        out
    }

    fn subclass_named(&self, text: &str, parent: &Iri) -> Option<Iri> {
        let class = mint_iri(self.catalog.namespaces().ontology(), text).ok()?;
        (class != *parent && self.catalog.is_class(&class) && self.catalog.is_subclass_of(&class, parent)).then_some(class)
    }

    /// Reads a whole CSV document; rows are processed in file order.
    pub fn materialize_file(&self, text: &str, graph: &mut Graph) -> Result<IngestReport, CsvError> {
        let (headers, records) = csv::read(text)?;
        let mut report = IngestReport::default();
        for h in &headers {
            if !self.is_mapped(h) {
                report.warnings.push(Warning { row: None, message: format!("unmapped column {h:?} ignored") });
            }
        }
        for rec in records {
            let row = RowRecord::new(rec.row, headers.iter().cloned().zip(rec.fields));
            let outcome = self.materialize_row(&row, graph);
            report.rows += 1;
            report.triples_added += outcome.triples_added;
            report.warnings.extend(outcome.warnings);
        }
        Ok(report)
    }

    /// As [`Materializer::materialize_file`], rejecting non-UTF-8 input.
    pub fn materialize_bytes(&self, bytes: &[u8], graph: &mut Graph) -> Result<IngestReport, CsvError> {
        self.materialize_file(csv::decode(bytes)?, graph)
    }
}

fn local(iri: &Iri) -> &str {
    iri.as_str().rsplit(['/', '#']).next().unwrap_or(iri.as_str())
}

/// Convenience wrapper compiling `mapping` for one row.
pub fn materialize_row(row: &RowRecord, mapping: &FieldMapping, catalog: &SchemaCatalog, graph: &mut Graph) -> Result<RowOutcome, MappingError> {
    Ok(Materializer::new(mapping, catalog)?.materialize_row(row, graph))
}

pub fn materialize_file(text: &str, mapping: &FieldMapping, catalog: &SchemaCatalog, graph: &mut Graph) -> Result<IngestReport, MaterializeError> {
    Ok(Materializer::new(mapping, catalog)?.materialize_file(text, graph)?)
}
