//! RDF data model: terms, an indexed in-memory graph, Turtle I/O and IRI minting.

mod graph;
mod mint;
mod term;
mod turtle;
mod writer;

pub use graph::{Graph, TripleRef};
pub use mint::{mint_iri, sanitize_label, MintError};
pub use term::{is_absolute_iri, Binding, Iri, Literal, PatternTerm, Term, Triple, TriplePattern, Variable};
pub use turtle::{parse_turtle, TurtleError};
pub use writer::serialize_turtle;

pub(crate) use term::escape_string;
pub(crate) use turtle::{is_pn_chars, is_pn_chars_base};

use thiserror::Error;

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";

/// Base under which the `edu-r:` and `edu-ont:` namespaces live.
pub const DEFAULT_BASE: &str = "https://edugate.cs.wright.edu/lod/";

/// Environment variable that relocates the resource and ontology namespaces.
pub const BASE_ENV_VAR: &str = "CURRKG_BASE";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdfError {
    #[error("not an absolute IRI: {0:?}")]
    InvalidIri(String),
    #[error("invalid language tag: {0:?}")]
    InvalidLanguageTag(String),
    #[error("invalid blank node label: {0:?}")]
    InvalidBlankLabel(String),
    #[error("invalid variable name: {0:?}")]
    InvalidVariable(String),
    #[error("a literal cannot be a subject: {0}")]
    LiteralSubject(String),
    #[error("predicate must be an IRI: {0}")]
    NonIriPredicate(String),
    #[error("invalid prefix {0:?}")]
    InvalidPrefix(String),
}

/// The resource (`edu-r:`) and ontology (`edu-ont:`) namespaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Namespaces {
    resource: String,
    ontology: String,
}

impl Default for Namespaces {
    fn default() -> Self {
        Namespaces::from_base(DEFAULT_BASE).expect("default base is absolute")
    }
}

impl Namespaces {
    /// `<base>resource/` and `<base>ontology/`. A missing trailing slash is added.
    pub fn from_base(base: &str) -> Result<Self, RdfError> {
        let base = base.trim();
        if !is_absolute_iri(base) {
            return Err(RdfError::InvalidIri(base.to_string()));
        }
        let sep = if base.ends_with('/') || base.ends_with('#') { "" } else { "/" };
        Ok(Namespaces { resource: format!("{base}{sep}resource/"), ontology: format!("{base}{sep}ontology/") })
    }

    /// Reads `CURRKG_BASE`, falling back to the default base when unset or empty.
    pub fn from_env() -> Result<Self, RdfError> {
        match std::env::var(BASE_ENV_VAR) {
            Ok(base) if !base.trim().is_empty() => Namespaces::from_base(&base),
            _ => Ok(Namespaces::default()),
        }
    }

    pub fn resource(&self) -> &str {
        &self.resource
    }

    pub fn ontology(&self) -> &str {
        &self.ontology
    }

    pub fn ont(&self, local: &str) -> Iri {
        Iri::from_trusted(format!("{}{}", self.ontology, local))
    }

    pub fn res(&self, local: &str) -> Iri {
        Iri::from_trusted(format!("{}{}", self.resource, local))
    }

    /// The four default prefixes in their canonical order.
    pub fn prefix_map(&self) -> PrefixMap {
        let mut map = PrefixMap::new();
        for (prefix, iri) in [("edu-r", self.resource.as_str()), ("edu-ont", self.ontology.as_str()), ("rdf", RDF_NS), ("rdfs", RDFS_NS)] {
            map.insert(prefix, iri).expect("default prefixes are valid");
        }
        map
    }
}

pub fn rdf_type() -> Iri {
    Iri::from_trusted(RDF_TYPE.to_string())
}

/// Ordered prefix → namespace table. Every namespace is an absolute IRI.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrefixMap {
    entries: Vec<(String, String)>,
}

impl PrefixMap {
    pub fn new() -> Self {
        PrefixMap::default()
    }

    /// Adds or replaces a prefix, keeping the original position on replacement.
    pub fn insert(&mut self, prefix: &str, namespace: &str) -> Result<(), RdfError> {
        if !is_valid_prefix(prefix) {
            return Err(RdfError::InvalidPrefix(prefix.to_string()));
        }
        if !is_absolute_iri(namespace) {
            return Err(RdfError::InvalidIri(namespace.to_string()));
        }
        match self.entries.iter_mut().find(|(p, _)| p == prefix) {
            Some(entry) => entry.1 = namespace.to_string(),
            None => self.entries.push((prefix.to_string(), namespace.to_string())),
        }
        Ok(())
    }

    pub fn get(&self, prefix: &str) -> Option<&str> {
        self.entries.iter().find(|(p, _)| p == prefix).map(|(_, ns)| ns.as_str())
    }

    pub fn expand(&self, prefix: &str, local: &str) -> Option<String> {
        self.get(prefix).map(|ns| format!("{ns}{local}"))
    }

    /// Compacts an IRI to `prefix:local` using the longest matching namespace,
    /// provided the local part is a legal Turtle local name.
    pub fn compact(&self, iri: &str) -> Option<String> {
        self.entries
            .iter()
            .filter(|(_, ns)| iri.starts_with(ns.as_str()))
            .max_by_key(|(_, ns)| ns.len())
            .and_then(|(prefix, ns)| {
                let local = &iri[ns.len()..];
                is_simple_local_name(local).then(|| format!("{prefix}:{local}"))
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(p, n)| (p.as_str(), n.as_str()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `PN_PREFIX?`: empty, or starts with a base char, no trailing dot.
fn is_valid_prefix(prefix: &str) -> bool {
    if prefix.is_empty() {
        return true;
    }
    let mut chars = prefix.chars();
    matches!(chars.next(), Some(c) if is_pn_chars_base(c))
        && !prefix.ends_with('.')
        && chars.all(|c| is_pn_chars(c) || c == '.')
}

/// Local names the serializer writes unescaped. Must start with a base char,
/// digit or underscore, and not end with a dot.
fn is_simple_local_name(local: &str) -> bool {
    if local.is_empty() {
        return true;
    }
    let mut chars = local.chars();
    matches!(chars.next(), Some(c) if is_pn_chars_base(c) || c == '_' || c.is_ascii_digit())
        && !local.ends_with('.')
        && chars.all(|c| is_pn_chars(c) || c == '.')
}
