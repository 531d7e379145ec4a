use thiserror::Error;

use super::{is_absolute_iri, Iri};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MintError {
    #[error("label {0:?} is empty after sanitization")]
    EmptyLabel(String),
    #[error("namespace {0:?} is not an absolute IRI")]
    BadNamespace(String),
}

/// Trims, collapses every whitespace run to one `_`, then drops everything
/// that is not a letter, a digit or `_`.
pub fn sanitize_label(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    let mut in_space = false;
    for c in label.trim().chars() {
        if c.is_whitespace() {
            if !in_space {
                out.push('_');
                in_space = true;
            }
            continue;
        }
        in_space = false;
        if c.is_alphanumeric() || c == '_' {
            out.push(c);
        }
    }
    out
}

/// `namespace + sanitize_label(label)`. Equal labels always give equal IRIs.
pub fn mint_iri(namespace: &str, label: &str) -> Result<Iri, MintError> {
    if !is_absolute_iri(namespace) {
        return Err(MintError::BadNamespace(namespace.to_string()));
    }
    let local = sanitize_label(label);
    if local.is_empty() {
        return Err(MintError::EmptyLabel(label.to_string()));
    }
    Ok(Iri::from_trusted(format!("{namespace}{local}")))
}
