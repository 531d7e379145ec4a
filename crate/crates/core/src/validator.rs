//! Closed-world evaluation of the catalog's axiom checks.
//!
//! Absent triples falsify existence requirements; nothing is inferred except
//! class membership through the catalog's subclass edges.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use rayon::prelude::*;
use thiserror::Error;

use crate::rdf::{Graph, Term};
use crate::schema::{AxiomCheck, CheckKind, Filler, SchemaCatalog, Scope};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("unknown check code {0:?}")]
    UnknownCode(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub code: String,
    pub focus: Term,
    pub message: String,
}

/// Violations sorted by (code, focus), at most one per pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ViolationReport {
    entries: Vec<Violation>,
}

impl ViolationReport {
    fn from_unsorted(mut entries: Vec<Violation>) -> Self {
        entries.sort_by(|a, b| (&a.code, &a.focus).cmp(&(&b.code, &b.focus)));
        entries.dedup_by(|a, b| a.code == b.code && a.focus == b.focus);
        ViolationReport { entries }
    }

    pub fn entries(&self) -> &[Violation] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn summary(&self) -> BTreeMap<&str, usize> {
        let mut counts = BTreeMap::new();
        for v in &self.entries {
            *counts.entry(v.code.as_str()).or_insert(0) += 1;
        }
        counts
    }

    pub fn codes(&self) -> BTreeSet<&str> {
        self.entries.iter().map(|v| v.code.as_str()).collect()
    }

    pub fn contains(&self, code: &str, focus: &Term) -> bool {
        self.entries.iter().any(|v| v.code == code && &v.focus == focus)
    }

    /// Summary block (`# ` lines) followed by `code<TAB>focus<TAB>message` records.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let noun = if self.entries.len() == 1 { "violation" } else { "violations" };
        writeln!(out, "# {} {noun}", self.entries.len()).unwrap();
        for (code, n) in self.summary() {
            writeln!(out, "# {code}\t{n}").unwrap();
        }
        for v in &self.entries {
            let focus = match &v.focus {
                Term::Iri(iri) => iri.as_str().to_string(),
                other => other.to_string(),
            };
            writeln!(out, "{}\t{}\t{}", v.code, focus, v.message.replace(['\t', '\n'], " ")).unwrap();
        }
        out
    }
}

pub fn run_check(graph: &Graph, catalog: &SchemaCatalog, code: &str) -> Result<ViolationReport, ValidationError> {
    let check = catalog.check(code).ok_or_else(|| ValidationError::UnknownCode(code.to_string()))?;
    Ok(ViolationReport::from_unsorted(evaluate(graph, catalog, check)))
}

/// Every registered check, evaluated in parallel.
pub fn run_all(graph: &Graph, catalog: &SchemaCatalog) -> ViolationReport {
    let entries = catalog
        .checks()
        .par_iter()
        .filter(|c| c.kind != CheckKind::Tautology)
        .flat_map_iter(|c| evaluate(graph, catalog, c))
        .collect();
    ViolationReport::from_unsorted(entries)
}

struct Ctx<'a> {
    graph: &'a Graph,
    catalog: &'a SchemaCatalog,
    check: &'a AxiomCheck,
}

impl Ctx<'_> {
    fn fills(&self, node: &Term) -> bool {
        match &self.check.filler {
            Filler::Class(c) => self.catalog.is_instance(self.graph, node, c),
            Filler::AnyOf(cs) => cs.iter().any(|c| self.catalog.is_instance(self.graph, node, c)),
            Filler::Literal => node.is_literal(),
            Filler::Anything => true,
        }
    }

    fn filler_label(&self) -> String {
        match &self.check.filler {
            Filler::Class(c) => short(c.as_str()),
            Filler::AnyOf(cs) => cs.iter().map(|c| short(c.as_str())).collect::<Vec<_>>().join(" or "),
            Filler::Literal => "string".into(),
            Filler::Anything => "anything".into(),
        }
    }

    fn scope_members(&self) -> BTreeSet<Term> {
        match &self.check.scope {
            Scope::Class(c) => self.catalog.instances(self.graph, c),
            Scope::Everything => self.graph.triples_matching(None, Some(&Term::Iri(self.check.property.clone())), None).map(|t| t.subject.clone()).collect(),
        }
    }

    fn values(&self, focus: &Term) -> BTreeSet<&Term> {
        self.graph.objects(focus, &self.check.property).collect()
    }

    fn violation(&self, focus: &Term, message: String) -> Violation {
        Violation { code: self.check.code.clone(), focus: focus.clone(), message }
    }
}

fn short(iri: &str) -> String {
    iri.rsplit(['/', '#']).next().unwrap_or(iri).to_string()
}

fn evaluate(graph: &Graph, catalog: &SchemaCatalog, check: &AxiomCheck) -> Vec<Violation> {
    let ctx = Ctx { graph, catalog, check };
    let prop = short(check.property.as_str());
    let mut out = Vec::new();
    match check.kind {
        CheckKind::Tautology => {}
        CheckKind::Existential | CheckKind::MinCard(_) | CheckKind::MaxCard(_) | CheckKind::ExactCard(_) | CheckKind::NegativeType => {
            for focus in ctx.scope_members() {
                let values = ctx.values(&focus);
                if check.filler == Filler::Literal {
                    if let Some(bad) = values.iter().find(|v| !v.is_literal()) {
                        out.push(ctx.violation(&focus, format!("{prop} value {bad} is not a string literal")));
                        continue;
                    }
                }
                let count = values.iter().filter(|v| ctx.fills(v)).count();
                let filler = ctx.filler_label();
                let message = match check.kind {
                    CheckKind::Existential if count == 0 => Some(format!("missing {prop} to a {filler}")),
                    CheckKind::MinCard(n) if count < n => Some(format!("has {count} {prop} to {filler}, needs at least {n}")),
                    CheckKind::MaxCard(n) if count > n => Some(format!("has {count} {prop} values, allows at most {n}")),
                    CheckKind::ExactCard(n) if count != n => Some(format!("has {count} {prop} to {filler}, needs exactly {n}")),
                    CheckKind::NegativeType if count > 0 => Some(format!(
                        "is a {} but has {prop} to a {filler}",
                        match &check.scope {
                            Scope::Class(c) => short(c.as_str()),
                            Scope::Everything => "node".into(),
                        }
                    )),
                    _ => None,
                };
                if let Some(m) = message {
                    out.push(ctx.violation(&focus, m));
                }
            }
        }
        CheckKind::VocabMembership => {
            let Filler::Class(vocab) = &check.filler else {
                unreachable!("vocabulary checks name their vocabulary class");
            };
            for focus in ctx.scope_members() {
                let values = ctx.values(&focus);
                if values.is_empty() {
                    out.push(ctx.violation(&focus, format!("missing {prop}")));
                } else if let Some(bad) = values.iter().find(|v| !catalog.is_vocabulary_member(graph, vocab, v)) {
                    out.push(ctx.violation(&focus, format!("{prop} value {bad} is not a member of {}", short(vocab.as_str()))));
                }
            }
        }
        CheckKind::InverseExistential => {
            for focus in ctx.scope_members() {
                if !graph.subjects(&check.property, &focus).any(|s| ctx.fills(s)) {
                    out.push(ctx.violation(&focus, format!("no {} points at it via {prop}", ctx.filler_label())));
                }
            }
        }
        CheckKind::Domain => {
            let Scope::Class(required) = &check.scope else {
                unreachable!("domain checks name the required class");
            };
            let subjects: BTreeSet<&Term> = graph
                .triples_matching(None, Some(&Term::Iri(check.property.clone())), None)
                .filter(|t| ctx.fills(t.object))
                .map(|t| t.subject)
                .collect();
            for s in subjects {
                if !catalog.is_instance(graph, s, required) {
                    out.push(ctx.violation(s, format!("has {prop} to a {} but is not a {}", ctx.filler_label(), short(required.as_str()))));
                }
            }
        }
    }
    out
}
