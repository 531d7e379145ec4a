//! Persona to learning path to ordered modules.
//!
//! A step's successors are its `hasNextLearningStep` objects together with
//! every step naming it via `hasPreviousLearningStep`; predecessors mirror
//! that. The chain head is the unique step without a predecessor.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::rdf::{mint_iri, Graph, Iri, Namespaces, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("{0} is not typed LearningPath")]
    NotALearningPath(String),
    #[error("learning path {0} has no steps")]
    EmptyPath(String),
    #[error("step {step} links to {other}, which is not a step of this path")]
    OutsideStep { step: String, other: String },
    #[error("step {step} has {} next steps: {}", .successors.len(), .successors.join(", "))]
    Branch { step: String, successors: Vec<String> },
    #[error("next/previous edges disagree at {step}: {detail}")]
    InverseMismatch { step: String, detail: String },
    #[error("cycle through steps {}", .0.join(", "))]
    Cycle(Vec<String>),
    #[error("broken chain: {} steps have no previous step ({})", .0.len(), .0.join(", "))]
    BrokenChain(Vec<String>),
    #[error("{0} is not typed Persona")]
    NotAPersona(String),
    #[error("persona {0} determines no learning path")]
    NoPath(String),
    #[error("persona {persona} determines {} learning paths: {}", .paths.len(), .paths.join(", "))]
    AmbiguousPath { persona: String, paths: Vec<String> },
    #[error("no persona matches {0:?}")]
    UnknownPersona(String),
    #[error("{query:?} matches several personas: {}", .candidates.join(", "))]
    AmbiguousPersona { query: String, candidates: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub step: Term,
    pub module: Option<Term>,
    pub title: Option<String>,
}

/// A linearized learning path with non-fatal findings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathView {
    pub persona: Option<Term>,
    pub path: Term,
    pub steps: Vec<PathStep>,
    pub diagnostics: Vec<String>,
}

impl PathView {
    pub fn step_terms(&self) -> Vec<&Term> {
        self.steps.iter().map(|s| &s.step).collect()
    }

    pub fn modules(&self) -> Vec<Option<&Term>> {
        self.steps.iter().map(|s| s.module.as_ref()).collect()
    }
}

fn show(t: &Term) -> String {
    match t {
        Term::Iri(i) => i.as_str().to_string(),
        other => other.to_string(),
    }
}

impl fmt::Display for PathView {
    /// Tab-separated: position, step, module, module title.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "#\tstep\tmodule\ttitle")?;
        for (i, s) in self.steps.iter().enumerate() {
            let module = s.module.as_ref().map(show).unwrap_or_default();
            writeln!(f, "{}\t{}\t{}\t{}", i + 1, show(&s.step), module, s.title.as_deref().unwrap_or(""))?;
        }
        for d in &self.diagnostics {
            writeln!(f, "# note: {d}")?;
        }
        Ok(())
    }
}

/// Result of asking for the module after a given one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NextModule {
    Next { module: Term, title: Option<String> },
    EndOfPath,
    TitleNotFound,
}

pub struct PathEngine<'g> {
    graph: &'g Graph,
    ns: Namespaces,
}

impl<'g> PathEngine<'g> {
    pub fn new(graph: &'g Graph, ns: &Namespaces) -> Self {
        PathEngine { graph, ns: ns.clone() }
    }

    fn ont(&self, local: &str) -> Iri {
        self.ns.ont(local)
    }

    fn objects(&self, s: &Term, p: &str) -> BTreeSet<Term> {
        self.graph.objects(s, &self.ont(p)).cloned().collect()
    }

    fn subjects(&self, p: &str, o: &Term) -> BTreeSet<Term> {
        self.graph.subjects(&self.ont(p), o).cloned().collect()
    }

    fn successors(&self, s: &Term) -> BTreeSet<Term> {
        let mut out = self.objects(s, "hasNextLearningStep");
        out.extend(self.subjects("hasPreviousLearningStep", s));
        out
    }

    fn predecessors(&self, s: &Term) -> BTreeSet<Term> {
        let mut out = self.objects(s, "hasPreviousLearningStep");
        out.extend(self.subjects("hasNextLearningStep", s));
        out
    }

    pub fn linearize(&self, path: &Term) -> Result<PathView, PathError> {
        if !self.graph.has_type(path, &self.ont("LearningPath")) {
            return Err(PathError::NotALearningPath(show(path)));
        }
        let steps = self.objects(path, "hasLearningStep");
        if steps.is_empty() {
            return Err(PathError::EmptyPath(show(path)));
        }

        let mut succ: BTreeMap<&Term, BTreeSet<Term>> = BTreeMap::new();
        let mut pred: BTreeMap<&Term, BTreeSet<Term>> = BTreeMap::new();
        for s in &steps {
            let (next, prev) = (self.successors(s), self.predecessors(s));
            if let Some(other) = next.iter().chain(&prev).find(|o| !steps.contains(*o)) {
                return Err(PathError::OutsideStep { step: show(s), other: show(other) });
            }
            succ.insert(s, next);
            pred.insert(s, prev);
        }
        for (s, next) in &succ {
            if next.len() > 1 {
                return Err(PathError::Branch { step: show(s), successors: next.iter().map(show).collect() });
            }
        }
        for s in &steps {
            for next in self.objects(s, "hasNextLearningStep") {
                let declared = self.objects(&next, "hasPreviousLearningStep");
                if let Some(other) = declared.iter().find(|p| *p != s) {
                    let detail = format!("next is {}, whose previous is {}", show(&next), show(other));
                    return Err(PathError::InverseMismatch { step: show(s), detail });
                }
            }
            for prev in self.objects(s, "hasPreviousLearningStep") {
                let declared = self.objects(&prev, "hasNextLearningStep");
                if let Some(other) = declared.iter().find(|n| *n != s) {
                    let detail = format!("previous is {}, whose next is {}", show(&prev), show(other));
                    return Err(PathError::InverseMismatch { step: show(s), detail });
                }
            }
        }

        let heads: Vec<&Term> = steps.iter().filter(|s| pred[s].is_empty()).collect();
        let head = match heads.as_slice() {
            [] => {
                let start = steps.iter().next().expect("non-empty");
                return Err(PathError::Cycle(cycle_from(start, &succ)));
            }
            [h] => *h,
            many => return Err(PathError::BrokenChain(many.iter().map(|t| show(t)).collect())),
        };

        let mut order = vec![head.clone()];
        let mut seen: BTreeSet<&Term> = BTreeSet::from([head]);
        let mut cur = head;
        while let Some(next) = succ[cur].iter().next() {
            if !seen.insert(next) {
                return Err(PathError::Cycle(cycle_from(next, &succ)));
            }
            order.push(next.clone());
            cur = steps.get(next).expect("successors are steps");
        }
        if order.len() != steps.len() {
            // Predecessors of unvisited steps are unvisited, so walking them back closes a cycle.
            let leftover = steps.iter().find(|s| !seen.contains(s)).expect("some step unvisited");
            return Err(PathError::Cycle(cycle_from(leftover, &pred)));
        }

        let mut diagnostics = Vec::new();
        let first = &order[0];
        let last = order.last().expect("non-empty");
        if !self.graph.has_type(first, &self.ont("FirstLearningStep")) {
            diagnostics.push(format!("first step {} is not typed FirstLearningStep", show(first)));
        }
        if !self.graph.has_type(last, &self.ont("LastLearningStep")) {
            diagnostics.push(format!("last step {} is not typed LastLearningStep", show(last)));
        }
        let mut out = Vec::with_capacity(order.len());
        for step in order {
            let modules = self.objects(&step, "refersTo");
            if modules.len() != 1 {
                diagnostics.push(format!("step {} refers to {} modules", show(&step), modules.len()));
            }
            let module = modules.into_iter().next();
            let title = module.as_ref().and_then(|m| self.title(m));
            out.push(PathStep { step, module, title });
        }
        Ok(PathView { persona: None, path: path.clone(), steps: out, diagnostics })
    }

    fn title(&self, node: &Term) -> Option<String> {
        self.graph.objects(node, &self.ont("hasTitle")).filter_map(|t| t.as_literal()).map(|l| l.lexical().to_string()).min()
    }

    pub fn resolve_persona(&self, persona: &Term) -> Result<PathView, PathError> {
        if !self.graph.has_type(persona, &self.ont("Persona")) {
            return Err(PathError::NotAPersona(show(persona)));
        }
        let paths = self.objects(persona, "determines");
        let path = match paths.len() {
            0 => return Err(PathError::NoPath(show(persona))),
            1 => paths.into_iter().next().expect("one"),
            _ => return Err(PathError::AmbiguousPath { persona: show(persona), paths: paths.iter().map(show).collect() }),
        };
        let mut view = self.linearize(&path)?;
        view.persona = Some(persona.clone());
        Ok(view)
    }

    /// The module following the step whose module is titled `title`
    /// (exact match after trimming).
    pub fn next_module_after(&self, persona: &Term, title: &str) -> Result<NextModule, PathError> {
        let view = self.resolve_persona(persona)?;
        let wanted = title.trim();
        let Some(pos) = view.steps.iter().position(|s| s.title.as_deref().map(str::trim) == Some(wanted)) else {
            return Ok(NextModule::TitleNotFound);
        };
        Ok(match view.steps.get(pos + 1) {
            None => NextModule::EndOfPath,
            Some(next) => match &next.module {
                Some(m) => NextModule::Next { module: m.clone(), title: next.title.clone() },
                None => NextModule::EndOfPath,
            },
        })
    }

    /// Accepts `<iri>`, an absolute IRI, a prefixed name, a persona label
    /// (`asString` or `hasName`), or a label minted into the resource namespace.
    pub fn find_persona(&self, query: &str) -> Result<Term, PathError> {
        let q = query.trim();
        let persona_class = self.ont("Persona");
        let is_persona = |t: &Term| self.graph.has_type(t, &persona_class);
        let bare = q.strip_prefix('<').and_then(|r| r.strip_suffix('>')).unwrap_or(q);
        if let Ok(t) = Term::iri(bare) {
            if is_persona(&t) {
                return Ok(t);
            }
        }
        if let Some((prefix, local)) = q.split_once(':') {
            if let Some(t) = self.graph.namespaces().expand(prefix, local).and_then(|i| Term::iri(i).ok()) {
                if is_persona(&t) {
                    return Ok(t);
                }
            }
        }
        let mut by_label = BTreeSet::new();
        for p in ["asString", "hasName"] {
            for t in self.graph.subjects(&self.ont(p), &Term::literal(q)) {
                if is_persona(t) {
                    by_label.insert(t.clone());
                }
            }
        }
        match by_label.len() {
            1 => return Ok(by_label.into_iter().next().expect("one")),
            0 => {}
            _ => return Err(PathError::AmbiguousPersona { query: q.to_string(), candidates: by_label.iter().map(show).collect() }),
        }
        if let Ok(iri) = mint_iri(self.ns.resource(), q) {
            let t = Term::Iri(iri);
            if is_persona(&t) {
                return Ok(t);
            }
        }
        Err(PathError::UnknownPersona(q.to_string()))
    }
}

/// Steps of the cycle reached by following `edges` from `start`, sorted.
fn cycle_from(start: &Term, edges: &BTreeMap<&Term, BTreeSet<Term>>) -> Vec<String> {
    let mut trail: Vec<&Term> = Vec::new();
    let mut cur = start;
    loop {
        if let Some(i) = trail.iter().position(|t| *t == cur) {
            let mut cycle: Vec<String> = trail[i..].iter().map(|t| show(t)).collect();
            cycle.sort();
            return cycle;
        }
        trail.push(cur);
        match edges.get(cur).and_then(|n| n.iter().next()) {
            Some(next) => cur = edges.get_key_value(next).map(|(k, _)| *k).expect("successors are steps"),
            None => {
                // No cycle on this trail; report the steps walked.
                return trail.iter().map(|t| show(t)).collect();
            }
        }
    }
}
