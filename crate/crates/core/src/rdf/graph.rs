use std::collections::{BTreeSet, HashMap};
use std::ops::Bound;

use super::{rdf_type, Binding, Iri, PatternTerm, PrefixMap, Term, Triple, TriplePattern};

type Id = u32;
type Key = [Id; 3];

/// Borrowed view of a stored triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TripleRef<'a> {
    pub subject: &'a Term,
    pub predicate: &'a Term,
    pub object: &'a Term,
}

impl TripleRef<'_> {
    pub fn to_triple(self) -> Triple {
        let predicate = match self.predicate {
            Term::Iri(iri) => iri.clone(),
            other => unreachable!("stored predicate is not an IRI: {other}"),
        };
        Triple::new(self.subject.clone(), predicate, self.object.clone()).expect("stored triples are well formed")
    }
}

/// In-memory triple set with SPO, POS and OSP indexes over interned terms.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    terms: Vec<Term>,
    ids: HashMap<Term, Id>,
    spo: BTreeSet<Key>,
    pos: BTreeSet<Key>,
    osp: BTreeSet<Key>,
    namespaces: PrefixMap,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn with_namespaces(namespaces: PrefixMap) -> Self {
        Graph { namespaces, ..Graph::default() }
    }

    pub fn namespaces(&self) -> &PrefixMap {
        &self.namespaces
    }

    pub fn namespaces_mut(&mut self) -> &mut PrefixMap {
        &mut self.namespaces
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    fn intern(&mut self, term: &Term) -> Id {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = Id::try_from(self.terms.len()).expect("term table overflow");
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        id
    }

    fn id_of(&self, term: &Term) -> Option<Id> {
        self.ids.get(term).copied()
    }

    /// Returns `true` when the triple was not already present.
    pub fn insert(&mut self, triple: &Triple) -> bool {
        let s = self.intern(triple.subject());
        let p = self.intern(&Term::Iri(triple.predicate().clone()));
        let o = self.intern(triple.object());
        if !self.spo.insert([s, p, o]) {
            return false;
        }
        self.pos.insert([p, o, s]);
        self.osp.insert([o, s, p]);
        true
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        let (Some(s), Some(p), Some(o)) = (
            self.id_of(triple.subject()),
            self.id_of(&Term::Iri(triple.predicate().clone())),
            self.id_of(triple.object()),
        ) else {
            return false;
        };
        if !self.spo.remove(&[s, p, o]) {
            return false;
        }
        self.pos.remove(&[p, o, s]);
        self.osp.remove(&[o, s, p]);
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        match (
            self.id_of(triple.subject()),
            self.id_of(&Term::Iri(triple.predicate().clone())),
            self.id_of(triple.object()),
        ) {
            (Some(s), Some(p), Some(o)) => self.spo.contains(&[s, p, o]),
            _ => false,
        }
    }

    pub fn extend<I: IntoIterator<Item = Triple>>(&mut self, triples: I) -> usize {
        triples.into_iter().filter(|t| self.insert(t)).count()
    }

    fn view(&self, [s, p, o]: Key) -> TripleRef<'_> {
        TripleRef { subject: &self.terms[s as usize], predicate: &self.terms[p as usize], object: &self.terms[o as usize] }
    }

    /// All triples in SPO id order (insertion-dependent, not canonical).
    pub fn iter(&self) -> impl Iterator<Item = TripleRef<'_>> + '_ {
        self.spo.iter().map(move |&k| self.view(k))
    }

    /// Triples matching the given constant positions; `None` is a wildcard.
    pub fn triples_matching<'a>(
        &'a self,
        subject: Option<&Term>,
        predicate: Option<&Term>,
        object: Option<&Term>,
    ) -> Box<dyn Iterator<Item = TripleRef<'a>> + 'a> {
        let lookup = |t: Option<&Term>| match t {
            None => Ok(None),
            Some(t) => self.id_of(t).map(Some).ok_or(()),
        };
        let (Ok(s), Ok(p), Ok(o)) = (lookup(subject), lookup(predicate), lookup(object)) else {
            return Box::new(std::iter::empty());
        };
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                if self.spo.contains(&[s, p, o]) {
                    Box::new(std::iter::once(self.view([s, p, o])))
                } else {
                    Box::new(std::iter::empty())
                }
            }
            (Some(s), Some(p), None) => Box::new(prefix_range(&self.spo, &[s, p]).map(move |k| self.view(k))),
            (Some(s), None, None) => Box::new(prefix_range(&self.spo, &[s]).map(move |k| self.view(k))),
            (None, Some(p), Some(o)) => {
                Box::new(prefix_range(&self.pos, &[p, o]).map(move |[p, o, s]| self.view([s, p, o])))
            }
            (None, Some(p), None) => Box::new(prefix_range(&self.pos, &[p]).map(move |[p, o, s]| self.view([s, p, o]))),
            (Some(s), None, Some(o)) => {
                Box::new(prefix_range(&self.osp, &[o, s]).map(move |[o, s, p]| self.view([s, p, o])))
            }
            (None, None, Some(o)) => Box::new(prefix_range(&self.osp, &[o]).map(move |[o, s, p]| self.view([s, p, o]))),
            (None, None, None) => Box::new(self.iter()),
        }
    }

    pub fn objects<'a>(&'a self, subject: &Term, predicate: &Iri) -> impl Iterator<Item = &'a Term> + 'a {
        self.triples_matching(Some(subject), Some(&Term::Iri(predicate.clone())), None).map(|t| t.object)
    }

    pub fn subjects<'a>(&'a self, predicate: &Iri, object: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        self.triples_matching(None, Some(&Term::Iri(predicate.clone())), Some(object)).map(|t| t.subject)
    }

    /// Asserted `rdf:type` objects of a node (no subclass reasoning).
    pub fn types_of<'a>(&'a self, node: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        self.objects(node, &rdf_type())
    }

    pub fn has_type(&self, node: &Term, class: &Iri) -> bool {
        self.contains_terms(node, &rdf_type(), &Term::Iri(class.clone()))
    }

    pub fn contains_terms(&self, subject: &Term, predicate: &Iri, object: &Term) -> bool {
        self.triples_matching(Some(subject), Some(&Term::Iri(predicate.clone())), Some(object)).next().is_some()
    }

    /// Nodes with an asserted `rdf:type` of exactly `class`.
    pub fn instances_of<'a>(&'a self, class: &Iri) -> impl Iterator<Item = &'a Term> + 'a {
        self.subjects(&rdf_type(), &Term::Iri(class.clone()))
    }

    /// Every binding under which `pattern` instantiates to a triple of the
    /// graph. A variable repeated within the pattern must bind consistently.
    pub fn match_pattern(&self, pattern: &TriplePattern) -> Vec<Binding> {
        let constant = |p: &PatternTerm| match p {
            PatternTerm::Term(t) => Some(t.clone()),
            PatternTerm::Var(_) => None,
        };
        let s = constant(&pattern.subject);
        let p = constant(&pattern.predicate);
        let o = constant(&pattern.object);
        let mut out = Vec::new();
        'triples: for t in self.triples_matching(s.as_ref(), p.as_ref(), o.as_ref()) {
            let mut binding = Binding::new();
            for (position, value) in pattern.positions().into_iter().zip([t.subject, t.predicate, t.object]) {
                if let PatternTerm::Var(v) = position {
                    match binding.get(v) {
                        Some(existing) if existing != value => continue 'triples,
                        Some(_) => {}
                        None => {
                            binding.insert(v.clone(), value.clone());
                        }
                    }
                }
            }
            out.push(binding);
        }
        out
    }

    /// Rough result-size estimate for join ordering.
    pub fn estimate(&self, pattern: &TriplePattern) -> usize {
        let constant = |p: &PatternTerm| match p {
            PatternTerm::Term(t) => Some(t.clone()),
            PatternTerm::Var(_) => None,
        };
        let (s, p, o) = (constant(&pattern.subject), constant(&pattern.predicate), constant(&pattern.object));
        match (&s, &p, &o) {
            (None, None, None) => self.len(),
            _ => self.triples_matching(s.as_ref(), p.as_ref(), o.as_ref()).take(1024).count(),
        }
    }

    /// Triples sorted canonically (by subject, predicate, object term order).
    pub fn sorted_triples(&self) -> Vec<Triple> {
        let mut all: Vec<Triple> = self.iter().map(TripleRef::to_triple).collect();
        all.sort();
        all
    }

    /// Set equality on triples; namespace tables are ignored.
    pub fn same_triples(&self, other: &Graph) -> bool {
        self.len() == other.len() && self.iter().all(|t| other.contains(&t.to_triple()))
    }
}

fn prefix_range<'a, const N: usize>(set: &'a BTreeSet<Key>, prefix: &[Id; N]) -> impl Iterator<Item = Key> + 'a {
    let mut lo = [0; 3];
    let mut hi = [Id::MAX; 3];
    lo[..N].copy_from_slice(prefix);
    hi[..N].copy_from_slice(prefix);
    set.range((Bound::Included(lo), Bound::Included(hi))).copied()
}
