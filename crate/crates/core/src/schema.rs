//! The Curriculum KG ontology as data: classes, properties, subclass edges,
//! controlled vocabularies and the registry of axiom checks.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::rdf::{mint_iri, sanitize_label, Graph, Iri, Namespaces, Term};

pub const CLASSES: &[&str] = &[
    "Curriculum",
    "Module",
    "Topic",
    "Category",
    "Level",
    "Media",
    "Event",
    "Person",
    "Author",
    "Persona",
    "ParticipantRole",
    "Profession",
    "LearningPath",
    "LearningStep",
    "FirstLearningStep",
    "LastLearningStep",
    "PersonaType",
    "Audience",
    "Language",
];

/// Media kinds. Plain subclasses of `Media` with no constraints of their own.
pub const MEDIA_SUBCLASSES: &[&str] = &["Article", "Book", "Podcast", "Transcript", "Video"];

pub const PROPERTIES: &[&str] = &[
    "hasTitle",
    "hasModule",
    "coversTopic",
    "broaderThan",
    "narrowerThan",
    "references",
    "hasSubEvent",
    "provides",
    "assumesAuthorship",
    "assumesPersona",
    "hasName",
    "scopedBy",
    "hasLearningStep",
    "determines",
    "hasNextLearningStep",
    "hasPreviousLearningStep",
    "refersTo",
    "hasLevel",
    "belongsTo",
    "hasProfession",
    "hasType",
    "asString",
];

/// Properties outside the axiomatised core: media authorship as queried by
/// the competency questions, and the edges for URL, language and audience
/// columns of the tabular input.
pub const AUXILIARY_PROPERTIES: &[&str] = &["hasAuthor", "hasUrl", "hasLanguage", "hasAudience"];

/// Documented alias only; nothing in the catalog uses it.
pub const SUBEVENT_SUPERPROPERTY: &str = "po-feature";

pub const VOCABULARY_CLASSES: &[&str] = &["PersonaType", "Level", "Audience", "Language"];

pub const DEFAULT_LEVELS: &[&str] = &["Beginner", "Intermediate", "Advanced"];
pub const DEFAULT_PERSONA_TYPES: &[&str] =
    &["Developer", "Instructor", "Analyst", "Executive", "GraduateStudent", "Enthusiast", "Contributor"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemaError {
    #[error("line {line}: unknown vocabulary {name:?} (expected one of PersonaType, Level, Audience, Language)")]
    UnknownVocabulary { line: usize, name: String },
    #[error("line {line}: expected `Vocabulary: member, member, ...`")]
    Malformed { line: usize },
    #[error("line {line}: member {member:?} of {vocabulary} is empty after sanitization")]
    BadMember { line: usize, vocabulary: String, member: String },
}

/// Which individuals a check quantifies over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Instances of the class or any of its subclasses.
    Class(Iri),
    /// Every subject of the check's property.
    Everything,
}

/// What counts as a correct value at the far end of the property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Filler {
    Class(Iri),
    AnyOf(Vec<Iri>),
    /// Any literal; a non-literal value is itself a violation.
    Literal,
    Anything,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    /// At least one value satisfying the filler.
    Existential,
    MinCard(usize),
    MaxCard(usize),
    ExactCard(usize),
    /// Some node of the filler class points at the focus via the property.
    InverseExistential,
    /// A subject pointing at a filler-typed node must be in the scope class.
    Domain,
    /// Scope instances must not point at a filler-typed node.
    NegativeType,
    /// At least one value, and every value is a member of the filler vocabulary.
    VocabMembership,
    /// Always satisfied; documents intended edge usage.
    Tautology,
}

impl CheckKind {
    pub fn label(&self) -> String {
        match self {
            CheckKind::Existential => "existential".into(),
            CheckKind::MinCard(n) => format!("min-card({n})"),
            CheckKind::MaxCard(n) => format!("max-card({n})"),
            CheckKind::ExactCard(n) => format!("exact-card({n})"),
            CheckKind::InverseExistential => "inverse-existential".into(),
            CheckKind::Domain => "domain".into(),
            CheckKind::NegativeType => "negative-type".into(),
            CheckKind::VocabMembership => "vocab-membership".into(),
            CheckKind::Tautology => "tautology".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub code: String,
    pub description: String,
    pub scope: Scope,
    pub kind: CheckKind,
    pub property: Iri,
    pub filler: Filler,
}

/// A controlled vocabulary: `None` means open (membership not enforced).
pub type Members = Option<BTreeSet<String>>;

#[derive(Clone, Debug)]
pub struct SchemaCatalog {
    ns: Namespaces,
    classes: BTreeSet<Iri>,
    properties: BTreeSet<Iri>,
    superclasses: BTreeMap<Iri, Vec<Iri>>,
    vocabularies: BTreeMap<String, Members>,
    checks: Vec<AxiomCheck>,
    alternatives: Vec<AxiomCheck>,
}

/// The catalog for the default namespaces.
pub fn builtin_catalog() -> SchemaCatalog {
    SchemaCatalog::builtin(&Namespaces::default())
}

impl SchemaCatalog {
    pub fn builtin(ns: &Namespaces) -> Self {
        let class = |n: &str| ns.ont(n);
        let mut superclasses: BTreeMap<Iri, Vec<Iri>> = BTreeMap::new();
        let mut subclass = |sub: &str, sup: &str| superclasses.entry(class(sub)).or_default().push(class(sup));
        subclass("Author", "ParticipantRole");
        subclass("Persona", "ParticipantRole");
        subclass("FirstLearningStep", "LearningStep");
        subclass("LastLearningStep", "LearningStep");
        for m in MEDIA_SUBCLASSES {
            subclass(m, "Media");
        }

        let mut vocabularies = BTreeMap::new();
        vocabularies.insert("Level".to_string(), Some(DEFAULT_LEVELS.iter().map(|s| s.to_string()).collect()));
        vocabularies.insert("PersonaType".to_string(), Some(DEFAULT_PERSONA_TYPES.iter().map(|s| s.to_string()).collect()));
        vocabularies.insert("Audience".to_string(), None);
        vocabularies.insert("Language".to_string(), None);

        SchemaCatalog {
            ns: ns.clone(),
            classes: CLASSES.iter().chain(MEDIA_SUBCLASSES).map(|c| class(c)).collect(),
            properties: PROPERTIES.iter().chain(AUXILIARY_PROPERTIES).map(|p| ns.ont(p)).collect(),
            superclasses,
            vocabularies,
            checks: axiom_checks(ns),
            alternatives: alternative_checks(ns),
        }
    }

    pub fn namespaces(&self) -> &Namespaces {
        &self.ns
    }

    pub fn class(&self, local: &str) -> Iri {
        self.ns.ont(local)
    }

    pub fn property(&self, local: &str) -> Iri {
        self.ns.ont(local)
    }

    pub fn classes(&self) -> impl Iterator<Item = &Iri> {
        self.classes.iter()
    }

    pub fn properties(&self) -> impl Iterator<Item = &Iri> {
        self.properties.iter()
    }

    pub fn is_class(&self, iri: &Iri) -> bool {
        self.classes.contains(iri)
    }

    pub fn is_property(&self, iri: &Iri) -> bool {
        self.properties.contains(iri)
    }

    pub fn direct_superclasses(&self, class: &Iri) -> &[Iri] {
        self.superclasses.get(class).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The class itself and everything above it, transitively.
    pub fn superclass_closure(&self, class: &Iri) -> BTreeSet<Iri> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![class.clone()];
        while let Some(c) = stack.pop() {
            if seen.insert(c.clone()) {
                stack.extend(self.direct_superclasses(&c).iter().cloned());
            }
        }
        seen
    }

    /// The class itself and everything below it, transitively.
    pub fn subclass_closure(&self, class: &Iri) -> BTreeSet<Iri> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![class.clone()];
        while let Some(c) = stack.pop() {
            if seen.insert(c.clone()) {
                for (sub, sups) in &self.superclasses {
                    if sups.contains(&c) {
                        stack.push(sub.clone());
                    }
                }
            }
        }
        seen
    }

    pub fn is_subclass_of(&self, sub: &Iri, sup: &Iri) -> bool {
        self.superclass_closure(sub).contains(sup)
    }

    /// Typed `class` directly or through a subclass.
    pub fn is_instance(&self, graph: &Graph, node: &Term, class: &Iri) -> bool {
        self.subclass_closure(class).iter().any(|c| graph.has_type(node, c))
    }

    /// Distinct nodes typed `class` or any subclass, in term order.
    pub fn instances(&self, graph: &Graph, class: &Iri) -> BTreeSet<Term> {
        self.subclass_closure(class).iter().flat_map(|c| graph.instances_of(c).cloned()).collect()
    }

    pub fn vocabulary_names(&self) -> impl Iterator<Item = &str> {
        self.vocabularies.keys().map(String::as_str)
    }

    pub fn is_vocabulary(&self, class: &Iri) -> bool {
        self.vocabulary_of(class).is_some()
    }

    fn vocabulary_of(&self, class: &Iri) -> Option<(&str, &Members)> {
        let local = class.as_str().strip_prefix(self.ns.ontology())?;
        self.vocabularies.get_key_value(local).map(|(k, v)| (k.as_str(), v))
    }

    pub fn vocabulary_members(&self, name: &str) -> Option<&Members> {
        self.vocabularies.get(name)
    }

    /// IRI of a controlled-vocabulary individual. Members live in the
    /// ontology namespace, since the vocabulary is part of the ontology.
    pub fn vocabulary_member_iri(&self, label: &str) -> Option<Iri> {
        mint_iri(self.ns.ontology(), label).ok()
    }

    /// Closed vocabulary: the node is one of the member IRIs. Open
    /// vocabulary: the node is typed with the vocabulary class.
    pub fn is_vocabulary_member(&self, graph: &Graph, class: &Iri, node: &Term) -> bool {
        match self.vocabulary_of(class) {
            Some((_, Some(members))) => {
                node.as_iri().is_some_and(|iri| members.iter().any(|m| self.vocabulary_member_iri(m).as_ref() == Some(iri)))
            }
            Some((_, None)) | None => self.is_instance(graph, node, class),
        }
    }

    pub fn checks(&self) -> &[AxiomCheck] {
        &self.checks
    }

    /// Disabled alternative readings; runnable by code, never by `run_all`.
    pub fn alternative_checks(&self) -> &[AxiomCheck] {
        &self.alternatives
    }

    pub fn check(&self, code: &str) -> Option<&AxiomCheck> {
        self.checks.iter().chain(&self.alternatives).find(|c| c.code == code)
    }

    /// Codes of registered checks that can fire (everything but tautologies).
    pub fn active_codes(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| c.kind != CheckKind::Tautology).map(|c| c.code.as_str()).collect()
    }

    /// Replaces vocabulary member lists from `Vocabulary: a, b, c` lines.
    /// `*` as the member list makes the vocabulary open.
    pub fn load_vocab_overrides(mut self, config: &str) -> Result<Self, SchemaError> {
        for (idx, raw) in config.lines().enumerate() {
            let line = idx + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let (name, members) = text.split_once(':').ok_or(SchemaError::Malformed { line })?;
            let name = name.trim();
            let name = name.strip_prefix("edu-ont:").unwrap_or(name);
            if !self.vocabularies.contains_key(name) {
                return Err(SchemaError::UnknownVocabulary { line, name: name.to_string() });
            }
            let members = members.trim();
            let list = if members == "*" {
                None
            } else {
                let mut set = BTreeSet::new();
                for m in members.split(',').map(str::trim).filter(|m| !m.is_empty()) {
                    if sanitize_label(m).is_empty() {
                        return Err(SchemaError::BadMember { line, vocabulary: name.to_string(), member: m.to_string() });
                    }
                    set.insert(m.to_string());
                }
                Some(set)
            };
            self.vocabularies.insert(name.to_string(), list);
        }
        Ok(self)
    }
}

fn axiom_checks(ns: &Namespaces) -> Vec<AxiomCheck> {
    let c = |n: &str| ns.ont(n);
    let check = |code: &str, description: &str, scope: Scope, kind: CheckKind, property: &str, filler: Filler| AxiomCheck {
        code: code.to_string(),
        description: description.to_string(),
        scope,
        kind,
        property: ns.ont(property),
        filler,
    };
    let cls = |n: &str| Scope::Class(c(n));
    let fill = |n: &str| Filler::Class(c(n));
    use CheckKind::*;
    vec![
        check("C1", "Every Curriculum has a title represented as a string", cls("Curriculum"), Existential, "hasTitle", Filler::Literal),
        check("C2", "Every Curriculum has at least one Module", cls("Curriculum"), MinCard(1), "hasModule", fill("Module")),
        check("A1", "Whoever assumes an Author role is a Person", cls("Person"), Domain, "assumesAuthorship", fill("Author")),
        check("A2", "Whoever assumes a Persona is a Person", cls("Person"), Domain, "assumesPersona", fill("Persona")),
        check("A3", "Every Author has a name represented as a string", cls("Author"), Existential, "hasName", Filler::Literal),
        check("LP1", "Every Learning Path is scoped by a Curriculum", cls("LearningPath"), Existential, "scopedBy", fill("Curriculum")),
        check("LP2", "Every Learning Path has at least one Learning Step", cls("LearningPath"), Existential, "hasLearningStep", fill("LearningStep")),
        check(
            "LP3",
            "Every Learning Path is determined by at least one Curriculum or Persona",
            cls("LearningPath"),
            InverseExistential,
            "determines",
            Filler::AnyOf(vec![c("Curriculum"), c("Persona")]),
        ),
        check("LS1", "Every node has at most one next learning step", Scope::Everything, MaxCard(1), "hasNextLearningStep", Filler::Anything),
        check("LS2", "Every node has at most one previous learning step", Scope::Everything, MaxCard(1), "hasPreviousLearningStep", Filler::Anything),
        check("LS3", "A step with a previous learning step is not a first learning step", cls("FirstLearningStep"), NegativeType, "hasPreviousLearningStep", fill("LearningStep")),
        check("LS4", "A step with a next learning step is not a last learning step", cls("LastLearningStep"), NegativeType, "hasNextLearningStep", fill("LearningStep")),
        check("LS5", "Every learning step refers to exactly one Module", cls("LearningStep"), ExactCard(1), "refersTo", fill("Module")),
        check("M1", "Every Module covers a Topic", cls("Module"), Existential, "coversTopic", fill("Topic")),
        check("M2", "Every Module has a title represented as a string", cls("Module"), Existential, "hasTitle", Filler::Literal),
        check("M3", "Every Module has a Level from the Level vocabulary", cls("Module"), VocabMembership, "hasLevel", fill("Level")),
        check("M4", "Every Module belongs to a Category", cls("Module"), Existential, "belongsTo", fill("Category")),
        check("M5", "Every Module references some Media", cls("Module"), Existential, "references", fill("Media")),
        check("CAT1", "Every Category has some Module belonging to it", cls("Category"), InverseExistential, "belongsTo", fill("Module")),
        check("E1", "Every Event has zero or more sub-events", cls("Event"), Tautology, "hasSubEvent", fill("Event")),
        check("E2", "Every Event provides some Media", cls("Event"), Existential, "provides", fill("Media")),
        check("P1", "Every Persona has exactly one Profession", cls("Persona"), ExactCard(1), "hasProfession", fill("Profession")),
        check("P2", "Every Persona has a type from the PersonaType vocabulary", cls("Persona"), VocabMembership, "hasType", fill("PersonaType")),
        check("P3", "Every Persona determines exactly one Learning Path", cls("Persona"), ExactCard(1), "determines", fill("LearningPath")),
        check("P4", "Every Persona is assumed by at least one Person", cls("Persona"), InverseExistential, "assumesPersona", fill("Person")),
        check("T1", "Every Topic has exactly one string value", cls("Topic"), ExactCard(1), "asString", Filler::Literal),
    ]
}

fn alternative_checks(ns: &Namespaces) -> Vec<AxiomCheck> {
    vec![AxiomCheck {
        code: "CAT1-LITERAL".into(),
        description: "Every Category is the object of some Module's hasModule edge".into(),
        scope: Scope::Class(ns.ont("Category")),
        kind: CheckKind::InverseExistential,
        property: ns.ont("hasModule"),
        filler: Filler::Class(ns.ont("Module")),
    }]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{rdf_type, Triple};

    #[test]
    fn c2_is_min_card_one_on_curriculum() {
        let cat = builtin_catalog();
        let c2 = cat.check("C2").unwrap();
        assert_eq!(c2.kind, CheckKind::MinCard(1));
        assert_eq!(c2.property, cat.property("hasModule"));
        assert_eq!(c2.scope, Scope::Class(cat.class("Curriculum")));
    }

    #[test]
    fn ls5_is_exact_card_one_refers_to() {
        let cat = builtin_catalog();
        let ls5 = cat.check("LS5").unwrap();
        assert_eq!(ls5.kind, CheckKind::ExactCard(1));
        assert_eq!(ls5.property, cat.property("refersTo"));
        assert_eq!(ls5.scope, Scope::Class(cat.class("LearningStep")));
    }

    #[test]
    fn first_step_is_a_learning_step() {
        let cat = builtin_catalog();
        assert!(cat.is_subclass_of(&cat.class("FirstLearningStep"), &cat.class("LearningStep")));
        assert!(cat.is_subclass_of(&cat.class("Author"), &cat.class("ParticipantRole")));
        assert!(!cat.is_subclass_of(&cat.class("LearningStep"), &cat.class("FirstLearningStep")));
    }

    #[test]
    fn registry_shape() {
        let cat = builtin_catalog();
        assert_eq!(cat.checks().len(), 26);
        assert_eq!(cat.active_codes().len(), 25);
        let codes: BTreeSet<_> = cat.checks().iter().map(|c| c.code.as_str()).collect();
        assert_eq!(codes.len(), 26, "codes are unique");
        assert_eq!(cat.check("E1").unwrap().kind, CheckKind::Tautology);
        assert!(cat.check("CAT1-LITERAL").is_some());
        assert!(!cat.active_codes().contains(&"CAT1-LITERAL"));
    }

    #[test]
    fn properties_live_in_ontology_namespace() {
        let cat = builtin_catalog();
        assert!(cat.properties().all(|p| p.as_str().starts_with(cat.namespaces().ontology())));
        assert_eq!(cat.properties().count(), PROPERTIES.len() + AUXILIARY_PROPERTIES.len());
    }

    #[test]
    fn subclass_instances_are_counted() {
        let cat = builtin_catalog();
        let mut g = Graph::new();
        let step = Term::Iri(cat.namespaces().res("S1"));
        g.insert(&Triple::new(step.clone(), rdf_type(), cat.class("FirstLearningStep")).unwrap());
        assert!(cat.is_instance(&g, &step, &cat.class("LearningStep")));
        assert_eq!(cat.instances(&g, &cat.class("LearningStep")).len(), 1);
    }

    #[test]
    fn empty_override_changes_nothing() {
        let cat = builtin_catalog().load_vocab_overrides("").unwrap();
        assert_eq!(cat.vocabulary_members("Level"), builtin_catalog().vocabulary_members("Level"));
    }

    #[test]
    fn level_override_accepts_exactly_listed_members() {
        let cat = builtin_catalog().load_vocab_overrides("# levels\nLevel: Beginner, Intermediate, Advanced\n").unwrap();
        let g = Graph::new();
        let level = cat.class("Level");
        for m in ["Beginner", "Intermediate", "Advanced"] {
            assert!(cat.is_vocabulary_member(&g, &level, &Term::Iri(cat.namespaces().ont(m))));
        }
        assert!(!cat.is_vocabulary_member(&g, &level, &Term::Iri(cat.namespaces().ont("Expert"))));

        let cat = cat.load_vocab_overrides("Level: Expert").unwrap();
        assert!(cat.is_vocabulary_member(&g, &level, &Term::Iri(cat.namespaces().ont("Expert"))));
        assert!(!cat.is_vocabulary_member(&g, &level, &Term::Iri(cat.namespaces().ont("Beginner"))));
    }

    #[test]
    fn open_vocabulary_falls_back_to_typing() {
        let cat = builtin_catalog().load_vocab_overrides("Level: *").unwrap();
        let mut g = Graph::new();
        let node = Term::Iri(cat.namespaces().ont("Anything"));
        assert!(!cat.is_vocabulary_member(&g, &cat.class("Level"), &node));
        g.insert(&Triple::new(node.clone(), rdf_type(), cat.class("Level")).unwrap());
        assert!(cat.is_vocabulary_member(&g, &cat.class("Level"), &node));
    }

    #[test]
    fn unknown_vocabulary_rejected() {
        let err = builtin_catalog().load_vocab_overrides("Color: Red, Green").unwrap_err();
        assert_eq!(err, SchemaError::UnknownVocabulary { line: 1, name: "Color".into() });
        assert!(matches!(builtin_catalog().load_vocab_overrides("Level Beginner"), Err(SchemaError::Malformed { line: 1 })));
    }
}
