//! One targeted edit of the sample graph per active check, each expected to
//! produce exactly one violation carrying that check's code.

use currkg::rdf::{rdf_type, Graph, Iri, Namespaces, Term, Triple};

pub struct Mutation {
    pub code: &'static str,
    pub focus: &'static str,
    pub remove: &'static [[&'static str; 3]],
    pub add: &'static [[&'static str; 3]],
}

/// `r:X` resource, `o:X` ontology, `a` rdf:type, `"..."` plain literal.
fn term(ns: &Namespaces, s: &str) -> Term {
    if let Some(lit) = s.strip_prefix('"').and_then(|r| r.strip_suffix('"')) {
        Term::literal(lit)
    } else {
        Term::Iri(predicate(ns, s))
    }
}

fn predicate(ns: &Namespaces, s: &str) -> Iri {
    match s {
        "a" => rdf_type(),
        _ => match s.split_once(':') {
            Some(("r", l)) => ns.res(l),
            Some(("o", l)) => ns.ont(l),
            _ => panic!("bad term {s}"),
        },
    }
}

pub fn triple(ns: &Namespaces, [s, p, o]: [&str; 3]) -> Triple {
    Triple::new(term(ns, s), predicate(ns, p), term(ns, o)).expect("well-formed mutation triple")
}

impl Mutation {
    /// Applies the edit; panics if a removed triple was absent.
    pub fn apply(&self, graph: &mut Graph, ns: &Namespaces) {
        for t in self.remove {
            assert!(graph.remove(&triple(ns, *t)), "{}: {:?} not in graph", self.code, t);
        }
        for t in self.add {
            graph.insert(&triple(ns, *t));
        }
    }

    pub fn focus(&self, ns: &Namespaces) -> Term {
        term(ns, self.focus)
    }
}

macro_rules! m {
    ($code:literal @ $focus:literal, remove [$($r:expr),*], add [$($a:expr),*]) => {
        Mutation { code: $code, focus: $focus, remove: &[$($r),*], add: &[$($a),*] }
    };
}

pub const MUTATIONS: &[Mutation] = &[
    m!("C1" @ "r:Data_Science_Basics", remove [["r:Data_Science_Basics", "o:hasTitle", "\"Data Science Basics\""]], add []),
    m!("C2" @ "r:Data_Science_Basics", remove [["r:Data_Science_Basics", "o:hasModule", "r:100_Data_Science_Projects_in_Python_for_Beginners"]], add []),
    m!("A1" @ "r:Mystery", remove [], add [["r:Mystery", "o:assumesAuthorship", "r:Lee_Chen"]]),
    m!("A2" @ "r:Mystery", remove [], add [["r:Mystery", "o:assumesPersona", "r:Developer"]]),
    m!("A3" @ "r:Lee_Chen", remove [["r:Lee_Chen", "o:hasName", "\"Lee Chen\""]], add []),
    m!("LP1" @ "r:Executive_Path", remove [["r:Executive_Path", "o:scopedBy", "r:Data_Science_Basics"]], add []),
    m!("LP2" @ "r:Executive_Path", remove [["r:Executive_Path", "o:hasLearningStep", "r:Executive_Step_1"]], add []),
    m!("LP3" @ "r:Orphan_Path", remove [], add [
        ["r:Orphan_Path", "a", "o:LearningPath"],
        ["r:Orphan_Path", "o:scopedBy", "r:Data_Science_Basics"],
        ["r:Orphan_Path", "o:hasLearningStep", "r:Executive_Step_1"]
    ]),
    m!("LS1" @ "r:Developer_Step_1", remove [], add [["r:Developer_Step_1", "o:hasNextLearningStep", "r:Developer_Step_3"]]),
    m!("LS2" @ "r:Developer_Step_4", remove [], add [["r:Developer_Step_4", "o:hasPreviousLearningStep", "r:Developer_Step_1"]]),
    m!("LS3" @ "r:Developer_Step_1", remove [], add [["r:Developer_Step_1", "o:hasPreviousLearningStep", "r:Instructor_Step_1"]]),
    m!("LS4" @ "r:Developer_Step_4", remove [], add [["r:Developer_Step_4", "o:hasNextLearningStep", "r:Instructor_Step_2"]]),
    m!("LS5" @ "r:Executive_Step_1", remove [["r:Executive_Step_1", "o:refersTo", "r:100_Data_Science_Projects_in_Python_for_Beginners"]], add []),
    m!("M1" @ "r:Querying_with_SPARQL", remove [["r:Querying_with_SPARQL", "o:coversTopic", "r:SPARQL"]], add []),
    m!("M2" @ "r:RDF_and_Turtle", remove [["r:RDF_and_Turtle", "o:hasTitle", "\"RDF and Turtle\""]], add []),
    m!("M3" @ "r:OWL_2_Standard", remove [["r:OWL_2_Standard", "o:hasLevel", "o:Advanced"]], add []),
    m!("M4" @ "r:OWL_2_Standard", remove [["r:OWL_2_Standard", "o:belongsTo", "r:Standard"]], add []),
    m!("M5" @ "r:OWL_2_Standard", remove [["r:OWL_2_Standard", "o:references", "r:OWL_2_Primer"]], add []),
    m!("CAT1" @ "r:Orphan_Category", remove [], add [["r:Orphan_Category", "a", "o:Category"]]),
    m!("E2" @ "r:KG_Workshop", remove [["r:KG_Workshop", "o:provides", "r:SPARQL_by_Example"]], add []),
    m!("P1" @ "r:Developer", remove [], add [["r:Developer", "o:hasProfession", "r:Manager"]]),
    m!("P2" @ "r:Developer", remove [["r:Developer", "o:hasType", "o:Developer"]], add []),
    m!("P3" @ "r:Developer", remove [], add [["r:Developer", "o:determines", "r:Executive_Path"]]),
    m!("P4" @ "r:Executive", remove [["r:Alex_Kim", "o:assumesPersona", "r:Executive"]], add []),
    m!("T1" @ "r:Chemistry", remove [["r:Chemistry", "o:asString", "\"Chemistry\""]], add []),
];

/// Out-of-vocabulary values, as opposed to missing ones.
pub const VOCAB_MUTATIONS: &[Mutation] = &[
    m!("M3" @ "r:OWL_2_Standard", remove [["r:OWL_2_Standard", "o:hasLevel", "o:Advanced"]], add [["r:OWL_2_Standard", "o:hasLevel", "o:Expert"]]),
    m!("P2" @ "r:Developer", remove [["r:Developer", "o:hasType", "o:Developer"]], add [["r:Developer", "o:hasType", "o:Astronaut"]]),
];
