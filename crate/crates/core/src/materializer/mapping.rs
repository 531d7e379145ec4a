use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::schema::SchemaCatalog;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MappingError {
    #[error("line {line}: cannot parse mapping rule {text:?}")]
    Syntax { line: usize, text: String },
    #[error("header {header:?}: {name:?} is not a class of the ontology")]
    UnknownClass { header: String, name: String },
    #[error("header {header:?}: {name:?} is not a property of the ontology")]
    UnknownProperty { header: String, name: String },
    #[error("header {header:?} refers to {target:?}, which is not an entity column")]
    NotAnEntity { header: String, target: String },
}

/// How one CSV column contributes to a row's triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColumnRule {
    /// The cell names an entity of `class`; its text becomes the `label` literal.
    Entity { class: String, label: String },
    /// The cell is a literal value of `property` on the entity in column `subject`.
    Literal { subject: String, property: String },
    /// The cell names a subclass asserted as an extra type of the entity in `subject`.
    Subtype { subject: String },
}

/// `subject --property--> object` between two entity columns of the same row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkRule {
    pub subject: String,
    pub property: String,
    pub object: String,
}

/// Header-driven mapping. Class and property names are ontology local names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FieldMapping {
    columns: BTreeMap<String, ColumnRule>,
    links: Vec<LinkRule>,
}

const DEFAULT_ENTITIES: &[(&str, &str, &str)] = &[
    ("Curriculum", "Curriculum", "hasTitle"),
    ("Module Title", "Module", "hasTitle"),
    ("Topic", "Topic", "asString"),
    ("Broader Topic", "Topic", "asString"),
    ("Level", "Level", "asString"),
    ("Category", "Category", "asString"),
    ("Media Title", "Media", "hasTitle"),
    ("Author", "Author", "hasName"),
    ("Person", "Person", "hasName"),
    ("Persona", "Persona", "asString"),
    ("Persona Type", "PersonaType", "asString"),
    ("Profession", "Profession", "asString"),
    ("Learning Path", "LearningPath", "asString"),
    ("Step", "LearningStep", "asString"),
    ("Previous Step", "LearningStep", "asString"),
    ("Next Step", "LearningStep", "asString"),
    ("Event", "Event", "hasTitle"),
    ("Parent Event", "Event", "hasTitle"),
    ("Language", "Language", "asString"),
    ("Audience", "Audience", "asString"),
];

const DEFAULT_LINKS: &[(&str, &str, &str)] = &[
    ("Curriculum", "hasModule", "Module Title"),
    ("Module Title", "coversTopic", "Topic"),
    ("Media Title", "coversTopic", "Topic"),
    ("Broader Topic", "narrowerThan", "Topic"),
    ("Topic", "broaderThan", "Broader Topic"),
    ("Module Title", "hasLevel", "Level"),
    ("Module Title", "belongsTo", "Category"),
    ("Module Title", "references", "Media Title"),
    ("Media Title", "hasAuthor", "Author"),
    ("Person", "assumesAuthorship", "Author"),
    ("Person", "assumesPersona", "Persona"),
    ("Persona", "hasType", "Persona Type"),
    ("Persona", "hasProfession", "Profession"),
    ("Persona", "determines", "Learning Path"),
    ("Learning Path", "scopedBy", "Curriculum"),
    ("Learning Path", "hasLearningStep", "Step"),
    ("Step", "refersTo", "Module Title"),
    ("Step", "hasPreviousLearningStep", "Previous Step"),
    ("Step", "hasNextLearningStep", "Next Step"),
    ("Event", "provides", "Media Title"),
    ("Parent Event", "hasSubEvent", "Event"),
    ("Media Title", "hasLanguage", "Language"),
    ("Module Title", "hasAudience", "Audience"),
];

impl FieldMapping {
    pub fn empty() -> Self {
        FieldMapping::default()
    }

    /// The built-in header table.
    pub fn default_mapping() -> Self {
        let mut m = FieldMapping::empty();
        for (header, class, label) in DEFAULT_ENTITIES {
            m.set_column(header, ColumnRule::Entity { class: class.to_string(), label: label.to_string() });
        }
        m.set_column("Media URL", ColumnRule::Literal { subject: "Media Title".into(), property: "hasUrl".into() });
        m.set_column("Media Type", ColumnRule::Subtype { subject: "Media Title".into() });
        m.set_column("Step Type", ColumnRule::Subtype { subject: "Step".into() });
        for (s, p, o) in DEFAULT_LINKS {
            m.add_link(LinkRule { subject: s.to_string(), property: p.to_string(), object: o.to_string() });
        }
        m
    }

    pub fn set_column(&mut self, header: &str, rule: ColumnRule) {
        self.columns.insert(header.to_string(), rule);
    }

    pub fn remove_column(&mut self, header: &str) {
        self.columns.remove(header);
        self.links.retain(|l| l.subject != header && l.object != header);
    }

    pub fn add_link(&mut self, link: LinkRule) {
        if !self.links.contains(&link) {
            self.links.push(link);
        }
    }

    pub fn column(&self, header: &str) -> Option<&ColumnRule> {
        self.columns.get(header)
    }

    pub fn columns(&self) -> impl Iterator<Item = (&str, &ColumnRule)> {
        self.columns.iter().map(|(h, r)| (h.as_str(), r))
    }

    pub fn links(&self) -> &[LinkRule] {
        &self.links
    }

    /// Applies override lines on top of `self`:
    ///
    /// ```text
    /// Header -> entity Class labelProperty
    /// Header -> literal property of SubjectHeader
    /// Header -> subclass of SubjectHeader
    /// Header -> ignore
    /// link: SubjectHeader -> property -> ObjectHeader
    /// clear
    /// ```
    ///
    /// A rule for an existing header replaces it; `clear` drops everything
    /// accumulated so far. `#` starts a comment.
    pub fn apply_overrides(mut self, text: &str) -> Result<Self, MappingError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = || MappingError::Syntax { line, text: content.to_string() };
            if content == "clear" {
                self = FieldMapping::empty();
                continue;
            }
            if let Some(rest) = content.strip_prefix("link:") {
                let parts: Vec<&str> = rest.split("->").map(str::trim).collect();
                match parts.as_slice() {
                    [s, p, o] if !s.is_empty() && !p.is_empty() && !o.is_empty() && !p.contains(char::is_whitespace) => {
                        self.add_link(LinkRule { subject: s.to_string(), property: p.to_string(), object: o.to_string() });
                    }
                    _ => return Err(syntax()),
                }
                continue;
            }
            let (header, rule) = content.split_once("->").ok_or_else(syntax)?;
            let header = header.trim();
            if header.is_empty() {
                return Err(syntax());
            }
            let words: Vec<&str> = rule.split_whitespace().collect();
            let rule = match words.as_slice() {
                ["entity", class, label] => ColumnRule::Entity { class: class.to_string(), label: label.to_string() },
                ["literal", property, "of", subject @ ..] if !subject.is_empty() => {
                    ColumnRule::Literal { subject: subject.join(" "), property: property.to_string() }
                }
                ["subclass", "of", subject @ ..] if !subject.is_empty() => ColumnRule::Subtype { subject: subject.join(" ") },
                ["ignore"] => {
                    self.remove_column(header);
                    continue;
                }
                _ => return Err(syntax()),
            };
            self.set_column(header, rule);
        }
        Ok(self)
    }

    /// Every class and property must exist in `catalog`; every column a rule
    /// points at must be an entity column.
    pub fn validate(&self, catalog: &SchemaCatalog) -> Result<(), MappingError> {
        let entity = |header: &str, target: &str| match self.columns.get(target) {
            Some(ColumnRule::Entity { .. }) => Ok(()),
            _ => Err(MappingError::NotAnEntity { header: header.to_string(), target: target.to_string() }),
        };
        let property = |header: &str, name: &str| {
            if catalog.is_property(&catalog.property(name)) {
                Ok(())
            } else {
                Err(MappingError::UnknownProperty { header: header.to_string(), name: name.to_string() })
            }
        };
        for (header, rule) in &self.columns {
            match rule {
                ColumnRule::Entity { class, label } => {
                    if !catalog.is_class(&catalog.class(class)) {
                        return Err(MappingError::UnknownClass { header: header.clone(), name: class.clone() });
                    }
                    property(header, label)?;
                }
                ColumnRule::Literal { subject, property: p } => {
                    entity(header, subject)?;
                    property(header, p)?;
                }
                ColumnRule::Subtype { subject } => entity(header, subject)?,
            }
        }
        for link in &self.links {
            let name = format!("link {} -> {}", link.subject, link.object);
            entity(&name, &link.subject)?;
            entity(&name, &link.object)?;
            property(&name, &link.property)?;
        }
        Ok(())
    }
}

impl fmt::Display for FieldMapping {
    /// Renders in the override syntax; `clear` first so the text is self-contained.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "clear")?;
        for (header, rule) in &self.columns {
            match rule {
                ColumnRule::Entity { class, label } => writeln!(f, "{header} -> entity {class} {label}")?,
                ColumnRule::Literal { subject, property } => writeln!(f, "{header} -> literal {property} of {subject}")?,
                ColumnRule::Subtype { subject } => writeln!(f, "{header} -> subclass of {subject}")?,
            }
        }
        for l in &self.links {
            writeln!(f, "link: {} -> {} -> {}", l.subject, l.property, l.object)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::builtin_catalog;

    #[test]
    fn default_mapping_is_valid() {
        FieldMapping::default_mapping().validate(&builtin_catalog()).unwrap();
    }

    #[test]
    fn display_round_trips() {
        let m = FieldMapping::default_mapping();
        assert_eq!(FieldMapping::default_mapping().apply_overrides(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn overrides_merge() {
        let m = FieldMapping::default_mapping()
            .apply_overrides("# rename\nCourse -> entity Curriculum hasTitle\nlink: Course -> hasModule -> Module Title\nMedia URL -> ignore\n")
            .unwrap();
        assert!(matches!(m.column("Course"), Some(ColumnRule::Entity { .. })));
        assert!(m.column("Media URL").is_none());
        assert!(m.column("Curriculum").is_some());
        m.validate(&builtin_catalog()).unwrap();

        let m = FieldMapping::default_mapping().apply_overrides("clear\nX -> entity Topic asString").unwrap();
        assert_eq!(m.columns().count(), 1);
        assert!(m.links().is_empty());
    }

    #[test]
    fn bad_rules() {
        assert!(matches!(FieldMapping::empty().apply_overrides("X -> entity"), Err(MappingError::Syntax { line: 1, .. })));
        assert!(matches!(FieldMapping::empty().apply_overrides("\nlink: a -> b"), Err(MappingError::Syntax { line: 2, .. })));
        let cat = builtin_catalog();
        let m = FieldMapping::empty().apply_overrides("X -> entity Planet asString").unwrap();
        assert!(matches!(m.validate(&cat), Err(MappingError::UnknownClass { .. })));
        let m = FieldMapping::empty().apply_overrides("X -> entity Topic label").unwrap();
        assert!(matches!(m.validate(&cat), Err(MappingError::UnknownProperty { .. })));
        let m = FieldMapping::empty().apply_overrides("X -> literal hasUrl of Y").unwrap();
        assert!(matches!(m.validate(&cat), Err(MappingError::NotAnEntity { .. })));
    }
}
