//! Concept vocabulary shared by every stage: event kinds, linguistic
//! constructs, question types and the concept sets built from them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EventKind {
    #[serde(rename = "MOVE")]
    Move,
    #[serde(rename = "GRAB")]
    Grab,
    #[serde(rename = "DROP")]
    Drop,
    #[serde(rename = "GIVE")]
    Give,
}

impl EventKind {
    pub const ALL: [EventKind; 4] = [
        EventKind::Move,
        EventKind::Grab,
        EventKind::Drop,
        EventKind::Give,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EventKind::Move => "MOVE",
            EventKind::Grab => "GRAB",
            EventKind::Drop => "DROP",
            EventKind::Give => "GIVE",
        }
    }
}

/// Surface constructs (COREF, CONJ, COMPOUND) and epistemic constructs
/// (NEGATE, INDEF). The latter are statements in their own right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Construct {
    #[serde(rename = "COREF")]
    Coref,
    #[serde(rename = "CONJ")]
    Conj,
    #[serde(rename = "COMPOUND")]
    Compound,
    #[serde(rename = "NEGATE")]
    Negate,
    #[serde(rename = "INDEF")]
    Indef,
}

impl Construct {
    pub const ALL: [Construct; 5] = [
        Construct::Coref,
        Construct::Conj,
        Construct::Compound,
        Construct::Negate,
        Construct::Indef,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construct::Coref => "COREF",
            Construct::Conj => "CONJ",
            Construct::Compound => "COMPOUND",
            Construct::Negate => "NEGATE",
            Construct::Indef => "INDEF",
        }
    }

    /// Constructs that only change how statements are worded.
    pub fn is_surface(self) -> bool {
        matches!(
            self,
            Construct::Coref | Construct::Conj | Construct::Compound
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum QuestionType {
    #[serde(rename = "where-P")]
    WhereActor,
    #[serde(rename = "where-O")]
    WhereObject,
    #[serde(rename = "where-was-O")]
    WhereWasObject,
    #[serde(rename = "yes-no")]
    YesNo,
    #[serde(rename = "list")]
    List,
    #[serde(rename = "counting")]
    Counting,
    #[serde(rename = "give-qs")]
    Give,
}

impl QuestionType {
    pub const ALL: [QuestionType; 7] = [
        QuestionType::WhereActor,
        QuestionType::WhereObject,
        QuestionType::WhereWasObject,
        QuestionType::YesNo,
        QuestionType::List,
        QuestionType::Counting,
        QuestionType::Give,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QuestionType::WhereActor => "where-P",
            QuestionType::WhereObject => "where-O",
            QuestionType::WhereWasObject => "where-was-O",
            QuestionType::YesNo => "yes-no",
            QuestionType::List => "list",
            QuestionType::Counting => "counting",
            QuestionType::Give => "give-qs",
        }
    }
}

impl fmt::Display for QuestionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QuestionType {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        QuestionType::ALL
            .into_iter()
            .find(|q| q.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown concept name `{0}`")]
pub struct UnknownName(pub String);

/// A member of a support composition: an event kind or a construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Concept {
    Event(EventKind),
    Construct(Construct),
}

impl Concept {
    pub fn name(self) -> &'static str {
        match self {
            Concept::Event(e) => e.name(),
            Concept::Construct(c) => c.name(),
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Concept {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        if let Some(e) = EventKind::ALL.into_iter().find(|e| e.name() == upper) {
            return Ok(Concept::Event(e));
        }
        if let Some(c) = Construct::ALL.into_iter().find(|c| c.name() == upper) {
            return Ok(Concept::Construct(c));
        }
        Err(UnknownName(s.to_string()))
    }
}

impl From<Concept> for String {
    fn from(c: Concept) -> String {
        c.name().to_string()
    }
}

impl TryFrom<String> for Concept {
    type Error = UnknownName;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<EventKind> for Concept {
    fn from(e: EventKind) -> Self {
        Concept::Event(e)
    }
}

impl From<Construct> for Concept {
    fn from(c: Construct) -> Self {
        Concept::Construct(c)
    }
}

/// Renders a support composition as `MOVE+GRAB+COREF`, in canonical order.
pub fn composition_label(fc: &BTreeSet<Concept>) -> String {
    if fc.is_empty() {
        return "-".to_string();
    }
    fc.iter().map(|c| c.name()).collect::<Vec<_>>().join("+")
}

/// The (E, L, Q) triple a split or sub-task may draw on.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptSet {
    pub events: BTreeSet<EventKind>,
    #[serde(default)]
    pub constructs: BTreeSet<Construct>,
    pub questions: BTreeSet<QuestionType>,
}

impl ConceptSet {
    pub fn new(
        events: impl IntoIterator<Item = EventKind>,
        constructs: impl IntoIterator<Item = Construct>,
        questions: impl IntoIterator<Item = QuestionType>,
    ) -> Self {
        ConceptSet {
            events: events.into_iter().collect(),
            constructs: constructs.into_iter().collect(),
            questions: questions.into_iter().collect(),
        }
    }

    /// Events and constructs, i.e. everything that can appear in a support
    /// composition.
    pub fn concepts(&self) -> BTreeSet<Concept> {
        self.events
            .iter()
            .map(|&e| Concept::Event(e))
            .chain(self.constructs.iter().map(|&c| Concept::Construct(c)))
            .collect()
    }

    pub fn contains(&self, c: Concept) -> bool {
        match c {
            Concept::Event(e) => self.events.contains(&e),
            Concept::Construct(k) => self.constructs.contains(&k),
        }
    }

    pub fn union(&self, other: &ConceptSet) -> ConceptSet {
        ConceptSet {
            events: self.events.union(&other.events).copied().collect(),
            constructs: self.constructs.union(&other.constructs).copied().collect(),
            questions: self.questions.union(&other.questions).copied().collect(),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.events.is_empty() {
            return Err("concept set needs at least one event kind".into());
        }
        if self.questions.is_empty() {
            return Err("concept set needs at least one question type".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concept_names_round_trip() {
        for e in EventKind::ALL {
            assert_eq!(e.name().parse::<Concept>().unwrap(), Concept::Event(e));
        }
        for c in Construct::ALL {
            assert_eq!(c.name().parse::<Concept>().unwrap(), Concept::Construct(c));
        }
        for q in QuestionType::ALL {
            assert_eq!(q.name().parse::<QuestionType>().unwrap(), q);
        }
        assert!("POSS".parse::<Concept>().is_err());
    }

    #[test]
    fn composition_label_is_canonical() {
        let fc: BTreeSet<Concept> = [
            Concept::Construct(Construct::Coref),
            Concept::Event(EventKind::Grab),
            Concept::Event(EventKind::Move),
        ]
        .into_iter()
        .collect();
        assert_eq!(composition_label(&fc), "MOVE+GRAB+COREF");
    }

    #[test]
    fn concept_set_json_uses_canonical_names() {
        let cs = ConceptSet::new(
            [EventKind::Move],
            [Construct::Coref],
            [QuestionType::WhereActor],
        );
        let json = serde_json::to_string(&cs).unwrap();
        assert_eq!(
            json,
            r#"{"events":["MOVE"],"constructs":["COREF"],"questions":["where-P"]}"#
        );
        let back: ConceptSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cs);
    }
}
