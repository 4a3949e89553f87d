use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::concepts::{ConceptSet, Construct, EventKind, QuestionType};

use EventKind::{Drop, Give, Grab, Move};
use QuestionType::{Counting, List, WhereActor, WhereObject, WhereWasObject, YesNo};

/// The twelve single-skill tasks.
pub const TASK_IDS: [u8; 12] = [1, 2, 3, 5, 6, 7, 8, 9, 10, 11, 12, 13];

/// Concept set of a single-skill task, without any supplementary questions.
pub fn task_concepts(id: u8) -> Option<ConceptSet> {
    let poss = [Move, Grab, Drop];
    let all = [Move, Grab, Drop, Give];
    let c = match id {
        1 => ConceptSet::new([Move], [], [WhereActor]),
        2 => ConceptSet::new(poss, [], [WhereObject]),
        3 => ConceptSet::new(poss, [], [WhereWasObject]),
        5 => ConceptSet::new(all, [], [QuestionType::Give]),
        6 => ConceptSet::new([Move], [], [YesNo]),
        7 => ConceptSet::new(all, [], [Counting]),
        8 => ConceptSet::new(poss, [], [List]),
        9 => ConceptSet::new([Move], [Construct::Negate], [YesNo]),
        10 => ConceptSet::new([Move], [Construct::Indef], [YesNo]),
        11 => ConceptSet::new([Move], [Construct::Coref], [WhereActor]),
        12 => ConceptSet::new([Move], [Construct::Conj], [WhereActor]),
        13 => ConceptSet::new([Move], [Construct::Compound], [WhereActor]),
        _ => return None,
    };
    Some(c)
}

/// Extra question types a task carries in the inject and diverse regimes.
pub fn supplementary_questions(id: u8) -> (BTreeSet<QuestionType>, BTreeSet<QuestionType>) {
    let (inject, diverse): (&[QuestionType], &[QuestionType]) = match id {
        2 => (&[WhereActor], &[WhereActor]),
        3 => (&[WhereActor, WhereObject], &[]),
        5 => (&[WhereActor, WhereObject], &[WhereActor, WhereObject]),
        6 | 9 | 10 => (&[WhereActor], &[WhereActor]),
        7 | 8 => (&[WhereActor, WhereObject], &[]),
        _ => (&[], &[]),
    };
    (
        inject.iter().copied().collect(),
        diverse.iter().copied().collect(),
    )
}

/// Groups of tasks trained on together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TaskGroup {
    T2,
    T7,
    T12,
}

impl TaskGroup {
    pub const ALL: [TaskGroup; 3] = [TaskGroup::T2, TaskGroup::T7, TaskGroup::T12];

    pub fn tasks(self) -> &'static [u8] {
        match self {
            TaskGroup::T2 => &[2, 11],
            TaskGroup::T7 => &[1, 2, 3, 5, 11, 12, 13],
            TaskGroup::T12 => &TASK_IDS,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TaskGroup::T2 => "T2",
            TaskGroup::T7 => "T7",
            TaskGroup::T12 => "T12",
        }
    }

    /// The concept set of the group's test split.
    pub fn mix_concepts(self) -> ConceptSet {
        let constructs_t7 = [Construct::Coref, Construct::Conj, Construct::Compound];
        match self {
            TaskGroup::T2 => ConceptSet::new([Move, Grab, Drop], [Construct::Coref], [WhereObject]),
            TaskGroup::T7 => ConceptSet::new(
                [Move, Grab, Drop, Give],
                constructs_t7,
                [WhereActor, WhereObject, WhereWasObject],
            ),
            TaskGroup::T12 => ConceptSet::new(
                [Move, Grab, Drop, Give],
                Construct::ALL,
                [
                    WhereActor,
                    WhereObject,
                    WhereWasObject,
                    YesNo,
                    Counting,
                    List,
                ],
            ),
        }
    }
}

impl fmt::Display for TaskGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TaskGroup {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TaskGroup::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown task group `{s}`"))
    }
}
