//! Entities, statements, ground-truth transitions and possible-worlds
//! belief evaluation.

mod beliefs;
mod statement;
mod truth;
mod vocab;

pub use beliefs::{
    evaluate_beliefs, minimal_support, BeliefState, Evaluation, Fact, LocationSet, QueryResult,
    Term, Verdict,
};
pub use statement::Statement;
pub use truth::{apply_statement, replay, TrueState};
pub use vocab::{
    Actor, ActorEntry, Gender, Location, Object, Vocabulary, WorldSize, MAX_LOCATIONS,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WorldError {
    #[error("invalid event: {0}")]
    InvalidEvent(String),
    #[error("untruthful observation: {0}")]
    UntruthfulObservation(String),
    #[error("unknown entity: {0}")]
    UnknownEntity(String),
    #[error("timeline admits no possible world")]
    InconsistentTimeline,
    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),
    #[error("statement {index}: {source}")]
    AtStatement {
        index: usize,
        #[source]
        source: Box<WorldError>,
    },
}

impl WorldError {
    pub(crate) fn at_statement(self, index: usize) -> WorldError {
        WorldError::AtStatement {
            index,
            source: Box::new(self),
        }
    }
}
