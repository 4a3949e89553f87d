//! Statistics over generated splits, accuracy breakdowns by support
//! composition, benchmark concurrence and knowledge-consistency pairs.

mod concurrence;
mod consistency;
mod stats;

pub use concurrence::{concurrence, ConcurrenceResult, ScoreSheet, ScoreTable};
pub use consistency::{
    consistency_matrix, consistency_pairs, pairs_file, ConsistencyMatrix, ConsistencyPair,
};
pub use stats::{
    composition_breakdown, profile_file, split_stats, BreakdownRow, Predictions, SplitStats,
};

use crate::oracle::OracleError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("need at least 3 models scored on both benchmarks, found {found}")]
    InsufficientModels { found: usize },
    #[error("score {value} for {model} is outside [0, 100]")]
    InvalidScore { model: String, value: f64 },
    #[error("no prediction for question {0}")]
    MissingPrediction(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Answers compare case-insensitively, ignoring surrounding space.
pub(crate) fn same_answer(a: &str, b: &str) -> bool {
    a.trim().eq_ignore_ascii_case(b.trim())
}
