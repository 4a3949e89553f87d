use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{same_answer, AnalysisError};
use crate::concepts::{composition_label, Concept};
use crate::io::BabiFile;
use crate::microworld::Vocabulary;
use crate::oracle::{profile_question, OracleError, QuestionProfile};

/// Predicted answers keyed by question id: the 0-based position of the
/// question in file order.
pub type Predictions = BTreeMap<usize, String>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitStats {
    pub size: usize,
    /// Sentences before each question, averaged over questions.
    pub avg_length: f64,
    pub avg_n: f64,
}

pub fn split_stats<'a>(profiles: impl IntoIterator<Item = &'a QuestionProfile>) -> SplitStats {
    let (mut size, mut length, mut n) = (0usize, 0usize, 0usize);
    for p in profiles {
        size += 1;
        length += p.length;
        n += p.n;
    }
    let avg = |total: usize| {
        if size == 0 {
            0.0
        } else {
            total as f64 / size as f64
        }
    };
    SplitStats {
        size,
        avg_length: avg(length),
        avg_n: avg(n),
    }
}

/// Profiles every question of a file from its text.
pub fn profile_file(
    file: &BabiFile,
    vocab: &Vocabulary,
) -> Result<Vec<QuestionProfile>, OracleError> {
    file.questions()
        .map(|(story, q)| profile_question(story, q, vocab))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakdownRow {
    pub n: usize,
    pub f_c: String,
    pub count: usize,
    pub correct: Option<usize>,
    /// Percent correct, when predictions were given.
    pub accuracy: Option<f64>,
}

/// Question counts (and accuracy, given predictions) per (n, f_c), sorted
/// by n and then by composition label.
pub fn composition_breakdown(
    file: &BabiFile,
    profiles: &[QuestionProfile],
    predictions: Option<&Predictions>,
) -> Result<Vec<BreakdownRow>, AnalysisError> {
    let mut cells: BTreeMap<(usize, String), (usize, usize)> = BTreeMap::new();
    for (id, ((_, q), p)) in file.questions().zip(profiles).enumerate() {
        let cell = cells.entry((p.n, label(&p.f_c))).or_default();
        cell.0 += 1;
        if let Some(preds) = predictions {
            let guess = preds.get(&id).ok_or(AnalysisError::MissingPrediction(id))?;
            if same_answer(guess, q.answer) {
                cell.1 += 1;
            }
        }
    }
    Ok(cells
        .into_iter()
        .map(|((n, f_c), (count, correct))| BreakdownRow {
            n,
            f_c,
            count,
            correct: predictions.map(|_| correct),
            accuracy: predictions.map(|_| 100.0 * correct as f64 / count as f64),
        })
        .collect())
}

fn label(fc: &BTreeSet<Concept>) -> String {
    composition_label(fc)
}
