use serde::Serialize;

use super::{same_answer, AnalysisError, Predictions};
use crate::io::{BabiFile, BabiLine, BabiStory};
use crate::microworld::Vocabulary;
use crate::questions::Question;

/// A yes-answered "Is P in the L?" question and its "Where is P?" twin over
/// the same passage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyPair {
    pub id: usize,
    /// Source story (0-based) and question line.
    pub source_story: usize,
    pub source_line: usize,
    pub sentences: Vec<String>,
    pub yes_no: String,
    pub where_p: String,
    pub location: String,
    /// Supporting lines, numbered within `sentences`.
    pub support: Vec<usize>,
}

/// One pair per yes-no question whose gold answer is "yes".
pub fn consistency_pairs(file: &BabiFile, vocab: &Vocabulary) -> Vec<ConsistencyPair> {
    let mut out = Vec::new();
    for (i, story) in file.stories.iter().enumerate() {
        for q in story.questions() {
            if !same_answer(q.answer, "yes") {
                continue;
            }
            let Some(Question::IsActorAt { actor, location }) = Question::parse(q.text, vocab)
            else {
                continue;
            };
            let kept: Vec<(usize, &str)> = story.sentences_before(q.line).collect();
            let position = |line: usize| kept.iter().position(|(n, _)| *n == line).map(|k| k + 1);
            let Some(support) = q
                .support
                .iter()
                .map(|&l| position(l))
                .collect::<Option<Vec<_>>>()
            else {
                continue;
            };
            out.push(ConsistencyPair {
                id: out.len(),
                source_story: i,
                source_line: q.line,
                sentences: kept.iter().map(|(_, s)| s.to_string()).collect(),
                yes_no: q.text.trim().to_string(),
                where_p: Question::WhereActor { actor }.render(vocab),
                location: vocab.location_name(location).to_string(),
                support,
            });
        }
    }
    out
}

/// The pairs as a question file: story `k` is pair `k`, with the yes-no
/// question first and the where-P question second, so their question ids
/// are `2k` and `2k + 1`.
pub fn pairs_file(pairs: &[ConsistencyPair]) -> BabiFile {
    let stories = pairs
        .iter()
        .map(|p| {
            let mut lines: Vec<BabiLine> = p
                .sentences
                .iter()
                .cloned()
                .map(BabiLine::Sentence)
                .collect();
            lines.push(BabiLine::Question {
                text: p.yes_no.clone(),
                answer: "yes".into(),
                support: p.support.clone(),
            });
            lines.push(BabiLine::Question {
                text: p.where_p.clone(),
                answer: p.location.clone(),
                support: p.support.clone(),
            });
            BabiStory { lines }
        })
        .collect();
    BabiFile { stories }
}

/// Rows: yes-no correct, incorrect. Columns: where-P correct, incorrect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ConsistencyMatrix(pub [[usize; 2]; 2]);

impl ConsistencyMatrix {
    pub fn total(&self) -> usize {
        self.0.iter().flatten().sum()
    }
}

/// Scores predictions made on [`pairs_file`] output.
pub fn consistency_matrix(
    pairs: &[ConsistencyPair],
    predictions: &Predictions,
) -> Result<ConsistencyMatrix, AnalysisError> {
    let mut m = ConsistencyMatrix::default();
    for p in pairs {
        let get = |id: usize| {
            predictions
                .get(&id)
                .ok_or(AnalysisError::MissingPrediction(id))
        };
        let yes_no_ok = same_answer(get(2 * p.id)?, "yes");
        let where_ok = same_answer(get(2 * p.id + 1)?, &p.location);
        m.0[usize::from(!yes_no_ok)][usize::from(!where_ok)] += 1;
    }
    Ok(m)
}
