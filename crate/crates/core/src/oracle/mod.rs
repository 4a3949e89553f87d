//! Re-answers questions from text alone: parses sentences back into
//! statements and reads them with an evaluator independent of the one
//! used for generation.

mod parse;
mod reader;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::concepts::{Concept, QuestionType};
use crate::io::{BabiFile, BabiStory, QuestionRef};
use crate::microworld::{Statement, Vocabulary};
use crate::questions::{count_word, list_answer, GiveQuery, Question};

pub use parse::{parse_sentences, parse_story, parse_story_prefix, ParsedLine, ParsedStory};
pub use reader::Reader;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("unknown question form: {0:?}")]
    UnknownQuestion(String),
    #[error("question cannot be answered from the story: {0:?}")]
    Unanswerable(String),
}

/// Answers `question` after reading `statements` in order.
pub fn answer_question(
    statements: &[Statement],
    question: &Question,
    vocab: &Vocabulary,
) -> Result<String, OracleError> {
    let sizes = vocab.sizes();
    let r = Reader::new(sizes.actors, sizes.objects, sizes.locations).read_all(statements);
    let unanswerable = || OracleError::Unanswerable(question.render(vocab));
    if !r.consistent() {
        return Err(unanswerable());
    }
    let place = |mask: u64| reader::single(mask).map(|l| vocab.location_name(l).to_string());
    match *question {
        Question::WhereActor { actor } => place(r.actor_candidates(actor)).ok_or_else(unanswerable),
        Question::WhereObject { object } => r
            .object_candidates(object)
            .and_then(place)
            .ok_or_else(unanswerable),
        Question::WhereWasObject { object, before } => {
            let trail = r.object_trail(object);
            let k = trail.len();
            if k < 2 || trail[k - 1] != Some(before) || trail[..k - 2].contains(&Some(before)) {
                return Err(unanswerable());
            }
            trail[k - 2]
                .map(|l| vocab.location_name(l).to_string())
                .ok_or_else(unanswerable)
        }
        Question::IsActorAt { actor, location } => {
            let c = r.actor_candidates(actor);
            let word = if c & (1u64 << location.0) == 0 {
                "no"
            } else if c.count_ones() == 1 {
                "yes"
            } else {
                "maybe"
            };
            Ok(word.to_string())
        }
        Question::Carrying { actor } => Ok(list_answer(&r.holdings(actor), vocab)),
        Question::HowMany { actor } => Ok(count_word(r.holdings(actor).len())),
        Question::Give { query } => {
            let gives: Vec<(usize, &Statement)> = statements
                .iter()
                .enumerate()
                .filter(|(_, s)| matches!(s, Statement::Give { .. }))
                .collect();
            let i = query.unique_match(gives).ok_or_else(unanswerable)?;
            let Statement::Give {
                giver,
                receiver,
                object,
            } = statements[i]
            else {
                unreachable!()
            };
            let name = match query {
                GiveQuery::WhoGaveTo { .. } | GiveQuery::WhoGave { .. } => vocab.actor_name(giver),
                GiveQuery::WhoReceived { .. } | GiveQuery::WhomDidGive { .. } => {
                    vocab.actor_name(receiver)
                }
                GiveQuery::WhatDidGive { .. } => vocab.object_name(object),
            };
            Ok(name.to_string())
        }
    }
}

/// Answers the question text against the story sentences before line
/// `upto`, optionally reading only the `keep` lines.
pub fn answer(
    story: &BabiStory,
    upto: usize,
    question_text: &str,
    keep: Option<&BTreeSet<usize>>,
    vocab: &Vocabulary,
) -> Result<String, OracleError> {
    let q = Question::parse(question_text, vocab)
        .ok_or_else(|| OracleError::UnknownQuestion(question_text.trim().to_string()))?;
    let parsed = parse_story_prefix(story, upto, keep, vocab)?;
    answer_question(&parsed.statements(), &q, vocab)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    Parse,
    Disagreement,
    Insufficient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckFailure {
    pub kind: FailureKind,
    pub detail: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            FailureKind::Parse => "parse",
            FailureKind::Disagreement => "answer disagreement",
            FailureKind::Insufficient => "supporting facts insufficient",
        };
        write!(f, "{kind}: {}", self.detail)
    }
}

/// Checks one question: the oracle must reproduce the gold answer from the
/// whole story and again from the supporting lines alone.
pub fn check_question(
    story: &BabiStory,
    q: QuestionRef<'_>,
    vocab: &Vocabulary,
) -> Result<(), CheckFailure> {
    let fail = |kind, detail: String| CheckFailure { kind, detail };
    let full = answer(story, q.line, q.text, None, vocab)
        .map_err(|e| fail(FailureKind::Parse, e.to_string()))?;
    if full != q.answer {
        return Err(fail(
            FailureKind::Disagreement,
            format!("gold {:?}, oracle {:?}", q.answer, full),
        ));
    }
    let keep: BTreeSet<usize> = q.support.iter().copied().collect();
    match answer(story, q.line, q.text, Some(&keep), vocab) {
        Ok(a) if a == q.answer => Ok(()),
        Ok(a) => Err(fail(
            FailureKind::Insufficient,
            format!("lines {:?} give {:?}, gold {:?}", q.support, a, q.answer),
        )),
        Err(e) => Err(fail(
            FailureKind::Insufficient,
            format!("lines {:?}: {e}", q.support),
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationFailure {
    /// 0-based story index in the file.
    pub story: usize,
    /// Question line within the story.
    pub line: usize,
    pub question: String,
    pub failure: CheckFailure,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub questions: usize,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn count(&self, kind: FailureKind) -> usize {
        self.failures
            .iter()
            .filter(|f| f.failure.kind == kind)
            .count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.failures {
            writeln!(
                f,
                "story {} line {} ({}): {}",
                v.story + 1,
                v.line,
                v.question.trim(),
                v.failure
            )?;
        }
        write!(
            f,
            "{} questions checked, {} failed",
            self.questions,
            self.failures.len()
        )
    }
}

/// Checks every question in a file. With `stop_at_first`, returns after
/// the first failure.
pub fn validate_file(file: &BabiFile, vocab: &Vocabulary, stop_at_first: bool) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (si, story) in file.stories.iter().enumerate() {
        for q in story.questions() {
            report.questions += 1;
            if let Err(failure) = check_question(story, q, vocab) {
                report.failures.push(ValidationFailure {
                    story: si,
                    line: q.line,
                    question: q.text.to_string(),
                    failure,
                });
                if stop_at_first {
                    return report;
                }
            }
        }
    }
    report
}

/// What a question in a file is about, recovered from its text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuestionProfile {
    pub qtype: QuestionType,
    pub f_c: BTreeSet<Concept>,
    pub n: usize,
    /// Sentences before the question.
    pub length: usize,
}

pub fn profile_question(
    story: &BabiStory,
    q: QuestionRef<'_>,
    vocab: &Vocabulary,
) -> Result<QuestionProfile, OracleError> {
    let question = Question::parse(q.text, vocab)
        .ok_or_else(|| OracleError::UnknownQuestion(q.text.trim().to_string()))?;
    let keep: BTreeSet<usize> = q.support.iter().copied().collect();
    let parsed = parse_story_prefix(story, q.line, Some(&keep), vocab)?;
    let mut f_c = BTreeSet::new();
    for line in &parsed.lines {
        f_c.extend(line.statements.iter().map(|s| s.concept()));
        f_c.extend(line.construct.map(Concept::Construct));
    }
    Ok(QuestionProfile {
        qtype: question.qtype(),
        f_c,
        n: keep.len(),
        length: story.sentences_before(q.line).count(),
    })
}

#[cfg(test)]
mod tests;
