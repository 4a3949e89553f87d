use std::collections::BTreeSet;

use crate::concepts::QuestionType;
use crate::io::{BabiFile, BabiLine, BabiStory, QuestionRef};
use crate::microworld::{Statement, Vocabulary};
use crate::oracle::{parse_sentences, profile_question, OracleError, QuestionProfile};
use crate::questions::{instantiate, FamilyRegistry, Question, Reading};
use crate::realization::{parse_clause, Alignment, Passage, Subject};

/// A story prefix read back from its text: the statements, a passage
/// aligned to them, and the file line number of each passage line.
pub fn reread(
    story: &BabiStory,
    upto: usize,
    vocab: &Vocabulary,
) -> Result<(Vec<Statement>, Passage, Vec<usize>), OracleError> {
    let sentences: Vec<(usize, &str)> = story.sentences_before(upto).collect();
    let parsed = parse_sentences(&sentences, None, vocab)?;
    let mut timeline = Vec::new();
    let mut alignment = Alignment::default();
    for (k, (line, &(number, text))) in parsed.lines.iter().zip(&sentences).enumerate() {
        let start = timeline.len();
        timeline.extend_from_slice(&line.statements);
        alignment
            .sentence_to_statements
            .push((start..timeline.len()).collect());
        alignment.constructs.push(line.construct);
        let clause = parse_clause(text, vocab).map_err(|reason| OracleError::Parse {
            line: number,
            reason,
        })?;
        if matches!(clause.subject, Subject::Pronoun(_) | Subject::They) {
            alignment.coref_antecedent.insert(k + 1, k);
        }
    }
    let passage = Passage {
        sentences: sentences.iter().map(|(_, s)| s.to_string()).collect(),
        alignment,
    };
    let numbers = sentences.iter().map(|(n, _)| *n).collect();
    Ok((timeline, passage, numbers))
}

fn candidates(q: QuestionType, timeline: &[Statement], vocab: &Vocabulary) -> Vec<Question> {
    match q {
        QuestionType::WhereActor => vocab
            .all_actors()
            .filter(|&a| timeline.iter().any(|s| s.involves_actor(a)))
            .map(|actor| Question::WhereActor { actor })
            .collect(),
        QuestionType::WhereObject => vocab
            .all_objects()
            .filter(|&o| timeline.iter().any(|s| s.object() == Some(o)))
            .map(|object| Question::WhereObject { object })
            .collect(),
        _ => Vec::new(),
    }
}

/// Adds, before every question of the story, each question of the given
/// types whose answer is determined by the sentences so far. Returns the
/// new story and a profile for each of its questions.
pub fn inject_story(
    story: &BabiStory,
    types: &BTreeSet<QuestionType>,
    vocab: &Vocabulary,
) -> Result<(BabiStory, Vec<QuestionProfile>), OracleError> {
    let registry = FamilyRegistry::standard();
    let mut out = BabiStory::default();
    let mut profiles = Vec::new();
    // New number of each original line.
    let mut renumber = vec![0usize; story.lines.len() + 1];
    for (i, line) in story.lines.iter().enumerate() {
        let number = i + 1;
        let BabiLine::Question {
            text,
            answer,
            support,
        } = line
        else {
            out.lines.push(line.clone());
            renumber[number] = out.lines.len();
            continue;
        };
        let (timeline, passage, numbers) = reread(story, number, vocab)?;
        let reading = Reading::new(&timeline, &passage, vocab);
        for &q in types {
            let Some(family) = registry.get(q) else {
                continue;
            };
            for cand in candidates(q, &timeline, vocab) {
                let Some(qi) = instantiate(&reading, family, &cand) else {
                    continue;
                };
                if qi.text.trim() == text.trim() {
                    continue;
                }
                out.lines.push(BabiLine::Question {
                    text: qi.text.clone(),
                    answer: qi.answer.clone(),
                    support: qi.f.iter().map(|&l| renumber[numbers[l - 1]]).collect(),
                });
                profiles.push(QuestionProfile {
                    qtype: qi.qtype,
                    n: qi.n(),
                    f_c: qi.f_c,
                    length: numbers.len(),
                });
            }
        }
        let q = QuestionRef {
            line: number,
            text,
            answer,
            support,
        };
        profiles.push(profile_question(story, q, vocab)?);
        out.lines.push(BabiLine::Question {
            text: text.clone(),
            answer: answer.clone(),
            support: support.iter().map(|&l| renumber[l]).collect(),
        });
        renumber[number] = out.lines.len();
    }
    Ok((out, profiles))
}

/// [`inject_story`] over every story of a file.
pub fn inject_file(
    file: &BabiFile,
    types: &BTreeSet<QuestionType>,
    vocab: &Vocabulary,
) -> Result<(BabiFile, Vec<QuestionProfile>), OracleError> {
    let mut out = BabiFile::default();
    let mut profiles = Vec::new();
    for story in &file.stories {
        let (s, p) = inject_story(story, types, vocab)?;
        out.stories.push(s);
        profiles.extend(p);
    }
    Ok((out, profiles))
}
