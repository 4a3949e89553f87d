use std::collections::BTreeSet;

use crate::concepts::Construct;
use crate::io::BabiStory;
use crate::microworld::{Actor, Statement, Vocabulary};
use crate::realization::{parse_clause, Clause, Predicate, Subject};

use super::OracleError;

/// One story sentence read back into statements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedLine {
    pub number: usize,
    pub statements: Vec<Statement>,
    pub construct: Option<Construct>,
}

/// The sentences of a story prefix, parsed with pronouns resolved.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParsedStory {
    pub lines: Vec<ParsedLine>,
}

impl ParsedStory {
    pub fn statements(&self) -> Vec<Statement> {
        self.lines
            .iter()
            .flat_map(|l| l.statements.iter().copied())
            .collect()
    }

    pub fn line(&self, number: usize) -> Option<&ParsedLine> {
        self.lines.iter().find(|l| l.number == number)
    }
}

/// Parses numbered sentences, keeping only the numbers in `keep` when
/// given. A pronoun refers to the sentence right before it, which must
/// itself be kept.
pub fn parse_sentences(
    sentences: &[(usize, &str)],
    keep: Option<&BTreeSet<usize>>,
    vocab: &Vocabulary,
) -> Result<ParsedStory, OracleError> {
    let clauses: Vec<Clause> = sentences
        .iter()
        .map(|&(n, text)| {
            parse_clause(text, vocab).map_err(|reason| OracleError::Parse { line: n, reason })
        })
        .collect::<Result<_, _>>()?;
    let kept = |n: usize| keep.is_none_or(|k| k.contains(&n));

    // Subjects of each sentence once pronouns are resolved; `None` when the
    // sentence is not kept or depends on one that is not.
    let mut subjects: Vec<Option<Vec<Actor>>> = Vec::with_capacity(sentences.len());
    let mut out = ParsedStory::default();
    for (k, (&(number, _), clause)) in sentences.iter().zip(&clauses).enumerate() {
        if !kept(number) {
            subjects.push(None);
            continue;
        }
        let antecedent = || -> Result<&Vec<Actor>, OracleError> {
            let unresolved = |why: &str| OracleError::Parse {
                line: number,
                reason: format!("unresolved pronoun: {why}"),
            };
            let prev = k
                .checked_sub(1)
                .ok_or_else(|| unresolved("no previous sentence"))?;
            if sentences[prev].0 + 1 != number {
                return Err(unresolved("previous line is not a sentence"));
            }
            subjects[prev]
                .as_ref()
                .ok_or_else(|| unresolved("antecedent not available"))
        };
        let (actors, construct) = match clause.subject {
            Subject::One(a) => (vec![a], None),
            Subject::Two(a, b) => {
                let next_is_they = clauses
                    .get(k + 1)
                    .is_some_and(|c| c.subject == Subject::They)
                    && sentences[k + 1].0 == number + 1;
                let c = if next_is_they {
                    Construct::Compound
                } else {
                    Construct::Conj
                };
                (vec![a, b], Some(c))
            }
            Subject::Pronoun(g) => {
                let ante = antecedent()?;
                match ante.as_slice() {
                    [a] if vocab.gender(*a) == g => (vec![*a], Some(Construct::Coref)),
                    _ => {
                        return Err(OracleError::Parse {
                            line: number,
                            reason: "pronoun does not match its antecedent".into(),
                        })
                    }
                }
            }
            Subject::They => {
                let ante = antecedent()?;
                if ante.len() != 2 {
                    return Err(OracleError::Parse {
                        line: number,
                        reason: "\"they\" needs a two-person antecedent".into(),
                    });
                }
                (ante.clone(), Some(Construct::Compound))
            }
        };
        let construct = construct.or(match clause.predicate {
            Predicate::Negate(_) => Some(Construct::Negate),
            Predicate::Indef(..) => Some(Construct::Indef),
            _ => None,
        });
        let statements = actors
            .iter()
            .map(|&a| clause.predicate.with_subject(a))
            .collect();
        out.lines.push(ParsedLine {
            number,
            statements,
            construct,
        });
        subjects.push(Some(actors));
    }
    Ok(out)
}

/// Parses the sentences of `story` that precede line `upto`.
pub fn parse_story_prefix(
    story: &BabiStory,
    upto: usize,
    keep: Option<&BTreeSet<usize>>,
    vocab: &Vocabulary,
) -> Result<ParsedStory, OracleError> {
    let sentences: Vec<(usize, &str)> = story.sentences_before(upto).collect();
    parse_sentences(&sentences, keep, vocab)
}

/// Parses a whole story.
pub fn parse_story(story: &BabiStory, vocab: &Vocabulary) -> Result<ParsedStory, OracleError> {
    parse_story_prefix(story, story.lines.len() + 1, None, vocab)
}
