use std::collections::BTreeSet;

use serde::Serialize;

use crate::concepts::{Concept, EventKind};
use crate::io::{BabiFile, BabiStory};
use crate::microworld::Vocabulary;
use crate::oracle::{parse_story_prefix, profile_question, OracleError, QuestionProfile};
use crate::sampler::Holdout;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoldoutViolation {
    /// 0-based story index in the file.
    pub story: usize,
    pub line: usize,
    pub rule: Holdout,
    pub f_c: BTreeSet<Concept>,
}

/// Event kinds narrated before line `upto`.
pub fn story_events(
    story: &BabiStory,
    upto: usize,
    vocab: &Vocabulary,
) -> Result<BTreeSet<EventKind>, OracleError> {
    let parsed = parse_story_prefix(story, upto, None, vocab)?;
    Ok(parsed
        .statements()
        .iter()
        .filter_map(|s| s.event_kind())
        .collect())
}

/// Re-reads every question of the file from its text and reports those
/// that break one of the rules.
pub fn audit_holdouts(
    file: &BabiFile,
    rules: &[Holdout],
    vocab: &Vocabulary,
) -> Result<Vec<HoldoutViolation>, OracleError> {
    let mut out = Vec::new();
    for (i, story) in file.stories.iter().enumerate() {
        for q in story.questions() {
            let profile = profile_question(story, q, vocab)?;
            let events = story_events(story, q.line, vocab)?;
            for rule in rules {
                if rule.violated_by(profile.qtype, &profile.f_c, &events) {
                    out.push(HoldoutViolation {
                        story: i,
                        line: q.line,
                        rule: rule.clone(),
                        f_c: profile.f_c.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Distinct support compositions among the profiles.
pub fn fc_set<'a>(
    profiles: impl IntoIterator<Item = &'a QuestionProfile>,
) -> BTreeSet<BTreeSet<Concept>> {
    profiles.into_iter().map(|p| p.f_c.clone()).collect()
}

/// Test compositions that appear in none of the training sets. A split is
/// compositional when this is non-empty.
pub fn compositional_certificate(
    train: &[BTreeSet<BTreeSet<Concept>>],
    test: &BTreeSet<BTreeSet<Concept>>,
) -> BTreeSet<BTreeSet<Concept>> {
    test.iter()
        .filter(|fc| train.iter().all(|set| !set.contains(*fc)))
        .cloned()
        .collect()
}
