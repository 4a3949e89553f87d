//! Question families: what can be asked about a realized story, the
//! answer, and the lines that support it.

mod families;
mod question;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::concepts::{Concept, QuestionType};
use crate::microworld::{
    minimal_support, Actor, Evaluation, Location, Object, Statement, Vocabulary,
};
use crate::realization::{Alignment, Passage};

pub use families::{
    CountingFamily, FamilyRegistry, GiveFamily, ListFamily, QuestionFamily, WhereActorFamily,
    WhereObjectFamily, WhereWasObjectFamily, YesNoFamily,
};
pub use question::{
    answer_from, count_word, list_answer, location_trail, verdict_word, where_was_pair, GiveQuery,
    Question,
};

/// A realized story together with its full reading.
pub struct Reading<'a> {
    pub timeline: &'a [Statement],
    pub passage: &'a Passage,
    pub vocab: &'a Vocabulary,
    pub eval: Evaluation,
}

impl<'a> Reading<'a> {
    pub fn new(timeline: &'a [Statement], passage: &'a Passage, vocab: &'a Vocabulary) -> Self {
        Reading {
            timeline,
            passage,
            vocab,
            eval: Evaluation::run(timeline, vocab.sizes(), None),
        }
    }

    pub fn alignment(&self) -> &Alignment {
        &self.passage.alignment
    }

    pub fn answer(&self, q: &Question) -> Option<String> {
        answer_from(q, &self.eval, self.timeline, None, self.vocab)
    }

    /// Reads only `lines` (plus the lines their pronouns point to).
    pub fn read_lines(&self, lines: &BTreeSet<usize>) -> (Evaluation, Vec<bool>) {
        let closed = self.alignment().pronoun_closure(lines);
        let mask = self
            .alignment()
            .statement_mask(&closed, self.timeline.len());
        let eval = Evaluation::run(self.timeline, self.vocab.sizes(), Some(&mask));
        (eval, mask)
    }

    /// A 1-minimal, pronoun-closed set of lines on which `goal` still
    /// holds. `None` if it does not hold on the whole story.
    pub fn line_support<F>(&self, goal: F) -> Option<BTreeSet<usize>>
    where
        F: Fn(&Evaluation, &[bool]) -> bool,
    {
        let alignment = self.alignment();
        let n_lines = alignment.line_count();
        let n = self.timeline.len();
        let size = self.vocab.sizes();
        let kept = minimal_support(n_lines, |line_mask| {
            let mut mask = vec![false; n];
            let mut stack: Vec<usize> = (0..n_lines)
                .filter(|&l| line_mask[l])
                .map(|l| l + 1)
                .collect();
            let mut seen = vec![false; n_lines + 1];
            while let Some(l) = stack.pop() {
                if std::mem::replace(&mut seen[l], true) {
                    continue;
                }
                for &s in alignment.statements_of(l) {
                    mask[s] = true;
                }
                if let Some(&a) = alignment.coref_antecedent.get(&l) {
                    stack.push(a);
                }
            }
            let eval = Evaluation::run(self.timeline, size, Some(&mask));
            eval.is_consistent() && goal(&eval, &mask)
        })?;
        let lines: BTreeSet<usize> = kept.into_iter().map(|l| l + 1).collect();
        Some(alignment.pronoun_closure(&lines))
    }
}

/// Event kinds of the statements on `f`'s lines plus the constructs those
/// lines use.
pub fn support_composition(
    f: &BTreeSet<usize>,
    alignment: &Alignment,
    timeline: &[Statement],
) -> BTreeSet<Concept> {
    let mut out = BTreeSet::new();
    for &line in f {
        for &s in alignment.statements_of(line) {
            out.insert(timeline[s].concept());
        }
        if let Some(c) = alignment.construct_of(line) {
            out.insert(Concept::Construct(c));
        }
    }
    out
}

/// One generated question with its answer and supporting lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionInstance {
    pub qtype: QuestionType,
    pub question: Question,
    pub text: String,
    pub answer: String,
    pub f: BTreeSet<usize>,
    pub f_c: BTreeSet<Concept>,
}

impl QuestionInstance {
    pub fn n(&self) -> usize {
        self.f.len()
    }
}

/// Answers and supports `q` on the reading. `None` if the question is not
/// answerable or has no supporting lines.
pub fn instantiate(
    reading: &Reading,
    family: &dyn QuestionFamily,
    q: &Question,
) -> Option<QuestionInstance> {
    let answer = reading.answer(q)?;
    let f = family.support(reading, q)?;
    if f.is_empty() {
        return None;
    }
    let f_c = support_composition(&f, reading.alignment(), reading.timeline);
    Some(QuestionInstance {
        qtype: q.qtype(),
        question: *q,
        text: q.render(reading.vocab),
        answer,
        f,
        f_c,
    })
}

/// "Where is P?" when P's location is known.
pub fn gen_where_p(reading: &Reading, actor: Actor) -> Option<QuestionInstance> {
    instantiate(reading, &WhereActorFamily, &Question::WhereActor { actor })
}

/// "Where is the O?" when the object's location is known.
pub fn gen_where_o(reading: &Reading, object: Object) -> Option<QuestionInstance> {
    instantiate(
        reading,
        &WhereObjectFamily,
        &Question::WhereObject { object },
    )
}

pub fn gen_yes_no(reading: &Reading, actor: Actor, location: Location) -> Option<QuestionInstance> {
    instantiate(
        reading,
        &YesNoFamily,
        &Question::IsActorAt { actor, location },
    )
}

pub fn gen_list(reading: &Reading, actor: Actor) -> Option<QuestionInstance> {
    instantiate(reading, &ListFamily, &Question::Carrying { actor })
}

pub fn gen_counting(reading: &Reading, actor: Actor) -> Option<QuestionInstance> {
    instantiate(reading, &CountingFamily, &Question::HowMany { actor })
}

pub fn gen_give(reading: &Reading, query: GiveQuery) -> Option<QuestionInstance> {
    instantiate(reading, &GiveFamily, &Question::Give { query })
}

/// "Where was the O before the L?" for the object's current location.
pub fn gen_where_was_o(reading: &Reading, object: Object) -> Option<QuestionInstance> {
    let (before, _) = where_was_pair(&location_trail(&reading.eval, object))?;
    instantiate(
        reading,
        &WhereWasObjectFamily,
        &Question::WhereWasObject { object, before },
    )
}
