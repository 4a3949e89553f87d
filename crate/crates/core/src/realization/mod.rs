//! Turns statement timelines into numbered English sentences.

mod templates;

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::concepts::{Construct, EventKind};
use crate::microworld::{Statement, Vocabulary};

pub(crate) use templates::Cursor;
pub use templates::{
    capitalize, parse_clause, render_clause, tokens, verbs, Clause, Connective, Predicate, Subject,
    Wording, COMPOUND_CONNECTIVE, COREF_CONNECTIVE, DROP_VERBS, GIVE_VERBS, GRAB_VERBS, MOVE_VERBS,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealizeError {
    #[error("cannot realize timeline: {0}")]
    UnrealizableTimeline(String),
}

/// Which surface constructs may be used, and for COREF which events may
/// take part on either side of the pronoun.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceOptions {
    pub constructs: BTreeSet<Construct>,
    #[serde(default = "default_coref_events")]
    pub coref_events: BTreeSet<EventKind>,
}

fn default_coref_events() -> BTreeSet<EventKind> {
    [EventKind::Move, EventKind::Grab, EventKind::Drop].into()
}

impl Default for SurfaceOptions {
    fn default() -> Self {
        SurfaceOptions {
            constructs: BTreeSet::new(),
            coref_events: default_coref_events(),
        }
    }
}

impl SurfaceOptions {
    pub fn new(constructs: impl IntoIterator<Item = Construct>) -> Self {
        SurfaceOptions {
            constructs: constructs.into_iter().filter(|c| c.is_surface()).collect(),
            ..Default::default()
        }
    }

    fn has(&self, c: Construct) -> bool {
        self.constructs.contains(&c)
    }
}

/// How a run of statements becomes one line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineShape {
    Plain,
    /// "Following that, he ...", continuing the previous line's actor.
    Coref,
    /// "P1 and P2 moved to the L."
    Conj,
    /// First line of a compound: like a conjunction.
    CompoundHead,
    /// "Then they moved to the L."
    CompoundTail,
}

impl LineShape {
    pub fn width(self) -> usize {
        match self {
            LineShape::Plain | LineShape::Coref => 1,
            LineShape::Conj | LineShape::CompoundHead | LineShape::CompoundTail => 2,
        }
    }
}

/// Groups statements into lines: compounds first, then conjunctions, then
/// co-reference, scanning left to right. Returns `(first statement, shape)`
/// per line.
pub fn segment(timeline: &[Statement], opts: &SurfaceOptions) -> Vec<(usize, LineShape)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < timeline.len() {
        if opts.has(Construct::Compound) && is_compound(&timeline[i..]) {
            out.push((i, LineShape::CompoundHead));
            out.push((i + 2, LineShape::CompoundTail));
            i += 4;
        } else if opts.has(Construct::Conj) && is_conj(&timeline[i..]) {
            out.push((i, LineShape::Conj));
            i += 2;
        } else if opts.has(Construct::Coref) && continues_actor(timeline, &out, i, opts) {
            out.push((i, LineShape::Coref));
            i += 1;
        } else {
            out.push((i, LineShape::Plain));
            i += 1;
        }
    }
    out
}

/// Number of lines the timeline realizes to.
pub fn line_count(timeline: &[Statement], opts: &SurfaceOptions) -> usize {
    segment(timeline, opts).len()
}

fn is_conj(t: &[Statement]) -> bool {
    match t {
        [Statement::Move { actor: a, to: x }, Statement::Move { actor: b, to: y }, ..] => {
            a != b && x == y
        }
        _ => false,
    }
}

fn is_compound(t: &[Statement]) -> bool {
    match t {
        [Statement::Move { actor: a1, to: x1 }, Statement::Move { actor: b1, to: x2 }, Statement::Move { actor: a2, to: y1 }, Statement::Move { actor: b2, to: y2 }, ..] => {
            a1 != b1 && a1 == a2 && b1 == b2 && x1 == x2 && y1 == y2 && x1 != y1
        }
        _ => false,
    }
}

fn single_actor_event(s: &Statement, opts: &SurfaceOptions) -> bool {
    matches!(
        s,
        Statement::Move { .. } | Statement::Grab { .. } | Statement::Drop { .. }
    ) && s
        .event_kind()
        .is_some_and(|k| opts.coref_events.contains(&k))
}

fn continues_actor(
    t: &[Statement],
    lines: &[(usize, LineShape)],
    i: usize,
    opts: &SurfaceOptions,
) -> bool {
    let Some(&(start, shape)) = lines.last() else {
        return false;
    };
    if !matches!(shape, LineShape::Plain | LineShape::Coref) {
        return false;
    }
    let (prev, cur) = (&t[start], &t[i]);
    single_actor_event(prev, opts)
        && single_actor_event(cur, opts)
        && prev.subject() == cur.subject()
}

/// Line-level bookkeeping for a realized story. Line numbers are 1-based;
/// statement indices are 0-based positions in the timeline.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Alignment {
    pub sentence_to_statements: Vec<Vec<usize>>,
    pub coref_antecedent: BTreeMap<usize, usize>,
    pub constructs: Vec<Option<Construct>>,
}

impl Alignment {
    pub fn from_segments(timeline: &[Statement], segments: &[(usize, LineShape)]) -> Alignment {
        let mut a = Alignment::default();
        for (k, &(start, shape)) in segments.iter().enumerate() {
            let line = k + 1;
            a.sentence_to_statements
                .push((start..start + shape.width()).collect());
            let construct = match shape {
                LineShape::Plain => match timeline[start] {
                    Statement::Negate { .. } => Some(Construct::Negate),
                    Statement::Indef { .. } => Some(Construct::Indef),
                    _ => None,
                },
                LineShape::Coref => Some(Construct::Coref),
                LineShape::Conj => Some(Construct::Conj),
                LineShape::CompoundHead | LineShape::CompoundTail => Some(Construct::Compound),
            };
            a.constructs.push(construct);
            if matches!(shape, LineShape::Coref | LineShape::CompoundTail) {
                a.coref_antecedent.insert(line, line - 1);
            }
        }
        a
    }

    pub fn line_count(&self) -> usize {
        self.sentence_to_statements.len()
    }

    pub fn statements_of(&self, line: usize) -> &[usize] {
        &self.sentence_to_statements[line - 1]
    }

    pub fn construct_of(&self, line: usize) -> Option<Construct> {
        self.constructs[line - 1]
    }

    /// Line (1-based) realizing statement `idx`.
    pub fn line_of(&self, idx: usize) -> usize {
        self.sentence_to_statements
            .iter()
            .position(|s| s.contains(&idx))
            .expect("every statement is on a line")
            + 1
    }

    pub fn pronoun_closure(&self, lines: &BTreeSet<usize>) -> BTreeSet<usize> {
        pronoun_closure(self, lines)
    }

    /// Inclusion mask over statements for a set of lines.
    pub fn statement_mask(&self, lines: &BTreeSet<usize>, n_statements: usize) -> Vec<bool> {
        let mut mask = vec![false; n_statements];
        for &l in lines {
            for &s in self.statements_of(l) {
                mask[s] = true;
            }
        }
        mask
    }
}

/// Adds every line a pronoun in `lines` depends on, transitively.
pub fn pronoun_closure(alignment: &Alignment, lines: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut out = lines.clone();
    let mut stack: Vec<usize> = lines.iter().copied().collect();
    while let Some(l) = stack.pop() {
        if let Some(&ante) = alignment.coref_antecedent.get(&l) {
            if out.insert(ante) {
                stack.push(ante);
            }
        }
    }
    out
}

/// A realized story.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Passage {
    pub sentences: Vec<String>,
    pub alignment: Alignment,
}

pub fn realize<R: Rng + ?Sized>(
    timeline: &[Statement],
    opts: &SurfaceOptions,
    vocab: &Vocabulary,
    rng: &mut R,
) -> Result<Passage, RealizeError> {
    if timeline.is_empty() {
        return Err(RealizeError::UnrealizableTimeline("empty timeline".into()));
    }
    for s in timeline {
        s.validate(vocab)
            .map_err(|e| RealizeError::UnrealizableTimeline(e.to_string()))?;
    }
    if let Some(c) = opts.constructs.iter().find(|c| !c.is_surface()) {
        return Err(RealizeError::UnrealizableTimeline(format!(
            "{} is realized from its own statements",
            c.name()
        )));
    }
    let segments = segment(timeline, opts);
    let sentences = segments
        .iter()
        .map(|&(start, shape)| {
            let s = &timeline[start];
            let subject = match shape {
                LineShape::Plain => Subject::One(s.subject()),
                LineShape::Coref => Subject::Pronoun(vocab.gender(s.subject())),
                LineShape::Conj | LineShape::CompoundHead => {
                    Subject::Two(s.subject(), timeline[start + 1].subject())
                }
                LineShape::CompoundTail => Subject::They,
            };
            let connective = match shape {
                LineShape::Coref => Some(Connective::FollowingThat),
                LineShape::CompoundTail => Some(Connective::Then),
                _ => None,
            };
            let clause = Clause {
                connective,
                subject,
                predicate: Predicate::of(s),
            };
            let wording = match s.event_kind() {
                Some(kind) => Wording {
                    verb: rng.gen_range(0..verbs(kind).len()),
                    give_to: kind == EventKind::Give && rng.gen_bool(0.5),
                },
                None => Wording::default(),
            };
            render_clause(&clause, wording, vocab)
        })
        .collect();
    Ok(Passage {
        sentences,
        alignment: Alignment::from_segments(timeline, &segments),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mv(v: &Vocabulary, a: &str, l: &str) -> Statement {
        Statement::Move {
            actor: v.actor(a).unwrap(),
            to: v.location(l).unwrap(),
        }
    }

    #[test]
    fn coref_pair() {
        let v = Vocabulary::default();
        let t = [mv(&v, "John", "garden"), mv(&v, "John", "store")];
        let opts = SurfaceOptions::new([Construct::Coref]);
        let p = realize(&t, &opts, &v, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!(p.sentences[0].starts_with("John "));
        assert!(p.sentences[1].starts_with("Following that, he "));
        assert!(p.sentences[1].ends_with(" to the store."));
        assert_eq!(p.alignment.coref_antecedent.get(&2), Some(&1));
    }

    #[test]
    fn compound_takes_precedence() {
        let v = Vocabulary::default();
        let t = [
            mv(&v, "Jeff", "cinema"),
            mv(&v, "Fred", "cinema"),
            mv(&v, "Jeff", "school"),
            mv(&v, "Fred", "school"),
        ];
        let opts = SurfaceOptions::new([Construct::Coref, Construct::Conj, Construct::Compound]);
        let p = realize(&t, &opts, &v, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(p.sentences.len(), 2);
        assert!(p.sentences[0].starts_with("Jeff and Fred "));
        assert!(p.sentences[1].starts_with("Then they "));
        assert_eq!(
            p.alignment.sentence_to_statements,
            vec![vec![0, 1], vec![2, 3]]
        );
        assert_eq!(p.alignment.coref_antecedent.get(&2), Some(&1));

        let conj_only = SurfaceOptions::new([Construct::Conj]);
        assert_eq!(line_count(&t, &conj_only), 2);
        assert_eq!(line_count(&t, &SurfaceOptions::default()), 4);
    }

    #[test]
    fn coref_respects_event_filter() {
        let v = Vocabulary::default();
        let john = v.actor("John").unwrap();
        let t = [
            mv(&v, "John", "park"),
            Statement::Grab {
                actor: john,
                object: v.object("apple").unwrap(),
            },
        ];
        let mut opts = SurfaceOptions::new([Construct::Coref]);
        assert_eq!(segment(&t, &opts)[1].1, LineShape::Coref);
        opts.coref_events = [EventKind::Move].into();
        assert_eq!(segment(&t, &opts)[1].1, LineShape::Plain);
    }

    #[test]
    fn closure_examples() {
        let mut a = Alignment::default();
        a.coref_antecedent.insert(2, 1);
        assert_eq!(pronoun_closure(&a, &[2].into()), [1, 2].into());
        a.coref_antecedent.insert(3, 2);
        assert_eq!(pronoun_closure(&a, &[3].into()), [1, 2, 3].into());
        assert_eq!(
            pronoun_closure(&Alignment::default(), &[3].into()),
            [3].into()
        );
    }

    #[test]
    fn same_seed_same_text() {
        let v = Vocabulary::default();
        let t = [mv(&v, "Mary", "office"), mv(&v, "Sandra", "office")];
        let opts = SurfaceOptions::new([Construct::Conj]);
        let a = realize(&t, &opts, &v, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = realize(&t, &opts, &v, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sentences.len(), 1);
    }
}
