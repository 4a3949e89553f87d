use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::RngCore;

use super::question::{answer_from, location_trail, where_was_pair, GiveQuery, Question};
use super::Reading;
use crate::concepts::QuestionType;
use crate::microworld::{Actor, Fact, Statement, Verdict};

/// One family of questions. Families are looked up by name in a
/// [`FamilyRegistry`], so new families can be added without touching the
/// sampler.
pub trait QuestionFamily: Send + Sync {
    fn qtype(&self) -> QuestionType;

    fn name(&self) -> &str {
        self.qtype().name()
    }

    /// Questions of this family the story can answer. Cheap: no supporting
    /// lines are computed here.
    fn propose(&self, reading: &Reading, rng: &mut dyn RngCore) -> Vec<Question>;

    /// Supporting lines for one of the proposed questions.
    fn support(&self, reading: &Reading, q: &Question) -> Option<BTreeSet<usize>>;
}

fn mentioned_actors(timeline: &[Statement]) -> BTreeSet<Actor> {
    let mut out = BTreeSet::new();
    for s in timeline {
        out.insert(s.subject());
        if let Statement::Give { receiver, .. } = *s {
            out.insert(receiver);
        }
    }
    out
}

pub struct WhereActorFamily;

impl QuestionFamily for WhereActorFamily {
    fn qtype(&self) -> QuestionType {
        QuestionType::WhereActor
    }

    fn propose(&self, r: &Reading, _rng: &mut dyn RngCore) -> Vec<Question> {
        mentioned_actors(r.timeline)
            .into_iter()
            .filter(|&a| r.eval.actor_domain(a).only().is_some())
            .map(|actor| Question::WhereActor { actor })
            .collect()
    }

    fn support(&self, r: &Reading, q: &Question) -> Option<BTreeSet<usize>> {
        let Question::WhereActor { actor } = *q else {
            return None;
        };
        let at = r.eval.actor_domain(actor).only()?;
        r.line_support(|e, _| e.actor_domain(actor).only() == Some(at))
    }
}

pub struct WhereObjectFamily;

impl QuestionFamily for WhereObjectFamily {
    fn qtype(&self) -> QuestionType {
        QuestionType::WhereObject
    }

    fn propose(&self, r: &Reading, _rng: &mut dyn RngCore) -> Vec<Question> {
        r.vocab
            .all_objects()
            .filter(|&o| {
                r.eval.object_term(o).is_some() && r.eval.object_domain(o).only().is_some()
            })
            .map(|object| Question::WhereObject { object })
            .collect()
    }

    fn support(&self, r: &Reading, q: &Question) -> Option<BTreeSet<usize>> {
        let Question::WhereObject { object } = *q else {
            return None;
        };
        r.eval.object_term(object)?;
        let at = r.eval.object_domain(object).only()?;
        r.line_support(|e, _| {
            e.object_term(object).is_some() && e.object_domain(object).only() == Some(at)
        })
    }
}

pub struct WhereWasObjectFamily;

impl QuestionFamily for WhereWasObjectFamily {
    fn qtype(&self) -> QuestionType {
        QuestionType::WhereWasObject
    }

    fn propose(&self, r: &Reading, _rng: &mut dyn RngCore) -> Vec<Question> {
        r.vocab
            .all_objects()
            .filter_map(|object| {
                let (before, _) = where_was_pair(&location_trail(&r.eval, object))?;
                Some(Question::WhereWasObject { object, before })
            })
            .collect()
    }

    fn support(&self, r: &Reading, q: &Question) -> Option<BTreeSet<usize>> {
        let Question::WhereWasObject { object, before } = *q else {
            return None;
        };
        let (current, previous) = where_was_pair(&location_trail(&r.eval, object))?;
        if current != before {
            return None;
        }
        r.line_support(|e, _| {
            where_was_pair(&location_trail(e, object)) == Some((current, previous))
        })
    }
}

/// Yes-no questions. At most one question per actor and answer: "yes" for
/// a known location, "no" for a random excluded location and "maybe" for
/// a location left open by a two-way disjunction.
pub struct YesNoFamily;

impl QuestionFamily for YesNoFamily {
    fn qtype(&self) -> QuestionType {
        QuestionType::YesNo
    }

    fn propose(&self, r: &Reading, rng: &mut dyn RngCore) -> Vec<Question> {
        let mut out = Vec::new();
        for actor in mentioned_actors(r.timeline) {
            let domain = r.eval.actor_domain(actor);
            if let Some(location) = domain.only() {
                out.push(Question::IsActorAt { actor, location });
            }
            let excluded: Vec<_> = r
                .vocab
                .all_locations()
                .filter(|&l| !domain.contains(l))
                .collect();
            if let Some(&location) = excluded.choose(rng) {
                out.push(Question::IsActorAt { actor, location });
            }
            if domain.len() == 2 {
                let open: Vec<_> = domain.iter().collect();
                if let Some(&location) = open.choose(rng) {
                    out.push(Question::IsActorAt { actor, location });
                }
            }
        }
        out
    }

    fn support(&self, r: &Reading, q: &Question) -> Option<BTreeSet<usize>> {
        let Question::IsActorAt { actor, location } = *q else {
            return None;
        };
        let fact = Fact::ActorAt(actor, location);
        let (verdict, domain) = r.eval.signature(fact);
        match verdict {
            Verdict::Possible => r.line_support(|e, _| e.signature(fact) == (verdict, domain)),
            _ => r.line_support(|e, _| e.verdict(fact) == verdict),
        }
    }
}

/// Lines carrying every possession change the actor took part in.
fn possession_lines(r: &Reading, actor: Actor) -> BTreeSet<usize> {
    let lines: BTreeSet<usize> = r
        .timeline
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_possession_change_of(actor))
        .map(|(i, _)| r.alignment().line_of(i))
        .collect();
    r.alignment().pronoun_closure(&lines)
}

fn has_possession_history(r: &Reading, actor: Actor) -> bool {
    r.timeline.iter().any(|s| s.is_possession_change_of(actor))
}

pub struct ListFamily;

impl QuestionFamily for ListFamily {
    fn qtype(&self) -> QuestionType {
        QuestionType::List
    }

    fn propose(&self, r: &Reading, _rng: &mut dyn RngCore) -> Vec<Question> {
        mentioned_actors(r.timeline)
            .into_iter()
            .filter(|&a| has_possession_history(r, a))
            .map(|actor| Question::Carrying { actor })
            .collect()
    }

    fn support(&self, r: &Reading, q: &Question) -> Option<BTreeSet<usize>> {
        let Question::Carrying { actor } = *q else {
            return None;
        };
        Some(possession_lines(r, actor)).filter(|f| !f.is_empty())
    }
}

pub struct CountingFamily;

impl QuestionFamily for CountingFamily {
    fn qtype(&self) -> QuestionType {
        QuestionType::Counting
    }

    fn propose(&self, r: &Reading, _rng: &mut dyn RngCore) -> Vec<Question> {
        mentioned_actors(r.timeline)
            .into_iter()
            .filter(|&a| has_possession_history(r, a))
            .map(|actor| Question::HowMany { actor })
            .collect()
    }

    fn support(&self, r: &Reading, q: &Question) -> Option<BTreeSet<usize>> {
        let Question::HowMany { actor } = *q else {
            return None;
        };
        Some(possession_lines(r, actor)).filter(|f| !f.is_empty())
    }
}

/// Questions over GIVE events. A form is only asked when exactly one GIVE
/// in the story fits it, so the answer is never ambiguous.
pub struct GiveFamily;

impl QuestionFamily for GiveFamily {
    fn qtype(&self) -> QuestionType {
        QuestionType::Give
    }

    fn propose(&self, r: &Reading, _rng: &mut dyn RngCore) -> Vec<Question> {
        let mut out = Vec::new();
        for (i, s) in r.timeline.iter().enumerate() {
            for query in GiveQuery::all_for(s) {
                if query.unique_match(r.timeline.iter().enumerate()) == Some(i) {
                    out.push(Question::Give { query });
                }
            }
        }
        out
    }

    fn support(&self, r: &Reading, q: &Question) -> Option<BTreeSet<usize>> {
        let Question::Give { query } = *q else {
            return None;
        };
        let i = query.unique_match(r.timeline.iter().enumerate())?;
        let f = r
            .alignment()
            .pronoun_closure(&[r.alignment().line_of(i)].into());
        // The give line alone must answer the question.
        let (eval, mask) = r.read_lines(&f);
        answer_from(q, &eval, r.timeline, Some(&mask), r.vocab)?;
        Some(f)
    }
}

/// Question families selectable by name.
pub struct FamilyRegistry {
    families: BTreeMap<String, Box<dyn QuestionFamily>>,
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        Self::standard()
    }
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        FamilyRegistry {
            families: BTreeMap::new(),
        }
    }

    /// The seven built-in families.
    pub fn standard() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(WhereActorFamily));
        reg.register(Box::new(WhereObjectFamily));
        reg.register(Box::new(WhereWasObjectFamily));
        reg.register(Box::new(YesNoFamily));
        reg.register(Box::new(ListFamily));
        reg.register(Box::new(CountingFamily));
        reg.register(Box::new(GiveFamily));
        reg
    }

    /// Adds a family, replacing any family registered under the same name.
    pub fn register(&mut self, family: Box<dyn QuestionFamily>) {
        self.families.insert(family.name().to_string(), family);
    }

    pub fn by_name(&self, name: &str) -> Option<&dyn QuestionFamily> {
        self.families.get(name).map(|b| b.as_ref())
    }

    pub fn get(&self, qtype: QuestionType) -> Option<&dyn QuestionFamily> {
        self.by_name(qtype.name())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.families.keys().map(String::as_str)
    }
}
