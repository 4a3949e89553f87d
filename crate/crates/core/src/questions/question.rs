use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::concepts::QuestionType;
use crate::microworld::{
    Actor, Evaluation, Fact, Location, Object, Statement, Verdict, Vocabulary,
};
use crate::realization::Cursor;

/// The five question forms over GIVE events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum GiveQuery {
    /// Who gave the O to P2?
    WhoGaveTo { object: Object, receiver: Actor },
    /// Who gave the O?
    WhoGave { object: Object },
    /// Who received the O?
    WhoReceived { object: Object },
    /// Who did P1 give the O to?
    WhomDidGive { giver: Actor, object: Object },
    /// What did P1 give to P2?
    WhatDidGive { giver: Actor, receiver: Actor },
}

impl GiveQuery {
    fn matches(&self, s: &Statement) -> bool {
        let Statement::Give {
            giver: g,
            receiver: r,
            object: o,
        } = *s
        else {
            return false;
        };
        match *self {
            GiveQuery::WhoGaveTo { object, receiver } => o == object && r == receiver,
            GiveQuery::WhoGave { object } | GiveQuery::WhoReceived { object } => o == object,
            GiveQuery::WhomDidGive { giver, object } => g == giver && o == object,
            GiveQuery::WhatDidGive { giver, receiver } => g == giver && r == receiver,
        }
    }

    /// Every form that can be asked about one GIVE event.
    pub fn all_for(s: &Statement) -> Vec<GiveQuery> {
        let Statement::Give {
            giver,
            receiver,
            object,
        } = *s
        else {
            return Vec::new();
        };
        vec![
            GiveQuery::WhoGaveTo { object, receiver },
            GiveQuery::WhoGave { object },
            GiveQuery::WhoReceived { object },
            GiveQuery::WhomDidGive { giver, object },
            GiveQuery::WhatDidGive { giver, receiver },
        ]
    }

    /// Index of the only matching GIVE among `statements`, if exactly one.
    pub fn unique_match<'a>(
        &self,
        statements: impl IntoIterator<Item = (usize, &'a Statement)>,
    ) -> Option<usize> {
        let mut hits = statements.into_iter().filter(|(_, s)| self.matches(s));
        let first = hits.next()?;
        hits.next().is_none().then_some(first.0)
    }

    fn read_out(&self, s: &Statement, vocab: &Vocabulary) -> String {
        let Statement::Give {
            giver,
            receiver,
            object,
        } = *s
        else {
            unreachable!("give queries only match GIVE statements")
        };
        match self {
            GiveQuery::WhoGaveTo { .. } | GiveQuery::WhoGave { .. } => {
                vocab.actor_name(giver).into()
            }
            GiveQuery::WhoReceived { .. } | GiveQuery::WhomDidGive { .. } => {
                vocab.actor_name(receiver).into()
            }
            GiveQuery::WhatDidGive { .. } => vocab.object_name(object).into(),
        }
    }
}

/// A question about a story, before it is worded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Question {
    WhereActor { actor: Actor },
    WhereObject { object: Object },
    WhereWasObject { object: Object, before: Location },
    IsActorAt { actor: Actor, location: Location },
    Carrying { actor: Actor },
    HowMany { actor: Actor },
    Give { query: GiveQuery },
}

impl Question {
    pub fn qtype(&self) -> QuestionType {
        match self {
            Question::WhereActor { .. } => QuestionType::WhereActor,
            Question::WhereObject { .. } => QuestionType::WhereObject,
            Question::WhereWasObject { .. } => QuestionType::WhereWasObject,
            Question::IsActorAt { .. } => QuestionType::YesNo,
            Question::Carrying { .. } => QuestionType::List,
            Question::HowMany { .. } => QuestionType::Counting,
            Question::Give { .. } => QuestionType::Give,
        }
    }

    pub fn render(&self, vocab: &Vocabulary) -> String {
        let p = |a: Actor| vocab.actor_name(a);
        let o = |o: Object| vocab.object_name(o);
        let l = |l: Location| vocab.location_name(l);
        let mut s = String::new();
        let _ = match *self {
            Question::WhereActor { actor } => write!(s, "Where is {}?", p(actor)),
            Question::WhereObject { object } => write!(s, "Where is the {}?", o(object)),
            Question::WhereWasObject { object, before } => {
                write!(s, "Where was the {} before the {}?", o(object), l(before))
            }
            Question::IsActorAt { actor, location } => {
                write!(s, "Is {} in the {}?", p(actor), l(location))
            }
            Question::Carrying { actor } => write!(s, "What is {} carrying?", p(actor)),
            Question::HowMany { actor } => write!(s, "How many objects is {} carrying?", p(actor)),
            Question::Give { query } => match query {
                GiveQuery::WhoGaveTo { object, receiver } => {
                    write!(s, "Who gave the {} to {}?", o(object), p(receiver))
                }
                GiveQuery::WhoGave { object } => write!(s, "Who gave the {}?", o(object)),
                GiveQuery::WhoReceived { object } => write!(s, "Who received the {}?", o(object)),
                GiveQuery::WhomDidGive { giver, object } => {
                    write!(s, "Who did {} give the {} to?", p(giver), o(object))
                }
                GiveQuery::WhatDidGive { giver, receiver } => {
                    write!(s, "What did {} give to {}?", p(giver), p(receiver))
                }
            },
        };
        s
    }

    /// Reads a question back from its wording (either "in" or "at" is
    /// accepted in yes-no questions).
    pub fn parse(text: &str, vocab: &Vocabulary) -> Option<Question> {
        let mut c = Cursor::new(text, vocab);
        let q = if c.eat("where is") {
            match c.actor() {
                Some(actor) => Question::WhereActor { actor },
                None => Question::WhereObject {
                    object: c.the_object()?,
                },
            }
        } else if c.eat("where was") {
            let object = c.the_object()?;
            c.eat("before").then_some(())?;
            Question::WhereWasObject {
                object,
                before: c.the_location()?,
            }
        } else if c.eat("is") {
            let actor = c.actor()?;
            c.eat_any(&["in", "at"])?;
            Question::IsActorAt {
                actor,
                location: c.the_location()?,
            }
        } else if c.eat("what is") {
            let actor = c.actor()?;
            c.eat("carrying").then_some(())?;
            Question::Carrying { actor }
        } else if c.eat("how many objects is") {
            let actor = c.actor()?;
            c.eat("carrying").then_some(())?;
            Question::HowMany { actor }
        } else if c.eat("who gave") {
            let object = c.the_object()?;
            if c.eat("to") {
                Question::Give {
                    query: GiveQuery::WhoGaveTo {
                        object,
                        receiver: c.actor()?,
                    },
                }
            } else {
                Question::Give {
                    query: GiveQuery::WhoGave { object },
                }
            }
        } else if c.eat("who received") {
            Question::Give {
                query: GiveQuery::WhoReceived {
                    object: c.the_object()?,
                },
            }
        } else if c.eat("who did") {
            let giver = c.actor()?;
            c.eat("give").then_some(())?;
            let object = c.the_object()?;
            c.eat("to").then_some(())?;
            Question::Give {
                query: GiveQuery::WhomDidGive { giver, object },
            }
        } else if c.eat("what did") {
            let giver = c.actor()?;
            c.eat("give to").then_some(())?;
            Question::Give {
                query: GiveQuery::WhatDidGive {
                    giver,
                    receiver: c.actor()?,
                },
            }
        } else {
            return None;
        };
        c.done().then_some(q)
    }
}

pub fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::KnownTrue => "yes",
        Verdict::KnownFalse => "no",
        Verdict::Possible => "maybe",
    }
}

const COUNT_WORDS: &[&str] = &[
    "none", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
];

pub fn count_word(n: usize) -> String {
    COUNT_WORDS
        .get(n)
        .map(|w| w.to_string())
        .unwrap_or_else(|| n.to_string())
}

pub fn list_answer(objects: &[Object], vocab: &Vocabulary) -> String {
    if objects.is_empty() {
        return "nothing".into();
    }
    objects
        .iter()
        .map(|&o| vocab.object_name(o))
        .collect::<Vec<_>>()
        .join(",")
}

/// Known locations the object passed through, with runs merged and
/// stretches of uncertainty kept as `None`.
pub fn location_trail(eval: &Evaluation, object: Object) -> Vec<Option<Location>> {
    let mut trail: Vec<Option<Location>> = Vec::new();
    for &(_, term) in eval.object_history(object) {
        let here = term.and_then(|t| eval.term_domain(t).only());
        if trail.last() != Some(&here) {
            trail.push(here);
        }
    }
    trail
}

/// The "before" question a trail supports: the current location and the
/// one held immediately before it, both known, with the current location
/// not visited earlier.
pub fn where_was_pair(trail: &[Option<Location>]) -> Option<(Location, Location)> {
    let k = trail.len();
    if k < 2 {
        return None;
    }
    let (current, previous) = (trail[k - 1]?, trail[k - 2]?);
    if trail[..k - 2].contains(&Some(current)) {
        return None;
    }
    Some((current, previous))
}

/// Answers `q` from an evaluation of (a subset of) `timeline`. `mask`
/// selects the statements that were read; `None` means all of them.
/// Returns `None` when the reading does not determine an answer.
pub fn answer_from(
    q: &Question,
    eval: &Evaluation,
    timeline: &[Statement],
    mask: Option<&[bool]>,
    vocab: &Vocabulary,
) -> Option<String> {
    if !eval.is_consistent() {
        return None;
    }
    match *q {
        Question::WhereActor { actor } => eval
            .actor_domain(actor)
            .only()
            .map(|l| vocab.location_name(l).to_string()),
        Question::WhereObject { object } => {
            eval.object_term(object)?;
            eval.object_domain(object)
                .only()
                .map(|l| vocab.location_name(l).to_string())
        }
        Question::WhereWasObject { object, before } => {
            let (current, previous) = where_was_pair(&location_trail(eval, object))?;
            (current == before).then(|| vocab.location_name(previous).to_string())
        }
        Question::IsActorAt { actor, location } => {
            Some(verdict_word(eval.verdict(Fact::ActorAt(actor, location))).to_string())
        }
        Question::Carrying { actor } => Some(list_answer(&eval.holdings(actor), vocab)),
        Question::HowMany { actor } => Some(count_word(eval.holdings(actor).len())),
        Question::Give { query } => {
            let read = timeline
                .iter()
                .enumerate()
                .filter(|(i, _)| mask.is_none_or(|m| m[*i]));
            let i = query.unique_match(read)?;
            Some(query.read_out(&timeline[i], vocab))
        }
    }
}
