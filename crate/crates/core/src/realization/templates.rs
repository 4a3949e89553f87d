//! The sentence grammar: one table used both to render statements and to
//! read them back.

use crate::concepts::EventKind;
use crate::microworld::{Actor, Gender, Location, Object, Statement, Vocabulary};

pub const MOVE_VERBS: &[&str] = &["moved", "went", "journeyed", "travelled", "traveled"];
pub const GRAB_VERBS: &[&str] = &["grabbed", "picked up", "took", "got"];
pub const DROP_VERBS: &[&str] = &["dropped", "put down", "discarded", "left"];
pub const GIVE_VERBS: &[&str] = &["gave", "handed", "passed"];

pub const COREF_CONNECTIVE: &str = "Following that,";
pub const COMPOUND_CONNECTIVE: &str = "Then";

pub fn verbs(kind: EventKind) -> &'static [&'static str] {
    match kind {
        EventKind::Move => MOVE_VERBS,
        EventKind::Grab => GRAB_VERBS,
        EventKind::Drop => DROP_VERBS,
        EventKind::Give => GIVE_VERBS,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subject {
    One(Actor),
    Two(Actor, Actor),
    Pronoun(Gender),
    They,
}

/// What a clause says about its subject, independent of wording.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    Move(Location),
    Grab(Object),
    Drop(Object),
    Give { receiver: Actor, object: Object },
    Negate(Location),
    Indef(Location, Location),
}

impl Predicate {
    pub fn of(s: &Statement) -> Predicate {
        match *s {
            Statement::Move { to, .. } => Predicate::Move(to),
            Statement::Grab { object, .. } => Predicate::Grab(object),
            Statement::Drop { object, .. } => Predicate::Drop(object),
            Statement::Give {
                receiver, object, ..
            } => Predicate::Give { receiver, object },
            Statement::Negate { location, .. } => Predicate::Negate(location),
            Statement::Indef { first, second, .. } => Predicate::Indef(first, second),
        }
    }

    pub fn with_subject(self, actor: Actor) -> Statement {
        match self {
            Predicate::Move(to) => Statement::Move { actor, to },
            Predicate::Grab(object) => Statement::Grab { actor, object },
            Predicate::Drop(object) => Statement::Drop { actor, object },
            Predicate::Give { receiver, object } => Statement::Give {
                giver: actor,
                receiver,
                object,
            },
            Predicate::Negate(location) => Statement::Negate { actor, location },
            Predicate::Indef(first, second) => Statement::Indef {
                actor,
                first,
                second,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    FollowingThat,
    Afterwards,
    Then,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Clause {
    pub connective: Option<Connective>,
    pub subject: Subject,
    pub predicate: Predicate,
}

/// Word choices that do not affect meaning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Wording {
    pub verb: usize,
    /// GIVE as "P1 verb the O to P2" instead of "P1 verb P2 the O".
    pub give_to: bool,
}

pub fn render_clause(clause: &Clause, wording: Wording, vocab: &Vocabulary) -> String {
    let mut out = String::new();
    match clause.connective {
        Some(Connective::FollowingThat) => out.push_str("Following that, "),
        Some(Connective::Afterwards) => out.push_str("Afterwards, "),
        Some(Connective::Then) => out.push_str("Then "),
        None => {}
    }
    let subject = match clause.subject {
        Subject::One(a) => vocab.actor_name(a).to_string(),
        Subject::Two(a, b) => format!("{} and {}", vocab.actor_name(a), vocab.actor_name(b)),
        Subject::Pronoun(g) => g.pronoun().to_string(),
        Subject::They => "they".to_string(),
    };
    if out.is_empty() {
        out.push_str(&capitalize(&subject));
    } else {
        out.push_str(&subject);
    }
    let pick = |list: &[&'static str]| list[wording.verb % list.len()];
    let rest = match clause.predicate {
        Predicate::Move(l) => format!("{} to the {}", pick(MOVE_VERBS), vocab.location_name(l)),
        Predicate::Grab(o) => format!("{} the {}", pick(GRAB_VERBS), vocab.object_name(o)),
        Predicate::Drop(o) => format!("{} the {}", pick(DROP_VERBS), vocab.object_name(o)),
        Predicate::Give { receiver, object } if wording.give_to => format!(
            "{} the {} to {}",
            pick(GIVE_VERBS),
            vocab.object_name(object),
            vocab.actor_name(receiver)
        ),
        Predicate::Give { receiver, object } => format!(
            "{} {} the {}",
            pick(GIVE_VERBS),
            vocab.actor_name(receiver),
            vocab.object_name(object)
        ),
        Predicate::Negate(l) => format!("is not in the {}", vocab.location_name(l)),
        Predicate::Indef(a, b) => format!(
            "is either in the {} or the {}",
            vocab.location_name(a),
            vocab.location_name(b)
        ),
    };
    out.push(' ');
    out.push_str(&rest);
    out.push('.');
    out
}

pub fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Splits a sentence into lowercase-insensitive word tokens, dropping the
/// final punctuation mark and commas.
pub fn tokens(text: &str) -> Vec<&str> {
    let text = text.trim();
    let text = text
        .strip_suffix('.')
        .or_else(|| text.strip_suffix('?'))
        .unwrap_or(text);
    text.split_whitespace()
        .map(|t| t.trim_end_matches(','))
        .filter(|t| !t.is_empty())
        .collect()
}

/// A cursor over sentence tokens with vocabulary-aware helpers.
pub(crate) struct Cursor<'a, 'v> {
    toks: Vec<&'a str>,
    pos: usize,
    vocab: &'v Vocabulary,
}

impl<'a, 'v> Cursor<'a, 'v> {
    pub(crate) fn new(text: &'a str, vocab: &'v Vocabulary) -> Self {
        Cursor {
            toks: tokens(text),
            pos: 0,
            vocab,
        }
    }

    pub(crate) fn done(&self) -> bool {
        self.pos == self.toks.len()
    }

    pub(crate) fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).copied()
    }

    /// Consumes `words` (case-insensitively) if they come next.
    pub(crate) fn eat(&mut self, words: &str) -> bool {
        let want: Vec<&str> = words.split(' ').collect();
        let end = self.pos + want.len();
        if end > self.toks.len() {
            return false;
        }
        let hit = self.toks[self.pos..end]
            .iter()
            .zip(&want)
            .all(|(t, w)| t.eq_ignore_ascii_case(w));
        if hit {
            self.pos = end;
        }
        hit
    }

    pub(crate) fn eat_any(&mut self, options: &[&str]) -> Option<usize> {
        options.iter().position(|w| self.eat(w))
    }

    pub(crate) fn actor(&mut self) -> Option<Actor> {
        let a = self.vocab.actor(self.peek()?)?;
        self.pos += 1;
        Some(a)
    }

    pub(crate) fn object(&mut self) -> Option<Object> {
        let o = self.vocab.object(self.peek()?)?;
        self.pos += 1;
        Some(o)
    }

    pub(crate) fn location(&mut self) -> Option<Location> {
        let l = self.vocab.location(self.peek()?)?;
        self.pos += 1;
        Some(l)
    }

    pub(crate) fn the_object(&mut self) -> Option<Object> {
        self.eat("the").then_some(())?;
        self.object()
    }

    pub(crate) fn the_location(&mut self) -> Option<Location> {
        self.eat("the").then_some(())?;
        self.location()
    }
}

/// Reads one story sentence. Besides the generated forms this accepts a
/// few variants seen in hand-written stories: "is in the L" as a move,
/// "at" for "in", "Afterwards" as a connective and a missing comma.
pub fn parse_clause(text: &str, vocab: &Vocabulary) -> Result<Clause, String> {
    let mut c = Cursor::new(text, vocab);
    let connective = if c.eat("following that") {
        Some(Connective::FollowingThat)
    } else if c.eat("afterwards") {
        Some(Connective::Afterwards)
    } else if c.eat("then") {
        Some(Connective::Then)
    } else {
        None
    };
    let subject = if c.eat("he") {
        Subject::Pronoun(Gender::Male)
    } else if c.eat("she") {
        Subject::Pronoun(Gender::Female)
    } else if c.eat("they") {
        Subject::They
    } else {
        let a = c
            .actor()
            .ok_or_else(|| format!("expected an actor in {text:?}"))?;
        if c.eat("and") {
            let b = c
                .actor()
                .ok_or_else(|| format!("expected a second actor in {text:?}"))?;
            Subject::Two(a, b)
        } else {
            Subject::One(a)
        }
    };
    let predicate =
        parse_predicate(&mut c).ok_or_else(|| format!("no template matches {text:?}"))?;
    if !c.done() {
        return Err(format!("trailing words in {text:?}"));
    }
    let plural = matches!(subject, Subject::Two(..) | Subject::They);
    if plural && !matches!(predicate, Predicate::Move(_)) {
        return Err(format!("plural subjects only move: {text:?}"));
    }
    Ok(Clause {
        connective,
        subject,
        predicate,
    })
}

const PREPOSITIONS: &[&str] = &["in", "at"];

fn parse_predicate(c: &mut Cursor) -> Option<Predicate> {
    if c.eat("is") {
        if c.eat("not") {
            c.eat_any(PREPOSITIONS)?;
            return c.the_location().map(Predicate::Negate);
        }
        if c.eat("either") {
            c.eat_any(PREPOSITIONS)?;
            let first = c.the_location()?;
            c.eat("or").then_some(())?;
            c.eat_any(PREPOSITIONS);
            let second = c.the_location()?;
            return (first != second).then_some(Predicate::Indef(first, second));
        }
        c.eat_any(PREPOSITIONS)?;
        return c.the_location().map(Predicate::Move);
    }
    if c.eat_any(MOVE_VERBS).is_some() {
        c.eat("to").then_some(())?;
        return c.the_location().map(Predicate::Move);
    }
    if c.eat_any(GRAB_VERBS).is_some() {
        return c.the_object().map(Predicate::Grab);
    }
    if c.eat_any(DROP_VERBS).is_some() {
        return c.the_object().map(Predicate::Drop);
    }
    if c.eat_any(GIVE_VERBS).is_some() {
        if let Some(receiver) = c.actor() {
            let object = c.the_object()?;
            return Some(Predicate::Give { receiver, object });
        }
        let object = c.the_object()?;
        c.eat("to").then_some(())?;
        let receiver = c.actor()?;
        return Some(Predicate::Give { receiver, object });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_generated_forms() {
        let v = Vocabulary::default();
        let john = v.actor("John").unwrap();
        let mary = v.actor("Mary").unwrap();
        let apple = v.object("apple").unwrap();
        let park = v.location("park").unwrap();
        let clause = |predicate| Clause {
            connective: None,
            subject: Subject::One(john),
            predicate,
        };
        let w = Wording {
            verb: 4,
            give_to: false,
        };
        assert_eq!(
            render_clause(&clause(Predicate::Move(park)), w, &v),
            "John traveled to the park."
        );
        let w = Wording {
            verb: 1,
            give_to: false,
        };
        assert_eq!(
            render_clause(
                &clause(Predicate::Give {
                    receiver: mary,
                    object: apple
                }),
                w,
                &v
            ),
            "John handed Mary the apple."
        );
        assert_eq!(
            render_clause(&clause(Predicate::Negate(park)), w, &v),
            "John is not in the park."
        );
        let coref = Clause {
            connective: Some(Connective::FollowingThat),
            subject: Subject::Pronoun(Gender::Male),
            predicate: Predicate::Move(park),
        };
        assert_eq!(
            render_clause(&coref, w, &v),
            "Following that, he went to the park."
        );
    }

    #[test]
    fn parses_handwritten_variants() {
        let v = Vocabulary::default();
        let c = parse_clause("Following that he put down the football.", &v).unwrap();
        assert_eq!(c.connective, Some(Connective::FollowingThat));
        assert_eq!(c.predicate, Predicate::Drop(v.object("football").unwrap()));
        let c = parse_clause("Bill is in the office.", &v).unwrap();
        assert_eq!(c.predicate, Predicate::Move(v.location("office").unwrap()));
        let c = parse_clause("Bill passed the milk to Julie.", &v).unwrap();
        assert_eq!(
            c.predicate,
            Predicate::Give {
                receiver: v.actor("Julie").unwrap(),
                object: v.object("milk").unwrap()
            }
        );
        let c = parse_clause("Afterwards they journeyed to the bathroom.", &v).unwrap();
        assert_eq!(c.subject, Subject::They);
        let c = parse_clause("John is either at the park or the school.", &v).unwrap();
        assert!(matches!(c.predicate, Predicate::Indef(..)));
    }

    #[test]
    fn rejects_unknown_sentences() {
        let v = Vocabulary::default();
        assert!(parse_clause("John flew to the park.", &v).is_err());
        assert!(parse_clause("Zed went to the park.", &v).is_err());
        assert!(parse_clause("John went to the park quickly.", &v).is_err());
        assert!(parse_clause("John and Mary grabbed the apple.", &v).is_err());
    }
}
