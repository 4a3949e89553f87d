use serde::{Deserialize, Serialize};

use super::vocab::{Actor, Location, Object, Vocabulary};
use super::WorldError;
use crate::concepts::{Concept, Construct, EventKind};

/// One narrated statement. MOVE/GRAB/DROP/GIVE are world events;
/// NEGATE/INDEF are truthful observations that leave the world unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "UPPERCASE")]
pub enum Statement {
    Move {
        actor: Actor,
        to: Location,
    },
    Grab {
        actor: Actor,
        object: Object,
    },
    Drop {
        actor: Actor,
        object: Object,
    },
    Give {
        giver: Actor,
        receiver: Actor,
        object: Object,
    },
    Negate {
        actor: Actor,
        location: Location,
    },
    Indef {
        actor: Actor,
        first: Location,
        second: Location,
    },
}

impl Statement {
    pub fn event_kind(&self) -> Option<EventKind> {
        match self {
            Statement::Move { .. } => Some(EventKind::Move),
            Statement::Grab { .. } => Some(EventKind::Grab),
            Statement::Drop { .. } => Some(EventKind::Drop),
            Statement::Give { .. } => Some(EventKind::Give),
            Statement::Negate { .. } | Statement::Indef { .. } => None,
        }
    }

    pub fn concept(&self) -> Concept {
        match self {
            Statement::Negate { .. } => Concept::Construct(Construct::Negate),
            Statement::Indef { .. } => Concept::Construct(Construct::Indef),
            other => Concept::Event(other.event_kind().expect("event statement")),
        }
    }

    /// The grammatical subject (the giver for GIVE).
    pub fn subject(&self) -> Actor {
        match *self {
            Statement::Move { actor, .. }
            | Statement::Grab { actor, .. }
            | Statement::Drop { actor, .. }
            | Statement::Negate { actor, .. }
            | Statement::Indef { actor, .. } => actor,
            Statement::Give { giver, .. } => giver,
        }
    }

    pub fn involves_actor(&self, a: Actor) -> bool {
        match *self {
            Statement::Give {
                giver, receiver, ..
            } => giver == a || receiver == a,
            _ => self.subject() == a,
        }
    }

    /// True for possession changes in which `a` takes part.
    pub fn is_possession_change_of(&self, a: Actor) -> bool {
        match *self {
            Statement::Grab { actor, .. } | Statement::Drop { actor, .. } => actor == a,
            Statement::Give {
                giver, receiver, ..
            } => giver == a || receiver == a,
            _ => false,
        }
    }

    pub fn object(&self) -> Option<Object> {
        match *self {
            Statement::Grab { object, .. }
            | Statement::Drop { object, .. }
            | Statement::Give { object, .. } => Some(object),
            _ => None,
        }
    }

    /// Checks entity references and the structural invariants
    /// (giver ≠ receiver, two distinct INDEF locations).
    pub fn validate(&self, vocab: &Vocabulary) -> Result<(), WorldError> {
        let actor_ok = |a: Actor| a.index() < vocab.actors.len();
        let object_ok = |o: Object| o.index() < vocab.objects.len();
        let loc_ok = |l: Location| l.index() < vocab.locations.len();
        let known = match *self {
            Statement::Move { actor, to } => actor_ok(actor) && loc_ok(to),
            Statement::Grab { actor, object } | Statement::Drop { actor, object } => {
                actor_ok(actor) && object_ok(object)
            }
            Statement::Give {
                giver,
                receiver,
                object,
            } => actor_ok(giver) && actor_ok(receiver) && object_ok(object),
            Statement::Negate { actor, location } => actor_ok(actor) && loc_ok(location),
            Statement::Indef {
                actor,
                first,
                second,
            } => actor_ok(actor) && loc_ok(first) && loc_ok(second),
        };
        if !known {
            return Err(WorldError::UnknownEntity(format!("{self:?}")));
        }
        match *self {
            Statement::Give {
                giver, receiver, ..
            } if giver == receiver => Err(WorldError::InvalidEvent(
                "GIVE needs two different actors".into(),
            )),
            Statement::Indef { first, second, .. } if first == second => Err(
                WorldError::InvalidEvent("INDEF needs two different locations".into()),
            ),
            _ => Ok(()),
        }
    }

    /// Compact rendering used in diagnostics, e.g. `MOVE(John, park)`.
    pub fn describe(&self, vocab: &Vocabulary) -> String {
        let a = |x: Actor| vocab.actor_name(x).to_string();
        let o = |x: Object| vocab.object_name(x).to_string();
        let l = |x: Location| vocab.location_name(x).to_string();
        match *self {
            Statement::Move { actor, to } => format!("MOVE({}, {})", a(actor), l(to)),
            Statement::Grab { actor, object } => format!("GRAB({}, {})", a(actor), o(object)),
            Statement::Drop { actor, object } => format!("DROP({}, {})", a(actor), o(object)),
            Statement::Give {
                giver,
                receiver,
                object,
            } => format!("GIVE({}, {}, {})", a(giver), a(receiver), o(object)),
            Statement::Negate { actor, location } => {
                format!("NEGATE({}, {})", a(actor), l(location))
            }
            Statement::Indef {
                actor,
                first,
                second,
            } => format!("INDEF({}, {}, {})", a(actor), l(first), l(second)),
        }
    }
}
