use super::statement::Statement;
use super::vocab::{Actor, Location, Object, Vocabulary};
use super::WorldError;

/// Generator-side ground truth. Every vocabulary actor has a location, even
/// ones the story never mentions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrueState {
    actor_loc: Vec<Location>,
    holder: Vec<Option<Actor>>,
    obj_loc: Vec<Option<Location>>,
}

impl TrueState {
    /// All objects start unplaced.
    pub fn new(actor_loc: Vec<Location>, n_objects: usize) -> Self {
        TrueState {
            actor_loc,
            holder: vec![None; n_objects],
            obj_loc: vec![None; n_objects],
        }
    }

    pub fn actor_location(&self, a: Actor) -> Location {
        self.actor_loc[a.index()]
    }

    pub fn actor_locations(&self) -> &[Location] {
        &self.actor_loc
    }

    pub fn holder(&self, o: Object) -> Option<Actor> {
        self.holder[o.index()]
    }

    /// Where the object is, following its holder if it is carried.
    pub fn object_location(&self, o: Object) -> Option<Location> {
        match self.holder[o.index()] {
            Some(a) => Some(self.actor_location(a)),
            None => self.obj_loc[o.index()],
        }
    }

    /// Location of an object lying on the ground (not carried).
    pub fn resting_location(&self, o: Object) -> Option<Location> {
        self.obj_loc[o.index()]
    }

    pub fn is_placed(&self, o: Object) -> bool {
        self.holder[o.index()].is_some() || self.obj_loc[o.index()].is_some()
    }

    pub fn held_by(&self, a: Actor) -> impl Iterator<Item = Object> + '_ {
        self.holder
            .iter()
            .enumerate()
            .filter(move |(_, h)| **h == Some(a))
            .map(|(i, _)| Object(i as u8))
    }

    pub fn n_objects(&self) -> usize {
        self.holder.len()
    }

    /// Checks a statement against the current state without applying it.
    pub fn check(&self, s: &Statement) -> Result<(), WorldError> {
        let invalid = |msg: &str| Err(WorldError::InvalidEvent(msg.to_string()));
        match *s {
            Statement::Move { actor, to } => {
                if self.actor_location(actor) == to {
                    return invalid("MOVE to the current location");
                }
            }
            Statement::Grab { actor, object } => {
                if self.holder(object).is_some() {
                    return invalid("GRAB of an object that is already held");
                }
                if let Some(l) = self.obj_loc[object.index()] {
                    if l != self.actor_location(actor) {
                        return invalid("GRAB of an object at another location");
                    }
                }
            }
            Statement::Drop { actor, object } => {
                if self.holder(object) != Some(actor) {
                    return invalid("DROP of an object the actor does not hold");
                }
            }
            Statement::Give {
                giver,
                receiver,
                object,
            } => {
                if giver == receiver {
                    return invalid("GIVE to oneself");
                }
                if self.holder(object) != Some(giver) {
                    return invalid("GIVE of an object the giver does not hold");
                }
                if self.actor_location(giver) != self.actor_location(receiver) {
                    return invalid("GIVE between actors at different locations");
                }
            }
            Statement::Negate { actor, location } => {
                if self.actor_location(actor) == location {
                    return Err(WorldError::UntruthfulObservation(
                        "NEGATE names the actor's actual location".into(),
                    ));
                }
            }
            Statement::Indef {
                actor,
                first,
                second,
            } => {
                if first == second {
                    return invalid("INDEF with identical locations");
                }
                let at = self.actor_location(actor);
                if at != first && at != second {
                    return Err(WorldError::UntruthfulObservation(
                        "INDEF excludes the actor's actual location".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Applies a statement in place after checking its precondition.
    pub fn apply_mut(&mut self, s: &Statement) -> Result<(), WorldError> {
        self.check(s)?;
        match *s {
            Statement::Move { actor, to } => self.actor_loc[actor.index()] = to,
            Statement::Grab { actor, object } => {
                self.holder[object.index()] = Some(actor);
                self.obj_loc[object.index()] = None;
            }
            Statement::Drop { actor, object } => {
                self.holder[object.index()] = None;
                self.obj_loc[object.index()] = Some(self.actor_location(actor));
            }
            Statement::Give {
                receiver, object, ..
            } => self.holder[object.index()] = Some(receiver),
            Statement::Negate { .. } | Statement::Indef { .. } => {}
        }
        Ok(())
    }
}

/// Pure transition: the state after `s`, or why `s` cannot happen.
pub fn apply_statement(state: &TrueState, s: &Statement) -> Result<TrueState, WorldError> {
    let mut next = state.clone();
    next.apply_mut(s)?;
    Ok(next)
}

/// Replays a whole timeline, returning the state after every statement
/// (the first entry is the initial state).
pub fn replay(
    initial: &TrueState,
    timeline: &[Statement],
    vocab: &Vocabulary,
) -> Result<Vec<TrueState>, WorldError> {
    let mut states = Vec::with_capacity(timeline.len() + 1);
    states.push(initial.clone());
    let mut cur = initial.clone();
    for (i, s) in timeline.iter().enumerate() {
        s.validate(vocab)?;
        cur.apply_mut(s).map_err(|e| e.at_statement(i + 1))?;
        states.push(cur.clone());
    }
    Ok(states)
}
