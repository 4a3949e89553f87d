//! A second, independent reading procedure. Constraints are collected as
//! they are read and then solved by propagating candidate sets along
//! equalities until nothing changes.

use crate::microworld::{Actor, Location, Object, Statement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Place {
    Fixed(Location),
    /// Where the actor was before any narrated move.
    Unknown(Actor),
}

pub struct Reader {
    all: u64,
    actor: Vec<Place>,
    domain: Vec<u64>,
    links: Vec<(Place, Place)>,
    holder: Vec<Option<Actor>>,
    resting: Vec<Option<Place>>,
    acquired: Vec<usize>,
    trail: Vec<Vec<Option<Place>>>,
    step: usize,
    ok: bool,
}

impl Reader {
    pub fn new(actors: usize, objects: usize, locations: usize) -> Reader {
        let all = if locations >= 64 {
            u64::MAX
        } else {
            (1u64 << locations) - 1
        };
        Reader {
            all,
            actor: (0..actors)
                .map(|a| Place::Unknown(Actor(a as u8)))
                .collect(),
            domain: vec![all; actors],
            links: Vec::new(),
            holder: vec![None; objects],
            resting: vec![None; objects],
            acquired: vec![0; objects],
            trail: vec![Vec::new(); objects],
            step: 0,
            ok: true,
        }
    }

    pub fn read_all(mut self, statements: &[Statement]) -> Reader {
        for s in statements {
            self.read(s);
        }
        self.ok = self.ok && self.settle();
        self
    }

    fn restrict(&mut self, p: Place, allowed: u64) {
        match p {
            Place::Unknown(a) => self.domain[a.index()] &= allowed,
            Place::Fixed(l) => self.ok &= allowed & bit(l) != 0,
        }
    }

    pub fn read(&mut self, s: &Statement) {
        self.step += 1;
        match *s {
            Statement::Move { actor, to } => self.actor[actor.index()] = Place::Fixed(to),
            Statement::Grab { actor, object } => {
                let o = object.index();
                if let Some(spot) = self.resting[o].take() {
                    self.links.push((self.actor[actor.index()], spot));
                }
                self.holder[o] = Some(actor);
                self.acquired[o] = self.step;
            }
            Statement::Drop { actor, object } => {
                let o = object.index();
                self.holder[o] = None;
                self.resting[o] = Some(self.actor[actor.index()]);
            }
            Statement::Give {
                giver,
                receiver,
                object,
            } => {
                let o = object.index();
                self.links
                    .push((self.actor[giver.index()], self.actor[receiver.index()]));
                self.holder[o] = Some(receiver);
                self.resting[o] = None;
                self.acquired[o] = self.step;
            }
            Statement::Negate { actor, location } => {
                self.restrict(self.actor[actor.index()], self.all & !bit(location));
            }
            Statement::Indef {
                actor,
                first,
                second,
            } => {
                self.restrict(self.actor[actor.index()], bit(first) | bit(second));
            }
        }
        for o in 0..self.holder.len() {
            let here = match self.holder[o] {
                Some(a) => Some(self.actor[a.index()]),
                None => self.resting[o],
            };
            self.trail[o].push(here);
        }
    }

    fn candidates(&self, p: Place) -> u64 {
        match p {
            Place::Fixed(l) => bit(l),
            Place::Unknown(a) => self.domain[a.index()],
        }
    }

    /// Propagates candidate sets along links to a fixpoint. Returns false
    /// when some place has no candidate left.
    fn settle(&mut self) -> bool {
        loop {
            let mut changed = false;
            for &(x, y) in &self.links {
                let both = self.candidates(x) & self.candidates(y);
                for p in [x, y] {
                    match p {
                        Place::Unknown(a) => {
                            if self.domain[a.index()] != both {
                                self.domain[a.index()] = both;
                                changed = true;
                            }
                        }
                        Place::Fixed(l) => {
                            if both & bit(l) == 0 {
                                return false;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        self.domain.iter().all(|&d| d != 0)
    }

    /// False when what was read admits no world.
    pub fn consistent(&self) -> bool {
        self.ok
    }

    pub fn actor_candidates(&self, a: Actor) -> u64 {
        self.candidates(self.actor[a.index()])
    }

    /// Candidates for the object's location; `None` before it appears.
    pub fn object_candidates(&self, o: Object) -> Option<u64> {
        let place = match self.holder[o.index()] {
            Some(a) => self.actor[a.index()],
            None => self.resting[o.index()]?,
        };
        Some(self.candidates(place))
    }

    pub fn holdings(&self, a: Actor) -> Vec<Object> {
        let mut held: Vec<(usize, Object)> = (0..self.holder.len())
            .filter(|&o| self.holder[o] == Some(a))
            .map(|o| (self.acquired[o], Object(o as u8)))
            .collect();
        held.sort();
        held.into_iter().map(|(_, o)| o).collect()
    }

    /// Known places the object has been, duplicates merged and uncertain
    /// stretches as `None`.
    pub fn object_trail(&self, o: Object) -> Vec<Option<Location>> {
        let mut out: Vec<Option<Location>> = Vec::new();
        for p in &self.trail[o.index()] {
            let here = p.and_then(|p| single(self.candidates(p)));
            if out.last() != Some(&here) {
                out.push(here);
            }
        }
        out
    }
}

fn bit(l: Location) -> u64 {
    1u64 << l.0
}

pub fn single(mask: u64) -> Option<Location> {
    (mask.count_ones() == 1).then(|| Location(mask.trailing_zeros() as u8))
}
