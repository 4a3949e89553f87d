use std::collections::BTreeSet;

use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;

use super::config::GenConfig;
use super::SamplerError;
use crate::concepts::{Construct, EventKind};
use crate::microworld::{Actor, Location, Object, Statement, TrueState};
use crate::realization::{line_count, SurfaceOptions};

/// A sampled timeline and the world it actually describes: `trajectory[k]`
/// is the true state after the first `k` statements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoryPlan {
    pub timeline: Vec<Statement>,
    pub trajectory: Vec<TrueState>,
}

struct Builder<'a, R: Rng> {
    cfg: &'a GenConfig,
    events: &'a BTreeSet<EventKind>,
    surface: &'a SurfaceOptions,
    rng: &'a mut R,
    cast: Vec<Actor>,
    props: Vec<Object>,
    n_locations: usize,
    state: TrueState,
    timeline: Vec<Statement>,
    trajectory: Vec<TrueState>,
}

impl<R: Rng> Builder<'_, R> {
    fn other_location(&mut self, not: Location) -> Location {
        loop {
            let l = Location(self.rng.gen_range(0..self.n_locations) as u8);
            if l != not {
                return l;
            }
        }
    }

    fn destination(&mut self, a: Actor) -> Location {
        let here = self.state.actor_location(a);
        if self.rng.gen_bool(self.cfg.style.colocate_bias) {
            let spots: Vec<Location> = self
                .cast
                .iter()
                .map(|&b| self.state.actor_location(b))
                .filter(|&l| l != here)
                .collect();
            if let Some(&l) = spots.choose(self.rng) {
                return l;
            }
        }
        self.other_location(here)
    }

    fn grabs(&self, actor: Option<Actor>) -> Vec<Statement> {
        let mut out = Vec::new();
        for &a in &self.cast {
            if actor.is_some_and(|x| x != a) {
                continue;
            }
            for &o in &self.props {
                let s = Statement::Grab {
                    actor: a,
                    object: o,
                };
                if self.state.check(&s).is_ok() {
                    out.push(s);
                }
            }
        }
        out
    }

    fn drops(&self, actor: Option<Actor>) -> Vec<Statement> {
        let mut out = Vec::new();
        for &o in &self.props {
            if let Some(a) = self.state.holder(o) {
                if actor.is_none_or(|x| x == a) {
                    out.push(Statement::Drop {
                        actor: a,
                        object: o,
                    });
                }
            }
        }
        out
    }

    fn gives(&self) -> Vec<Statement> {
        let mut out = Vec::new();
        for &o in &self.props {
            let Some(giver) = self.state.holder(o) else {
                continue;
            };
            for &receiver in &self.cast {
                let s = Statement::Give {
                    giver,
                    receiver,
                    object: o,
                };
                if self.state.check(&s).is_ok() {
                    out.push(s);
                }
            }
        }
        out
    }

    /// A single event, optionally restricted to one actor and to the given
    /// event kinds.
    fn event(&mut self, actor: Option<Actor>, kinds: &BTreeSet<EventKind>) -> Option<Statement> {
        let mut options: Vec<(EventKind, Vec<Statement>)> = Vec::new();
        for &k in kinds {
            let candidates = match k {
                EventKind::Move => Vec::new(),
                EventKind::Grab => self.grabs(actor),
                EventKind::Drop => self.drops(actor),
                EventKind::Give if actor.is_none() => self.gives(),
                EventKind::Give => Vec::new(),
            };
            if k == EventKind::Move || !candidates.is_empty() {
                options.push((k, candidates));
            }
        }
        let weight = |k: EventKind| self.cfg.style.event_weights.get(&k).copied().unwrap_or(0.0);
        let (kind, candidates) = options
            .choose_weighted(self.rng, |(k, _)| weight(*k))
            .ok()?
            .clone();
        if kind == EventKind::Move {
            let a = actor.unwrap_or_else(|| *self.cast.choose(self.rng).expect("non-empty cast"));
            let to = self.destination(a);
            return Some(Statement::Move { actor: a, to });
        }
        candidates.choose(self.rng).copied()
    }

    fn two_actors(&mut self) -> (Actor, Actor) {
        let pair: Vec<Actor> = self.cast.choose_multiple(self.rng, 2).copied().collect();
        (pair[0], pair[1])
    }

    fn fresh_for_both(&mut self, a: Actor, b: Actor, not: Option<Location>) -> Location {
        loop {
            let l = Location(self.rng.gen_range(0..self.n_locations) as u8);
            if l != self.state.actor_location(a)
                && l != self.state.actor_location(b)
                && Some(l) != not
            {
                return l;
            }
        }
    }

    /// The next run of statements, shaped towards an enabled construct
    /// some of the time.
    fn block(&mut self) -> Vec<Statement> {
        let style = &self.cfg.style;
        let constructs = &self.cfg.concepts.constructs;
        let surface: Vec<Construct> = self.surface.constructs.iter().copied().collect();
        let moves = self.events.contains(&EventKind::Move);
        if !surface.is_empty() && self.rng.gen_bool(style.construct_rate) {
            match *surface.choose(self.rng).unwrap() {
                Construct::Conj if moves && self.n_locations > 2 => {
                    let (a, b) = self.two_actors();
                    let l = self.fresh_for_both(a, b, None);
                    return vec![
                        Statement::Move { actor: a, to: l },
                        Statement::Move { actor: b, to: l },
                    ];
                }
                Construct::Compound if moves && self.n_locations > 3 => {
                    let (a, b) = self.two_actors();
                    let x = self.fresh_for_both(a, b, None);
                    let y = self.other_location(x);
                    return vec![
                        Statement::Move { actor: a, to: x },
                        Statement::Move { actor: b, to: x },
                        Statement::Move { actor: a, to: y },
                        Statement::Move { actor: b, to: y },
                    ];
                }
                Construct::Coref => {
                    let last = self.timeline.last().copied();
                    if let Some(prev) = last {
                        let kinds: BTreeSet<EventKind> = self
                            .surface
                            .coref_events
                            .intersection(self.events)
                            .copied()
                            .collect();
                        let chains = prev.event_kind().is_some_and(|k| kinds.contains(&k))
                            && !matches!(prev, Statement::Give { .. });
                        if chains {
                            if let Some(s) = self.event(Some(prev.subject()), &kinds) {
                                return vec![s];
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        if constructs.contains(&Construct::Negate) && self.rng.gen_bool(style.negate_rate) {
            let a = *self.cast.choose(self.rng).unwrap();
            let location = self.other_location(self.state.actor_location(a));
            return vec![Statement::Negate { actor: a, location }];
        }
        if constructs.contains(&Construct::Indef) && self.rng.gen_bool(style.indef_rate) {
            let a = *self.cast.choose(self.rng).unwrap();
            let here = self.state.actor_location(a);
            let other = self.other_location(here);
            let (first, second) = if self.rng.gen_bool(0.5) {
                (here, other)
            } else {
                (other, here)
            };
            return vec![Statement::Indef {
                actor: a,
                first,
                second,
            }];
        }
        let events = self.events.clone();
        self.event(None, &events).into_iter().collect()
    }

    fn push(&mut self, block: &[Statement]) -> bool {
        let mut state = self.state.clone();
        let mut states = Vec::with_capacity(block.len());
        for s in block {
            if state.apply_mut(s).is_err() {
                return false;
            }
            states.push(state.clone());
        }
        self.timeline.extend_from_slice(block);
        self.trajectory.extend(states);
        self.state = state;
        true
    }

    fn pop(&mut self, n: usize) {
        let keep = self.timeline.len() - n;
        self.timeline.truncate(keep);
        self.trajectory.truncate(keep + 1);
        self.state = self.trajectory[keep].clone();
    }
}

/// Samples a timeline that realizes to exactly `length` lines. Every
/// statement is valid and truthful in the sampled world.
pub fn sample_story<R: Rng>(
    cfg: &GenConfig,
    events: &BTreeSet<EventKind>,
    surface: &SurfaceOptions,
    length: usize,
    rng: &mut R,
) -> Result<StoryPlan, SamplerError> {
    let vocab = &cfg.vocab;
    let n_locations = vocab.locations.len();
    let cast: Vec<Actor> = vocab
        .all_actors()
        .choose_multiple(rng, cfg.max_actors.min(vocab.actors.len()));
    let props: Vec<Object> = vocab
        .all_objects()
        .choose_multiple(rng, cfg.max_objects.min(vocab.objects.len()));
    let start: Vec<Location> = (0..vocab.actors.len())
        .map(|_| Location(rng.gen_range(0..n_locations) as u8))
        .collect();
    let state = TrueState::new(start, vocab.objects.len());
    let mut b = Builder {
        cfg,
        events,
        surface,
        rng,
        cast,
        props,
        n_locations,
        trajectory: vec![state.clone()],
        state,
        timeline: Vec::new(),
    };
    let budget = 40 * length + 40;
    let mut lines = 0;
    for _ in 0..budget {
        if lines == length {
            break;
        }
        let block = b.block();
        if block.is_empty() || !b.push(&block) {
            continue;
        }
        let now = line_count(&b.timeline, surface);
        if now > length {
            b.pop(block.len());
        } else {
            lines = now;
        }
    }
    if lines != length {
        return Err(SamplerError::SamplingStalled(format!(
            "could not fill a story of {length} lines"
        )));
    }
    Ok(StoryPlan {
        timeline: b.timeline,
        trajectory: b.trajectory,
    })
}
