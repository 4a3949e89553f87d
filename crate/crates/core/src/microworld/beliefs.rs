//! Reader-side possible-worlds evaluation.
//!
//! Every fact a story can establish about locations reduces to constraints
//! on the location each actor occupied before their first narrated move:
//! after a MOVE the actor's location is a constant again. INDEF and NEGATE
//! restrict one of those unknowns, while GRAB of a dropped object and GIVE
//! equate two of them (or an unknown and a constant). Equalities plus unary
//! restrictions are solved exactly with a union-find whose classes carry a
//! location mask, so the set of possible worlds is the product of the class
//! domains. Actors nothing is known about stay out of the enumeration.

use std::collections::BTreeSet;
use std::fmt;

use super::statement::Statement;
use super::vocab::{Actor, Location, Object, Vocabulary, WorldSize};
use super::WorldError;

/// Where an actor (or a dropped object) is, as far as the reader can tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    /// A narrated, definite location.
    At(Location),
    /// The actor's location before their first narrated move.
    Initial(Actor),
}

/// A set of locations packed into a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LocationSet(u64);

impl LocationSet {
    pub fn full(n_locations: usize) -> Self {
        if n_locations >= 64 {
            LocationSet(u64::MAX)
        } else {
            LocationSet((1u64 << n_locations) - 1)
        }
    }

    pub fn single(l: Location) -> Self {
        LocationSet(1u64 << l.0)
    }

    pub fn from_locations(ls: impl IntoIterator<Item = Location>) -> Self {
        LocationSet(ls.into_iter().fold(0, |m, l| m | (1u64 << l.0)))
    }

    pub fn contains(self, l: Location) -> bool {
        self.0 & (1u64 << l.0) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersect(self, other: LocationSet) -> LocationSet {
        LocationSet(self.0 & other.0)
    }

    pub fn without(self, l: Location) -> LocationSet {
        LocationSet(self.0 & !(1u64 << l.0))
    }

    /// The single member, if there is exactly one.
    pub fn only(self) -> Option<Location> {
        (self.len() == 1).then(|| Location(self.0.trailing_zeros() as u8))
    }

    pub fn iter(self) -> impl Iterator<Item = Location> {
        (0..64u8)
            .filter(move |i| self.0 & (1u64 << i) != 0)
            .map(Location)
    }
}

impl fmt::Debug for LocationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|l| l.0)).finish()
    }
}

/// An atomic fact the reader can be asked about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fact {
    ActorAt(Actor, Location),
    ObjectAt(Object, Location),
    HeldBy(Object, Actor),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    KnownTrue,
    KnownFalse,
    Possible,
}

impl Verdict {
    fn of(domain: LocationSet, l: Location) -> Verdict {
        if !domain.contains(l) {
            Verdict::KnownFalse
        } else if domain.len() == 1 {
            Verdict::KnownTrue
        } else {
            Verdict::Possible
        }
    }
}

/// Union-find over actor unknowns (nodes `0..actors`) and location
/// constants (nodes `actors..actors+locations`).
struct Solver {
    parent: Vec<usize>,
    domain: Vec<LocationSet>,
    touched: Vec<bool>,
    actors: usize,
    ok: bool,
}

impl Solver {
    fn new(size: WorldSize) -> Self {
        let n = size.actors + size.locations;
        let full = LocationSet::full(size.locations);
        let mut domain = vec![full; n];
        let mut touched = vec![false; n];
        for l in 0..size.locations {
            domain[size.actors + l] = LocationSet::single(Location(l as u8));
            touched[size.actors + l] = true;
        }
        Solver {
            parent: (0..n).collect(),
            domain,
            touched,
            actors: size.actors,
            ok: true,
        }
    }

    fn node(&self, t: Term) -> usize {
        match t {
            Term::Initial(a) => a.index(),
            Term::At(l) => self.actors + l.index(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn restrict(&mut self, t: Term, allowed: LocationSet) {
        let r = self.find(self.node(t));
        self.domain[r] = self.domain[r].intersect(allowed);
        self.touched[r] = true;
        if self.domain[r].is_empty() {
            self.ok = false;
        }
    }

    fn equate(&mut self, a: Term, b: Term) {
        let ra = self.find(self.node(a));
        let rb = self.find(self.node(b));
        if ra == rb {
            return;
        }
        // Keep constants as representatives so `At` nodes stay roots.
        let (keep, merge) = if rb >= self.actors {
            (rb, ra)
        } else {
            (ra, rb)
        };
        self.parent[merge] = keep;
        self.domain[keep] = self.domain[keep].intersect(self.domain[merge]);
        self.touched[keep] = true;
        if self.domain[keep].is_empty() {
            self.ok = false;
        }
    }
}

/// The outcome of reading (a subset of) a timeline.
#[derive(Debug, Clone)]
pub struct Evaluation {
    size: WorldSize,
    consistent: bool,
    actor_term: Vec<Term>,
    holder: Vec<Option<Actor>>,
    resting: Vec<Option<Term>>,
    acquired: Vec<usize>,
    var_root: Vec<usize>,
    var_domain: Vec<LocationSet>,
    var_touched: Vec<bool>,
    history: Vec<Vec<(usize, Option<Term>)>>,
}

impl Evaluation {
    /// Reads the statements selected by `mask` (all when `None`), in order.
    ///
    /// Reading is lenient so that arbitrary subsets of a story can be
    /// evaluated: a DROP places the object at the dropper whether or not the
    /// grab was narrated, and a GRAB of an object whose resting place is not
    /// known constrains nothing.
    pub fn run(timeline: &[Statement], size: WorldSize, mask: Option<&[bool]>) -> Evaluation {
        let mut solver = Solver::new(size);
        let mut actor_term: Vec<Term> = (0..size.actors)
            .map(|a| Term::Initial(Actor(a as u8)))
            .collect();
        let mut holder: Vec<Option<Actor>> = vec![None; size.objects];
        let mut resting: Vec<Option<Term>> = vec![None; size.objects];
        let mut acquired = vec![0usize; size.objects];
        let mut history: Vec<Vec<(usize, Option<Term>)>> = vec![Vec::new(); size.objects];

        for (i, s) in timeline.iter().enumerate() {
            if let Some(m) = mask {
                if !m[i] {
                    continue;
                }
            }
            let step = i + 1;
            match *s {
                Statement::Move { actor, to } => actor_term[actor.index()] = Term::At(to),
                Statement::Grab { actor, object } => {
                    if let Some(spot) = resting[object.index()] {
                        solver.equate(actor_term[actor.index()], spot);
                    }
                    holder[object.index()] = Some(actor);
                    resting[object.index()] = None;
                    acquired[object.index()] = step;
                }
                Statement::Drop { actor, object } => {
                    holder[object.index()] = None;
                    resting[object.index()] = Some(actor_term[actor.index()]);
                }
                Statement::Give {
                    giver,
                    receiver,
                    object,
                } => {
                    solver.equate(actor_term[giver.index()], actor_term[receiver.index()]);
                    holder[object.index()] = Some(receiver);
                    resting[object.index()] = None;
                    acquired[object.index()] = step;
                }
                Statement::Negate { actor, location } => {
                    let all = LocationSet::full(size.locations);
                    solver.restrict(actor_term[actor.index()], all.without(location));
                }
                Statement::Indef {
                    actor,
                    first,
                    second,
                } => {
                    solver.restrict(
                        actor_term[actor.index()],
                        LocationSet::from_locations([first, second]),
                    );
                }
            }
            for o in 0..size.objects {
                let term = match holder[o] {
                    Some(a) => Some(actor_term[a.index()]),
                    None => resting[o],
                };
                history[o].push((step, term));
            }
        }

        let mut var_root = Vec::with_capacity(size.actors);
        let mut var_domain = Vec::with_capacity(size.actors);
        let mut var_touched = Vec::with_capacity(size.actors);
        for a in 0..size.actors {
            let r = solver.find(a);
            var_root.push(r);
            var_domain.push(solver.domain[r]);
            var_touched.push(solver.touched[r]);
        }
        Evaluation {
            size,
            consistent: solver.ok,
            actor_term,
            holder,
            resting,
            acquired,
            var_root,
            var_domain,
            var_touched,
            history,
        }
    }

    pub fn size(&self) -> WorldSize {
        self.size
    }

    /// False when the statements read admit no world at all.
    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    pub fn actor_term(&self, a: Actor) -> Term {
        self.actor_term[a.index()]
    }

    pub fn term_domain(&self, t: Term) -> LocationSet {
        match t {
            Term::At(l) => LocationSet::single(l),
            Term::Initial(a) => self.var_domain[a.index()],
        }
    }

    pub fn actor_domain(&self, a: Actor) -> LocationSet {
        self.term_domain(self.actor_term(a))
    }

    pub fn holder(&self, o: Object) -> Option<Actor> {
        self.holder[o.index()]
    }

    /// Where the object is: with its holder, where it was dropped, or
    /// `None` while it has not entered the story.
    pub fn object_term(&self, o: Object) -> Option<Term> {
        match self.holder[o.index()] {
            Some(a) => Some(self.actor_term(a)),
            None => self.resting[o.index()],
        }
    }

    pub fn object_domain(&self, o: Object) -> LocationSet {
        match self.object_term(o) {
            Some(t) => self.term_domain(t),
            None => LocationSet::full(self.size.locations),
        }
    }

    /// Objects currently held by `a`, in the order they were acquired.
    pub fn holdings(&self, a: Actor) -> Vec<Object> {
        let mut held: Vec<Object> = (0..self.size.objects)
            .filter(|&o| self.holder[o] == Some(a))
            .map(|o| Object(o as u8))
            .collect();
        held.sort_by_key(|o| self.acquired[o.index()]);
        held
    }

    /// The object's location term after every statement read, tagged with
    /// the 1-based statement number.
    pub fn object_history(&self, o: Object) -> &[(usize, Option<Term>)] {
        &self.history[o.index()]
    }

    pub fn verdict(&self, fact: Fact) -> Verdict {
        self.signature(fact).0
    }

    /// Verdict plus the candidate locations behind it. Two evaluations that
    /// agree on the signature agree on everything a question can ask.
    pub fn signature(&self, fact: Fact) -> (Verdict, LocationSet) {
        match fact {
            Fact::ActorAt(a, l) => {
                let d = self.actor_domain(a);
                (Verdict::of(d, l), d)
            }
            Fact::ObjectAt(o, l) => {
                let d = self.object_domain(o);
                (Verdict::of(d, l), d)
            }
            Fact::HeldBy(o, a) => {
                let v = if self.holder[o.index()] == Some(a) {
                    Verdict::KnownTrue
                } else {
                    Verdict::KnownFalse
                };
                (v, LocationSet::default())
            }
        }
    }

    /// Actors some statement constrains, one representative per class.
    fn enumerated_classes(&self) -> Vec<(usize, LocationSet, Vec<Actor>)> {
        let mut classes: Vec<(usize, LocationSet, Vec<Actor>)> = Vec::new();
        for a in 0..self.size.actors {
            if !self.var_touched[a] {
                continue;
            }
            let root = self.var_root[a];
            // Classes anchored to a constant carry no uncertainty.
            match classes.iter_mut().find(|(r, _, _)| *r == root) {
                Some((_, _, members)) => members.push(Actor(a as u8)),
                None => classes.push((root, self.var_domain[a], vec![Actor(a as u8)])),
            }
        }
        classes
    }

    /// Number of candidate worlds over the actors with any evidence.
    pub fn world_count(&self) -> u128 {
        if !self.consistent {
            return 0;
        }
        self.enumerated_classes()
            .iter()
            .map(|(_, d, _)| d.len() as u128)
            .product()
    }

    /// Enumerates candidate worlds as assignments of initial locations to
    /// the actors with any evidence. Intended for small stories and tests.
    pub fn worlds(&self) -> Vec<Vec<(Actor, Location)>> {
        if !self.consistent {
            return Vec::new();
        }
        let classes = self.enumerated_classes();
        let mut out: Vec<Vec<(Actor, Location)>> = vec![Vec::new()];
        for (_, domain, members) in &classes {
            let mut next = Vec::with_capacity(out.len() * domain.len());
            for partial in &out {
                for l in domain.iter() {
                    let mut w = partial.clone();
                    w.extend(members.iter().map(|&a| (a, l)));
                    next.push(w);
                }
            }
            out = next;
        }
        for w in &mut out {
            w.sort();
        }
        out
    }

    /// Whether an assignment of initial locations (indexed by actor) is one
    /// of the candidate worlds.
    pub fn admits(&self, initial: &[Location]) -> bool {
        if !self.consistent {
            return false;
        }
        for a in 0..self.size.actors {
            if !self.var_touched[a] {
                continue;
            }
            if !self.var_domain[a].contains(initial[a]) {
                return false;
            }
            let root = self.var_root[a];
            if root >= self.size.actors {
                continue;
            }
            if initial[root] != initial[a] {
                return false;
            }
        }
        true
    }
}

/// Greedy support minimisation. `holds` is called with an inclusion mask
/// over `units` items; units are dropped front to back while `holds` stays
/// true, repeating until a full pass removes nothing. The result is
/// 1-minimal (dropping any single kept unit breaks `holds`), not
/// necessarily globally minimal. Returns `None` if `holds` fails on the
/// full set.
pub fn minimal_support<F>(units: usize, mut holds: F) -> Option<Vec<usize>>
where
    F: FnMut(&[bool]) -> bool,
{
    let mut mask = vec![true; units];
    if !holds(&mask) {
        return None;
    }
    loop {
        let mut removed = false;
        for u in 0..units {
            if !mask[u] {
                continue;
            }
            mask[u] = false;
            if holds(&mask) {
                removed = true;
            } else {
                mask[u] = true;
            }
        }
        if !removed {
            break;
        }
    }
    Some((0..units).filter(|&u| mask[u]).collect())
}

/// A query answer: the verdict and the statements (1-based) behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryResult {
    pub verdict: Verdict,
    pub provenance: BTreeSet<usize>,
}

/// Beliefs after reading a whole timeline.
#[derive(Debug, Clone)]
pub struct BeliefState {
    timeline: Vec<Statement>,
    vocab: Vocabulary,
    eval: Evaluation,
}

impl std::ops::Deref for BeliefState {
    type Target = Evaluation;

    fn deref(&self) -> &Evaluation {
        &self.eval
    }
}

/// Reads `timeline` in order and returns the surviving possible worlds.
pub fn evaluate_beliefs(
    timeline: &[Statement],
    vocab: &Vocabulary,
) -> Result<BeliefState, WorldError> {
    for (i, s) in timeline.iter().enumerate() {
        s.validate(vocab).map_err(|e| e.at_statement(i + 1))?;
    }
    let eval = Evaluation::run(timeline, vocab.sizes(), None);
    if !eval.is_consistent() {
        return Err(WorldError::InconsistentTimeline);
    }
    Ok(BeliefState {
        timeline: timeline.to_vec(),
        vocab: vocab.clone(),
        eval,
    })
}

impl BeliefState {
    pub fn timeline(&self) -> &[Statement] {
        &self.timeline
    }

    pub fn evaluation(&self) -> &Evaluation {
        &self.eval
    }

    /// Verdict for `fact` plus a minimal set of statements establishing it.
    /// For a `Possible` verdict the provenance is the set of statements that
    /// bound the candidate locations.
    pub fn query(&self, fact: Fact) -> Result<QueryResult, WorldError> {
        let sizes = self.vocab.sizes();
        let in_range = match fact {
            Fact::ActorAt(a, l) => a.index() < sizes.actors && l.index() < sizes.locations,
            Fact::ObjectAt(o, l) => o.index() < sizes.objects && l.index() < sizes.locations,
            Fact::HeldBy(o, a) => o.index() < sizes.objects && a.index() < sizes.actors,
        };
        if !in_range {
            return Err(WorldError::UnknownEntity(format!("{fact:?}")));
        }
        let verdict = self.eval.verdict(fact);
        let provenance = self.provenance(fact);
        Ok(QueryResult {
            verdict,
            provenance,
        })
    }

    /// Statement numbers (1-based) sufficient to reproduce the current
    /// signature of `fact`.
    pub fn provenance(&self, fact: Fact) -> BTreeSet<usize> {
        let target = self.eval.signature(fact);
        let size = self.eval.size;
        let kept = minimal_support(self.timeline.len(), |mask| {
            let e = Evaluation::run(&self.timeline, size, Some(mask));
            e.is_consistent() && e.signature(fact) == target
        })
        .expect("full timeline reproduces its own signature");
        kept.into_iter().map(|i| i + 1).collect()
    }

    /// All location and possession facts that hold in every world, for the
    /// actors and objects the story mentions.
    pub fn known_facts(&self) -> Vec<Fact> {
        let mut facts = Vec::new();
        let mentioned_actors: BTreeSet<Actor> = self
            .timeline
            .iter()
            .flat_map(|s| match *s {
                Statement::Give {
                    giver, receiver, ..
                } => vec![giver, receiver],
                other => vec![other.subject()],
            })
            .collect();
        for &a in &mentioned_actors {
            if let Some(l) = self.eval.actor_domain(a).only() {
                facts.push(Fact::ActorAt(a, l));
            }
        }
        for o in self.vocab.all_objects() {
            if let Some(h) = self.eval.holder(o) {
                facts.push(Fact::HeldBy(o, h));
            }
            if self.eval.object_term(o).is_some() {
                if let Some(l) = self.eval.object_domain(o).only() {
                    facts.push(Fact::ObjectAt(o, l));
                }
            }
        }
        facts
    }
}
