use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::concepts::{Concept, ConceptSet, Construct, EventKind, QuestionType};
use crate::microworld::Vocabulary;

/// Sentence-count range; `min == max` fixes the length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthSpec {
    pub min: usize,
    pub max: usize,
}

impl LengthSpec {
    pub fn fixed(n: usize) -> Self {
        LengthSpec { min: n, max: n }
    }

    pub fn range(min: usize, max: usize) -> Self {
        LengthSpec { min, max }
    }
}

/// A band of supporting-fact counts and its share of the instances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NBucket {
    pub min: usize,
    pub max: usize,
    pub weight: f64,
}

impl NBucket {
    pub fn exactly(n: usize) -> Self {
        NBucket {
            min: n,
            max: n,
            weight: 1.0,
        }
    }

    pub fn contains(&self, n: usize) -> bool {
        (self.min..=self.max).contains(&n)
    }

    /// Equal-weight single-value buckets for each n in `ns`.
    pub fn uniform(ns: impl IntoIterator<Item = usize>) -> Vec<NBucket> {
        ns.into_iter().map(NBucket::exactly).collect()
    }
}

/// Rejection filters applied to candidate questions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    /// Buckets used for question types without their own entry. Empty
    /// means any n is accepted.
    #[serde(default)]
    pub n_buckets: Vec<NBucket>,
    #[serde(default)]
    pub per_question: BTreeMap<QuestionType, Vec<NBucket>>,
    /// Buckets for yes-no questions with a given answer, overriding the
    /// question-type buckets.
    #[serde(default)]
    pub per_answer: BTreeMap<String, Vec<NBucket>>,
    /// When non-empty, f_c must include at least one of these.
    #[serde(default)]
    pub required_fc: Vec<BTreeSet<Concept>>,
    /// f_c may include none of these.
    #[serde(default)]
    pub forbidden_fc: Vec<BTreeSet<Concept>>,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: usize,
}

fn default_max_attempts() -> usize {
    2000
}

impl Default for FilterSpec {
    fn default() -> Self {
        FilterSpec {
            n_buckets: Vec::new(),
            per_question: BTreeMap::new(),
            per_answer: BTreeMap::new(),
            required_fc: Vec::new(),
            forbidden_fc: Vec::new(),
            max_attempts: default_max_attempts(),
        }
    }
}

impl FilterSpec {
    pub fn buckets(&self, q: QuestionType) -> &[NBucket] {
        self.per_question.get(&q).unwrap_or(&self.n_buckets)
    }

    pub fn answer_buckets(&self, answer: &str) -> &[NBucket] {
        self.per_answer
            .get(answer)
            .map_or_else(|| self.buckets(QuestionType::YesNo), Vec::as_slice)
    }

    pub fn admits_fc(&self, fc: &BTreeSet<Concept>) -> bool {
        let hit = |p: &BTreeSet<Concept>| p.is_subset(fc);
        (self.required_fc.is_empty() || self.required_fc.iter().any(hit))
            && !self.forbidden_fc.iter().any(hit)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.max_attempts == 0 {
            return Err("max_attempts must be at least 1".into());
        }
        let lists = std::iter::once(&self.n_buckets)
            .chain(self.per_question.values())
            .chain(self.per_answer.values());
        for list in lists {
            for b in list {
                if b.min == 0 || b.min > b.max || b.weight.is_nan() || b.weight <= 0.0 {
                    return Err(format!("bad bucket {b:?}"));
                }
            }
            if !list.is_empty() {
                let total: f64 = list.iter().map(|b| b.weight).sum();
                if (total - 1.0).abs() > 1e-6 && list.iter().any(|b| b.weight != 1.0) {
                    return Err("bucket weights must sum to 1 (or all be 1)".into());
                }
            }
        }
        Ok(())
    }
}

/// Concept combinations kept out of a split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Holdout {
    /// No f_c pairs one of `constructs` with one of `events`; surface
    /// constructs are also only applied to the remaining events.
    ConstructEvent {
        constructs: BTreeSet<Construct>,
        events: BTreeSet<EventKind>,
    },
    /// Questions of this type never rest on these concepts.
    QuestionConcept {
        question: QuestionType,
        concepts: BTreeSet<Concept>,
    },
    /// Questions of this type are never asked about stories with `event`.
    QuestionStoryEvent {
        question: QuestionType,
        event: EventKind,
    },
}

impl Holdout {
    /// Surface constructs only with MOVE events.
    pub fn constructs_only_with_move() -> Holdout {
        Holdout::ConstructEvent {
            constructs: [Construct::Coref, Construct::Conj, Construct::Compound].into(),
            events: [EventKind::Grab, EventKind::Drop, EventKind::Give].into(),
        }
    }

    /// yes-no only with MOVE and the epistemic constructs.
    pub fn yes_no_only_with_move() -> Holdout {
        Holdout::QuestionConcept {
            question: QuestionType::YesNo,
            concepts: [
                Concept::Event(EventKind::Grab),
                Concept::Event(EventKind::Drop),
                Concept::Event(EventKind::Give),
                Concept::Construct(Construct::Coref),
                Concept::Construct(Construct::Conj),
                Concept::Construct(Construct::Compound),
            ]
            .into(),
        }
    }

    /// where-was-O never in stories with GIVE.
    pub fn where_was_without_give() -> Holdout {
        Holdout::QuestionStoryEvent {
            question: QuestionType::WhereWasObject,
            event: EventKind::Give,
        }
    }

    /// The three rules used for the diverse training splits.
    pub fn standard_set() -> Vec<Holdout> {
        vec![
            Holdout::constructs_only_with_move(),
            Holdout::yes_no_only_with_move(),
            Holdout::where_was_without_give(),
        ]
    }

    /// Whether an instance with this question type, f_c and story events
    /// breaks the rule.
    pub fn violated_by(
        &self,
        q: QuestionType,
        fc: &BTreeSet<Concept>,
        story_events: &BTreeSet<EventKind>,
    ) -> bool {
        match self {
            Holdout::ConstructEvent { constructs, events } => {
                constructs
                    .iter()
                    .any(|&c| fc.contains(&Concept::Construct(c)))
                    && events.iter().any(|&e| fc.contains(&Concept::Event(e)))
            }
            Holdout::QuestionConcept { question, concepts } => {
                *question == q && concepts.iter().any(|c| fc.contains(c))
            }
            Holdout::QuestionStoryEvent { question, event } => {
                *question == q && story_events.contains(event)
            }
        }
    }

    /// Whether the rule talks about anything in `concepts`.
    pub fn applies_to(&self, concepts: &ConceptSet) -> bool {
        match self {
            Holdout::ConstructEvent { constructs, .. } => {
                constructs.iter().any(|c| concepts.constructs.contains(c))
            }
            Holdout::QuestionConcept { question, .. }
            | Holdout::QuestionStoryEvent { question, .. } => concepts.questions.contains(question),
        }
    }
}

/// Answer shares for yes-no questions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YesNoMix {
    pub yes: f64,
    pub no: f64,
    pub maybe: f64,
}

impl Default for YesNoMix {
    fn default() -> Self {
        YesNoMix {
            yes: 1.0 / 3.0,
            no: 1.0 / 3.0,
            maybe: 1.0 / 3.0,
        }
    }
}

/// How stories are put together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoryStyle {
    #[serde(default = "default_event_weights")]
    pub event_weights: BTreeMap<EventKind, f64>,
    /// Per-step probability of a NEGATE statement when enabled.
    #[serde(default = "default_rate")]
    pub negate_rate: f64,
    /// Per-step probability of an INDEF statement when enabled.
    #[serde(default = "default_rate")]
    pub indef_rate: f64,
    /// Probability of shaping the next step into an enabled surface
    /// construct (conjunction, compound, pronoun).
    #[serde(default = "default_construct_rate")]
    pub construct_rate: f64,
    /// Probability that a move goes where another actor already is.
    #[serde(default = "default_colocate")]
    pub colocate_bias: f64,
}

fn default_event_weights() -> BTreeMap<EventKind, f64> {
    [
        (EventKind::Move, 1.0),
        (EventKind::Grab, 0.5),
        (EventKind::Drop, 0.35),
        (EventKind::Give, 0.35),
    ]
    .into()
}

fn default_rate() -> f64 {
    0.1
}

fn default_construct_rate() -> f64 {
    0.35
}

fn default_colocate() -> f64 {
    0.3
}

impl Default for StoryStyle {
    fn default() -> Self {
        StoryStyle {
            event_weights: default_event_weights(),
            negate_rate: default_rate(),
            indef_rate: default_rate(),
            construct_rate: default_construct_rate(),
            colocate_bias: default_colocate(),
        }
    }
}

/// Everything needed to generate one split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub concepts: ConceptSet,
    pub story_length: LengthSpec,
    /// Total instances, shared equally among the question types.
    pub num_instances: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub vocab: Vocabulary,
    #[serde(default)]
    pub holdouts: Vec<Holdout>,
    #[serde(default)]
    pub filter: FilterSpec,
    #[serde(default = "default_max_actors")]
    pub max_actors: usize,
    #[serde(default = "default_max_objects")]
    pub max_objects: usize,
    #[serde(default)]
    pub style: StoryStyle,
    #[serde(default)]
    pub yes_no: YesNoMix,
}

fn default_max_actors() -> usize {
    6
}

fn default_max_objects() -> usize {
    3
}

impl GenConfig {
    pub fn new(concepts: ConceptSet, story_length: LengthSpec, num_instances: usize) -> Self {
        GenConfig {
            concepts,
            story_length,
            num_instances,
            seed: 0,
            vocab: Vocabulary::default(),
            holdouts: Vec::new(),
            filter: FilterSpec::default(),
            max_actors: default_max_actors(),
            max_objects: default_max_objects(),
            style: StoryStyle::default(),
            yes_no: YesNoMix::default(),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        self.concepts.validate()?;
        self.vocab.validate().map_err(|e| e.to_string())?;
        self.filter.validate()?;
        if self.story_length.min < 2 || self.story_length.min > self.story_length.max {
            return Err(format!("bad story length {:?}", self.story_length));
        }
        if self.num_instances == 0 {
            return Err("num_instances must be at least 1".into());
        }
        if self.max_actors < 2 {
            return Err("stories need at least two actors".into());
        }
        if self.max_objects == 0 && self.concepts.events.iter().any(|&e| e != EventKind::Move) {
            return Err("possession events need at least one object".into());
        }
        if let Some(h) = self.holdouts.iter().find(|h| !h.applies_to(&self.concepts)) {
            return Err(format!(
                "holdout {h:?} refers to nothing in the concept set"
            ));
        }
        if self.yes_no.yes < 0.0 || self.yes_no.no < 0.0 || self.yes_no.maybe < 0.0 {
            return Err("yes-no weights must be non-negative".into());
        }
        Ok(())
    }

    /// Events allowed next to surface constructs after the holdouts.
    pub fn coref_events(&self) -> BTreeSet<EventKind> {
        let mut events: BTreeSet<EventKind> =
            [EventKind::Move, EventKind::Grab, EventKind::Drop].into();
        for h in &self.holdouts {
            if let Holdout::ConstructEvent {
                constructs,
                events: banned,
            } = h
            {
                if constructs.contains(&Construct::Coref) {
                    events.retain(|e| !banned.contains(e));
                }
            }
        }
        events
    }

    /// Events a story for a question of type `q` may contain.
    pub fn story_events(&self, q: QuestionType) -> BTreeSet<EventKind> {
        let mut events = self.concepts.events.clone();
        for h in &self.holdouts {
            if let Holdout::QuestionStoryEvent { question, event } = h {
                if *question == q {
                    events.remove(event);
                }
            }
        }
        events
    }
}
