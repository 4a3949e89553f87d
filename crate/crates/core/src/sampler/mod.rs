//! Story and question sampling under a configuration, with rejection
//! filters on supporting-fact counts and support compositions.

mod config;
mod story;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::concepts::{Construct, EventKind, QuestionType};
use crate::io::{BabiFile, BabiLine, BabiStory};
use crate::microworld::Statement;
use crate::oracle::{self, QuestionProfile};
use crate::questions::{instantiate, FamilyRegistry, QuestionInstance, Reading};
use crate::realization::{realize, Passage, RealizeError, SurfaceOptions};

pub use config::{FilterSpec, GenConfig, Holdout, LengthSpec, NBucket, StoryStyle, YesNoMix};
pub use story::{sample_story, StoryPlan};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SamplerError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("sampling stalled: {0}")]
    SamplingStalled(String),
    #[error(transparent)]
    Realize(#[from] RealizeError),
}

/// One generated instance: a story, its realization and one question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub id: usize,
    pub timeline: Vec<Statement>,
    pub passage: Passage,
    pub question: QuestionInstance,
}

impl Instance {
    pub fn length(&self) -> usize {
        self.passage.sentences.len()
    }

    pub fn profile(&self) -> QuestionProfile {
        QuestionProfile {
            qtype: self.question.qtype,
            f_c: self.question.f_c.clone(),
            n: self.question.n(),
            length: self.length(),
        }
    }

    pub fn to_babi_story(&self) -> BabiStory {
        let mut lines: Vec<BabiLine> = self
            .passage
            .sentences
            .iter()
            .cloned()
            .map(BabiLine::Sentence)
            .collect();
        lines.push(BabiLine::Question {
            text: self.question.text.clone(),
            answer: self.question.answer.clone(),
            support: self.question.f.iter().copied().collect(),
        });
        BabiStory { lines }
    }
}

pub fn to_babi_file(instances: &[Instance]) -> BabiFile {
    BabiFile {
        stories: instances.iter().map(Instance::to_babi_story).collect(),
    }
}

/// What one instance must look like: its question type, the band its
/// supporting-fact count falls in, and for yes-no the answer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Slot {
    pub qtype: QuestionType,
    pub bucket: Option<NBucket>,
    pub label: Option<&'static str>,
}

/// Splits `total` in proportion to `weights` by largest remainder.
pub fn apportion(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if weights.is_empty() || sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let exact: Vec<f64> = weights.iter().map(|w| total as f64 * w / sum).collect();
    let mut counts: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    let short = total - counts.iter().sum::<usize>();
    for &i in order.iter().take(short) {
        counts[i] += 1;
    }
    counts
}

/// Yes-no answers the configuration can produce, with their weights.
fn yes_no_labels(cfg: &GenConfig) -> Vec<(&'static str, f64)> {
    let mut out = vec![("yes", cfg.yes_no.yes), ("no", cfg.yes_no.no)];
    if cfg.concepts.constructs.contains(&Construct::Indef) {
        out.push(("maybe", cfg.yes_no.maybe));
    }
    out.retain(|(_, w)| *w > 0.0);
    out
}

/// Slots for `count` questions of type `q` drawn from `buckets` by weight.
fn bucket_slots(
    q: QuestionType,
    buckets: &[NBucket],
    count: usize,
    label: Option<&'static str>,
) -> Vec<Slot> {
    if buckets.is_empty() {
        return vec![
            Slot {
                qtype: q,
                bucket: None,
                label,
            };
            count
        ];
    }
    let weights: Vec<f64> = buckets.iter().map(|b| b.weight).collect();
    let mut out = Vec::with_capacity(count);
    for (b, k) in buckets.iter().zip(apportion(count, &weights)) {
        out.extend((0..k).map(|_| Slot {
            qtype: q,
            bucket: Some(*b),
            label,
        }));
    }
    out
}

/// The per-instance plan. Instances are split equally among question
/// types, then among n-buckets by weight (yes-no first by answer); the
/// order is shuffled by seed.
pub fn slot_plan(cfg: &GenConfig) -> Vec<Slot> {
    let qtypes: Vec<QuestionType> = cfg.concepts.questions.iter().copied().collect();
    let per_q = apportion(cfg.num_instances, &vec![1.0; qtypes.len()]);
    let mut slots = Vec::with_capacity(cfg.num_instances);
    for (&q, &count) in qtypes.iter().zip(&per_q) {
        if q == QuestionType::YesNo {
            let labels = yes_no_labels(cfg);
            let weights: Vec<f64> = labels.iter().map(|(_, w)| *w).collect();
            for ((label, _), k) in labels.iter().zip(apportion(count, &weights)) {
                slots.extend(bucket_slots(
                    q,
                    cfg.filter.answer_buckets(label),
                    k,
                    Some(label),
                ));
            }
        } else {
            slots.extend(bucket_slots(q, cfg.filter.buckets(q), count, None));
        }
    }
    slots.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));
    slots
}

/// Per-instance bookkeeping.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct InstanceStats {
    pub stories: usize,
    pub verification_failures: usize,
}

/// The random stream for instance `index`; depends only on the seed and
/// the index.
pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

fn surface_options(cfg: &GenConfig) -> SurfaceOptions {
    SurfaceOptions {
        constructs: cfg
            .concepts
            .constructs
            .iter()
            .copied()
            .filter(|c| c.is_surface())
            .collect(),
        coref_events: cfg.coref_events(),
    }
}

fn story_events(timeline: &[Statement]) -> BTreeSet<EventKind> {
    timeline.iter().filter_map(|s| s.event_kind()).collect()
}

/// Generates the instance for `slot`, sampling stories until one offers a
/// question that passes every filter and the oracle check.
pub fn generate_instance(
    cfg: &GenConfig,
    registry: &FamilyRegistry,
    slot: &Slot,
    index: usize,
) -> Result<(Instance, InstanceStats), SamplerError> {
    let family = registry.get(slot.qtype).ok_or_else(|| {
        SamplerError::InvalidConfig(format!("no family registered for {}", slot.qtype))
    })?;
    let mut rng = instance_rng(cfg.seed, index);
    let events = cfg.story_events(slot.qtype);
    let surface = surface_options(cfg);
    let mut stats = InstanceStats::default();
    for _ in 0..cfg.filter.max_attempts {
        stats.stories += 1;
        let length = rng.gen_range(cfg.story_length.min..=cfg.story_length.max);
        let Ok(plan) = sample_story(cfg, &events, &surface, length, &mut rng) else {
            continue;
        };
        let passage = realize(&plan.timeline, &surface, &cfg.vocab, &mut rng)?;
        let reading = Reading::new(&plan.timeline, &passage, &cfg.vocab);
        let mut candidates = family.propose(&reading, &mut rng);
        if let Some(label) = slot.label {
            candidates.retain(|q| reading.answer(q).as_deref() == Some(label));
        }
        candidates.shuffle(&mut rng);
        let present = story_events(&plan.timeline);
        for q in &candidates {
            let Some(qi) = instantiate(&reading, family, q) else {
                continue;
            };
            if slot.bucket.is_some_and(|b| !b.contains(qi.n())) || !cfg.filter.admits_fc(&qi.f_c) {
                continue;
            }
            if cfg
                .holdouts
                .iter()
                .any(|h| h.violated_by(qi.qtype, &qi.f_c, &present))
            {
                continue;
            }
            let instance = Instance {
                id: index,
                timeline: plan.timeline.clone(),
                passage: passage.clone(),
                question: qi,
            };
            if verify(&instance, cfg).is_err() {
                stats.verification_failures += 1;
                continue;
            }
            return Ok((instance, stats));
        }
    }
    Err(SamplerError::SamplingStalled(format!(
        "instance {index} ({} n={:?} answer={:?}) found no candidate in {} stories",
        slot.qtype,
        slot.bucket.map(|b| (b.min, b.max)),
        slot.label,
        cfg.filter.max_attempts
    )))
}

/// Re-answers the instance from its text with the oracle.
pub fn verify(instance: &Instance, cfg: &GenConfig) -> Result<(), oracle::CheckFailure> {
    let story = instance.to_babi_story();
    let q = story.questions().next().expect("one question per instance");
    oracle::check_question(&story, q, &cfg.vocab)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    pub instances: usize,
    pub stories_sampled: usize,
    /// Candidates the oracle disagreed with; they are never emitted.
    pub verification_failures: usize,
}

impl GenerationReport {
    pub fn absorb(&mut self, other: &GenerationReport) {
        self.instances += other.instances;
        self.stories_sampled += other.stories_sampled;
        self.verification_failures += other.verification_failures;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratedSplit {
    pub instances: Vec<Instance>,
    pub report: GenerationReport,
}

/// Generates every slot of the plan. Instances are independent, so they
/// are produced in parallel; the result depends only on the configuration.
pub fn generate_split(cfg: &GenConfig) -> Result<GeneratedSplit, SamplerError> {
    generate_split_with(cfg, &FamilyRegistry::standard())
}

pub fn generate_split_with(
    cfg: &GenConfig,
    registry: &FamilyRegistry,
) -> Result<GeneratedSplit, SamplerError> {
    cfg.validate().map_err(SamplerError::InvalidConfig)?;
    let slots = slot_plan(cfg);
    let results: Vec<(Instance, InstanceStats)> = slots
        .par_iter()
        .enumerate()
        .map(|(i, slot)| generate_instance(cfg, registry, slot, i))
        .collect::<Result<_, _>>()?;
    let mut report = GenerationReport::default();
    let mut instances = Vec::with_capacity(results.len());
    for (inst, stats) in results {
        report.stories_sampled += stats.stories;
        report.verification_failures += stats.verification_failures;
        instances.push(inst);
    }
    report.instances = instances.len();
    Ok(GeneratedSplit { instances, report })
}
