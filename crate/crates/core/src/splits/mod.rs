//! Train/valid/test splits assembled from single-skill tasks. A regime
//! decides which sub-task configurations are used and how their output is
//! combined; regimes are looked up by name.

mod audit;
mod inject;
mod presets;
mod tasks;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::concepts::{ConceptSet, QuestionType};
use crate::io::{write_babi, BabiFile};
use crate::oracle::{OracleError, QuestionProfile};
use crate::sampler::{generate_split, to_babi_file, GenConfig, GenerationReport, SamplerError};

pub use audit::{
    audit_holdouts, compositional_certificate, fc_set, story_events, HoldoutViolation,
};
pub use inject::{inject_file, inject_story, reread};
pub use presets::{
    concat_subtask, diverse_subtask, diverse_subtasks, mix_subtask, preset, preset_names,
    task_config, union_concepts, TASK_SIZES,
};
pub use tasks::{supplementary_questions, task_concepts, TaskGroup, TASK_IDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Valid,
    Test,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::Train, Partition::Valid, Partition::Test];

    pub fn name(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Valid => "valid",
            Partition::Test => "test",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSizes {
    pub train: usize,
    pub valid: usize,
    pub test: usize,
}

impl PartitionSizes {
    pub fn get(&self, p: Partition) -> usize {
        match p {
            Partition::Train => self.train,
            Partition::Valid => self.valid,
            Partition::Test => self.test,
        }
    }

    fn scaled(&self, factor: f64) -> PartitionSizes {
        let s = |n: usize| {
            if n == 0 {
                0
            } else {
                ((n as f64 * factor).round() as usize).max(1)
            }
        };
        PartitionSizes {
            train: s(self.train),
            valid: s(self.valid),
            test: s(self.test),
        }
    }
}

/// One configuration contributing to a split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subtask {
    pub name: String,
    pub config: GenConfig,
    pub sizes: PartitionSizes,
    /// Question types added at every question position by the inject
    /// regime.
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub inject: BTreeSet<QuestionType>,
}

/// The full description of a split: training sub-tasks, the concepts the
/// test data may use, and optionally a separate test configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub name: String,
    pub regime: String,
    #[serde(default)]
    pub seed: u64,
    pub train_subtasks: Vec<Subtask>,
    pub test_concepts: ConceptSet,
    #[serde(default)]
    pub test: Option<Subtask>,
}

impl SplitSpec {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// The same split with every partition size multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> SplitSpec {
        let mut out = self.clone();
        for s in out.train_subtasks.iter_mut().chain(out.test.iter_mut()) {
            s.sizes = s.sizes.scaled(factor);
        }
        out
    }

    pub fn subtasks(&self) -> impl Iterator<Item = &Subtask> {
        self.train_subtasks.iter().chain(self.test.iter())
    }

    /// Checks every sub-task configuration and, for compositional regimes,
    /// that the test concepts are exactly the union of the training
    /// concepts while differing from each of them.
    pub fn validate(&self, compositional: bool) -> Result<(), SplitError> {
        let bad = |m: String| Err(SplitError::InvalidSpec(format!("{}: {m}", self.name)));
        if self.train_subtasks.is_empty() && self.test.is_none() {
            return bad("no sub-tasks".into());
        }
        for s in self.subtasks() {
            let mut cfg = s.config.clone();
            cfg.num_instances = cfg.num_instances.max(1);
            if let Err(e) = cfg.validate() {
                return bad(format!("sub-task {}: {e}", s.name));
            }
        }
        if compositional {
            let union = union_concepts(&self.train_subtasks);
            if union.concepts() != self.test_concepts.concepts() {
                return bad("test concepts are not the union of the training concepts".into());
            }
            if !self.test_concepts.questions.is_subset(&union.questions) {
                return bad("test asks question types never trained on".into());
            }
            if let Some(s) = self
                .train_subtasks
                .iter()
                .find(|s| s.config.concepts == self.test_concepts)
            {
                return bad(format!(
                    "sub-task {} already covers every test concept",
                    s.name
                ));
            }
        }
        if let Some(t) = &self.test {
            let c = &t.config.concepts;
            let inside = c.concepts().is_subset(&self.test_concepts.concepts())
                && c.questions.is_subset(&self.test_concepts.questions);
            if !inside {
                return bad("test configuration uses concepts outside the test concepts".into());
            }
        }
        Ok(())
    }
}

/// One sub-task's share of a partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subsplit {
    pub subtask: String,
    pub file: BabiFile,
    /// One profile per question, in file order.
    pub profiles: Vec<QuestionProfile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Split {
    pub name: String,
    pub regime: String,
    pub partitions: BTreeMap<Partition, Vec<Subsplit>>,
    pub report: GenerationReport,
}

impl Split {
    pub fn subsplits(&self, p: Partition) -> &[Subsplit] {
        self.partitions.get(&p).map_or(&[], Vec::as_slice)
    }

    /// The partition as one file, sub-tasks in order.
    pub fn file(&self, p: Partition) -> BabiFile {
        BabiFile {
            stories: self
                .subsplits(p)
                .iter()
                .flat_map(|s| s.file.stories.iter().cloned())
                .collect(),
        }
    }

    pub fn profiles(&self, p: Partition) -> impl Iterator<Item = &QuestionProfile> {
        self.subsplits(p).iter().flat_map(|s| s.profiles.iter())
    }

    pub fn question_count(&self, p: Partition) -> usize {
        self.subsplits(p).iter().map(|s| s.profiles.len()).sum()
    }

    pub fn file_name(name: &str, p: Partition) -> String {
        format!("{name}_{p}.txt")
    }

    /// Writes `<name>_{train,valid,test}.txt` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(&dir)?;
        let mut out = Vec::new();
        for p in Partition::ALL {
            let path = dir.as_ref().join(Split::file_name(&self.name, p));
            write_babi(&self.file(p), &path)?;
            out.push(path);
        }
        Ok(out)
    }

    /// Concatenates splits partition by partition, keeping their order.
    pub fn concat(name: &str, regime: &str, parts: impl IntoIterator<Item = Split>) -> Split {
        let mut out = Split {
            name: name.to_string(),
            regime: regime.to_string(),
            partitions: BTreeMap::new(),
            report: GenerationReport::default(),
        };
        for part in parts {
            out.report.absorb(&part.report);
            for (p, subs) in part.partitions {
                out.partitions.entry(p).or_default().extend(subs);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error("invalid split: {0}")]
    InvalidSpec(String),
    #[error("unknown regime `{0}`")]
    UnknownRegime(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("sub-task {subtask} ({partition}): {source}")]
    Sampler {
        subtask: String,
        partition: Partition,
        source: SamplerError,
    },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Seed of one (sub-task, partition) stream.
fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

const TEST_STREAM: u64 = 1 << 40;

fn generate_subtask(sub: &Subtask, seed: u64, stream: u64) -> Result<Split, SplitError> {
    let mut split = Split::concat(&sub.name, "", []);
    for (k, p) in Partition::ALL.into_iter().enumerate() {
        let n = sub.sizes.get(p);
        if n == 0 {
            continue;
        }
        let cfg = GenConfig {
            num_instances: n,
            seed: derive_seed(seed, stream * 3 + k as u64),
            ..sub.config.clone()
        };
        let generated = generate_split(&cfg).map_err(|source| SplitError::Sampler {
            subtask: sub.name.clone(),
            partition: p,
            source,
        })?;
        split.report.absorb(&generated.report);
        split.partitions.entry(p).or_default().push(Subsplit {
            subtask: sub.name.clone(),
            file: to_babi_file(&generated.instances),
            profiles: generated.instances.iter().map(|i| i.profile()).collect(),
        });
    }
    Ok(split)
}

/// Generates every sub-task of the spec and concatenates the results.
pub fn generate_spec(spec: &SplitSpec) -> Result<Split, SplitError> {
    let mut parts = Vec::new();
    for (i, sub) in spec.train_subtasks.iter().enumerate() {
        parts.push(generate_subtask(sub, spec.seed, i as u64 + 1)?);
    }
    if let Some(test) = &spec.test {
        parts.push(generate_subtask(test, spec.seed, TEST_STREAM)?);
    }
    Ok(Split::concat(&spec.name, &spec.regime, parts))
}

/// A way of building splits for a task group.
pub trait SplitRegime: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether the test concepts are assembled from the training
    /// sub-tasks, none of which covers them all.
    fn compositional(&self) -> bool;

    fn spec(&self, group: TaskGroup) -> SplitSpec;

    fn build(&self, spec: &SplitSpec) -> Result<Split, SplitError> {
        spec.validate(self.compositional())?;
        generate_spec(spec)
    }
}

fn group_spec(
    regime: &str,
    group: TaskGroup,
    subtasks: Vec<Subtask>,
    test: Option<Subtask>,
) -> SplitSpec {
    let test_concepts = match &test {
        Some(_) => group.mix_concepts(),
        None => union_concepts(&subtasks),
    };
    SplitSpec {
        name: format!("{regime}-{group}"),
        regime: regime.to_string(),
        seed: 0,
        train_subtasks: subtasks,
        test_concepts,
        test,
    }
}

fn task_subtasks(group: TaskGroup) -> Vec<Subtask> {
    group
        .tasks()
        .iter()
        .map(|&id| concat_subtask(id).expect("known task"))
        .collect()
}

/// Each task generated on its own and concatenated.
pub struct Concat;

impl SplitRegime for Concat {
    fn name(&self) -> &'static str {
        "concat"
    }

    fn compositional(&self) -> bool {
        false
    }

    fn spec(&self, group: TaskGroup) -> SplitSpec {
        group_spec(self.name(), group, task_subtasks(group), None)
    }
}

/// The concatenated tasks with every determinable where-P / where-O
/// question added at each question position of the training data.
pub struct Inject;

impl SplitRegime for Inject {
    fn name(&self) -> &'static str {
        "inject"
    }

    fn compositional(&self) -> bool {
        false
    }

    fn spec(&self, group: TaskGroup) -> SplitSpec {
        group_spec(self.name(), group, task_subtasks(group), None)
    }

    fn build(&self, spec: &SplitSpec) -> Result<Split, SplitError> {
        spec.validate(false)?;
        let mut split = generate_spec(spec)?;
        let by_name: BTreeMap<&str, &Subtask> =
            spec.subtasks().map(|s| (s.name.as_str(), s)).collect();
        for p in [Partition::Train, Partition::Valid] {
            for sub in split.partitions.entry(p).or_default() {
                let Some(task) = by_name.get(sub.subtask.as_str()) else {
                    continue;
                };
                if task.inject.is_empty() {
                    continue;
                }
                let (file, profiles) = inject_file(&sub.file, &task.inject, &task.config.vocab)?;
                sub.file = file;
                sub.profiles = profiles;
            }
        }
        Ok(split)
    }
}

/// Length-20 stories per task with n spread evenly over a range and
/// concept combinations held out of training; tested on the mix.
pub struct Diverse;

impl SplitRegime for Diverse {
    fn name(&self) -> &'static str {
        "diverse"
    }

    fn compositional(&self) -> bool {
        true
    }

    fn spec(&self, group: TaskGroup) -> SplitSpec {
        group_spec(
            self.name(),
            group,
            diverse_subtasks(group),
            Some(mix_subtask(group)),
        )
    }
}

/// Test data only: one configuration over the union of the group's
/// concepts. The diverse sub-tasks are kept, with no instances, as the
/// training side of the comparison.
pub struct Mix;

impl SplitRegime for Mix {
    fn name(&self) -> &'static str {
        "mix"
    }

    fn compositional(&self) -> bool {
        true
    }

    fn spec(&self, group: TaskGroup) -> SplitSpec {
        let mut subtasks = diverse_subtasks(group);
        for s in &mut subtasks {
            s.sizes = PartitionSizes::default();
        }
        group_spec(self.name(), group, subtasks, Some(mix_subtask(group)))
    }
}

/// Regimes by name.
pub struct RegimeRegistry {
    regimes: BTreeMap<String, Box<dyn SplitRegime>>,
}

impl RegimeRegistry {
    pub fn empty() -> Self {
        RegimeRegistry {
            regimes: BTreeMap::new(),
        }
    }

    pub fn standard() -> Self {
        let mut r = RegimeRegistry::empty();
        r.register(Box::new(Concat));
        r.register(Box::new(Inject));
        r.register(Box::new(Diverse));
        r.register(Box::new(Mix));
        r
    }

    pub fn register(&mut self, regime: Box<dyn SplitRegime>) {
        self.regimes.insert(regime.name().to_string(), regime);
    }

    pub fn get(&self, name: &str) -> Option<&dyn SplitRegime> {
        self.regimes.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&str> {
        self.regimes.keys().map(String::as_str).collect()
    }

    pub fn build(&self, spec: &SplitSpec) -> Result<Split, SplitError> {
        self.get(&spec.regime)
            .ok_or_else(|| SplitError::UnknownRegime(spec.regime.clone()))?
            .build(spec)
    }
}

impl Default for RegimeRegistry {
    fn default() -> Self {
        RegimeRegistry::standard()
    }
}

/// Builds the split with the standard regime it names.
pub fn build_split(spec: &SplitSpec) -> Result<Split, SplitError> {
    RegimeRegistry::standard().build(spec)
}

#[cfg(test)]
mod tests;
