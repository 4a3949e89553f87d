use std::collections::BTreeMap;

use crate::concepts::{ConceptSet, QuestionType};
use crate::sampler::{GenConfig, Holdout, LengthSpec, NBucket, YesNoMix};

use super::tasks::{supplementary_questions, task_concepts, TaskGroup};
use super::{PartitionSizes, RegimeRegistry, SplitError, SplitSpec, Subtask};

use QuestionType::{Counting, List, WhereActor, WhereObject, WhereWasObject, YesNo};

/// Instances per task in the concatenated regimes.
pub const TASK_SIZES: PartitionSizes = PartitionSizes {
    train: 9000,
    valid: 1000,
    test: 1000,
};

fn task_length(id: u8) -> LengthSpec {
    match id {
        2 => LengthSpec::range(3, 28),
        3 => LengthSpec::range(30, 74),
        5 => LengthSpec::range(10, 30),
        7 | 8 => LengthSpec::range(3, 14),
        _ => LengthSpec::range(2, 10),
    }
}

/// Generator settings for a single-skill task.
pub fn task_config(id: u8) -> Option<GenConfig> {
    let mut cfg = GenConfig::new(task_concepts(id)?, task_length(id), TASK_SIZES.train);
    cfg.max_actors = 4;
    if matches!(id, 11 | 13) {
        cfg.filter.n_buckets = NBucket::uniform([2]);
    }
    Some(cfg)
}

pub fn concat_subtask(id: u8) -> Option<Subtask> {
    Some(Subtask {
        name: format!("task{id}"),
        config: task_config(id)?,
        sizes: TASK_SIZES,
        inject: supplementary_questions(id).0,
    })
}

/// n values each question type is spread over in the diverse regime.
fn diverse_buckets(id: u8, q: QuestionType) -> Vec<usize> {
    match (id, q) {
        (2, WhereActor) => vec![1, 3],
        (2, WhereObject) => vec![2, 4],
        (3, WhereWasObject) => vec![3, 4, 5],
        (5, WhereActor) => vec![1, 2, 3],
        (5, WhereObject) => vec![2, 3, 4],
        (7, Counting) | (8, List) => (1..=10).collect(),
        (10, WhereActor) | (13, WhereActor) => vec![1, 2],
        (11, WhereActor) => (1..=5).collect(),
        _ => vec![1],
    }
}

pub fn diverse_subtask(id: u8, sizes: PartitionSizes) -> Option<Subtask> {
    let mut concepts = task_concepts(id)?;
    concepts.questions.extend(supplementary_questions(id).1);
    let mut cfg = GenConfig::new(concepts, LengthSpec::fixed(20), sizes.train);
    cfg.holdouts = Holdout::standard_set()
        .into_iter()
        .filter(|h| h.applies_to(&cfg.concepts))
        .collect();
    cfg.filter.per_question = cfg
        .concepts
        .questions
        .iter()
        .map(|&q| (q, NBucket::uniform(diverse_buckets(id, q))))
        .collect();
    if matches!(id, 7 | 8) {
        cfg.max_actors = 3;
    }
    Some(Subtask {
        name: format!("task{id}"),
        config: cfg,
        sizes,
        inject: Default::default(),
    })
}

/// Total instances of the diverse training and validation partitions.
fn diverse_totals(group: TaskGroup) -> (usize, usize) {
    match group {
        TaskGroup::T2 => (18_000, 2_000),
        TaskGroup::T7 => (17_000, 1_700),
        TaskGroup::T12 => (24_772, 2_477),
    }
}

pub fn diverse_subtasks(group: TaskGroup) -> Vec<Subtask> {
    let tasks = group.tasks();
    let (train, valid) = diverse_totals(group);
    let ones = vec![1.0; tasks.len()];
    let trains = crate::sampler::apportion(train, &ones);
    let valids = crate::sampler::apportion(valid, &ones);
    tasks
        .iter()
        .zip(trains.into_iter().zip(valids))
        .map(|(&id, (train, valid))| {
            diverse_subtask(
                id,
                PartitionSizes {
                    train,
                    valid,
                    test: 0,
                },
            )
            .expect("known task")
        })
        .collect()
}

fn mix_size(group: TaskGroup) -> usize {
    match group {
        TaskGroup::T2 => 1_000,
        TaskGroup::T7 => 3_000,
        TaskGroup::T12 => 6_000,
    }
}

/// The test-time configuration of a task group: every concept of the group
/// may combine with every other.
pub fn mix_subtask(group: TaskGroup) -> Subtask {
    let concepts = group.mix_concepts();
    let length = match group {
        TaskGroup::T2 => LengthSpec::range(6, 20),
        _ => LengthSpec::fixed(20),
    };
    let mut cfg = GenConfig::new(concepts, length, mix_size(group));
    let buckets: &[(QuestionType, &[usize])] = match group {
        TaskGroup::T2 => &[(WhereObject, &[2])],
        TaskGroup::T7 => &[
            (WhereActor, &[1, 2]),
            (WhereObject, &[2, 3]),
            (WhereWasObject, &[3, 4]),
        ],
        TaskGroup::T12 => &[
            (WhereActor, &[1, 2, 3, 4, 5]),
            (WhereObject, &[2, 3, 4, 5, 6]),
            (WhereWasObject, &[3, 4, 5, 6, 7]),
            (YesNo, &[1, 2, 3]),
            (List, &[1, 2, 3, 4, 5, 6, 7]),
            (Counting, &[1, 2, 3, 4, 5, 6, 7]),
        ],
    };
    cfg.filter.per_question = buckets
        .iter()
        .map(|&(q, ns)| (q, NBucket::uniform(ns.iter().copied())))
        .collect();
    if group == TaskGroup::T12 {
        cfg.filter.per_answer = BTreeMap::from([("maybe".to_string(), NBucket::uniform([1]))]);
        cfg.yes_no = YesNoMix {
            yes: 0.45,
            no: 0.35,
            maybe: 0.2,
        };
    }
    Subtask {
        name: format!("mix-{group}"),
        config: cfg,
        sizes: PartitionSizes {
            train: 0,
            valid: 0,
            test: mix_size(group),
        },
        inject: Default::default(),
    }
}

pub fn union_concepts(subtasks: &[Subtask]) -> ConceptSet {
    subtasks.iter().fold(ConceptSet::default(), |acc, s| {
        acc.union(&s.config.concepts)
    })
}

/// Every built-in preset name.
pub fn preset_names() -> Vec<String> {
    let mut names: Vec<String> = super::tasks::TASK_IDS
        .iter()
        .map(|id| format!("task{id}"))
        .collect();
    names.extend(TaskGroup::ALL.iter().map(|g| g.name().to_string()));
    for regime in RegimeRegistry::standard().names() {
        for g in TaskGroup::ALL {
            names.push(format!("{regime}-{g}"));
        }
    }
    names
}

/// A built-in split by name: `task1`..`task13` (one task), `T2`/`T7`/`T12`
/// (their tasks concatenated) or `<regime>-<group>`.
pub fn preset(name: &str) -> Result<SplitSpec, SplitError> {
    let unknown = || SplitError::UnknownPreset(name.to_string());
    if let Some(id) = name.strip_prefix("task") {
        let id: u8 = id.parse().map_err(|_| unknown())?;
        let sub = concat_subtask(id).ok_or_else(unknown)?;
        return Ok(SplitSpec {
            name: name.to_string(),
            regime: "concat".into(),
            seed: 0,
            test_concepts: sub.config.concepts.clone(),
            train_subtasks: vec![sub],
            test: None,
        });
    }
    let (regime, group) = match name.split_once('-') {
        Some((r, g)) => (r, g),
        None => ("concat", name),
    };
    let group: TaskGroup = group.parse().map_err(|_| unknown())?;
    let registry = RegimeRegistry::standard();
    let regime = registry.get(regime).ok_or_else(unknown)?;
    let mut spec = regime.spec(group);
    spec.name = name.to_string();
    Ok(spec)
}
