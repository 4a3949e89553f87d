use super::*;
use crate::concepts::{Concept, Construct, EventKind};
use crate::io::{parse_babi, to_babi_string};
use crate::oracle::validate_file;
use crate::sampler::Holdout;

#[test]
fn registry_lists_the_four_regimes() {
    let r = RegimeRegistry::standard();
    assert_eq!(r.names(), vec!["concat", "diverse", "inject", "mix"]);
    assert!(r.get("shuffle").is_none());
}

#[test]
fn every_preset_is_valid() {
    let registry = RegimeRegistry::standard();
    for name in preset_names() {
        let spec = preset(&name).unwrap();
        let compositional = registry.get(&spec.regime).unwrap().compositional();
        spec.validate(compositional)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    assert!(preset("task4").is_err());
    assert!(preset("shuffle-T7").is_err());
}

#[test]
fn concat_sizes_add_up() {
    let spec = preset("T2").unwrap();
    let train: usize = spec.train_subtasks.iter().map(|s| s.sizes.train).sum();
    assert_eq!(train, 18_000);
    let spec = preset("T7").unwrap();
    let train: usize = spec.train_subtasks.iter().map(|s| s.sizes.train).sum();
    assert_eq!(train, 63_000);
}

#[test]
fn single_subtask_concat_is_identity() {
    let spec = preset("task1").unwrap().scaled(0.002);
    let split = build_split(&spec).unwrap();
    let whole = generate_spec(&spec).unwrap();
    assert_eq!(split.file(Partition::Train), whole.file(Partition::Train));
    assert_eq!(split.subsplits(Partition::Train).len(), 1);
}

#[test]
fn concat_preserves_subtask_order() {
    let spec = preset("T2").unwrap().scaled(0.002);
    let split = build_split(&spec).unwrap();
    let names: Vec<&str> = split
        .subsplits(Partition::Train)
        .iter()
        .map(|s| s.subtask.as_str())
        .collect();
    assert_eq!(names, vec!["task2", "task11"]);
    assert_eq!(split.question_count(Partition::Train), 36);
}

#[test]
fn diverse_and_mix_share_the_test_partition() {
    let d = build_split(&preset("diverse-T2").unwrap().scaled(0.002)).unwrap();
    let m = build_split(&preset("mix-T2").unwrap().scaled(0.02)).unwrap();
    assert_eq!(m.question_count(Partition::Train), 0);
    assert_eq!(m.question_count(Partition::Test), 20);
    assert_eq!(d.question_count(Partition::Test), 2);
    assert_eq!(
        d.file(Partition::Test).stories[..],
        m.file(Partition::Test).stories[..2]
    );
}

#[test]
fn diverse_training_respects_holdouts() {
    let spec = preset("diverse-T12").unwrap().scaled(0.004);
    let split = build_split(&spec).unwrap();
    let vocab = &spec.train_subtasks[0].config.vocab;
    let train = split.file(Partition::Train);
    assert!(audit_holdouts(&train, &Holdout::standard_set(), vocab)
        .unwrap()
        .is_empty());
    assert!(validate_file(&train, vocab, false).passed());
    for p in split.profiles(Partition::Train) {
        assert_eq!(p.length, 20);
    }
}

#[test]
fn mix_is_compositional() {
    let spec = preset("diverse-T2").unwrap().scaled(0.01);
    let split = build_split(&spec).unwrap();
    let train: Vec<_> = split
        .subsplits(Partition::Train)
        .iter()
        .map(|s| fc_set(&s.profiles))
        .collect();
    let test = fc_set(split.profiles(Partition::Test));
    let novel = compositional_certificate(&train, &test);
    assert!(!novel.is_empty());
    let coref = Concept::Construct(Construct::Coref);
    let grab = Concept::Event(EventKind::Grab);
    assert!(test
        .iter()
        .any(|fc| fc.contains(&coref) && fc.contains(&grab)));
    let allowed = spec.test_concepts.concepts();
    assert!(test.iter().all(|fc| fc.is_subset(&allowed)));
}

#[test]
fn certificate_is_a_set_difference() {
    let a: BTreeSet<Concept> = [Concept::Event(EventKind::Move)].into();
    let b: BTreeSet<Concept> = [
        Concept::Event(EventKind::Move),
        Concept::Construct(Construct::Coref),
    ]
    .into();
    let train = vec![BTreeSet::from([a.clone()])];
    let test = BTreeSet::from([a, b.clone()]);
    assert_eq!(
        compositional_certificate(&train, &test),
        BTreeSet::from([b])
    );
}

const TWO_ACTORS: &str = "1 Mary moved to the bathroom.
2 John went to the hallway.
3 Where is Mary? \tbathroom\t1
";

#[test]
fn inject_adds_every_located_actor() {
    let vocab = Vocabulary::default();
    let file = parse_babi(TWO_ACTORS).unwrap();
    let types = BTreeSet::from([QuestionType::WhereActor]);
    let (out, profiles) = inject_file(&file, &types, &vocab).unwrap();
    assert_eq!(out.question_count(), 2);
    assert_eq!(profiles.len(), 2);
    let text = to_babi_string(&out);
    assert!(text.contains("3 Where is John?\thallway\t2\n"));
    assert!(text.contains("4 Where is Mary? \tbathroom\t1\n"));
    assert!(validate_file(&out, &vocab, false).passed());
}

#[test]
fn inject_without_determinable_entities_adds_nothing() {
    let vocab = Vocabulary::default();
    let file = parse_babi("1 Mary is not in the park.\n2 Is Mary in the park?\tno\t1\n").unwrap();
    let types = BTreeSet::from([QuestionType::WhereActor, QuestionType::WhereObject]);
    let (out, _) = inject_file(&file, &types, &vocab).unwrap();
    assert_eq!(out, file);
}

#[test]
fn inject_renumbers_interleaved_questions() {
    let vocab = Vocabulary::default();
    let text = "1 Mary moved to the bathroom.
2 Where is Mary?\tbathroom\t1
3 Daniel journeyed to the office.
4 Where is Daniel?\toffice\t3
";
    let file = parse_babi(text).unwrap();
    let types = BTreeSet::from([QuestionType::WhereActor]);
    let (out, _) = inject_file(&file, &types, &vocab).unwrap();
    let text = to_babi_string(&out);
    assert_eq!(
        text,
        "1 Mary moved to the bathroom.
2 Where is Mary?\tbathroom\t1
3 Daniel journeyed to the office.
4 Where is Mary?\tbathroom\t1
5 Where is Daniel?\toffice\t3
"
    );
    assert!(validate_file(&out, &vocab, false).passed());
}

use crate::microworld::Vocabulary;
