//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use storyworld::analysis::{
    concurrence, consistency_matrix, consistency_pairs, split_stats, ScoreSheet,
};
use storyworld::concepts::{Concept, QuestionType};
use storyworld::io::{
    parse_babi, read_babi, read_predictions, read_score_sheet, to_babi_string, BabiError, BabiFile,
};
use storyworld::microworld::Vocabulary;
use storyworld::oracle::{answer, validate_file, FailureKind, QuestionProfile};
use storyworld::sampler::{apportion, Holdout};
use storyworld::splits::{
    audit_holdouts, compositional_certificate, fc_set, preset, Partition, RegimeRegistry, Split,
    SplitSpec,
};

type Outcome = Result<String, String>;
type Check = fn(&mut Context) -> Outcome;

const SEED: u64 = 20_231;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

fn build(spec: &SplitSpec) -> Result<Split, String> {
    RegimeRegistry::standard()
        .build(spec)
        .map_err(|e| e.to_string())
}

fn mean_n<'a>(profiles: impl IntoIterator<Item = &'a QuestionProfile>) -> f64 {
    split_stats(profiles).avg_n
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

/// Writes every partition to disk and reads it back.
fn through_disk(split: &Split, p: Partition) -> Result<BabiFile, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    split.write(dir.path()).map_err(|e| e.to_string())?;
    read_babi(dir.path().join(Split::file_name(&split.name, p))).map_err(|e| e.to_string())
}

/// Shared full-size diverse(T12) build; its test partition is mix(T12).
struct Context {
    vocab: Vocabulary,
    diverse_t12: Option<Result<Split, String>>,
}

impl Context {
    fn diverse_t12(&mut self) -> Result<&Split, String> {
        if self.diverse_t12.is_none() {
            let built = preset("diverse-T12")
                .map_err(|e| e.to_string())
                .and_then(|spec| build(&spec.with_seed(SEED)));
            self.diverse_t12 = Some(built);
        }
        self.diverse_t12
            .as_ref()
            .unwrap()
            .as_ref()
            .map_err(Clone::clone)
    }
}

fn oracle_round_trip(ctx: &mut Context) -> Outcome {
    let start = Instant::now();
    let mut diverse = preset("diverse-T12")
        .map_err(|e| e.to_string())?
        .with_seed(SEED + 1);
    let weights = vec![1.0; diverse.train_subtasks.len()];
    for (sub, n) in diverse
        .train_subtasks
        .iter_mut()
        .zip(apportion(5000, &weights))
    {
        sub.sizes.train = n;
        sub.sizes.valid = 0;
        sub.sizes.test = 0;
    }
    if let Some(test) = diverse.test.as_mut() {
        test.sizes.test = 0;
    }
    let mut mix = preset("mix-T12")
        .map_err(|e| e.to_string())?
        .with_seed(SEED + 1);
    mix.test
        .as_mut()
        .ok_or("mix-T12 has no test sub-task")?
        .sizes
        .test = 5000;

    let mut details = Vec::new();
    for (spec, p) in [(&diverse, Partition::Train), (&mix, Partition::Test)] {
        let split = build(spec)?;
        let file = through_disk(&split, p)?;
        let report = validate_file(&file, &ctx.vocab, false);
        let disagree = report.count(FailureKind::Disagreement) + report.count(FailureKind::Parse);
        let insufficient = report.count(FailureKind::Insufficient);
        if report.questions != 5000 || !report.passed() {
            return Err(format!(
                "{}: {} questions, {disagree} answer disagreements, {insufficient} insufficient supports",
                spec.name, report.questions
            ));
        }
        details.push(format!("{}: 5000/5000 agree and sufficient", spec.name));
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        return Err(format!("took {:.1}s", elapsed.as_secs_f64()));
    }
    Ok(format!(
        "{} in {:.1}s",
        details.join("; "),
        elapsed.as_secs_f64()
    ))
}

fn double_disjunction(ctx: &mut Context) -> Outcome {
    let file = read_babi(fixture("golden/double_disjunction.txt")).map_err(|e| e.to_string())?;
    let story = file.stories.first().ok_or("empty fixture")?;
    let q = story.questions().next().ok_or("no question")?;
    let full = answer(story, q.line, q.text, None, &ctx.vocab).map_err(|e| e.to_string())?;
    let keep: BTreeSet<usize> = [3, 18, 19, 20].into();
    let support =
        answer(story, q.line, q.text, Some(&keep), &ctx.vocab).map_err(|e| e.to_string())?;
    if q.text.trim() != "Is John in the bedroom?" || full != "yes" || support != "yes" {
        return Err(format!(
            "full passage {full:?}, lines {{3,18,19,20}} {support:?}"
        ));
    }
    Ok("\"yes\" from the passage and from lines {3,18,19,20}".into())
}

fn task_shapes(_: &mut Context) -> Outcome {
    let exact = [(1u8, 1usize), (11, 2), (12, 1), (13, 2)];
    let means = [(2u8, 2.0), (3, 3.0), (5, 1.0), (7, 2.33), (8, 1.94)];
    let mut report = Vec::new();
    let mut failed = false;
    let task = |id: u8| -> Result<Split, String> {
        let spec = preset(&format!("task{id}")).map_err(|e| e.to_string())?;
        build(&spec.scaled(2000.0 / 9000.0).with_seed(SEED + u64::from(id)))
    };
    for (id, n) in exact {
        let split = task(id)?;
        let all: Vec<&QuestionProfile> = Partition::ALL
            .iter()
            .flat_map(|&p| split.profiles(p))
            .collect();
        let ok = all.iter().all(|p| p.n == n);
        failed |= !ok;
        report.push(format!(
            "task{id} n={n} {}",
            if ok { "exact" } else { "NOT exact" }
        ));
    }
    for (id, target) in means {
        let split = task(id)?;
        let train: Vec<&QuestionProfile> = split.profiles(Partition::Train).collect();
        let m = mean_n(train.iter().copied());
        let ok = train.len() == 2000 && within(m, target, 0.2 * target);
        failed |= !ok;
        report.push(format!("task{id} {m:.2} (target {target})"));
    }
    let line = report.join(", ");
    if failed {
        Err(line)
    } else {
        Ok(line)
    }
}

fn split_statistics(ctx: &mut Context) -> Outcome {
    let diverse = ctx.diverse_t12()?;
    let train: Vec<&QuestionProfile> = diverse.profiles(Partition::Train).collect();
    let d_mean = mean_n(train.iter().copied());
    let lengths_ok = Partition::ALL[..2]
        .iter()
        .flat_map(|&p| diverse.profiles(p))
        .all(|p| p.length == 20);
    let mix12: Vec<&QuestionProfile> = diverse.profiles(Partition::Test).collect();
    let m12 = mean_n(mix12.iter().copied());
    let mix_t2 = build(&preset("mix-T2").map_err(|e| e.to_string())?.with_seed(SEED))?;
    let mix2: Vec<&QuestionProfile> = mix_t2.profiles(Partition::Test).collect();
    let m2 = mean_n(mix2.iter().copied());

    let line = format!(
        "diverse(T12) {} questions n={d_mean:.3} length 20 {}; mix(T12) {} n={m12:.3}; mix(T2) {} n={m2:.3}",
        train.len(),
        if lengths_ok { "everywhere" } else { "VIOLATED" },
        mix12.len(),
        mix2.len()
    );
    let ok = train.len() == 24_772
        && lengths_ok
        && within(d_mean, 2.45, 0.15)
        && mix12.len() == 6000
        && within(m12, 3.70, 0.2)
        && mix2.len() == 1000
        && within(m2, 2.05, 0.15);
    if ok {
        Ok(line)
    } else {
        Err(line)
    }
}

fn uniformity(ctx: &mut Context) -> Outcome {
    let spec = preset("diverse-T12").map_err(|e| e.to_string())?;
    let diverse = ctx.diverse_t12()?;
    let subsplits = diverse.subsplits(Partition::Train);
    let total: usize = subsplits.iter().map(|s| s.profiles.len()).sum();
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    let mut groups = 0;
    for sub in subsplits {
        let cfg = &spec
            .train_subtasks
            .iter()
            .find(|t| t.name == sub.subtask)
            .ok_or_else(|| format!("unknown sub-task {}", sub.subtask))?
            .config;
        let mut by_q: BTreeMap<QuestionType, Vec<usize>> = BTreeMap::new();
        for p in &sub.profiles {
            by_q.entry(p.qtype).or_default().push(p.n);
        }
        for (q, ns) in by_q {
            let buckets = cfg.filter.buckets(q);
            if buckets.len() < 2 {
                continue;
            }
            groups += 1;
            let weight: f64 = buckets.iter().map(|b| b.weight).sum();
            for b in buckets {
                let expected = ns.len() as f64 * b.weight / weight;
                let seen = ns.iter().filter(|&&n| b.contains(n)).count() as f64;
                let dev = (seen - expected).abs() / expected;
                if dev > worst {
                    worst = dev;
                    worst_at = format!("{} {q} n={}..={}", sub.subtask, b.min, b.max);
                }
            }
        }
    }
    let line = format!(
        "{groups} bucketed (sub-task, question) groups over {total} questions, worst deviation {:.2}% ({worst_at})",
        worst * 100.0
    );
    if total >= 10_000 && groups > 0 && worst <= 0.10 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn holdout_soundness(ctx: &mut Context) -> Outcome {
    let vocab = ctx.vocab.clone();
    let diverse = ctx.diverse_t12()?;
    let rules = Holdout::standard_set();
    let mut violations = 0;
    let mut audited = 0;
    let mut train_sets: Vec<BTreeSet<BTreeSet<Concept>>> = Vec::new();
    for sub in diverse.subsplits(Partition::Train) {
        audited += sub.file.question_count();
        violations += audit_holdouts(&sub.file, &rules, &vocab)
            .map_err(|e| e.to_string())?
            .len();
        train_sets.push(fc_set(&sub.profiles));
    }
    let test = fc_set(diverse.profiles(Partition::Test));
    let certificate = compositional_certificate(&train_sets, &test);
    let line = format!(
        "{violations} violations over {audited} training questions; {} mix compositions unseen in every sub-split",
        certificate.len()
    );
    if violations == 0 && audited > 0 && !certificate.is_empty() {
        Ok(line)
    } else {
        Err(line)
    }
}

fn score_sheet() -> Result<ScoreSheet, String> {
    let file = fs::File::open(fixture("concurrence_scores.csv")).map_err(|e| e.to_string())?;
    read_score_sheet(file).map_err(|e| e.to_string())
}

fn concurrence_fixture(_: &mut Context) -> Outcome {
    let sheet = score_sheet()?;
    let col = |b: &str| sheet.column(b).ok_or(format!("missing column {b}"));
    let squad = col("SQuAD")?;
    let t7 = concurrence(&squad, &col("mix(T7)")?).map_err(|e| e.to_string())?;
    let t2 = concurrence(&squad, &col("mix(T2)")?).map_err(|e| e.to_string())?;
    let line = format!(
        "mix(T7) rho={:.3} tau={:.3} over {}; mix(T2) rho={:.3} tau={:.3} over {}",
        t7.pearson, t7.kendall, t7.n_models, t2.pearson, t2.kendall, t2.n_models
    );
    let ok = t7.n_models == 19
        && within(t7.pearson, 0.92, 0.01)
        && within(t7.kendall, 0.78, 0.02)
        && t2.n_models == 20
        && within(t2.pearson, 0.48, 0.01)
        && within(t2.kendall, 0.51, 0.02);
    if ok {
        Ok(line)
    } else {
        Err(line)
    }
}

fn consistency(ctx: &mut Context) -> Outcome {
    let vocab = ctx.vocab.clone();
    let mix = ctx.diverse_t12()?.file(Partition::Test);
    let yes = consistency_pairs(&mix, &vocab).len();

    let stories = read_babi(fixture("consistency/stories.txt")).map_err(|e| e.to_string())?;
    let pairs = consistency_pairs(&stories, &vocab);
    let preds =
        fs::File::open(fixture("consistency/predictions.csv")).map_err(|e| e.to_string())?;
    let preds = read_predictions(preds).map_err(|e| e.to_string())?;
    let m = consistency_matrix(&pairs, &preds).map_err(|e| e.to_string())?;

    let line = format!(
        "{yes} yes-answered questions in mix(T12) (target 446); fixture matrix {:?}",
        m.0
    );
    if within(yes as f64, 446.0, 0.25 * 446.0) && m.0 == [[209, 4], [145, 88]] {
        Ok(line)
    } else {
        Err(line)
    }
}

fn determinism(_: &mut Context) -> Outcome {
    let run = |name: &str, scale: f64, seed: u64| -> Result<BTreeMap<String, Vec<u8>>, String> {
        let spec = preset(name)
            .map_err(|e| e.to_string())?
            .scaled(scale)
            .with_seed(seed);
        let split = build(&spec)?;
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut out = BTreeMap::new();
        for path in split.write(dir.path()).map_err(|e| e.to_string())? {
            let key = path.file_name().unwrap().to_string_lossy().into_owned();
            out.insert(key, fs::read(&path).map_err(|e| e.to_string())?);
        }
        Ok(out)
    };
    let mut notes = Vec::new();
    for (name, scale) in [("mix-T2", 0.2), ("diverse-T7", 0.02), ("inject-T2", 0.02)] {
        let a = run(name, scale, 5)?;
        let b = run(name, scale, 5)?;
        let c = run(name, scale, 6)?;
        if a != b {
            return Err(format!("{name}: same seed gave different files"));
        }
        let nonempty: Vec<&String> = a
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(k, _)| k)
            .collect();
        if nonempty.iter().any(|k| a[*k] == c[*k]) || nonempty.is_empty() {
            return Err(format!("{name}: different seeds gave identical files"));
        }
        notes.push(format!("{name} ({} files)", a.len()));
    }
    Ok(format!(
        "identical for equal seeds, different otherwise: {}",
        notes.join(", ")
    ))
}

fn format_fixtures(_: &mut Context) -> Outcome {
    let list = |dir: &str| -> Result<Vec<PathBuf>, String> {
        let mut v: Vec<PathBuf> = fs::read_dir(fixture(dir))
            .map_err(|e| e.to_string())?
            .map(|e| e.map(|e| e.path()).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        v.sort();
        Ok(v)
    };
    let golden = list("golden")?;
    for path in &golden {
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        let parsed = parse_babi(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        if to_babi_string(&parsed) != text {
            return Err(format!("{} does not round-trip", path.display()));
        }
    }
    let malformed = list("malformed")?;
    for path in &malformed {
        match read_babi(path) {
            Err(BabiError::Format(_)) => {}
            other => {
                return Err(format!(
                    "{}: expected a format error, got {other:?}",
                    path.display()
                ))
            }
        }
    }
    if golden.is_empty() || malformed.len() != 5 {
        return Err(format!(
            "{} golden and {} malformed fixtures",
            golden.len(),
            malformed.len()
        ));
    }
    Ok(format!(
        "{} golden files byte-identical, {} malformed files rejected",
        golden.len(),
        malformed.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("oracle round-trip", oracle_round_trip),
        ("double disjunction golden", double_disjunction),
        ("per-task support counts", task_shapes),
        ("split statistics", split_statistics),
        ("bucket uniformity", uniformity),
        ("holdout soundness", holdout_soundness),
        ("concurrence fixture", concurrence_fixture),
        ("consistency machinery", consistency),
        ("determinism", determinism),
        ("format fixtures", format_fixtures),
    ];
    let mut ctx = Context {
        vocab: Vocabulary::default(),
        diverse_t12: None,
    };
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check(&mut ctx);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
