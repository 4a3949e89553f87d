use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn storyworld(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_storyworld"))
        .args(args)
        .env_remove("STORYWORLD_SEED")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = storyworld(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn generate(dir: &Path, seed: &str) {
    ok(&[
        "--seed",
        seed,
        "generate",
        "--preset",
        "mix-T2",
        "--scale",
        "0.05",
        "--out",
        dir.to_str().unwrap(),
    ]);
}

#[test]
fn same_seed_gives_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    generate(a.path(), "7");
    generate(b.path(), "7");
    generate(c.path(), "8");
    let read = |d: &Path| fs::read(d.join("mix-T2_test.txt")).unwrap();
    assert!(!read(a.path()).is_empty());
    assert_eq!(read(a.path()), read(b.path()));
    assert_ne!(read(a.path()), read(c.path()));
}

#[test]
fn env_seed_is_used_when_no_flag_is_given() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    generate(a.path(), "11");
    let status = Command::new(env!("CARGO_BIN_EXE_storyworld"))
        .args(["generate", "--preset", "mix-T2", "--scale", "0.05", "--out"])
        .arg(b.path())
        .env("STORYWORLD_SEED", "11")
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(
        fs::read(a.path().join("mix-T2_test.txt")).unwrap(),
        fs::read(b.path().join("mix-T2_test.txt")).unwrap()
    );
}

#[test]
fn generated_files_validate() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "3");
    let test = dir.path().join("mix-T2_test.txt");
    let report = ok(&["validate", "--in", test.to_str().unwrap()]);
    assert!(report.contains("0 failed"), "{report}");
}

#[test]
fn validate_rejects_a_wrong_answer() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(
        &path,
        "1 Mary moved to the bathroom.\n2 John went to the hallway.\n3 Where is Mary? \thallway\t1\n",
    )
    .unwrap();
    let out = storyworld(&["validate", "--in", path.to_str().unwrap()]);
    assert!(!out.status.success());
}

#[test]
fn malformed_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(
        &path,
        "1 Mary moved to the bathroom.\n3 Where is Mary? \tbathroom\t1\n",
    )
    .unwrap();
    let out = storyworld(&["stats", "--in", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn unknown_preset_fails() {
    let out = storyworld(&["config", "--preset", "nonsense"]);
    assert!(!out.status.success());
}

#[test]
fn config_round_trips_through_generate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("t2.json");
    fs::write(&cfg, ok(&["config", "--preset", "mix-T2"])).unwrap();
    let from_cfg = dir.path().join("cfg");
    let from_preset = dir.path().join("preset");
    for (flag, value, out) in [
        ("--config", cfg.to_str().unwrap(), &from_cfg),
        ("--preset", "mix-T2", &from_preset),
    ] {
        ok(&[
            "generate",
            flag,
            value,
            "--scale",
            "0.05",
            "--out",
            out.to_str().unwrap(),
        ]);
    }
    assert_eq!(
        fs::read(from_cfg.join("mix-T2_test.txt")).unwrap(),
        fs::read(from_preset.join("mix-T2_test.txt")).unwrap()
    );
}

#[test]
fn presets_are_listed() {
    let list = ok(&["config"]);
    for name in [
        "task1",
        "task13",
        "diverse-T12",
        "mix-T7",
        "inject-T7",
        "concat-T7",
    ] {
        assert!(list.lines().any(|l| l == name), "missing {name}");
    }
}

#[test]
fn stats_csv_has_a_header() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "5");
    let test = dir.path().join("mix-T2_test.txt");
    let csv = ok(&["--format", "csv", "stats", "--in", test.to_str().unwrap()]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("name,size,avg_length,avg_n"));
    assert!(lines.next().unwrap().starts_with("mix-T2_test.txt,50,"));
}

#[test]
fn inject_adds_questions() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    let output = dir.path().join("out.txt");
    fs::write(
        &input,
        "1 Mary moved to the bathroom.\n2 John went to the hallway.\n3 Where is Mary? \tbathroom\t1\n",
    )
    .unwrap();
    let msg = ok(&[
        "inject",
        "--in",
        input.to_str().unwrap(),
        "--types",
        "where-P",
        "--out",
        output.to_str().unwrap(),
    ]);
    assert_eq!(msg.trim(), "1 questions in, 2 out");
    let text = fs::read_to_string(&output).unwrap();
    assert!(text.contains("Where is John?\thallway\t2"), "{text}");
}

#[test]
fn breakdown_with_predictions_reports_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    let preds = dir.path().join("preds.csv");
    fs::write(
        &input,
        "1 Mary moved to the bathroom.\n2 Where is Mary? \tbathroom\t1\n\
         1 John went to the hallway.\n2 Where is John? \thallway\t1\n",
    )
    .unwrap();
    fs::write(&preds, "id,prediction\n0,bathroom\n1,garden\n").unwrap();
    let out = ok(&[
        "breakdown",
        "--in",
        input.to_str().unwrap(),
        "--preds",
        preds.to_str().unwrap(),
    ]);
    assert_eq!(out.trim(), "n=1 MOVE: 2 (50.0% correct)");
}

#[test]
fn concurrence_needs_a_benchmark_when_ambiguous() {
    let dir = tempfile::tempdir().unwrap();
    let sheet = dir.path().join("s.csv");
    fs::write(&sheet, "model,x,y\na,1,2\nb,2,1\nc,3,3\n").unwrap();
    let s = sheet.to_str().unwrap();
    assert!(!storyworld(&["concurrence", "--a", s, "--b", s])
        .status
        .success());
    let out = ok(&[
        "concurrence",
        "--a",
        s,
        "--a-benchmark",
        "x",
        "--b",
        s,
        "--b-benchmark",
        "x",
    ]);
    assert_eq!(
        out.trim(),
        "x vs x: pearson 1.0000, kendall 1.0000 over 3 models"
    );
}

#[test]
fn pairs_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    let output = dir.path().join("pairs.txt");
    fs::write(
        &input,
        "1 Mary moved to the bathroom.\n2 Is Mary in the bathroom? \tyes\t1\n\
         1 John went to the hallway.\n2 Is John in the kitchen? \tno\t1\n",
    )
    .unwrap();
    let msg = ok(&[
        "pairs",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
    ]);
    assert_eq!(msg.trim(), "1 pairs");
    let text = fs::read_to_string(&output).unwrap();
    assert!(
        text.ends_with("2 Is Mary in the bathroom?\tyes\t1\n3 Where is Mary?\tbathroom\t1\n"),
        "{text}"
    );
}

#[test]
fn inject_regime_keeps_questions_inside_stories() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "generate",
        "--preset",
        "inject-T2",
        "--scale",
        "0.002",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let text = fs::read_to_string(dir.path().join("inject-T2_train.txt")).unwrap();
    let questions = text.lines().filter(|l| l.contains('\t')).count();
    let stories = text.lines().filter(|l| l.starts_with("1 ")).count();
    assert!(
        questions > stories,
        "{questions} questions in {stories} stories"
    );
}

#[test]
fn flattened_injection_has_one_question_per_story() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    let output = dir.path().join("out.txt");
    fs::write(
        &input,
        "1 Mary moved to the bathroom.\n2 John went to the hallway.\n3 Where is Mary? \tbathroom\t1\n",
    )
    .unwrap();
    ok(&[
        "inject",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
        "--flatten",
    ]);
    let text = fs::read_to_string(&output).unwrap();
    assert_eq!(
        text.lines().filter(|l| l.starts_with("1 ")).count(),
        2,
        "{text}"
    );
}
