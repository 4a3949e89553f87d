use std::fs;
use std::path::{Path, PathBuf};

use storyworld::io::{parse_babi, read_babi, to_babi_string, write_babi, BabiError};
use storyworld::microworld::Vocabulary;
use storyworld::oracle::validate_file;

fn fixtures(dir: &str) -> Vec<PathBuf> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(dir);
    let mut files: Vec<PathBuf> = fs::read_dir(root)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files
}

#[test]
fn golden_files_round_trip_byte_for_byte() {
    let files = fixtures("golden");
    assert_eq!(files.len(), 4);
    for path in files {
        let text = fs::read_to_string(&path).unwrap();
        let parsed = parse_babi(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(to_babi_string(&parsed), text, "{}", path.display());

        let out = tempfile_path(&path);
        write_babi(&parsed, &out).unwrap();
        assert_eq!(fs::read_to_string(&out).unwrap(), text);
        assert_eq!(read_babi(&out).unwrap(), parsed);
        fs::remove_file(out).unwrap();
    }
}

fn tempfile_path(path: &Path) -> PathBuf {
    std::env::temp_dir().join(format!(
        "storyworld-{}-{}",
        std::process::id(),
        path.file_name().unwrap().to_string_lossy()
    ))
}

#[test]
fn generated_golden_files_still_validate() {
    let vocab = Vocabulary::default();
    for name in [
        "double_disjunction.txt",
        "mix_sample.txt",
        "injected_sample.txt",
    ] {
        let path = Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/fixtures/golden")
            .join(name);
        let file = read_babi(&path).unwrap();
        let report = validate_file(&file, &vocab, false);
        assert!(report.passed(), "{name}: {report}");
    }
}

#[test]
fn malformed_files_are_rejected_with_a_line_number() {
    let expected = [
        ("bad_line_number.txt", 2),
        ("missing_support_field.txt", 2),
        ("skipped_line.txt", 2),
        ("story_starts_late.txt", 1),
        ("support_after_question.txt", 2),
    ];
    let files = fixtures("malformed");
    assert_eq!(files.len(), expected.len());
    for (path, (name, line)) in files.iter().zip(expected) {
        assert_eq!(path.file_name().unwrap(), name);
        match read_babi(path) {
            Err(BabiError::Format(e)) => assert_eq!(e.line, line, "{name}: {e}"),
            other => panic!("{name}: expected a format error, got {other:?}"),
        }
    }
}
