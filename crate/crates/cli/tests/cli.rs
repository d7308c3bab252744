use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn hpisot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpisot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn corpus_file(name: &str) -> String {
    root().join("corpus").join(name).to_string_lossy().into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn analyze_reports_fibonacci() {
    let o = hpisot(&["--json", "analyze", &corpus_file("fibonacci.json")]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["pisot"]["degree"], 2);
    assert_eq!(r["verdicts"]["homological_pisot"], true);
    let text = hpisot(&["analyze", &corpus_file("fibonacci.json")]);
    assert_eq!(text.status.code(), Some(0));
    assert!(stdout(&text).contains("x^2 - x - 1"));
}

#[test]
fn analyze_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"alphabet\": [\"a\"], \"rules\": {\"a\": \"b\"}}");
    assert_eq!(hpisot(&["analyze", &bad]).status.code(), Some(2));
    let garbage = write(dir.path(), "garbage.json", "not json");
    assert_eq!(hpisot(&["analyze", &garbage]).status.code(), Some(2));
    let reducible = write(
        dir.path(),
        "reducible.json",
        "{\"alphabet\": [\"a\", \"b\"], \"rules\": {\"a\": \"ab\", \"b\": \"b\"}}",
    );
    let o = hpisot(&["analyze", &reducible]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("primitive"));
    assert_eq!(hpisot(&["analyze"]).status.code(), Some(2));
    assert_eq!(hpisot(&["--help"]).status.code(), Some(0));
}

#[test]
fn sample_length_beyond_word_cap_is_a_resource_error() {
    let o = hpisot(&[
        "analyze",
        &corpus_file("fibonacci.json"),
        "--sample-len",
        "1000",
        "--max-word-length",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn cover_writes_substitution_next_to_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = std::fs::read_to_string(root().join("corpus/covers/length_nine_cover_spec.json")).unwrap();
    let path = write(dir.path(), "ex1.json", &spec);
    let o = hpisot(&["--json", "cover", &path]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["all_passed"], true);
    let written = std::fs::read_to_string(dir.path().join("ex1.substitution.json")).unwrap();
    let cover: Value = serde_json::from_str(&written).unwrap();
    let expected: Value =
        serde_json::from_str(&std::fs::read_to_string(corpus_file("length_nine_cover.json")).unwrap()).unwrap();
    assert_eq!(cover, expected["substitution"]);
}

#[test]
fn corrupted_cover_reports_failure() {
    let dir = tempfile::tempdir().unwrap();
    let spec = std::fs::read_to_string(root().join("corpus/covers/corrupted_cover_spec.json")).unwrap();
    let path = write(dir.path(), "bad.json", &spec);
    let o = hpisot(&["--json", "cover", &path]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert!(r["failure"].is_string());
    assert_eq!(r["all_passed"], false);
    assert!(!dir.path().join("bad.substitution.json").exists());
}

#[test]
fn cover_generator_from_fibonacci_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let m0 = write(dir.path(), "fib.json", "[[1, 1], [1, 0]]");
    let o = hpisot(&["--json", "cover", "--m0", &m0, "--power", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["all_passed"], true);
    assert_eq!(r["cover"]["alphabet"].as_array().unwrap().len(), 6);
    assert!(dir.path().join("fib.k3.cover_spec.json").exists());
    assert!(dir.path().join("fib.k3.substitution.json").exists());
    assert_eq!(hpisot(&["cover", "--m0", &m0]).status.code(), Some(2));
}

#[test]
fn corpus_mismatch_exits_three_with_diff() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(hpisot(&["corpus", dir.path().to_str().unwrap()]).status.code(), Some(0));
    write(
        dir.path(),
        "fib.json",
        r#"{"name": "fib", "substitution": {"alphabet": ["a", "b"], "rules": {"a": "ab", "b": "a"}},
            "expected": {"cohomology.dim_h1": 5}, "options": {"erp_patches": 2}}"#,
    );
    let o = hpisot(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("cohomology.dim_h1: expected 5, got 2"), "{err}");
}

#[test]
fn erp_measure_and_cr_commands() {
    let fib = corpus_file("fibonacci.json");
    let o = hpisot(&["--json", "erp", &fib, "--patch", "aa"]);
    assert_eq!(o.status.code(), Some(0));
    let fits = json(&o)["fits"].clone();
    assert_eq!(fits.as_array().unwrap().len(), 1);
    assert_eq!(fits[0]["alphas"][0]["num"], "-1");

    let o = hpisot(&["--json", "measure", &fib, "--patch", "a", "--assert-lattices-equal"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["measures"][0]["canonical"]["k"], 0);

    let o = hpisot(&["--json", "cr", &corpus_file("thue_morse.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["coincidence"]["cr"], 2);
    assert_eq!(hpisot(&["cr", &fib]).status.code(), Some(1));
}

#[test]
fn json_output_is_deterministic() {
    let dir = corpus_file("");
    let a = hpisot(&["--json", "corpus", &dir]);
    let b = hpisot(&["--json", "corpus", &dir]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

/// Validates every JSON output kind against the published schema with Python's `jsonschema`.
#[test]
fn outputs_match_schema() {
    let dir = tempfile::tempdir().unwrap();
    let mut docs = Vec::new();
    for name in ["fibonacci.json", "thue_morse.json", "length_nine_cover.json", "period_doubling.json"] {
        docs.push(json(&hpisot(&["--json", "analyze", &corpus_file(name)])));
    }
    docs.push(json(&hpisot(&["--json", "corpus", &corpus_file("")])));
    let spec = std::fs::read_to_string(root().join("corpus/covers/length_nine_cover_spec.json")).unwrap();
    docs.push(json(&hpisot(&["--json", "cover", &write(dir.path(), "c.json", &spec)])));
    let bad = std::fs::read_to_string(root().join("corpus/covers/corrupted_cover_spec.json")).unwrap();
    docs.push(json(&hpisot(&["--json", "cover", &write(dir.path(), "b.json", &bad)])));
    docs.push(json(&hpisot(&["--json", "erp", &corpus_file("fibonacci.json")])));
    docs.push(json(&hpisot(&["--json", "measure", &corpus_file("thue_morse.json")])));
    docs.push(json(&hpisot(&["--json", "cr", &corpus_file("length_nine_cover.json")])));
    let docs_path = write(dir.path(), "docs.json", &serde_json::to_string(&docs).unwrap());

    let script = "import json, sys, jsonschema\n\
        schema = json.load(open(sys.argv[1]))\n\
        v = jsonschema.Draft7Validator(schema)\n\
        bad = [(i, e.message[:200]) for i, d in enumerate(json.load(open(sys.argv[2]))) for e in v.iter_errors(d)]\n\
        print(bad)\n\
        sys.exit(1 if bad else 0)\n";
    let schema = root().join("docs/report.schema.json");
    let o = Command::new("python3")
        .args(["-c", script, schema.to_str().unwrap(), &docs_path])
        .output()
        .expect("python3 runs");
    assert!(
        o.status.success(),
        "{}{}",
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    );
}
