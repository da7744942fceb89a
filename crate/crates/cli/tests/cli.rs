use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stringalg"))
        .current_dir(root())
        .env_remove("STRALG_FIELD")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_checked(schema: &str, args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let out: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let path = root().join("schemas").join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&out).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?} violates {}: {errors:?}", schema["title"]);
    out
}

const R1_QUERY: &str = "inf^(b a^-1) . b (a b^-1)^inf";
const R1_PARTITION: &str = "b:+1,b^-1:+1,a:-1,a^-1:-1";

#[test]
fn lambda2_is_domestic_of_degree_two() {
    let o = run(&["domestic", "corpus/lambda2.alg"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "Domestic(2)");
}

#[test]
fn g23_is_not_domestic() {
    let v = json_checked("domestic", &["domestic", "corpus/g23.alg"]);
    assert_eq!(v["domestic"], false);
}

#[test]
fn bridge_dot_has_two_chains() {
    let o = run(&["bridge", "corpus/lambda2.alg", "--dot"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 2);
    assert_eq!(dot.matches("label=").count(), 6);
}

#[test]
fn empty_algebra_is_a_usage_error() {
    let dir = std::env::temp_dir().join(format!("stringalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("empty.alg");
    std::fs::write(&file, "").unwrap();
    let o = run(&["validate", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("usage error"));
}

#[test]
fn malformed_invocations_exit_two() {
    assert_eq!(run(&["domestic"]).status.code(), Some(2));
    assert_eq!(run(&["--field", "9", "domestic", "corpus/r1.alg"]).status.code(), Some(2));
    assert_eq!(run(&["module", "string", "corpus/r1.alg", "a c"]).status.code(), Some(2));
    assert_eq!(run(&["domestic", "corpus/missing.alg"]).status.code(), Some(2));
}

#[test]
fn precondition_failures_exit_one() {
    let o = run(&["pp", "corpus/r1.alg", "--string", "a b^-1", "--left", "a"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["bridge", "corpus/g23.alg"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn invalid_algebra_exits_one() {
    let dir = std::env::temp_dir().join(format!("stringalg-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("loop.alg");
    std::fs::write(&file, "algebra loop\nvertices: s\narrow a: s -> s\n").unwrap();
    let o = run(&["validate", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn validate_json() {
    for alg in ["r1", "kronecker", "lambda2", "g23"] {
        let v = json_checked("validate", &["validate", &format!("corpus/{alg}.alg")]);
        assert_eq!(v["valid"], true);
    }
}

#[test]
fn bands_json() {
    let v = json_checked("bands", &["bands", "corpus/kronecker.alg"]);
    assert_eq!(v["bands"], serde_json::json!(["a b^-1", "b a^-1"]));
    json_checked("bands", &["bands", "corpus/g23.alg", "--max-len", "5"]);
}

#[test]
fn bridge_json() {
    let v = json_checked("bridge", &["bridge", "corpus/lambda2.alg"]);
    assert_eq!(v["n"], 2);
    assert_eq!(v["covers"].as_array().unwrap().len(), 2);
}

#[test]
fn module_json_round_trips() {
    let v = json_checked("module", &["module", "band", "corpus/kronecker.alg", "a b^-1", "--lambda", "3", "--layers", "2"]);
    assert_eq!(v["dims"]["1"], 2);
    json_checked("module", &["module", "string", "corpus/lambda2.alg", "g a b^-1"]);
    json_checked("module", &["--field", "7", "module", "band", "corpus/r1.alg", "a b^-1", "--lambda", "5"]);
}

#[test]
fn pp_word_of_and_hom_json() {
    let v = json_checked("pp", &["pp", "corpus/r1.alg", "--string", "a b^-1", "--left", "b"]);
    assert_eq!(v["dim"], 0);
    let v = json_checked("word_of", &["word-of", "corpus/r1.alg", "--string", "a b^-1", "--node", "1"]);
    assert_eq!(v["word"], "b . a^-1");
    let v = json_checked("hom", &["hom", "corpus/r1.alg", "a", "a b^-1"]);
    assert_eq!(v["count"], v["oracle_count"]);
}

#[test]
fn homog_finds_the_kronecker_decomposition() {
    let dir = std::env::temp_dir().join(format!("stringalg-cli-ab-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("ab.json");
    std::fs::write(&file, r#"{"dims":{"1":2,"2":2},"matrices":{"a":[["1","0"],["0","0"]],"b":[["0","0"],["0","1"]]}}"#).unwrap();
    let f = file.to_str().unwrap();
    let v = json_checked("homog", &["homog", "corpus/kronecker.alg", "--module-json", f, "--vertex", "1", "--coords", "1,1"]);
    assert_eq!(v["homogeneous"], false);
    let v = json_checked("homog", &["homog", "corpus/kronecker.alg", "--string", "a", "--node", "0"]);
    assert_eq!(v["homogeneous"], true);
}

#[test]
fn ringel_json() {
    let v = json_checked("ringel_list", &["ringel", "list", "corpus/r1.alg", "--bounds", "2,2"]);
    assert!(!v["descriptors"].as_array().unwrap().is_empty());
    json_checked("ringel_list", &["ringel", "list", "corpus/lambda2.alg"]);
    let v = json_checked("ringel_truncate", &["ringel", "truncate", "corpus/r1.alg", R1_QUERY, "--partition", R1_PARTITION]);
    assert_eq!(v["length"], 9);
    let v = json_checked(
        "verdict",
        &["ringel", "pp", "corpus/r1.alg", R1_QUERY, "--partition", R1_PARTITION, "--left", "a b^-1", "--right", "b a b^-1"],
    );
    assert_eq!(v["verdict"], "in_type");
    assert_eq!(v["oracle"]["verdict"], "in_type");
}

#[test]
fn ringel_classify_agrees_with_oracle() {
    let v = json_checked(
        "verdict",
        &["ringel", "classify", "corpus/r1.alg", R1_QUERY, "--partition", R1_PARTITION, "--string", "b a^-1 b a b^-1", "--node", "2"],
    );
    assert_eq!(v["verdict"], v["oracle"]["verdict"]);
}

#[test]
fn audit_passes_on_r1() {
    let v = json_checked("audit", &["audit", "corpus/r1.alg", "--samples", "50"]);
    assert_eq!(v["passed"], true);
}

#[test]
fn audit_skips_band_suites_when_not_domestic() {
    let v = json_checked("audit", &["audit", "corpus/g23.alg", "--samples", "20", "--max-len", "4"]);
    let skipped: Vec<&Value> = v["suites"].as_array().unwrap().iter().filter(|s| s["status"] == "skipped").collect();
    assert!(!skipped.is_empty());
    assert!(skipped.iter().all(|s| s["reason"] == "non-domestic"));
}

#[test]
fn audit_is_deterministic_for_a_seed() {
    let args = ["audit", "corpus/lambda2.alg", "--samples", "30", "--seed", "17", "--format", "json"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
