use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(rel)
}

fn bundled() -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
}

fn morita(args: &[&str], paths: &[PathBuf]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morita")).args(args).args(paths).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn full_corpus_passes() {
    let o = morita(&["check", "--jobs", "2"], &bundled());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn selected_suites_on_pointed_context() {
    let o = morita(&["check", "--suites=coherence,duality,radford"], &[corpus("pointed_context.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("coherence") && text.contains("radford"));
    assert!(!text.contains("pentagon "));
}

#[test]
fn broken_pentagon_fails_with_location() {
    let o = morita(&["check", "--suites=pentagon"], &[corpus("invalid/broken_pentagon.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("tau"), "{}", stdout(&o));
}

#[test]
fn bad_grading_fails() {
    let o = morita(&["check", "--suites=grading"], &[corpus("invalid/fib_z2_bad_grading.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("multiplicativity"));
}

#[test]
fn input_errors_exit_two() {
    let o = morita(&["check"], &[corpus("does_not_exist.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("does_not_exist"));
    let o = morita(&["check", "--suites=nonsense"], &[corpus("vec.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lenient_accepts_unknown_fields() {
    let dir = std::env::temp_dir().join(format!("morita-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(corpus("vec.json")).unwrap()).unwrap();
    v["note"] = serde_json::Value::String("extra".into());
    let path = dir.join("vec_extra.json");
    std::fs::write(&path, v.to_string()).unwrap();
    assert_eq!(morita(&["check"], &[path.clone()]).status.code(), Some(2));
    let o = morita(&["check", "--lenient"], &[path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("note"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn solve_counts_pivotals() {
    let o = morita(&["solve"], &[corpus("vec_z2_trivial.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("vec_z2:")).count(), 2, "{text}");
    let o = morita(&["solve"], &[corpus("fib.json")]);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("fib:")).count(), 1);
    let o = morita(&["solve"], &[corpus("invalid/broken_pentagon.json")]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn solve_module_pivotals() {
    let o = morita(&["solve", "--target", "module-pivotal", "--emit", "json"], &[corpus("pointed_context.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let sols = v.as_array().unwrap();
    assert!(!sols.is_empty());
    assert!(sols.iter().all(|s| s["target"] == "vec_over_z2"));
}

#[test]
fn json_report_is_identical_across_jobs() {
    let one = morita(&["check", "--emit", "json", "--jobs", "1"], &bundled());
    let many = morita(&["check", "--emit", "json", "--jobs", "4"], &bundled());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn relabel_seed_keeps_verdicts() {
    let o = morita(&["check", "--seed", "7", "--suites=fusion,pentagon,coherence,duality"], &[corpus("pointed_context.json"), corpus("fib.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("relabel"));
}

#[test]
fn corpus_command_regenerates_files() {
    let dir = std::env::temp_dir().join(format!("morita-corpus-{}", std::process::id()));
    let o = Command::new(env!("CARGO_BIN_EXE_morita")).arg("corpus").arg(&dir).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    for p in bundled() {
        let name = p.file_name().unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(dir.join(name)).unwrap());
    }
    assert!(dir.join("invalid/broken_pentagon.json").exists());
    std::fs::remove_dir_all(dir).unwrap();
}
