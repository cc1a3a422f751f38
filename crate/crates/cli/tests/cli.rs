use std::path::PathBuf;
use std::process::{Command, Output};

use tldlite_cli::{Outcome, ResultRecord};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tldlite")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn check(name: &str, extra: &[&str]) -> Output {
    let path = corpus(name);
    let mut args = vec!["check", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn exit_codes_follow_verdicts() {
    for (name, code) in [
        ("example3_half.kb", 0),
        ("example3_threequarters.kb", 1),
        ("example2.kb", 1),
        ("example5.kb", 0),
        ("rigid_roles.kb", 0),
        ("geom_onefifth.kb", 2),
    ] {
        assert_eq!(check(name, &[]).status.code(), Some(code), "{name}");
    }
    assert_eq!(run(&["check", "/nonexistent/x.kb"]).status.code(), Some(2));
}

#[test]
fn out_of_range_parameter_is_reported() {
    let o = check("geom_onefifth.kb", &[]);
    let err = stdout(&o);
    assert!(err.contains("1/5") && err.contains("outside [1/2,1)"), "{err}");
}

#[test]
fn json_record_round_trips() {
    let o = check("example5.kb", &["--json"]);
    let text = stdout(&o);
    let rec = ResultRecord::from_json(&text).unwrap();
    assert_eq!(rec.result, Outcome::Sat);
    assert_eq!(rec.diamonds, Some(2));
    let b = rec.bound.as_ref().unwrap();
    assert_eq!((b.s, b.q, b.b), (Some(3), Some(3), 6));
    assert_eq!(ResultRecord::from_json(&rec.to_json()).unwrap(), rec);

    let rec = ResultRecord::from_json(&stdout(&check("example2.kb", &["--json"]))).unwrap();
    assert_eq!(rec.result, Outcome::Unsat);
    assert!(rec.certificate.unwrap().contains("level 1"));

    let o = check("geom_onefifth.kb", &["--json"]);
    assert_eq!(o.status.code(), Some(2));
    let rec = ResultRecord::from_json(&stdout(&o)).unwrap();
    assert_eq!(rec.result, Outcome::Error);
    assert!(rec.error.unwrap().contains("outside"));
}

#[test]
fn matrix_prints_exact_grid() {
    let path = corpus("example5.kb");
    let o = run(&["matrix", path.to_str().unwrap(), "--size", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "5/16 0 1/8 1/16\nx 1/4 0 0\n1/8 x x x\n1/16 x x x\n");
    let o = run(&["matrix", path.to_str().unwrap(), "--size", "0"]);
    assert_eq!(stdout(&o), "1/2\n");
    let bad = corpus("example2.kb");
    let o = run(&["matrix", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("KB unsatisfiable"));
}

#[test]
fn translate_variants() {
    let path = corpus("example5.kb");
    let p = path.to_str().unwrap();
    let flat = corpus("rigid_roles.kb");
    let plain = run(&["translate", flat.to_str().unwrap()]);
    let down = run(&["translate", p, "--down"]);
    let entry = run(&["translate", p, "--entry", "1", "2"]);
    for o in [&plain, &down, &entry] {
        assert_eq!(o.status.code(), Some(0), "{}", stderr(o));
        assert!(!stdout(o).trim().is_empty());
    }
    assert_eq!(run(&["translate", p]).status.code(), Some(2));
    assert_ne!(stdout(&down), stdout(&entry));
    assert_eq!(run(&["translate", p, "--down", "--entry", "1"]).status.code(), Some(2));
}

fn untimed(o: &Output) -> String {
    stdout(o).lines().filter(|l| !l.starts_with("time:")).collect::<Vec<_>>().join("\n")
}

#[test]
fn trace_and_modes_agree() {
    let par = check("example5.kb", &["--trace"]);
    let seq = check("example5.kb", &["--trace", "--sequential"]);
    let jobs = check("example5.kb", &["--trace", "--jobs", "2"]);
    assert!(stdout(&par).contains("level 2:"));
    assert_eq!(untimed(&par), untimed(&seq));
    assert_eq!(untimed(&par), untimed(&jobs));
    let o = check("example3_threequarters.kb", &["--trace"]);
    assert!(stdout(&o).contains("no chained pair"));
}

#[test]
fn bound_override_is_recorded() {
    let o = check("example5.kb", &["--json", "--bound", "9"]);
    let rec = ResultRecord::from_json(&stdout(&o)).unwrap();
    assert_eq!(rec.bound.unwrap().b, 9);
}

#[test]
fn cache_dir_persists_results() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = check("example5.kb", &["--cache-dir", d]);
    assert_eq!(first.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let second = check("example5.kb", &["--cache-dir", d]);
    assert_eq!(stdout(&first).lines().next(), stdout(&second).lines().next());
}

#[test]
fn oracle_subcommand_agrees() {
    let path = corpus("example5.kb");
    let o = run(&["oracle", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("overall: agreement"));
}
