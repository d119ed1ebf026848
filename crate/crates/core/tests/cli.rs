//! End-to-end runs of the command-line tool.

use std::io::Write;
use std::process::{Command, Output, Stdio};

const M1: &str = "states: s0 s1\nrel a: s0->s1 s1->s1\nval p: s1\n";

fn mualg(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mualg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.unwrap_or("").as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn model_file(dir: &tempfile::TempDir) -> String {
    let path = dir.path().join("m1.model");
    std::fs::write(&path, M1).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn term_commands() {
    let o = mualg(&["print", "-e", "mu x.p|<a>x"], None);
    assert_eq!(stdout(&o), "mu x . p | <a>x\n");
    let o = mualg(&["nnf"], Some("~(p & <a>q)"));
    assert_eq!(stdout(&o), "~p | [a]~q\n");
    let o = mualg(&["guard", "-e", "mu x . x & p | q"], None);
    assert_eq!(stdout(&o), "q\n");
    let o = mualg(&["classify", "-e", "mu x . p | <a>x"], None);
    assert_eq!(stdout(&o), "Sigma1\n");
}

#[test]
fn evaluation_uses_the_model_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = model_file(&dir);
    let o = mualg(&["eval", "--model", &m, "-e", "mu x . p | <a>x"], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "{s0, s1}\n");
    let o = mualg(&["approx", "--model", &m, "-e", "mu x . p | <a>x"], None);
    assert!(stdout(&o).ends_with("stabilized at 2\n"));
}

#[test]
fn covers_on_both_backends() {
    let dir = tempfile::tempdir().unwrap();
    let m = model_file(&dir);
    let o = mualg(
        &[
            "covers",
            "--vars",
            "x,y",
            "--map",
            "<a>(x | y)",
            "--target",
            "p | <a>q",
        ],
        None,
    );
    assert_eq!(
        stdout(&o),
        "(q ; q)\n# completeness relative to the syntactic order\n"
    );
    let o = mualg(
        &[
            "mucover", "--vars", "y,x", "--var", "x", "--map", "y | <a>x", "--target", "p",
            "--model", &m,
        ],
        None,
    );
    assert!(stdout(&o).ends_with("covers:\n({})\n"), "{}", stdout(&o));
}

#[test]
fn exit_codes() {
    assert_eq!(
        mualg(&["suite", "nonexistent"], None).status.code(),
        Some(2)
    );
    assert_eq!(mualg(&["nnf", "-e", "p &"], None).status.code(), Some(2));
    assert_eq!(
        mualg(&["parse", "-e", "mu x . ~x"], None).status.code(),
        Some(2)
    );
    assert_eq!(
        mualg(&["suite", "counterexample", "--budget", "20"], None)
            .status
            .code(),
        Some(0)
    );
    let failing_whitman = mualg(&["whitman", "--model", "/nonexistent"], None);
    assert_eq!(failing_whitman.status.code(), Some(2));
}

#[test]
fn reports_go_to_the_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let o = mualg(
        &[
            "suite",
            "bekic",
            "--seed",
            "42",
            "--budget",
            "30",
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let first = std::fs::read_to_string(&out).unwrap();
    assert!(first.starts_with("suite bekic (seed 42): PASS"));
    mualg(
        &[
            "suite",
            "bekic",
            "--seed",
            "42",
            "--budget",
            "30",
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(first, std::fs::read_to_string(&out).unwrap());
}
