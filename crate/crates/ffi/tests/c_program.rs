//! Compiles and runs a small C program against the generated header and
//! the static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "mualg.h"

int main(void) {
    MualgTerm *t = NULL;
    MualgModel *m = NULL;
    uint64_t mask = 0;
    if (mualg_term_parse("mu x . p | <a> x", &t) != MUALG_STATUS_OK) return 10;
    if (mualg_model_parse("states: s0 s1\nrel a: s0->s1\nval p: s1\n", &m) != MUALG_STATUS_OK) return 11;
    if (mualg_eval(m, t, &mask) != MUALG_STATUS_OK || mask != 3) return 12;
    char *text = mualg_term_print(t);
    printf("%s\n", text);
    mualg_string_free(text);
    MualgTerm *bad = NULL;
    if (mualg_term_parse("p &", &bad) != MUALG_STATUS_PARSE_ERROR || bad != NULL) return 13;
    if (strlen(mualg_last_error()) == 0) return 14;
    mualg_term_free(t);
    mualg_model_free(m);
    return 0;
}
"#;

/// `target/<profile>`, from the location of this test binary.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent()
        .and_then(|deps| deps.parent())
        .unwrap()
        .to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = profile_dir().join("libmualg_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "mu x . p | <a>x\n");
}
