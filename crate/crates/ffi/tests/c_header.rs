//! Compiles and runs a small C program against the generated header and the
//! static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "posort.h"

int main(void) {
    size_t edges[] = {0, 1, 1, 2, 0, 3};
    size_t ranks[] = {0, 2, 3, 1};
    PosortDag *g = NULL;
    PosortOracle *o = NULL;
    PosortRun *r = NULL;
    if (posort_dag_new(4, edges, 3, &g) != POSORT_STATUS_OK) return 1;
    if (posort_oracle_from_ranks(ranks, 4, g, &o) != POSORT_STATUS_OK) return 2;
    if (posort_sort(g, o, &r) != POSORT_STATUS_OK) return 3;
    size_t order[4];
    if (posort_run_order(r, order, 4) != POSORT_STATUS_OK) return 4;
    printf("%zu %zu %zu %zu q=%llu\n", order[0], order[1], order[2], order[3],
           (unsigned long long)posort_run_queries(r));
    PosortStatus st = posort_dag_new(2, NULL, 1, &g);
    printf("%s\n", posort_status_message(st));
    posort_run_free(r);
    posort_oracle_free(o);
    posort_dag_free(g);
    return 0;
}
"#;

fn header_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

// target/<profile>/deps/<test> -> target/<profile>
fn lib_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header_dir().join("posort.h")).unwrap();
    for name in [
        "typedef struct PosortDag PosortDag;",
        "POSORT_STATUS_OK = 0",
        "posort_dag_new(",
        "posort_sort(",
        "posort_run_order(",
        "posort_count_extensions(",
        "posort_run_check(",
        "posort_status_message(",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_and_runs() {
    let staticlib = lib_dir().join("libposort_ffi.a");
    assert!(staticlib.exists(), "{} missing", staticlib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();

    let status = Command::new("cc")
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header_dir())
        .arg(&src)
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&bin)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());

    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout, "0 3 1 2 q=1\nnull pointer argument\n");
}
