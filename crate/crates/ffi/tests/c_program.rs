//! Compiles a small C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "satqaoa.h"

int main(void) {
    SatqaoaFormula *f = NULL;
    if (satqaoa_formula_generate(6, 26, 4, &f) != SATQAOA_STATUS_OK) return 1;
    if (satqaoa_formula_num_vars(f) != 6) return 2;

    SatqaoaRunOptions opts = satqaoa_run_options_default();
    opts.max_evaluations = 30;
    opts.shots = 100;
    SatqaoaRunResult r;
    if (satqaoa_run_instance(f, SATQAOA_VARIANT_V3, 2, &opts, 1, &r) != SATQAOA_STATUS_OK) return 3;
    if (r.success != (r.decided_satisfiable == r.ground_truth_satisfiable)) return 4;

    char *json = NULL;
    if (satqaoa_resources_json(f, SATQAOA_VARIANT_V3, 2, &json) != SATQAOA_STATUS_OK) return 5;
    if (strstr(json, "\"MCP\"") == NULL) return 6;
    satqaoa_string_free(json);

    SatqaoaFormula *g = NULL;
    if (satqaoa_formula_from_dimacs("p cnf 1 1\n2 0\n", &g) != SATQAOA_STATUS_PARSE_ERROR) return 7;
    if (satqaoa_last_error_message() == NULL) return 8;

    satqaoa_formula_free(f);
    printf("ok\n");
    return 0;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    let Ok(compiler) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test-binary>
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libsatqaoa_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(compiler)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}

fn which_cc() -> Result<String, ()> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".to_string());
    Command::new(&cc).arg("--version").output().map(|_| cc).map_err(|_| ())
}
