//! Compiles and runs a small C program against the generated header and
//! the static library, proving the ABI end to end.

use std::path::PathBuf;
use std::process::Command;

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <stdlib.h>
#include "brease.h"

int main(void) {
    BreaseTrial *trial = NULL;
    BreasePriorHandle *prior = NULL;
    BreaseDraws *draws = NULL;
    double med, lo, hi, bf;

    if (brease_trial_new(26, 11034, 10, 11037, &trial) != BREASE_STATUS_OK) return 1;
    if (brease_prior_default(0.3, &prior) != BREASE_STATUS_OK) return 2;
    if (brease_exact_sample(trial, prior, 50000, 7, &draws) != BREASE_STATUS_OK) return 3;
    if (brease_draws_len(draws) != 50000) return 4;
    if (brease_summarize(draws, BREASE_ESTIMAND_RISK_RATIO, 0.95, &med, &lo, &hi)
        != BREASE_STATUS_OK) return 5;
    if (!(med > 0.40 && med < 0.48)) return 6;
    if (brease_bf10(trial, prior, &bf) != BREASE_STATUS_OK) return 7;
    if (!(bf > 1.0 && bf < 1.4)) return 8;
    if (brease_trial_new(9, 2, 0, 1, &trial) != BREASE_STATUS_VALIDATION_ERROR) return 9;
    if (brease_last_error_message() == NULL) return 10;
    printf("rr median %.4f, bf10 %.4f\n", med, bf);
    brease_draws_free(draws);
    brease_prior_free(prior);
    brease_trial_free(trial);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    let header = include.join("brease.h");
    assert!(header.exists(), "generated header missing at {header:?}");

    // the staticlib lands in the deps directory next to this test binary,
    // or one level up depending on the cargo layout
    let mut deps_dir = std::env::current_exe().expect("test exe");
    deps_dir.pop(); // test binary name
    let mut parent = deps_dir.clone();
    parent.pop();
    let staticlib = [deps_dir, parent]
        .iter()
        .map(|d| d.join("libbrease_ffi.a"))
        .find(|p| p.exists())
        .expect("libbrease_ffi.a not found next to the test binary");

    let dir = tempfile::tempdir().expect("tempdir");
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, C_PROGRAM).expect("write c source");
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(staticlib)
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("invoke cc");
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().expect("run smoke binary");
    assert!(
        out.status.success(),
        "smoke binary exited with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout)
    );
}
