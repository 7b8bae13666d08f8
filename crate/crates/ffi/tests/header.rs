use std::path::{Path, PathBuf};
use std::process::Command;

const HEADER: &str = include_str!("../include/pswf_recon.h");

const C_PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "pswf_recon.h"

int main(void) {
    PswfBasisHandle *b = NULL;
    if (pswf_basis_create(10.0, 12, 0.0, &b) != PSWF_STATUS_OK) return 1;
    size_t n_max = 0;
    pswf_basis_n_max(b, &n_max);
    double lam0 = 0.0, lam1 = 0.0;
    pswf_basis_lambda(b, 0, &lam0);
    pswf_basis_lambda(b, 1, &lam1);
    double v = 0.0;
    PswfStatus st = pswf_basis_eval_psi(b, 0, 2.0, &v);
    pswf_basis_destroy(b);
    if (st != PSWF_STATUS_OUT_OF_RANGE) return 2;
    if (pswf_last_error_message()[0] == '\0') return 3;
    PswfRegParams p;
    if (pswf_regularization_params(20.0, 0.3, 1e-2, &p) != PSWF_STATUS_OK) return 4;
    printf("%zu %zu %.3f %d\n", n_max, p.n_star, lam0, lam1 < lam0);
    return 0;
}
"#;

#[test]
fn header_declares_the_api() {
    for name in [
        "pswf_basis_create",
        "pswf_basis_destroy",
        "pswf_basis_n_max",
        "pswf_basis_chi",
        "pswf_basis_lambda",
        "pswf_basis_mu",
        "pswf_basis_eval_psi",
        "pswf_basis_nodes",
        "pswf_truncated_inverse",
        "pswf_solve_tau",
        "pswf_regularization_params",
        "pswf_last_error_message",
        "typedef struct PswfBasisHandle PswfBasisHandle;",
        "PSWF_STATUS_NUMERICAL = 4",
        "PSWF_STATUS_PANIC = 5",
    ] {
        assert!(HEADER.contains(name), "header lacks {name}");
    }
}

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libpswf_recon_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    let fields: Vec<&str> = text.split_whitespace().collect();
    assert_eq!(fields[0], "12");
    assert_eq!(fields[1], "17");
    assert_eq!(fields[3], "1");
}
