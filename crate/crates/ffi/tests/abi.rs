use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use frepkit_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(frk_last_error()) }.to_string_lossy().into_owned()
}

struct Code(*mut FrkCode);

impl Drop for Code {
    fn drop(&mut self) {
        unsafe { frk_code_free(self.0) }
    }
}

fn td34() -> Code {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { frk_code_td(3, 4, &mut p) }, FrkStatus::Ok);
    Code(p)
}

#[test]
fn td_params_file_size_and_batch() {
    let c = td34();
    let mut params = FrkParams::default();
    assert_eq!(unsafe { frk_code_params(c.0, &mut params) }, FrkStatus::Ok);
    assert_eq!((params.n, params.theta, params.alpha, params.rho), (12, 16, 4, 3));
    let mut valid = false;
    assert_eq!(unsafe { frk_code_is_valid(c.0, &mut valid) }, FrkStatus::Ok);
    assert!(valid);
    let ms: Vec<usize> = (1..=4)
        .map(|k| {
            let mut m = 0;
            assert_eq!(unsafe { frk_file_size(c.0, k, 0, &mut m) }, FrkStatus::Ok);
            m
        })
        .collect();
    assert_eq!(ms, vec![4, 7, 9, 11]);
    let mut t = 0;
    assert_eq!(unsafe { frk_batch_t(c.0, 0, &mut t) }, FrkStatus::Ok);
    assert_eq!(t, 11);
    let mut frb = FrkFrb::default();
    assert_eq!(unsafe { frk_frb_certify(c.0, 4, 0, &mut frb) }, FrkStatus::Ok);
    assert_eq!((frb.rho, frb.n, frb.m, frb.k, frb.alpha, frb.t), (3, 12, 11, 4, 4, 11));
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { frk_code_turan(7, 2, &mut p) }, FrkStatus::InvalidParams);
    assert!(p.is_null());
    assert!(last_error().contains("7"), "{}", last_error());

    let c = td34();
    let mut m = 0;
    assert_eq!(unsafe { frk_file_size(c.0, 13, 0, &mut m) }, FrkStatus::KOutOfRange);
    assert_eq!(unsafe { frk_file_size(c.0, 6, 10, &mut m) }, FrkStatus::BudgetExceeded);
    assert_eq!(unsafe { frk_file_size(ptr::null(), 1, 0, &mut m) }, FrkStatus::NullArgument);

    let name = CString::new("dodecahedron").unwrap();
    assert_eq!(unsafe { frk_code_cage(name.as_ptr(), &mut p) }, FrkStatus::InvalidParams);
    let bad = CString::new("FRC 2 2 1 1\n1\n9\n").unwrap();
    assert_eq!(unsafe { frk_code_from_text(bad.as_ptr(), &mut p) }, FrkStatus::Parse);
}

#[test]
fn bounds() {
    let mut v = 0i64;
    assert_eq!(unsafe { frk_fr_capacity_bound(12, 4, 4, 3, &mut v) }, FrkStatus::Ok);
    assert_eq!(v, 11);
    assert_eq!(unsafe { frk_turan_file_size(6, 2, 3, &mut v) }, FrkStatus::Ok);
    assert_eq!(v, 7);
    assert_eq!(frk_mbr_capacity(4, 4), 10);
    let mut n0 = 0u64;
    assert_eq!(unsafe { frk_moore_bound(3, 6, &mut n0) }, FrkStatus::Ok);
    assert_eq!(n0, 14);
    assert!(frk_bound_not_tight(8, 3, 4));
    assert!(!frk_bound_not_tight(10, 3, 4));
}

#[test]
fn cage_text_roundtrip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let name = CString::new("petersen").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { frk_code_cage(name.as_ptr(), &mut p) }, FrkStatus::Ok);
    let c = Code(p);
    let path = CString::new(dir.path().join("p.frc").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { frk_code_save(c.0, path.as_ptr()) }, FrkStatus::Ok);
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { frk_code_load(path.as_ptr(), &mut q) }, FrkStatus::Ok);
    let d = Code(q);
    let mut params = FrkParams::default();
    assert_eq!(unsafe { frk_code_params(d.0, &mut params) }, FrkStatus::Ok);
    assert_eq!((params.n, params.theta, params.alpha, params.rho), (10, 15, 3, 2));
}

#[test]
fn store_repair_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    let root = CString::new(dir.path().to_str().unwrap()).unwrap();
    let c = td34();
    let file: Vec<u32> = (0..11).map(|i| (i * 7 + 3) % 16).collect();
    let mut sys = ptr::null_mut();
    let st = unsafe { frk_system_store(c.0, 4, file.as_ptr(), file.len(), root.as_ptr(), 16, &mut sys) };
    assert_eq!(st, FrkStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { frk_system_file_size(sys) }, 11);
    unsafe { frk_system_free(sys) };

    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { frk_system_open(root.as_ptr(), &mut sys) }, FrkStatus::Ok);
    std::fs::remove_file(dir.path().join("node_7.dat")).unwrap();
    let mut bw = 0;
    assert_eq!(unsafe { frk_system_repair(sys, 7, FRK_POLICY_SPREAD, &mut bw) }, FrkStatus::Ok);
    assert_eq!(bw, 4);

    let nodes = [7usize, 1, 2, 3];
    let mut out = vec![0u32; 11];
    let st = unsafe { frk_system_reconstruct(sys, nodes.as_ptr(), 4, out.as_mut_ptr(), out.len()) };
    assert_eq!(st, FrkStatus::Ok, "{}", last_error());
    assert_eq!(out, file);
    let st = unsafe { frk_system_reconstruct(sys, nodes.as_ptr(), 4, out.as_mut_ptr(), 5) };
    assert_eq!(st, FrkStatus::BufferTooSmall);
    let st = unsafe { frk_system_reconstruct(sys, nodes.as_ptr(), 3, out.as_mut_ptr(), 11) };
    assert_eq!(st, FrkStatus::InvalidParams);
    unsafe { frk_system_free(sys) };
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/frepkit.h")).unwrap();
    for sym in ["frk_code_td", "frk_file_size", "frk_batch_t", "frk_system_repair", "FRK_STATUS_BUDGET_EXCEEDED", "typedef struct FrkCode FrkCode;"] {
        assert!(header.contains(sym), "header lacks {sym}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libfrepkit_ffi.a");
    assert!(lib.is_file(), "static library not built at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include "frepkit.h"
int main(void) {
    FrkCode *code = NULL;
    if (frk_code_turan(6, 2, &code) != FRK_STATUS_OK) return 10;
    size_t m = 0, t = 0;
    if (frk_file_size(code, 3, 0, &m) != FRK_STATUS_OK) return 11;
    if (frk_batch_t(code, 0, &t) != FRK_STATUS_OK) return 12;
    FrkCode *bad = NULL;
    if (frk_code_turan(7, 2, &bad) != FRK_STATUS_INVALID_PARAMS) return 13;
    printf("%zu %zu %s\n", m, t, frk_last_error()[0] ? "err" : "none");
    frk_code_free(code);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("run cc");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "7 5 err\n");
}
