use std::ffi::{CStr, CString};
use std::ptr;

use zerocount_ffi::*;

fn last_error() -> String {
    let p = zc_last_error_message();
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { zc_string_free(p) };
    s
}

#[test]
fn constants_for_row1() {
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(zc_params_new(1.000225, 1.000605, 0.000158, &mut p), ZcStatus::Ok);
        let mut cs = ZcConstantSet::default();
        assert_eq!(zc_constants(p, 1e-9, &mut cs), ZcStatus::Ok);
        let up = zc_constants_round_up(cs);
        assert_eq!(up.c1, 0.10076);
        assert_eq!(up.c3, 8.08344);
        zc_params_free(p);
    }
}

#[test]
fn infeasible_params_report_constraint() {
    let mut p = ptr::null_mut();
    let st = unsafe { zc_params_new(1.0, 1.0, 0.5, &mut p) };
    assert_eq!(st, ZcStatus::Constraint);
    assert!(p.is_null());
    assert!(last_error().contains("c - r < 1 - c"));
}

#[test]
fn null_out_pointer() {
    assert_eq!(unsafe { zc_zeta_real(2.0, ptr::null_mut()) }, ZcStatus::NullPointer);
    assert_eq!(unsafe { zc_constants(ptr::null(), 1e-9, ptr::null_mut()) }, ZcStatus::NullPointer);
}

#[test]
fn scalar_functions() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(zc_zeta_real(2.0, &mut v), ZcStatus::Ok);
        assert!((v - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
        assert_eq!(zc_zeta_real(0.5, &mut v), ZcStatus::Domain);
        assert_eq!(zc_hardy_z(5.0, &mut v), ZcStatus::Range);
        assert_eq!(zc_theta(100.0, &mut v), ZcStatus::Ok);
        assert_eq!(zc_g(1000.0, &mut v), ZcStatus::Ok);
        assert!((v - 1.326291269799472e-05).abs() < 1e-15);
    }
}

#[test]
fn zero_list_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("z.txt").to_str().unwrap()).unwrap();
    let mut z = ptr::null_mut();
    unsafe {
        assert_eq!(zc_zeros_find(100.0, &mut z), ZcStatus::Ok);
        assert_eq!(zc_zeros_len(z), 29);
        let mut g = 0.0;
        assert_eq!(zc_zeros_get(z, 1, &mut g), ZcStatus::Ok);
        assert!((g - 14.134725141734694).abs() < 1e-9);
        assert_eq!(zc_zeros_get(z, 30, &mut g), ZcStatus::Index);
        let mut n = 0usize;
        assert_eq!(zc_n_exact(z, 50.0, &mut n), ZcStatus::Ok);
        assert_eq!(n, 10);
        assert_eq!(zc_n_exact(z, 150.0, &mut n), ZcStatus::Coverage);
        let mut s = 0.0;
        assert_eq!(zc_s_exact(z, 50.0, &mut s), ZcStatus::Ok);
        assert!(s.abs() < 1.0);
        assert_eq!(zc_zeros_write(z, path.as_ptr()), ZcStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(zc_zeros_ingest(path.as_ptr(), &mut back), ZcStatus::Ok);
        assert_eq!(zc_zeros_len(back), 29);
        assert_eq!(zc_zeros_coverage(back), 100.0);
        zc_zeros_free(back);
        zc_zeros_free(z);
    }
}

#[test]
fn missing_file_is_io() {
    let path = CString::new("/nonexistent/zeros.txt").unwrap();
    let mut z = ptr::null_mut();
    assert_eq!(unsafe { zc_zeros_ingest(path.as_ptr(), &mut z) }, ZcStatus::Io);
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/zerocount.h");
    let out = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .output();
    match out {
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(e) => eprintln!("cc not available, header not compiled: {e}"),
    }
}
