use std::f64::consts::LN_2;
use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use qcorr_ffi::*;

fn last_error() -> String {
    let p = qc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn ghz_density(n: usize) -> *mut QcDensity {
    let mut s = ptr::null_mut();
    assert_eq!(qc_state_ghz(n, &mut s), QcStatus::Ok);
    let mut d = ptr::null_mut();
    assert_eq!(qc_density_from_state(s, &mut d), QcStatus::Ok);
    qc_state_free(s);
    d
}

#[test]
fn ghz_decomposition_through_handles() {
    unsafe {
        let d = ghz_density(4);
        assert_eq!(qc_density_n_qubits(d), 4);
        let mut total = 0.0;
        assert_eq!(qc_total_correlation(d, &mut total), QcStatus::Ok);
        assert!((total - 4.0 * LN_2).abs() < 1e-12);

        let alpha = [0usize, 1];
        let mut dec = QcDecomposition::default();
        assert_eq!(qc_decompose(d, alpha.as_ptr(), alpha.len(), &mut dec), QcStatus::Ok);
        assert!((dec.internal_alpha - LN_2).abs() < 1e-12);
        assert!((dec.internal_beta - LN_2).abs() < 1e-12);
        assert!((dec.external - 2.0 * LN_2).abs() < 1e-12);

        let mut ioc = 0.0;
        assert_eq!(qc_index_of_correlation(d, alpha.as_ptr(), 2, &mut ioc), QcStatus::Ok);
        assert!((ioc - dec.external).abs() < 1e-15);

        let mut product = true;
        assert_eq!(
            qc_is_product_across(d, alpha.as_ptr(), 2, 1e-9, &mut product),
            QcStatus::Ok
        );
        assert!(!product);
        qc_density_free(d);
    }
}

#[test]
fn reduce_and_purify() {
    unsafe {
        let d = ghz_density(4);
        let keep = [0usize, 1];
        let mut r = ptr::null_mut();
        assert_eq!(qc_density_reduce(d, keep.as_ptr(), 2, &mut r), QcStatus::Ok);
        let mut s = 0.0;
        assert_eq!(qc_entropy(r, &mut s), QcStatus::Ok);
        assert!((s - LN_2).abs() < 1e-12);
        let mut k = 99;
        assert_eq!(qc_min_purifying_qubits(r, &mut k), QcStatus::Ok);
        assert_eq!(k, 1);

        let mut p = ptr::null_mut();
        let mut anc = 0;
        let mut residual = 1.0;
        assert_eq!(qc_purify(r, &mut p, &mut anc, &mut residual), QcStatus::Ok);
        assert_eq!(anc, 1);
        assert!(residual < 1e-9);
        assert_eq!(qc_state_n_qubits(p), 3);
        let (mut re, mut im) = (vec![0.0; 8], vec![0.0; 8]);
        assert_eq!(
            qc_state_amplitudes(p, re.as_mut_ptr(), im.as_mut_ptr(), 8),
            QcStatus::Ok
        );
        let norm: f64 = re.iter().zip(&im).map(|(a, b)| a * a + b * b).sum();
        assert!((norm - 1.0).abs() < 1e-12);

        qc_state_free(p);
        qc_density_free(r);
        qc_density_free(d);
    }
}

#[test]
fn amplitudes_and_matrices() {
    unsafe {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let re = [h, 0.0, 0.0, h];
        let mut s = ptr::null_mut();
        assert_eq!(
            qc_state_from_amplitudes(2, re.as_ptr(), ptr::null(), 4, &mut s),
            QcStatus::Ok
        );
        let perm = [1usize, 0];
        let mut t = ptr::null_mut();
        assert_eq!(qc_state_permute(s, perm.as_ptr(), 2, &mut t), QcStatus::Ok);
        qc_state_free(t);
        qc_state_free(s);

        let mixed = [0.5, 0.0, 0.0, 0.5];
        let mut d = ptr::null_mut();
        assert_eq!(
            qc_density_from_matrix(1, mixed.as_ptr(), ptr::null(), 4, &mut d),
            QcStatus::Ok
        );
        let mut e = 0.0;
        assert_eq!(qc_entropy(d, &mut e), QcStatus::Ok);
        assert!((e - LN_2).abs() < 1e-15);
        qc_density_free(d);

        let bad_trace = [0.6, 0.0, 0.0, 0.6];
        let mut d = ptr::null_mut();
        assert_eq!(
            qc_density_from_matrix(1, bad_trace.as_ptr(), ptr::null(), 4, &mut d),
            QcStatus::Validation
        );
        assert!(d.is_null());
        assert!(last_error().contains("trace"));
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(qc_state_ghz(13, &mut s), QcStatus::Size);
        assert_eq!(qc_state_ghz(4, ptr::null_mut()), QcStatus::NullPointer);
        let mut e = 0.0;
        assert_eq!(qc_entropy(ptr::null(), &mut e), QcStatus::NullPointer);
        assert!(last_error().contains("null"));

        let re = [1.0, 1.0];
        assert_eq!(
            qc_state_from_amplitudes(1, re.as_ptr(), ptr::null(), 2, &mut s),
            QcStatus::Validation
        );

        let d = ghz_density(4);
        let out_of_range = [0usize, 7];
        assert_eq!(
            qc_index_of_correlation(d, out_of_range.as_ptr(), 2, &mut e),
            QcStatus::Index
        );
        let everything = [0usize, 1, 2, 3];
        assert_eq!(
            qc_index_of_correlation(d, everything.as_ptr(), 4, &mut e),
            QcStatus::Partition
        );
        let keep = [9usize];
        let mut r = ptr::null_mut();
        assert_eq!(qc_density_reduce(d, keep.as_ptr(), 1, &mut r), QcStatus::Index);
        qc_density_free(d);

        let spec = CString::new("ue:5").unwrap();
        assert_eq!(qc_state_from_spec(spec.as_ptr(), &mut s), QcStatus::Argument);
        let spec = CString::new("qq:3").unwrap();
        assert_eq!(qc_state_from_spec(spec.as_ptr(), &mut s), QcStatus::Parse);
    }
}

#[test]
fn regions_and_bounds() {
    unsafe {
        let m = [LN_2, LN_2];
        let mut region = QcRegion::Unattainable;
        assert_eq!(qc_classify_region(LN_2, m.as_ptr(), 2, &mut region), QcStatus::Ok);
        assert_eq!(region, QcRegion::Classical);
        assert_eq!(qc_classify_region(1.5 * LN_2, m.as_ptr(), 2, &mut region), QcStatus::Ok);
        assert_eq!(region, QcRegion::Quantum);
        assert_eq!(qc_classify_region(3.0 * LN_2, m.as_ptr(), 2, &mut region), QcStatus::Ok);
        assert_eq!(region, QcRegion::Unattainable);

        let s = [0.2, 0.5, 0.3];
        let mut b = QcBounds::default();
        assert_eq!(qc_correlation_bounds(s.as_ptr(), 3, &mut b), QcStatus::Ok);
        assert!((b.quantum_upper - 1.0).abs() < 1e-15);
        assert!((b.classical_upper - 0.5).abs() < 1e-15);
        assert_eq!(b.gap_bound, 0.5);
    }
}

#[test]
fn file_round_trip_and_sweep_json() {
    let dir = std::env::temp_dir().join(format!("qcorr-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = CString::new(dir.join("ghz.json").to_str().unwrap()).unwrap();
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(qc_state_ghz(3, &mut s), QcStatus::Ok);
        assert_eq!(qc_state_save(s, path.as_ptr()), QcStatus::Ok);
        let mut t = ptr::null_mut();
        assert_eq!(qc_state_load(path.as_ptr(), &mut t), QcStatus::Ok);
        let (mut a, mut b) = (vec![0.0; 8], vec![0.0; 8]);
        let (mut c, mut d) = (vec![0.0; 8], vec![0.0; 8]);
        qc_state_amplitudes(s, a.as_mut_ptr(), b.as_mut_ptr(), 8);
        qc_state_amplitudes(t, c.as_mut_ptr(), d.as_mut_ptr(), 8);
        assert_eq!((a, b), (c, d));
        qc_state_free(s);
        qc_state_free(t);

        let spec = CString::new("ghz:4").unwrap();
        let mut json = ptr::null_mut();
        assert_eq!(qc_sweep_json(spec.as_ptr(), -1, &mut json), QcStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        qc_string_free(json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["entries"].as_array().unwrap().len(), 7);
    }
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn version_is_nul_terminated() {
    let v = unsafe { CStr::from_ptr(qc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_exports_and_compiles_as_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/qcorr.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "qc_state_ghz",
        "qc_decompose",
        "qc_purify",
        "qc_last_error_message",
        "typedef struct QcState QcState",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    // Syntax check only; skipped when no C compiler is installed.
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("cc not found; header syntax check skipped");
        return;
    };
    assert!(status.success());
}
