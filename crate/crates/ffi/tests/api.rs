// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use std::ffi::{CStr, CString};
use std::ptr;

use qcs_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(qcs_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(qcs_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn compile_gate_and_round_trip_text() {
    unsafe {
        let sys = qcs_spin_system_new_default();
        assert_eq!(qcs_spin_system_num_spins(sys), 3);
        let name = CString::new("phase11").unwrap();
        let mut prog = ptr::null_mut();
        assert_eq!(qcs_compile_gate(sys, name.as_ptr(), true, &mut prog), QcsStatus::Ok);
        assert!(qcs_program_pulse_count(prog) > 0);

        let mut text = ptr::null_mut();
        assert_eq!(qcs_program_to_text(prog, &mut text), QcsStatus::Ok);
        let mut reparsed = ptr::null_mut();
        assert_eq!(qcs_program_parse(text, &mut reparsed), QcsStatus::Ok);
        qcs_string_free(text);

        let mut dev = f64::NAN;
        assert_eq!(qcs_program_gate_deviation(reparsed, sys, name.as_ptr(), &mut dev), QcsStatus::Ok);
        assert!(dev <= 1e-6, "{dev}");

        qcs_program_free(prog);
        qcs_program_free(reparsed);
        qcs_spin_system_free(sys);
    }
}

#[test]
fn network_compiles_for_all_experiments() {
    unsafe {
        let sys = qcs_spin_system_new_default();
        for k in 0..4 {
            let mut prog = ptr::null_mut();
            assert_eq!(qcs_compile_network(sys, k as f64 / 4.0, false, &mut prog), QcsStatus::Ok);
            assert!(qcs_program_pulse_count(prog) > 0);
            qcs_program_free(prog);
        }
        qcs_spin_system_free(sys);
    }
}

#[test]
fn ideal_run_fills_buffer() {
    let mut probs = [0.0; 8];
    let mut j = usize::MAX;
    unsafe {
        assert_eq!(qcs_run_ideal(3, 0.375, probs.as_mut_ptr(), probs.len(), &mut j), QcsStatus::Ok);
        assert_eq!(j, 3);
        assert!((probs[3] - 1.0).abs() < 1e-9);
        assert_eq!(qcs_run_ideal(3, 0.375, probs.as_mut_ptr(), 4, &mut j), QcsStatus::BufferTooSmall);
        assert!(last_error().contains("8"));
    }
}

#[test]
fn nmr_run_with_and_without_noise() {
    unsafe {
        let sys = qcs_spin_system_new_default();
        let mut res = QcsNmrResult::default();
        let mut rho = ptr::null_mut();
        assert_eq!(qcs_run_nmr(sys, 0.5, ptr::null(), &mut res, &mut rho), QcsStatus::Ok);
        assert_eq!(res.j_peak, 2);
        assert!(res.fidelity >= 0.999);
        assert_eq!(qcs_density_dim(rho), 8);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(qcs_density_get(rho, 7, 7, &mut re, &mut im), QcsStatus::Ok);
        assert_eq!(qcs_density_get(rho, 8, 0, &mut re, &mut im), QcsStatus::DimensionMismatch);
        let mut json = ptr::null_mut();
        assert_eq!(qcs_density_to_json(rho, &mut json), QcsStatus::Ok);
        let parsed: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(parsed["dim"], 8);
        qcs_string_free(json);
        qcs_density_free(rho);

        let noise = QcsNoise { dephasing_rate: 5.0, pulse_angle_error: 0.0, pulse_angle_jitter: 0.01, seed: 2 };
        let mut noisy = QcsNmrResult::default();
        assert_eq!(qcs_run_nmr(sys, 0.5, &noise, &mut noisy, ptr::null_mut()), QcsStatus::Ok);
        assert!(noisy.fidelity < res.fidelity);

        let bad = QcsNoise { dephasing_rate: -1.0, ..noise };
        assert_eq!(qcs_run_nmr(sys, 0.5, &bad, &mut noisy, ptr::null_mut()), QcsStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        qcs_spin_system_free(sys);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut sys = ptr::null_mut();
        let bad = CString::new("J12_hz = 1\nbogus = 2\n").unwrap();
        assert_eq!(qcs_spin_system_from_config(bad.as_ptr(), &mut sys), QcsStatus::ParseError);
        assert!(sys.is_null());
        assert!(last_error().contains("bogus"), "{}", last_error());

        let good = CString::new("J12_hz = 200\n").unwrap();
        assert_eq!(qcs_spin_system_from_config(good.as_ptr(), &mut sys), QcsStatus::Ok);
        assert_eq!(last_error(), "");

        let mut prog = ptr::null_mut();
        let name = CString::new("toffoli").unwrap();
        assert_eq!(qcs_compile_gate(sys, name.as_ptr(), false, &mut prog), QcsStatus::ParseError);
        assert_eq!(qcs_compile_gate(ptr::null(), name.as_ptr(), false, &mut prog), QcsStatus::NullPointer);
        let text = CString::new("PULSE 1 z 1.0").unwrap();
        assert_eq!(qcs_program_parse(text.as_ptr(), &mut prog), QcsStatus::ParseError);
        assert_eq!(qcs_program_parse(ptr::null(), &mut prog), QcsStatus::NullPointer);
        assert!(prog.is_null());

        qcs_spin_system_free(sys);
        qcs_spin_system_free(ptr::null_mut());
        qcs_program_free(ptr::null_mut());
        qcs_density_free(ptr::null_mut());
        qcs_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/qcs.h");
    let src = include_str!("../src/lib.rs");
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for f in exports {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct QcsSpinSystem QcsSpinSystem;"));
}
