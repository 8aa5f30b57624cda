// SPDX-License-Identifier: Apache-2.0

use std::ffi::{CStr, CString};
use std::ptr;

use fitcut_ffi::*;

fn last_error() -> String {
    let p = fitcut_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn bv_plan_round_trip() {
    unsafe {
        let mut circuit = ptr::null_mut();
        assert_eq!(fitcut_circuit_bv(30, ptr::null(), &mut circuit), FitcutStatus::Ok);
        assert_eq!(fitcut_circuit_num_qubits(circuit), 30);
        assert_eq!(fitcut_circuit_two_qubit_count(circuit), 29);

        let caps = [20u32; 4];
        let mut pool = ptr::null_mut();
        assert_eq!(
            fitcut_pool_from_capacities(caps.as_ptr(), caps.len(), &mut pool),
            FitcutStatus::Ok
        );

        let mut plan = ptr::null_mut();
        assert_eq!(fitcut_cut(circuit, pool, 0, 4, 2, &mut plan), FitcutStatus::Ok);
        assert_eq!(fitcut_plan_num_cuts(plan), 1);
        let n = fitcut_plan_num_subcircuits(plan);
        let mut widths = vec![0u32; n];
        assert_eq!(fitcut_plan_widths(plan, widths.as_mut_ptr(), n), n);
        assert!(widths.iter().all(|&w| w <= 20));
        assert_eq!(widths.iter().sum::<u32>(), 31);

        let mut json = ptr::null_mut();
        assert_eq!(fitcut_plan_to_json(plan, &mut json), FitcutStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        fitcut_string_free(json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["objectives"]["nc"], 1);
        assert_eq!(v["cuts"].as_array().unwrap().len(), 1);

        fitcut_plan_free(plan);
        fitcut_pool_free(pool);
        fitcut_circuit_free(circuit);
    }
}

#[test]
fn parse_error_sets_status_and_message() {
    let text = CString::new("qubits 2\ncx 0 5\n").unwrap();
    let mut circuit = ptr::null_mut();
    let status = unsafe { fitcut_circuit_parse(text.as_ptr(), &mut circuit) };
    assert_eq!(status, FitcutStatus::Parse);
    assert!(circuit.is_null());
    assert!(last_error().contains("line 2"), "{}", last_error());
}

#[test]
fn null_arguments_are_rejected() {
    let mut circuit = ptr::null_mut();
    assert_eq!(
        unsafe { fitcut_circuit_parse(ptr::null(), &mut circuit) },
        FitcutStatus::NullPointer
    );
    let mut plan = ptr::null_mut();
    assert_eq!(
        unsafe { fitcut_cut(ptr::null(), ptr::null(), 0, 1, 1, &mut plan) },
        FitcutStatus::NullPointer
    );
    assert_eq!(unsafe { fitcut_plan_num_cuts(ptr::null()) }, -1);
    unsafe {
        fitcut_plan_free(ptr::null_mut());
        fitcut_string_free(ptr::null_mut());
    }
}

#[test]
fn pool_errors_map_to_invalid_pool() {
    let json = CString::new(r#"[{"id":"a","capacity":1}]"#).unwrap();
    let mut pool = ptr::null_mut();
    assert_eq!(
        unsafe { fitcut_pool_from_json(json.as_ptr(), &mut pool) },
        FitcutStatus::InvalidPool
    );
    let mut pool = ptr::null_mut();
    assert_eq!(
        unsafe { fitcut_pool_from_capacities(ptr::null(), 0, &mut pool) },
        FitcutStatus::InvalidPool
    );
}

#[test]
fn unschedulable_circuit() {
    unsafe {
        let text = CString::new("qubits 3\ncx 0 1\ncx 1 2\n").unwrap();
        let mut circuit = ptr::null_mut();
        assert_eq!(fitcut_circuit_parse(text.as_ptr(), &mut circuit), FitcutStatus::Ok);
        let caps = [2u32];
        let mut pool = ptr::null_mut();
        assert_eq!(
            fitcut_pool_from_capacities(caps.as_ptr(), 1, &mut pool),
            FitcutStatus::Ok
        );
        let mut plan = ptr::null_mut();
        let status = fitcut_cut(circuit, pool, 0, 1, 1, &mut plan);
        assert_ne!(status, FitcutStatus::Ok);
        assert!(plan.is_null());
        assert!(!last_error().is_empty());
        fitcut_pool_free(pool);
        fitcut_circuit_free(circuit);
    }
}

#[test]
fn errors_are_per_thread() {
    let json = CString::new("not json").unwrap();
    let mut pool = ptr::null_mut();
    assert_ne!(
        unsafe { fitcut_pool_from_json(json.as_ptr(), &mut pool) },
        FitcutStatus::Ok
    );
    let other = std::thread::spawn(|| fitcut_last_error().is_null()).join().unwrap();
    assert!(other);
}

#[test]
fn version_matches_package() {
    let v = unsafe { CStr::from_ptr(fitcut_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn circuit_text_round_trips() {
    unsafe {
        let mut circuit = ptr::null_mut();
        assert_eq!(fitcut_circuit_hwea(4, 2, &mut circuit), FitcutStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(fitcut_circuit_to_text(circuit, &mut text), FitcutStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(fitcut_circuit_parse(text, &mut again), FitcutStatus::Ok);
        assert_eq!(fitcut_circuit_two_qubit_count(again), 6);
        fitcut_string_free(text);
        fitcut_circuit_free(again);
        fitcut_circuit_free(circuit);
    }
}
