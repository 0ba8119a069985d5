use std::ffi::{CStr, CString};
use std::ptr;

use aospr_ffi::*;

const CONFIG: &str = r#"{
    "graph": {"generator": {"kind": "parallel_chains", "chains": 3, "length": 2}},
    "regime": {"kind": "stochastic", "means": [0.1, 0.1, 0.3, 0.3, 0.3, 0.3]},
    "policies": [{"policy": "aospr"}, {"policy": "aospr", "probe_budget": 2, "label": "probe"}],
    "horizon": 40, "repetitions": 2
}"#;

fn last_error() -> String {
    let p = aospr_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn new_policy(index: usize) -> *mut AosprPolicy {
    let cfg = CString::new(CONFIG).unwrap();
    let mut handle = ptr::null_mut();
    let status = unsafe { aospr_policy_new(cfg.as_ptr(), index, 5, &mut handle) };
    assert_eq!(status, AosprStatus::Ok);
    assert!(!handle.is_null());
    handle
}

fn play(handle: *mut AosprPolicy, rounds: usize) -> Vec<Vec<u32>> {
    let mut n = 0;
    assert_eq!(unsafe { aospr_policy_edge_count(handle, &mut n) }, AosprStatus::Ok);
    assert_eq!(n, 6);
    let losses = [0.1, 0.1, 0.3, 0.3, 0.3, 0.3];
    let mut paths = Vec::new();
    for _ in 0..rounds {
        let mut buf = [0u32; 8];
        let mut len = 0;
        assert_eq!(unsafe { aospr_policy_select(handle, buf.as_mut_ptr(), buf.len(), &mut len) }, AosprStatus::Ok);
        assert_eq!(len, 2);
        let mut seen = [0u32; 8];
        let mut seen_len = 0;
        assert_eq!(
            unsafe { aospr_policy_observed(handle, seen.as_mut_ptr(), seen.len(), &mut seen_len) },
            AosprStatus::Ok
        );
        assert!(buf[..len].iter().all(|e| seen[..seen_len].contains(e)));
        assert_eq!(unsafe { aospr_policy_feedback(handle, losses.as_ptr(), n) }, AosprStatus::Ok);
        paths.push(buf[..len].to_vec());
    }
    paths
}

#[test]
fn policy_loop_is_reproducible() {
    let (a, b) = (new_policy(0), new_policy(0));
    assert_eq!(play(a, 50), play(b, 50));
    unsafe {
        aospr_policy_free(a);
        aospr_policy_free(b);
    }
}

#[test]
fn probing_policy_observes_more_edges() {
    let h = new_policy(1);
    let mut buf = [0u32; 2];
    let mut len = 0;
    assert_eq!(unsafe { aospr_policy_select(h, buf.as_mut_ptr(), 2, &mut len) }, AosprStatus::Ok);
    let mut seen = [0u32; 1];
    let mut seen_len = 0;
    let status = unsafe { aospr_policy_observed(h, seen.as_mut_ptr(), 1, &mut seen_len) };
    assert_eq!(status, AosprStatus::BufferTooSmall);
    assert_eq!(seen_len, 4);
    unsafe { aospr_policy_free(h) };
}

#[test]
fn small_buffer_reports_needed_length() {
    let h = new_policy(0);
    let mut buf = [0u32; 1];
    let mut len = 0;
    assert_eq!(unsafe { aospr_policy_select(h, buf.as_mut_ptr(), 1, &mut len) }, AosprStatus::BufferTooSmall);
    assert_eq!(len, 2);
    assert!(last_error().contains("2 ids"));
    let mut big = [0u32; 4];
    assert_eq!(unsafe { aospr_policy_select(h, big.as_mut_ptr(), 4, &mut len) }, AosprStatus::Ok);
    assert!(aospr_last_error_message().is_null());
    unsafe { aospr_policy_free(h) };
}

#[test]
fn argument_errors() {
    let mut handle = ptr::null_mut();
    assert_eq!(unsafe { aospr_policy_new(ptr::null(), 0, 0, &mut handle) }, AosprStatus::NullPointer);
    assert!(last_error().contains("config_json"));

    let bad = CString::new(r#"{"horizon": 0}"#).unwrap();
    assert_eq!(unsafe { aospr_policy_new(bad.as_ptr(), 0, 0, &mut handle) }, AosprStatus::ConfigError);
    assert!(!last_error().is_empty());

    let cfg = CString::new(CONFIG).unwrap();
    assert_eq!(unsafe { aospr_policy_new(cfg.as_ptr(), 7, 0, &mut handle) }, AosprStatus::InvalidArgument);

    let h = new_policy(0);
    let losses = [0.5; 6];
    assert_eq!(unsafe { aospr_policy_feedback(h, losses.as_ptr(), 6) }, AosprStatus::InvalidArgument);
    assert!(last_error().contains("pending"));
    assert_eq!(unsafe { aospr_policy_feedback(h, losses.as_ptr(), 3) }, AosprStatus::InvalidArgument);

    let mut buf = [0u32; 4];
    let mut len = 0;
    unsafe { aospr_policy_select(h, buf.as_mut_ptr(), 4, &mut len) };
    let out_of_range = [2.0; 6];
    assert_eq!(unsafe { aospr_policy_feedback(h, out_of_range.as_ptr(), 6) }, AosprStatus::InvalidArgument);
    assert_eq!(unsafe { aospr_policy_feedback(h, losses.as_ptr(), 6) }, AosprStatus::Ok);
    unsafe {
        aospr_policy_free(h);
        aospr_policy_free(ptr::null_mut());
        aospr_string_free(ptr::null_mut());
    }
}

#[test]
fn run_experiment_returns_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = CString::new(CONFIG).unwrap();
    let dir = CString::new(tmp.path().to_str().unwrap()).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { aospr_run_experiment(cfg.as_ptr(), dir.as_ptr(), &mut out) }, AosprStatus::Ok);
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { aospr_string_free(out) };
    let summary: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(summary["policies"].as_array().unwrap().len(), 2);
    assert!(tmp.path().join("summary.json").exists());
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/aospr.h")).unwrap();
    for name in [
        "aospr_last_error_message",
        "aospr_policy_new",
        "aospr_policy_edge_count",
        "aospr_policy_select",
        "aospr_policy_observed",
        "aospr_policy_feedback",
        "aospr_policy_free",
        "aospr_run_experiment",
        "aospr_string_free",
        "AosprStatus",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
