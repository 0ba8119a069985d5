//! C ABI over the `aospr` crate.
//!
//! Every function returns an [`AosprStatus`]. On failure a description is
//! kept per thread and can be read with [`aospr_last_error_message`].
//! Strings returned by the library must be released with
//! [`aospr_string_free`]; policies with [`aospr_policy_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use aospr::harness::{self, build_policy, repetition_seed};
use aospr::policy::{Decision, Policy};
use aospr::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AosprStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ConfigError = 3,
    RuntimeError = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Opaque policy handle.
pub struct AosprPolicy {
    policy: Box<dyn Policy>,
    rng: aospr::SimRng,
    edges: usize,
    pending: Option<Decision>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

fn fail(status: AosprStatus, message: impl Into<String>) -> AosprStatus {
    set_error(message);
    status
}

fn from_error(e: Error) -> AosprStatus {
    let status = if e.exit_code() == 2 { AosprStatus::ConfigError } else { AosprStatus::RuntimeError };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> AosprStatus) -> AosprStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == AosprStatus::Ok {
                LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            }
            status
        }
        Err(_) => fail(AosprStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, AosprStatus> {
    if s.is_null() {
        return Err(fail(AosprStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(AosprStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn aospr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates policy `policy_index` of an experiment config (JSON text).
/// `seed` plays the role of the repetition seed.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aospr_policy_new(
    config_json: *const c_char,
    policy_index: usize,
    seed: u64,
    out: *mut *mut AosprPolicy,
) -> AosprStatus {
    guard(|| {
        if out.is_null() {
            return fail(AosprStatus::NullPointer, "out is null");
        }
        let text = match read_str(config_json, "config_json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let exp = match harness::parse_config(text).and_then(|c| c.build()) {
            Ok(e) => e,
            Err(e) => return from_error(e),
        };
        let Some(plan) = exp.policies.get(policy_index) else {
            return fail(AosprStatus::InvalidArgument, format!("no policy at index {policy_index}"));
        };
        let seed = repetition_seed(seed, 0);
        match build_policy(plan, &exp.space, &exp.regime, exp.config.horizon, exp.config.path_cap, seed) {
            Ok(policy) => {
                let handle = AosprPolicy {
                    policy,
                    rng: aospr::sim_rng(seed, 2),
                    edges: exp.space.edge_count(),
                    pending: None,
                };
                *out = Box::into_raw(Box::new(handle));
                AosprStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Number of edges `n` of the policy's graph.
///
/// # Safety
/// `policy` must come from [`aospr_policy_new`].
#[no_mangle]
pub unsafe extern "C" fn aospr_policy_edge_count(policy: *const AosprPolicy, out: *mut usize) -> AosprStatus {
    guard(|| {
        if policy.is_null() || out.is_null() {
            return fail(AosprStatus::NullPointer, "null argument");
        }
        *out = (*policy).edges;
        AosprStatus::Ok
    })
}

unsafe fn write_ids(ids: &[usize], buf: *mut u32, cap: usize, len: *mut usize) -> AosprStatus {
    if len.is_null() {
        return fail(AosprStatus::NullPointer, "len is null");
    }
    *len = ids.len();
    if ids.len() > cap {
        return fail(AosprStatus::BufferTooSmall, format!("need room for {} ids", ids.len()));
    }
    if !ids.is_empty() && buf.is_null() {
        return fail(AosprStatus::NullPointer, "buffer is null");
    }
    for (i, &id) in ids.iter().enumerate() {
        *buf.add(i) = id as u32;
    }
    AosprStatus::Ok
}

/// Chooses this round's path and writes its edge ids (0-based, in path
/// order) to `path`. `len` receives the path length, also when the buffer is
/// too small. Must be followed by [`aospr_policy_feedback`].
///
/// # Safety
/// `policy` must be live; `path` must hold `cap` entries.
#[no_mangle]
pub unsafe extern "C" fn aospr_policy_select(
    policy: *mut AosprPolicy,
    path: *mut u32,
    cap: usize,
    len: *mut usize,
) -> AosprStatus {
    guard(|| {
        if policy.is_null() {
            return fail(AosprStatus::NullPointer, "policy is null");
        }
        let p = &mut *policy;
        if p.pending.is_none() {
            match p.policy.choose(&mut p.rng) {
                Ok(d) => p.pending = Some(d),
                Err(e) => return from_error(e),
            }
        }
        let d = p.pending.as_ref().expect("set above");
        write_ids(d.path.edges(), path, cap, len)
    })
}

/// Edges whose losses the pending decision wants reported (the chosen path
/// plus any probed paths), sorted.
///
/// # Safety
/// As for [`aospr_policy_select`].
#[no_mangle]
pub unsafe extern "C" fn aospr_policy_observed(
    policy: *const AosprPolicy,
    edges: *mut u32,
    cap: usize,
    len: *mut usize,
) -> AosprStatus {
    guard(|| {
        if policy.is_null() {
            return fail(AosprStatus::NullPointer, "policy is null");
        }
        match &(*policy).pending {
            Some(d) => write_ids(&d.observed, edges, cap, len),
            None => fail(AosprStatus::InvalidArgument, "no pending selection"),
        }
    })
}

/// Reports this round's losses, one per edge (`n` values in `[0, 1]`);
/// only the observed edges are read. Closes the round.
///
/// # Safety
/// `losses` must hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn aospr_policy_feedback(
    policy: *mut AosprPolicy,
    losses: *const f64,
    n: usize,
) -> AosprStatus {
    guard(|| {
        if policy.is_null() || losses.is_null() {
            return fail(AosprStatus::NullPointer, "null argument");
        }
        let p = &mut *policy;
        if n != p.edges {
            return fail(AosprStatus::InvalidArgument, format!("expected {} losses, got {n}", p.edges));
        }
        let Some(d) = p.pending.take() else {
            return fail(AosprStatus::InvalidArgument, "no pending selection");
        };
        let values = std::slice::from_raw_parts(losses, n);
        if let Some(&e) = d.observed.iter().find(|&&e| !(0.0..=1.0).contains(&values[e])) {
            p.pending = Some(d);
            return fail(AosprStatus::InvalidArgument, format!("loss of edge {e} outside [0, 1]"));
        }
        let result = p.policy.absorb(&d, &d.feedback(values)).and_then(|_| p.policy.end_round());
        match result {
            Ok(()) => AosprStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}

/// Releases a policy. Null is ignored.
///
/// # Safety
/// `policy` must come from [`aospr_policy_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn aospr_policy_free(policy: *mut AosprPolicy) {
    if !policy.is_null() {
        drop(Box::from_raw(policy));
    }
}

/// Runs a whole experiment. When `output_dir` is non-null it overrides the
/// config's output directory. On success `summary_json` receives the
/// summary, to be freed with [`aospr_string_free`].
///
/// # Safety
/// String arguments must be NUL-terminated; `summary_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn aospr_run_experiment(
    config_json: *const c_char,
    output_dir: *const c_char,
    summary_json: *mut *mut c_char,
) -> AosprStatus {
    guard(|| {
        if summary_json.is_null() {
            return fail(AosprStatus::NullPointer, "summary_json is null");
        }
        let text = match read_str(config_json, "config_json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let mut cfg = match harness::parse_config(text) {
            Ok(c) => c,
            Err(e) => return from_error(e),
        };
        if !output_dir.is_null() {
            match read_str(output_dir, "output_dir") {
                Ok(d) => cfg.output_dir = PathBuf::from(d),
                Err(s) => return s,
            }
        }
        let summary = match harness::run(&cfg) {
            Ok(s) => s,
            Err(e) => return from_error(e),
        };
        let json = serde_json::to_string(&summary).expect("summary serialises");
        match CString::new(json) {
            Ok(c) => {
                *summary_json = c.into_raw();
                AosprStatus::Ok
            }
            Err(_) => fail(AosprStatus::RuntimeError, "summary contains NUL"),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn aospr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
