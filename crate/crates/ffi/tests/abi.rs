use std::ffi::{CStr, CString};
use std::ptr;

use toricfan_ffi::*;

const P2: &str = r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"cones":[[0,1],[1,2],[0,2]]}"#;

fn load(json: &str) -> (TfStatus, *mut TfFan) {
    let s = CString::new(json).unwrap();
    let mut h = ptr::null_mut();
    let st = unsafe { tf_fan_from_json(s.as_ptr(), &mut h) };
    (st, h)
}

fn last_error() -> String {
    let p = tf_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn command(h: *const TfFan, cmd: &str) -> (TfStatus, Option<serde_json::Value>) {
    let c = CString::new(cmd).unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { tf_fan_run_command(h, c.as_ptr(), &mut out) };
    let report = (!out.is_null()).then(|| {
        let v = serde_json::from_str(unsafe { CStr::from_ptr(out) }.to_str().unwrap()).unwrap();
        unsafe { tf_string_free(out) };
        v
    });
    (st, report)
}

#[test]
fn p2_round_trip() {
    let (st, h) = load(P2);
    assert_eq!(st, TfStatus::Ok);
    let mut n = 0usize;
    let mut cones = 0usize;
    let mut complete = false;
    unsafe {
        assert_eq!(tf_fan_ambient_rank(h, &mut n), TfStatus::Ok);
        assert_eq!(tf_fan_cone_count(h, &mut cones), TfStatus::Ok);
        assert_eq!(tf_fan_is_complete(h, &mut complete), TfStatus::Ok);
    }
    assert_eq!((n, cones, complete), (2, 7, true));

    let mut ranks = [0u64; 4];
    assert_eq!(unsafe { tf_fan_hilbert(h, 3, ranks.as_mut_ptr(), ranks.len()) }, TfStatus::Ok);
    assert_eq!(ranks, [1, 3, 6, 9]);
    assert_eq!(unsafe { tf_fan_hilbert(h, 4, ranks.as_mut_ptr(), ranks.len()) }, TfStatus::BufferTooSmall);

    let (st, rep) = command(h, r#"{"command":"census","field":"C"}"#);
    assert_eq!(st, TfStatus::Ok);
    assert_eq!(rep.unwrap()["euler"], 3);
    unsafe { tf_fan_free(h) };
}

#[test]
fn errors_map_to_status_codes() {
    let (st, h) = load(r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"cones":[[0,5]]}"#);
    assert_eq!(st, TfStatus::Parse);
    assert!(h.is_null());
    assert!(last_error().contains("cones[0]"));

    let (st, _) = load(r#"{"dim":1,"rays":[[1],[-1]],"cones":[[0,1]]}"#);
    assert_eq!(st, TfStatus::InvalidFan);
    assert!(last_error().starts_with("NotStronglyConvex"));

    let (st, h) = load(r#"{"dim":2,"rays":[[1,0],[0,1]],"cones":[[0,1]]}"#);
    assert_eq!(st, TfStatus::Ok);
    let (st, rep) = command(h, r#"{"command":"evenness","max_degree":1}"#);
    assert_eq!((st, rep), (TfStatus::Precondition, None));
    let (st, _) = command(h, r#"{"command":"frobnicate"}"#);
    assert_eq!(st, TfStatus::Parse);
    unsafe { tf_fan_free(h) };
}

#[test]
fn failed_checks_still_report() {
    let (_, h) = load(r#"{"dim":2,"rays":[[1,0],[0,1],[-1,0],[0,-1]],"cones":[[0,1],[2,3]]}"#);
    let (st, rep) = command(h, r#"{"command":"check-completion","ambient":"/nonexistent.json"}"#);
    assert_eq!((st, rep), (TfStatus::Parse, None));
    let (st, rep) = command(h, r#"{"command":"hereditary"}"#);
    assert_eq!(st, TfStatus::Ok);
    assert_eq!(rep.unwrap()["hereditary"], false);
    unsafe { tf_fan_free(h) };
}

#[test]
fn null_arguments() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { tf_fan_from_json(ptr::null(), &mut h) }, TfStatus::NullPointer);
    let mut b = false;
    assert_eq!(unsafe { tf_fan_is_complete(ptr::null(), &mut b) }, TfStatus::NullPointer);
    unsafe {
        tf_fan_free(ptr::null_mut());
        tf_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_abi() {
    let header = include_str!("../include/toricfan.h");
    for name in [
        "typedef struct TfFan TfFan",
        "TF_STATUS_OK = 0",
        "tf_fan_from_json",
        "tf_fan_free",
        "tf_fan_is_complete",
        "tf_fan_hilbert",
        "tf_fan_run_command",
        "tf_string_free",
        "tf_last_error_message",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
