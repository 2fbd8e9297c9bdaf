//! Exercise the C ABI exactly as a foreign caller would: C strings in,
//! status codes and heap strings out.

use std::ffi::{CStr, CString};
use std::ptr;

use quintic_strata_capi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null(), "last error: {}", last_error());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    qs_string_free(p);
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(qs_last_error()) }.to_str().unwrap().to_string()
}

const QUINTIC_DOC: &str = "space M(5,0)\nsource O(-4)\ntarget O(1)\nmatrix\n[ x^5 + y^5 + z^5 ]\n";

#[test]
fn parse_classify_free() {
    let text = CString::new(QUINTIC_DOC).unwrap();
    let mut handle: *mut QsMorphism = ptr::null_mut();
    assert_eq!(qs_parse(text.as_ptr(), 0, &mut handle), QS_OK);
    assert!(!handle.is_null());

    let json = take_string(qs_classify_json(handle, -1));
    assert!(json.contains("\"label\":\"X3\""), "{json}");
    assert!(json.contains("\"space\":\"M(5,0)\""));

    let det = take_string(qs_det(handle));
    assert_eq!(det, "x^5 + y^5 + z^5");

    let printed = take_string(qs_print(handle));
    assert_eq!(printed, QUINTIC_DOC);

    qs_morphism_free(handle);
}

#[test]
fn parse_errors_set_code_and_message() {
    let text = CString::new("source O(-1)\ntarget O\nmatrix\n[ x^2 ]\n").unwrap();
    let mut handle: *mut QsMorphism = ptr::null_mut();
    let code = qs_parse(text.as_ptr(), 0, &mut handle);
    assert_eq!(code, QS_ERR_PARSE);
    assert!(last_error().contains("entry (1, 1)"));
    // Bad modulus is rejected.
    let code = qs_parse(text.as_ptr(), 4, &mut handle);
    assert_eq!(code, QS_ERR_DOMAIN);
}

#[test]
fn cohom_and_dualize_via_abi() {
    let text = CString::new(QUINTIC_DOC).unwrap();
    let mut handle: *mut QsMorphism = ptr::null_mut();
    assert_eq!(qs_parse(text.as_ptr(), 0, &mut handle), QS_OK);

    let json = take_string(qs_cohom_json(handle, -1, 1));
    assert!(json.contains("\"h0\":[[-1,1],[0,3],[1,6]]"), "{json}");
    assert!(json.contains("\"h1\":[[-1,6],[0,3],[1,1]]"), "{json}");

    let mut dual: *mut QsMorphism = ptr::null_mut();
    assert_eq!(qs_dualize(handle, 0, &mut dual), QS_OK);
    let json = take_string(qs_classify_json(dual, 0));
    assert!(json.contains("\"label\":\"X3\""), "{json}");

    qs_morphism_free(dual);
    qs_morphism_free(handle);
}

#[test]
fn non_injective_domain_error() {
    let doc = "space M(5,3)\nsource O(-2)^2 O(-1)\ntarget O^3\nmatrix\n[ x*y , x^2 , 0 ]\n[ x*z , 0 , x ]\n[ 0 , -x*z , y ]\n";
    let text = CString::new(doc).unwrap();
    let mut handle: *mut QsMorphism = ptr::null_mut();
    assert_eq!(qs_parse(text.as_ptr(), 0, &mut handle), QS_OK);
    // Classification itself succeeds and reports NotInjective.
    let json = take_string(qs_classify_json(handle, -1));
    assert!(json.contains("\"label\":\"NotInjective\""));
    // A cohomology sweep on it is a domain error.
    let out = qs_cohom_json(handle, 0, 0);
    assert!(out.is_null());
    assert!(last_error().contains("not injective"));
    qs_morphism_free(handle);
}

#[test]
fn sampling_through_the_abi_is_deterministic() {
    let a = take_string(qs_sample_json(3, 0, ptr::null(), 11, 0, 10));
    let b = take_string(qs_sample_json(3, 0, ptr::null(), 11, 0, 10));
    assert_eq!(a, b);
    assert!(a.contains("\"label\":\"X0\""));
    // Sub-label request over F_p.
    let sub = CString::new("X02").unwrap();
    let c = take_string(qs_sample_json(1, 0, sub.as_ptr(), 5, 10007, 10));
    assert!(c.contains("\"sublabel\":\"X02\""), "{c}");
}

#[test]
fn oracle_compare_small_run() {
    let json = take_string(qs_oracle_compare_json(1, 0, 12, 5, 3));
    assert!(json.contains("\"disagreements\":[]"), "{json}");
    assert!(json.contains("\"trials\":12"));
}
