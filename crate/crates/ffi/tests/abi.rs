use std::ffi::{CStr, CString};
use std::ptr;

use equivarium_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(eqv_last_error()) }.to_str().unwrap().to_string()
}

fn take(s: *mut libc::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { eqv_string_free(s) };
    out
}

#[test]
fn handles_round_trip() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(eqv_group_new(cstr("C4").as_ptr(), &mut g), EqvStatus::Ok);
        assert_eq!(eqv_group_order(g), 4);
        let mut o = ptr::null_mut();
        assert_eq!(eqv_orbit_category_new(g, &mut o), EqvStatus::Ok);
        assert_eq!(eqv_orbit_category_num_objects(o), 3);
        // maps G/H → G/K for H ≤ K in an abelian group: |G/K| each
        assert_eq!(eqv_orbit_category_num_morphisms(o), 4 + 2 + 1 + 2 + 1 + 1);
        let mut c = ptr::null_mut();
        assert_eq!(eqv_c_cat_new(o, cstr("family:all").as_ptr(), &mut c), EqvStatus::Ok);
        assert_eq!(eqv_c_cat_num_objects(c), 4 + 2 + 1);
        assert!(eqv_c_cat_is_thin(c));
        let mut json = ptr::null_mut();
        assert_eq!(eqv_c_cat_to_json(c, &mut json), EqvStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["objects"].as_array().unwrap().len(), 7);
        eqv_c_cat_free(c);
        eqv_orbit_category_free(o);
        eqv_group_free(g);
        // NULL is accepted by the release functions and the accessors
        eqv_group_free(ptr::null_mut());
        eqv_string_free(ptr::null_mut());
        assert_eq!(eqv_group_order(ptr::null()), 0);
        assert!(!eqv_c_cat_is_thin(ptr::null()));
    }
}

#[test]
fn group_from_json_text() {
    let text = cstr(r#"{"name": "Z2", "order": 2, "mult": [[0, 1], [1, 0]]}"#);
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(eqv_group_from_json(text.as_ptr(), &mut g), EqvStatus::Ok);
        assert_eq!(eqv_group_order(g), 2);
        eqv_group_free(g);
        let bad = cstr(r#"{"order": 2, "mult": [[0, 1], [0, 1]]}"#);
        assert_eq!(eqv_group_from_json(bad.as_ptr(), &mut g), EqvStatus::InvalidInput);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(eqv_group_new(cstr("Q8").as_ptr(), &mut g), EqvStatus::InvalidInput);
        assert!(last_error().contains("unknown group key"));
        assert_eq!(eqv_group_new(ptr::null(), &mut g), EqvStatus::NullPointer);
        assert_eq!(eqv_group_new(cstr("C2").as_ptr(), &mut g), EqvStatus::Ok);
        assert_eq!(last_error(), "");
        let mut out = ptr::null_mut();
        assert_eq!(
            eqv_build(g, cstr("milnor").as_ptr(), ptr::null(), 1_000_000, 1, &mut out),
            EqvStatus::SizeGuard
        );
        assert_eq!(eqv_build(g, cstr("bogus").as_ptr(), ptr::null(), 0, 1, &mut out), EqvStatus::InvalidInput);
        assert_eq!(
            eqv_verify(cstr("bogus").as_ptr(), ptr::null(), 0, ptr::null(), 2, 3, &mut out),
            EqvStatus::InvalidInput
        );
        assert_eq!(eqv_verify(cstr("all").as_ptr(), ptr::null(), 1, ptr::null(), 2, 3, &mut out), EqvStatus::NullPointer);
        eqv_group_free(g);
    }
}

#[test]
fn build_and_verify() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(eqv_group_new(cstr("C2").as_ptr(), &mut g), EqvStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(eqv_build(g, cstr("c-cat").as_ptr(), cstr("family:e").as_ptr(), 0, 1, &mut out), EqvStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["category"]["morphisms"].as_array().unwrap().len(), 4);
        let groups = [g as *const EqvGroup];
        assert_eq!(
            eqv_verify(cstr("thomason").as_ptr(), groups.as_ptr(), 1, cstr("family:e").as_ptr(), 2, 3, &mut out),
            EqvStatus::Ok
        );
        let report: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(report["passed"], true);
        assert_eq!(report["group"], "C2");
        eqv_group_free(g);
    }
}
