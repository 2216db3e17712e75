//! C ABI for equivarium.
//!
//! Every fallible call returns an [`EqvStatus`]; on failure the message is
//! available from [`eqv_last_error`] on the same thread. Handles are opaque
//! and must be released with their `_free` function. Strings returned
//! through `char **` are owned by the caller and released with
//! [`eqv_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use libc::{c_char, size_t};

use equivarium::artifact::{self, Artifact, BuildArgs};
use equivarium::elmendorf_cat::{c_cat, ElmendorfCat};
use equivarium::group::FiniteGroup;
use equivarium::orbit::OrbitCategory;
use equivarium::verify::{self, group_from_arg, parse_presheaf, Suite, VerifyOptions};
use equivarium::Error;

/// Status codes; 1–3 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqvStatus {
    Ok = 0,
    VerificationFailed = 1,
    InvalidInput = 2,
    SizeGuard = 3,
    NullPointer = 4,
    Internal = 5,
}

/// A finite group.
pub struct EqvGroup {
    inner: Arc<FiniteGroup>,
}

/// The orbit category of a group.
pub struct EqvOrbitCategory {
    inner: Arc<OrbitCategory>,
}

/// The G-category `C X` of a presheaf on the orbit category.
pub struct EqvElmendorfCat {
    inner: ElmendorfCat,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("interior NULs removed"));
}

fn status_of(e: &Error) -> EqvStatus {
    match e {
        Error::Verification(_) => EqvStatus::VerificationFailed,
        Error::Invalid(_) => EqvStatus::InvalidInput,
        Error::SizeGuard { .. } => EqvStatus::SizeGuard,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<EqvStatus, (EqvStatus, String)>) -> EqvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => {
            if s == EqvStatus::Ok {
                set_error("");
            }
            s
        }
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal error: panic inside equivarium");
            EqvStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (EqvStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (EqvStatus, String) {
    (EqvStatus::NullPointer, format!("{name} is NULL"))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (EqvStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (EqvStatus::InvalidInput, format!("{name} is not valid UTF-8")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, name: &str) -> Result<Option<&'a str>, (EqvStatus, String)> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, name).map(Some)
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s.replace('\0', " ")).expect("interior NULs removed").into_raw();
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn eqv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn eqv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. `NULL` is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn eqv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A group from a key (`C4`, `D3`, `S3`) or a path to a group JSON file.
///
/// # Safety
/// `key` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqv_group_new(key: *const c_char, out: *mut *mut EqvGroup) -> EqvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = group_from_arg(str_arg(key, "key")?).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(EqvGroup { inner: Arc::new(g) }));
        Ok(EqvStatus::Ok)
    })
}

/// A group from JSON text `{"name": ..., "order": n, "mult": [[...]]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqv_group_from_json(json: *const c_char, out: *mut *mut EqvGroup) -> EqvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = FiniteGroup::from_json(str_arg(json, "json")?).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(EqvGroup { inner: Arc::new(g) }));
        Ok(EqvStatus::Ok)
    })
}

/// Order of the group, or 0 for `NULL`.
///
/// # Safety
/// `g` must be `NULL` or a live handle.
#[no_mangle]
pub unsafe extern "C" fn eqv_group_order(g: *const EqvGroup) -> size_t {
    g.as_ref().map_or(0, |g| g.inner.order())
}

/// # Safety
/// `g` must be `NULL` or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn eqv_group_free(g: *mut EqvGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqv_orbit_category_new(g: *const EqvGroup, out: *mut *mut EqvOrbitCategory) -> EqvStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("group"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let o = OrbitCategory::new(g.inner.clone()).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(EqvOrbitCategory { inner: Arc::new(o) }));
        Ok(EqvStatus::Ok)
    })
}

/// Number of subgroups (objects `G/H`), or 0 for `NULL`.
///
/// # Safety
/// `o` must be `NULL` or a live handle.
#[no_mangle]
pub unsafe extern "C" fn eqv_orbit_category_num_objects(o: *const EqvOrbitCategory) -> size_t {
    o.as_ref().map_or(0, |o| o.inner.subgroups().len())
}

/// Number of `G`-maps between coset spaces, or 0 for `NULL`.
///
/// # Safety
/// `o` must be `NULL` or a live handle.
#[no_mangle]
pub unsafe extern "C" fn eqv_orbit_category_num_morphisms(o: *const EqvOrbitCategory) -> size_t {
    o.as_ref().map_or(0, |o| o.inner.category().num_morphisms())
}

/// # Safety
/// `o` must be `NULL` or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn eqv_orbit_category_free(o: *mut EqvOrbitCategory) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Builds `C X` for a presheaf descriptor such as `family:e` or `constant:chain2`.
///
/// # Safety
/// `o` must be a live handle, `presheaf` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn eqv_c_cat_new(
    o: *const EqvOrbitCategory,
    presheaf: *const c_char,
    out: *mut *mut EqvElmendorfCat,
) -> EqvStatus {
    guard(|| {
        let o = o.as_ref().ok_or_else(|| null("orbit category"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let x = parse_presheaf(&o.inner, str_arg(presheaf, "presheaf")?).map_err(lib_err)?;
        let c = c_cat(&x).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(EqvElmendorfCat { inner: c }));
        Ok(EqvStatus::Ok)
    })
}

/// # Safety
/// `c` must be `NULL` or a live handle.
#[no_mangle]
pub unsafe extern "C" fn eqv_c_cat_num_objects(c: *const EqvElmendorfCat) -> size_t {
    c.as_ref().map_or(0, |c| c.inner.objects().len())
}

/// # Safety
/// `c` must be `NULL` or a live handle.
#[no_mangle]
pub unsafe extern "C" fn eqv_c_cat_num_morphisms(c: *const EqvElmendorfCat) -> size_t {
    c.as_ref().map_or(0, |c| c.inner.category().num_morphisms())
}

/// Whether `C X` is a preorder; false for `NULL`.
///
/// # Safety
/// `c` must be `NULL` or a live handle.
#[no_mangle]
pub unsafe extern "C" fn eqv_c_cat_is_thin(c: *const EqvElmendorfCat) -> bool {
    c.as_ref().is_some_and(|c| c.inner.is_thin())
}

/// Category JSON plus the action table.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqv_c_cat_to_json(c: *const EqvElmendorfCat, out: *mut *mut c_char) -> EqvStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("category"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, c.inner.to_json().to_string());
        Ok(EqvStatus::Ok)
    })
}

/// # Safety
/// `c` must be `NULL` or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn eqv_c_cat_free(c: *mut EqvElmendorfCat) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Builds an artifact (`orbit-cat`, `marked-orbit-cat`, `c-cat`, `c-pos`,
/// `milnor`, `quotient`, `nerve`, `hocolim`) as JSON. `presheaf` may be
/// `NULL` for `family:e`.
///
/// # Safety
/// `g` must be a live handle, strings NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn eqv_build(
    g: *const EqvGroup,
    what: *const c_char,
    presheaf: *const c_char,
    depth: size_t,
    dim: size_t,
    out: *mut *mut c_char,
) -> EqvStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("group"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let what = Artifact::parse(str_arg(what, "what")?).map_err(lib_err)?;
        let args = BuildArgs {
            group: g.inner.clone(),
            presheaf: opt_str_arg(presheaf, "presheaf")?.map(str::to_string),
            depth,
            dim,
        };
        let json = artifact::build(what, &args).map_err(lib_err)?;
        write_string(out, json.to_string());
        Ok(EqvStatus::Ok)
    })
}

/// Runs a verification suite and writes its JSON report to `out`.
///
/// `groups` may be `NULL` with `n_groups == 0` for the default corpus;
/// `presheaf` may be `NULL` for each suite's corpus. Returns
/// `VerificationFailed` (with the report still written) when a check fails.
///
/// # Safety
/// `groups` must point to `n_groups` live handles; strings NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn eqv_verify(
    suite: *const c_char,
    groups: *const *const EqvGroup,
    n_groups: size_t,
    presheaf: *const c_char,
    depth: size_t,
    dim: size_t,
    out: *mut *mut c_char,
) -> EqvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let suite = Suite::parse(str_arg(suite, "suite")?).map_err(lib_err)?;
        let mut opts = VerifyOptions {
            presheaf: opt_str_arg(presheaf, "presheaf")?.map(str::to_string),
            depth,
            dim,
            ..VerifyOptions::default()
        };
        if n_groups > 0 {
            if groups.is_null() {
                return Err(null("groups"));
            }
            opts.groups = std::slice::from_raw_parts(groups, n_groups)
                .iter()
                .map(|&g| g.as_ref().map(|g| g.inner.clone()).ok_or_else(|| null("group")))
                .collect::<Result<_, _>>()?;
        }
        let report = verify::verify(suite, &opts).map_err(lib_err)?;
        write_string(out, report.to_json().to_string());
        match report.first_failure() {
            None => Ok(EqvStatus::Ok),
            Some(c) => Err((
                EqvStatus::VerificationFailed,
                format!("{} [{}]: {}", c.id, c.instance, c.witness.as_deref().unwrap_or("")),
            )),
        }
    })
}
