//! C ABI for the quintic-strata toolkit.
//!
//! Conventions: opaque handles for parsed morphisms, integer status codes
//! (0 ok, 1 domain error, 2 parse/usage error, matching the CLI exit
//! codes), and heap-allocated UTF-8 strings that the caller releases with
//! `qs_string_free`.  The most recent error message per thread is available
//! through `qs_last_error`.
//!
//! The matching declarations live in `include/quintic_strata.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use quintic_strata::cohomology;
use quintic_strata::crosscheck;
use quintic_strata::doc::{self, MatrixDocument};
use quintic_strata::error::Error;
use quintic_strata::gallery::{self, SampleRequest};
use quintic_strata::graded::GradedMorphism;
use quintic_strata::report;
use quintic_strata::scalar::Field;
use quintic_strata::strata::{self, ModuliSpaceId, StratumLabel, SubLabel};

pub const QS_OK: i32 = 0;
pub const QS_ERR_DOMAIN: i32 = 1;
pub const QS_ERR_PARSE: i32 = 2;

/// Opaque handle: a validated graded morphism plus the space annotation of
/// the document it came from, if any.
pub struct QsMorphism {
    phi: GradedMorphism,
    space: Option<i64>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(e: &Error) -> i32 {
    let code = match e {
        Error::Parse { .. } => QS_ERR_PARSE,
        Error::Other(msg) if msg.starts_with("usage") => QS_ERR_PARSE,
        _ => QS_ERR_DOMAIN,
    };
    let text = CString::new(e.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
    code
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new("").unwrap());
}

fn export_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

fn field_from_prime(p: u64) -> Result<Field, Error> {
    if p == 0 {
        Ok(Field::Q)
    } else {
        Field::check_modulus(p)
    }
}

/// Most recent error message on this thread; the pointer stays valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qs_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned by any `*_json`, `qs_det` or `qs_print` call.
#[no_mangle]
pub extern "C" fn qs_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe {
            drop(CString::from_raw(s));
        }
    }
}

/// Parse a matrix document over Q (`field_prime` = 0) or F_p.  On success
/// writes a fresh handle into `out` and returns 0.
#[no_mangle]
pub extern "C" fn qs_parse(
    text: *const c_char,
    field_prime: u64,
    out: *mut *mut QsMorphism,
) -> i32 {
    if text.is_null() || out.is_null() {
        return set_error(&Error::Other("usage: null pointer argument".into()));
    }
    let Ok(text) = unsafe { CStr::from_ptr(text) }.to_str() else {
        return set_error(&Error::Other("usage: text is not valid UTF-8".into()));
    };
    let result = field_from_prime(field_prime)
        .and_then(|field| doc::parse(text, field))
        .and_then(|document| {
            let phi = document.to_morphism()?;
            Ok(QsMorphism { phi, space: document.space })
        });
    match result {
        Ok(handle) => {
            clear_error();
            unsafe { *out = Box::into_raw(Box::new(handle)) };
            QS_OK
        }
        Err(e) => set_error(&e),
    }
}

#[no_mangle]
pub extern "C" fn qs_morphism_free(m: *mut QsMorphism) {
    if !m.is_null() {
        unsafe {
            drop(Box::from_raw(m));
        }
    }
}

/// Canonical document text for a handle.
#[no_mangle]
pub extern "C" fn qs_print(m: *const QsMorphism) -> *mut c_char {
    let Some(handle) = (unsafe { m.as_ref() }) else {
        set_error(&Error::Other("usage: null handle".into()));
        return ptr::null_mut();
    };
    clear_error();
    export_string(doc::print(&MatrixDocument::from_morphism(handle.space, &handle.phi)))
}

/// Classification report as JSON.  `chi` selects the moduli space; pass a
/// value outside 0..=4 to use the space recorded in the document.
#[no_mangle]
pub extern "C" fn qs_classify_json(m: *const QsMorphism, chi: i64) -> *mut c_char {
    let Some(handle) = (unsafe { m.as_ref() }) else {
        set_error(&Error::Other("usage: null handle".into()));
        return ptr::null_mut();
    };
    let chi = if (0..=4).contains(&chi) { Some(chi) } else { handle.space };
    let result = chi
        .ok_or_else(|| Error::Other("usage: no space given and none in the document".into()))
        .and_then(ModuliSpaceId::new)
        .and_then(|space| strata::classify(space, &handle.phi));
    match result {
        Ok(rep) => {
            clear_error();
            export_string(report::classify_json(&rep))
        }
        Err(e) => {
            set_error(&e);
            ptr::null_mut()
        }
    }
}

/// Canonical text of the determinant.
#[no_mangle]
pub extern "C" fn qs_det(m: *const QsMorphism) -> *mut c_char {
    let Some(handle) = (unsafe { m.as_ref() }) else {
        set_error(&Error::Other("usage: null handle".into()));
        return ptr::null_mut();
    };
    match handle.phi.determinant() {
        Ok(d) => {
            clear_error();
            export_string(d.to_string())
        }
        Err(e) => {
            set_error(&e);
            ptr::null_mut()
        }
    }
}

/// Cohomology sweep h0/h1 over the twist range [lo, hi], as JSON.
#[no_mangle]
pub extern "C" fn qs_cohom_json(m: *const QsMorphism, lo: i64, hi: i64) -> *mut c_char {
    let Some(handle) = (unsafe { m.as_ref() }) else {
        set_error(&Error::Other("usage: null handle".into()));
        return ptr::null_mut();
    };
    let run = || -> Result<String, Error> {
        if lo > hi {
            return Err(Error::Other("usage: empty twist range".into()));
        }
        let hilbert = handle.phi.hilbert()?;
        let mut h0 = Vec::new();
        let mut h1 = Vec::new();
        for twist in lo..=hi {
            h0.push((twist, cohomology::h0_twist(&handle.phi, twist)?));
            h1.push((twist, cohomology::h1_twist(&handle.phi, twist)?));
        }
        Ok(report::cohom_json(&h0, &h1, &hilbert))
    };
    match run() {
        Ok(json) => {
            clear_error();
            export_string(json)
        }
        Err(e) => {
            set_error(&e);
            ptr::null_mut()
        }
    }
}

/// Dual presentation with twist k; writes a fresh handle into `out`.
#[no_mangle]
pub extern "C" fn qs_dualize(m: *const QsMorphism, k: i64, out: *mut *mut QsMorphism) -> i32 {
    let Some(handle) = (unsafe { m.as_ref() }) else {
        return set_error(&Error::Other("usage: null handle".into()));
    };
    if out.is_null() {
        return set_error(&Error::Other("usage: null output pointer".into()));
    }
    match handle.phi.dual_resolution(k) {
        Ok(dual) => {
            clear_error();
            let space = handle.space.map(|chi| -chi + 5 * k);
            unsafe { *out = Box::into_raw(Box::new(QsMorphism { phi: dual, space })) };
            QS_OK
        }
        Err(e) => set_error(&e),
    }
}

/// Sample a stratum member and report it (document plus classification) as
/// JSON.  `sublabel` may be null; `field_prime` 0 means Q.
#[no_mangle]
pub extern "C" fn qs_sample_json(
    chi: i64,
    stratum_index: u32,
    sublabel: *const c_char,
    seed: u64,
    field_prime: u64,
    coefficient_bound: u64,
) -> *mut c_char {
    let run = || -> Result<String, Error> {
        let space = ModuliSpaceId::new(chi)?;
        if stratum_index > 3 {
            return Err(Error::Other("usage: stratum index must be 0..=3".into()));
        }
        let sublabel = if sublabel.is_null() {
            None
        } else {
            let text = unsafe { CStr::from_ptr(sublabel) }
                .to_str()
                .map_err(|_| Error::Other("usage: sublabel is not valid UTF-8".into()))?;
            Some(parse_sublabel(text)?)
        };
        let req = SampleRequest {
            space,
            label: StratumLabel::from_index(stratum_index as usize),
            sublabel,
            seed,
            field: field_from_prime(field_prime)?,
            coefficient_bound: coefficient_bound.max(1),
            retry_cap: 500,
        };
        let phi = gallery::sample_stratum(&req)?;
        let rep = strata::classify(space, &phi)?;
        let document = doc::print(&MatrixDocument::from_morphism(Some(space.chi), &phi));
        Ok(report::sample_json(&rep, &document, seed))
    };
    match run() {
        Ok(json) => {
            clear_error();
            export_string(json)
        }
        Err(e) => {
            set_error(&e);
            ptr::null_mut()
        }
    }
}

fn parse_sublabel(text: &str) -> Result<SubLabel, Error> {
    for s in [
        SubLabel::X0Generic,
        SubLabel::X01,
        SubLabel::X02,
        SubLabel::X10,
        SubLabel::X11,
        SubLabel::X20,
        SubLabel::X21,
        SubLabel::Stable,
        SubLabel::StrictlySemistable,
    ] {
        if s.as_str() == text {
            return Ok(s);
        }
    }
    Err(Error::Other(format!("usage: unknown sublabel {text}")))
}

/// Dimension audit as JSON.  `chi` outside 0..=4 audits all three primal
/// spaces.
#[no_mangle]
pub extern "C" fn qs_audit_json(chi: i64, samples: u32) -> *mut c_char {
    let samples = samples.max(1) as usize;
    let run = || -> Result<String, Error> {
        let (rows, all_ok) = if (0..=4).contains(&chi) {
            let space = ModuliSpaceId::new(chi)?;
            if !space.is_primal() {
                return Err(Error::Other(format!(
                    "audit covers the primal spaces; {space} is reached by duality"
                )));
            }
            let mut rows = Vec::new();
            let mut ok = true;
            for index in 0..4 {
                let a = strata::dimension_audit(space, index, samples)?;
                ok &= a.ok;
                rows.push(a);
            }
            (rows, ok)
        } else {
            strata::audit_all(samples)?
        };
        Ok(report::audit_json(&rows, all_ok))
    };
    match run() {
        Ok(json) => {
            clear_error();
            export_string(json)
        }
        Err(e) => {
            set_error(&e);
            ptr::null_mut()
        }
    }
}

/// Battery versus enumeration comparison (see the oracle-compare command).
#[no_mangle]
pub extern "C" fn qs_oracle_compare_json(
    chi: i64,
    stratum_index: u32,
    trials: u64,
    prime: u64,
    seed: u64,
) -> *mut c_char {
    let run = || -> Result<String, Error> {
        let space = ModuliSpaceId::new(chi)?;
        if stratum_index > 3 {
            return Err(Error::Other("usage: stratum index must be 0..=3".into()));
        }
        let label = StratumLabel::from_index(stratum_index as usize);
        let out = crosscheck::oracle_compare(space, label, trials as usize, prime, seed)?;
        Ok(report::oracle_compare_json(
            &space.to_string(),
            label.as_str(),
            prime,
            out.trials,
            out.agreements,
            &out.disagreements,
        ))
    };
    match run() {
        Ok(json) => {
            clear_error();
            export_string(json)
        }
        Err(e) => {
            set_error(&e);
            ptr::null_mut()
        }
    }
}
