//! C ABI over `surfcalc`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `_free`. Every call returns a
//! [`SurfcalcStatus`]; on failure `surfcalc_last_error` describes it.
//! Strings returned by the library are released with `surfcalc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use surfcalc::endspace::{self, EndExpr, Multiplicity, Verdict};
use surfcalc::mcgword::{self, CohomologyError, CohomologyResult, Word};
use surfcalc::shiftbasis::{strip_relation_check, Rank};
use surfcalc::surface::{homeomorphic, validate_surface, SurfaceSpec};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfcalcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidSurface = 4,
    GenusTooSmall = 5,
    OutOfRange = 6,
    Failed = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfcalcVerdict {
    Homeomorphic = 0,
    Distinct = 1,
    Unknown = 2,
}

impl From<Verdict> for SurfcalcVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Homeomorphic => SurfcalcVerdict::Homeomorphic,
            Verdict::Distinct => SurfcalcVerdict::Distinct,
            Verdict::Unknown => SurfcalcVerdict::Unknown,
        }
    }
}

/// A validated surface.
pub struct SurfcalcSurface {
    spec: SurfaceSpec,
}

/// A word over compact letters and handle-shifts.
pub struct SurfcalcWord {
    word: Word,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl std::fmt::Display) {
    let text = CString::new(message.to_string().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

type FfiResult<T> = Result<T, (SurfcalcStatus, String)>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> SurfcalcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SurfcalcStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("panic inside surfcalc");
            SurfcalcStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err((SurfcalcStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (SurfcalcStatus::InvalidUtf8, format!("{name}: {e}")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| (SurfcalcStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> FfiResult<&'a mut T> {
    p.as_mut().ok_or_else(|| (SurfcalcStatus::NullPointer, format!("{name} is null")))
}

fn multiplicity_to_i64(m: Multiplicity) -> i64 {
    match m {
        Multiplicity::Finite(n) => n as i64,
        Multiplicity::Infinite => -1,
    }
}

/// Last error message on this thread, or null. Valid until the next failing
/// call on the same thread.
#[no_mangle]
pub extern "C" fn surfcalc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn surfcalc_surface_from_json(json: *const c_char, out: *mut *mut SurfcalcSurface) -> SurfcalcStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let text = str_arg(json, "json")?;
        let spec = SurfaceSpec::from_json(text).map_err(|e| (SurfcalcStatus::ParseError, e.to_string()))?;
        let violations = validate_surface(&spec);
        if !violations.is_empty() {
            let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return Err((SurfcalcStatus::InvalidSurface, list.join("; ")));
        }
        *out = Box::into_raw(Box::new(SurfcalcSurface { spec }));
        Ok(())
    })
}

/// # Safety
/// `s` must come from `surfcalc_surface_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn surfcalc_surface_free(s: *mut SurfcalcSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// Handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn surfcalc_surface_homeomorphic(
    a: *const SurfcalcSurface,
    b: *const SurfcalcSurface,
    out: *mut SurfcalcVerdict,
) -> SurfcalcStatus {
    guard(|| {
        let (a, b) = (ref_arg(a, "a")?, ref_arg(b, "b")?);
        *out_arg(out, "out")? = homeomorphic(&a.spec, &b.spec).into();
        Ok(())
    })
}

/// Number of ends accumulated by genus; -1 when infinite.
///
/// # Safety
/// `s` must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn surfcalc_surface_genus_ends(s: *const SurfcalcSurface, out: *mut i64) -> SurfcalcStatus {
    guard(|| {
        let s = ref_arg(s, "surface")?;
        *out_arg(out, "out")? = multiplicity_to_i64(endspace::count_genus_ends(&s.spec.ends));
        Ok(())
    })
}

/// Rank of `H^1(PMod; Z)`: 0 when trivial, -1 for a countable direct sum.
///
/// # Safety
/// `s` must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn surfcalc_cohomology_rank(s: *const SurfcalcSurface, depth: u32, out: *mut i64) -> SurfcalcStatus {
    guard(|| {
        let s = ref_arg(s, "surface")?;
        let out = out_arg(out, "out")?;
        if depth == 0 {
            return Err((SurfcalcStatus::OutOfRange, "depth must be positive".into()));
        }
        *out = match mcgword::cohomology(&s.spec, depth as usize) {
            Ok(CohomologyResult::Trivial) => 0,
            Ok(CohomologyResult::FreeAbelian(Rank::Finite(n))) => n as i64,
            Ok(CohomologyResult::FreeAbelian(Rank::CountablyInfinite)) => -1,
            Err(e @ CohomologyError::GenusTooSmall(_)) => return Err((SurfcalcStatus::GenusTooSmall, e.to_string())),
            Err(e) => return Err((SurfcalcStatus::Failed, e.to_string())),
        };
        Ok(())
    })
}

/// Compare two end expressions.
///
/// # Safety
/// `a` and `b` must be nul-terminated strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn surfcalc_ends_equivalent(
    a: *const c_char,
    b: *const c_char,
    out: *mut SurfcalcVerdict,
) -> SurfcalcStatus {
    guard(|| {
        let parse = |p, name| -> FfiResult<EndExpr> {
            str_arg(p, name)?.parse().map_err(|e: endspace::ParseError| (SurfcalcStatus::ParseError, e.to_string()))
        };
        let (a, b) = (parse(a, "a")?, parse(b, "b")?);
        *out_arg(out, "out")? = endspace::equivalent(&a, &b).into();
        Ok(())
    })
}

/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn surfcalc_word_parse(text: *const c_char, out: *mut *mut SurfcalcWord) -> SurfcalcStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let word: Word = str_arg(text, "text")?.parse().map_err(|e: mcgword::WordError| (SurfcalcStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(SurfcalcWord { word }));
        Ok(())
    })
}

/// # Safety
/// `w` must come from `surfcalc_word_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn surfcalc_word_free(w: *mut SurfcalcWord) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Exponent sum of shift `index`; `rank` bounds valid indices, 0 for no bound.
///
/// # Safety
/// `w` must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn surfcalc_word_psi(w: *const SurfcalcWord, index: usize, rank: u64, out: *mut i64) -> SurfcalcStatus {
    guard(|| {
        let w = ref_arg(w, "word")?;
        let rank = if rank == 0 { Rank::CountablyInfinite } else { Rank::Finite(rank) };
        *out_arg(out, "out")? = mcgword::psi(&w.word, index, rank).map_err(|e| (SurfcalcStatus::OutOfRange, e.to_string()))?;
        Ok(())
    })
}

/// Normal form after pushing compact letters to the front, as text.
///
/// # Safety
/// `w` must be live; `out` must be valid. Free the result with
/// `surfcalc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn surfcalc_word_normal_form(w: *const SurfcalcWord, out: *mut *mut c_char) -> SurfcalcStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let w = ref_arg(w, "word")?;
        let text = mcgword::conjugate_rewrite(&w.word).to_string();
        *out = CString::new(text).expect("words have no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn surfcalc_relation_check(window: u32, out: *mut bool) -> SurfcalcStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = strip_relation_check(window).map_err(|e| (SurfcalcStatus::OutOfRange, e.to_string()))?;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn surfcalc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
