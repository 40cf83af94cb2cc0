//! C ABI over `bifinite`.
//!
//! Every fallible call returns a [`BifiniteStatus`]; on failure the message
//! is available from [`bifinite_last_error`] on the same thread. Handles and
//! strings returned by the library must be released with the matching
//! `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bifinite::corpus::{load_extension, LoadedExtension};
use bifinite::error::{AlgebraError, LoadError};
use bifinite::extension::{check_quotient_bifinite, global_dimension, ExtensionReport};
use bifinite::field::{Field, FieldSpec, PrimeField, Rationals};
use bifinite::module::PdStatus;
use bifinite::presentation::parse_presentation;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BifiniteStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    FieldError = 4,
    BuildError = 5,
    InvalidArgument = 6,
    Panic = 7,
}

/// Shape of a projective or global dimension.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BifinitePdKind {
    /// The zero module.
    Zero = 0,
    /// Exactly `value`.
    Finite = 1,
    /// Not settled below the cutoff; at least `value`.
    AtLeast = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BifinitePd {
    pub kind: BifinitePdKind,
    pub value: usize,
}

impl From<PdStatus> for BifinitePd {
    fn from(s: PdStatus) -> Self {
        match s {
            PdStatus::Zero => BifinitePd { kind: BifinitePdKind::Zero, value: 0 },
            PdStatus::Finite(n) => BifinitePd { kind: BifinitePdKind::Finite, value: n },
            PdStatus::AtLeast(c) => BifinitePd { kind: BifinitePdKind::AtLeast, value: c },
        }
    }
}

/// Which algebra of the extension a query refers to.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BifiniteSide {
    A = 0,
    B = 1,
}

/// Pass as `field` to use the field declared in the presentation, or GF(1009).
pub const BIFINITE_FIELD_FROM_INPUT: u64 = 1;
/// Pass as `field` to compute over the rationals.
pub const BIFINITE_FIELD_RATIONALS: u64 = 0;

enum Loaded {
    Prime(LoadedExtension<PrimeField>),
    Rational(LoadedExtension<Rationals>),
}

/// Opaque handle to a loaded extension `B ⊆ A`.
pub struct BifiniteExtension {
    inner: Loaded,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn load_status(e: &LoadError) -> BifiniteStatus {
    match e {
        LoadError::Parse(_) => BifiniteStatus::ParseError,
        LoadError::Field(_) => BifiniteStatus::FieldError,
        LoadError::Build(_) => BifiniteStatus::BuildError,
    }
}

fn fail(e: LoadError) -> BifiniteStatus {
    let status = load_status(&e);
    let msg = match &e {
        LoadError::Build(b) => format!("{}: {b}", b.check_name()),
        other => other.to_string(),
    };
    set_error(msg);
    status
}

/// Runs `body`, converting panics into [`BifiniteStatus::Panic`].
fn guarded(body: impl FnOnce() -> BifiniteStatus) -> BifiniteStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|_| {
        set_error("internal panic");
        BifiniteStatus::Panic
    })
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, BifiniteStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(BifiniteStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        BifiniteStatus::InvalidUtf8
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes replaced").into_raw()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bifinite_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn bifinite_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses `text` and builds the extension it declares.
///
/// `field` is a prime, [`BIFINITE_FIELD_RATIONALS`] or
/// [`BIFINITE_FIELD_FROM_INPUT`]. On success `*out` owns a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bifinite_extension_load(
    text: *const c_char,
    field: u64,
    adjoin_unit: bool,
    out: *mut *mut BifiniteExtension,
) -> BifiniteStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return BifiniteStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let spec = match field {
            BIFINITE_FIELD_RATIONALS => FieldSpec::Rationals,
            BIFINITE_FIELD_FROM_INPUT => match parse_presentation(text) {
                Ok(p) => p.field_or_default(),
                Err(e) => return fail(e.into()),
            },
            p => match FieldSpec::prime(p) {
                Ok(s) => s,
                Err(e) => return fail(e.into()),
            },
        };
        let loaded = match spec {
            FieldSpec::Rationals => load_extension(&Rationals, text, adjoin_unit).map(Loaded::Rational),
            FieldSpec::PrimeField { characteristic } => PrimeField::new(characteristic)
                .map_err(LoadError::from)
                .and_then(|f| load_extension(&f, text, adjoin_unit).map(Loaded::Prime)),
        };
        match loaded {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(BifiniteExtension { inner }));
                BifiniteStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `ext` must come from [`bifinite_extension_load`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn bifinite_extension_free(ext: *mut BifiniteExtension) {
    if !ext.is_null() {
        drop(Box::from_raw(ext));
    }
}

/// Dimensions of `A` and `B` over the ground field.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bifinite_extension_dims(
    ext: *const BifiniteExtension,
    dim_a: *mut usize,
    dim_b: *mut usize,
) -> BifiniteStatus {
    guarded(|| {
        if ext.is_null() || dim_a.is_null() || dim_b.is_null() {
            set_error("null argument");
            return BifiniteStatus::NullArgument;
        }
        let (a, b) = match &(*ext).inner {
            Loaded::Prime(e) => dims(e),
            Loaded::Rational(e) => dims(e),
        };
        *dim_a = a;
        *dim_b = b;
        BifiniteStatus::Ok
    })
}

fn dims<F: Field>(e: &LoadedExtension<F>) -> (usize, usize) {
    (e.rings.embedding.big.dim(), e.rings.embedding.small.dim())
}

fn check<F: Field>(e: &LoadedExtension<F>, cutoff: usize) -> Result<ExtensionReport, AlgebraError> {
    check_quotient_bifinite(&e.rings, cutoff)
}

/// Projective dimension of `A/B` as a `B`-bimodule, plus the full report as
/// JSON in `*json_out` (skipped when `json_out` is NULL; free it with
/// [`bifinite_string_free`]).
///
/// # Safety
/// `ext` and `n_b` must be valid; `json_out` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn bifinite_extension_check(
    ext: *const BifiniteExtension,
    cutoff: usize,
    n_b: *mut BifinitePd,
    json_out: *mut *mut c_char,
) -> BifiniteStatus {
    guarded(|| {
        if ext.is_null() || n_b.is_null() {
            set_error("null argument");
            return BifiniteStatus::NullArgument;
        }
        if cutoff == 0 {
            set_error("cutoff must be positive");
            return BifiniteStatus::InvalidArgument;
        }
        let report = match &(*ext).inner {
            Loaded::Prime(e) => check(e, cutoff),
            Loaded::Rational(e) => check(e, cutoff),
        };
        match report {
            Ok(r) => {
                *n_b = r.n_b.into();
                if !json_out.is_null() {
                    *json_out = into_c_string(serde_json::to_string(&r).expect("report serializes"));
                }
                BifiniteStatus::Ok
            }
            Err(e) => fail(e.into()),
        }
    })
}

/// Global dimension of `A` or `B`, up to `cutoff`.
///
/// # Safety
/// `ext` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bifinite_extension_global_dimension(
    ext: *const BifiniteExtension,
    side: BifiniteSide,
    cutoff: usize,
    out: *mut BifinitePd,
) -> BifiniteStatus {
    guarded(|| {
        if ext.is_null() || out.is_null() {
            set_error("null argument");
            return BifiniteStatus::NullArgument;
        }
        if cutoff == 0 {
            set_error("cutoff must be positive");
            return BifiniteStatus::InvalidArgument;
        }
        let result = match (&(*ext).inner, side) {
            (Loaded::Prime(e), BifiniteSide::A) => global_dimension(&e.rings.a, cutoff),
            (Loaded::Prime(e), BifiniteSide::B) => global_dimension(&e.rings.b, cutoff),
            (Loaded::Rational(e), BifiniteSide::A) => global_dimension(&e.rings.a, cutoff),
            (Loaded::Rational(e), BifiniteSide::B) => global_dimension(&e.rings.b, cutoff),
        };
        match result {
            Ok(s) => {
                *out = s.into();
                BifiniteStatus::Ok
            }
            Err(e) => fail(e.into()),
        }
    })
}

/// Runs the command-line tool in-process. `argv[0]` is the program name.
/// Returns the process exit code; stdout and stderr are stored in `*out` and
/// `*err` when those are non-NULL (free with [`bifinite_string_free`]).
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn bifinite_cli_run(
    argc: usize,
    argv: *const *const c_char,
    out: *mut *mut c_char,
    err: *mut *mut c_char,
) -> i32 {
    let mut args = Vec::with_capacity(argc);
    if argc > 0 && argv.is_null() {
        set_error("null argv");
        return bifinite::cli::EXIT_PARSE;
    }
    for i in 0..argc {
        match read_str(*argv.add(i)) {
            Ok(s) => args.push(s.to_string()),
            Err(_) => return bifinite::cli::EXIT_PARSE,
        }
    }
    let result = catch_unwind(|| bifinite::cli::run(args));
    let output = match result {
        Ok(o) => o,
        Err(_) => {
            set_error("internal panic");
            return bifinite::cli::EXIT_FAILED;
        }
    };
    if !out.is_null() {
        *out = into_c_string(output.stdout);
    }
    if !err.is_null() {
        *err = into_c_string(output.stderr);
    }
    output.code
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn bifinite_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
