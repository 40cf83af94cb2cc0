//! The C ABI called from Rust, and a C program compiled against the
//! generated header.

use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use bifinite_ffi::*;

const KX2: &str = "vertex v\narrow x: v -> v\nrelation x.x\ncap 2\n\ngenerator v\n";
const EX1: &str = include_str!("../../core/presentations/ex1.pres");

fn load(text: &str, field: u64) -> (BifiniteStatus, *mut BifiniteExtension) {
    let text = CString::new(text).unwrap();
    let mut h = ptr::null_mut();
    let s = unsafe { bifinite_extension_load(text.as_ptr(), field, false, &mut h) };
    (s, h)
}

fn last_error() -> String {
    let p = bifinite_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn example_extension_round_trip() {
    for field in [BIFINITE_FIELD_FROM_INPUT, BIFINITE_FIELD_RATIONALS, 1009] {
        let (s, h) = load(EX1, field);
        assert_eq!(s, BifiniteStatus::Ok);
        let (mut a, mut b) = (0, 0);
        assert_eq!(unsafe { bifinite_extension_dims(h, &mut a, &mut b) }, BifiniteStatus::Ok);
        assert_eq!(a, b + 1);

        let mut n_b = BifinitePd { kind: BifinitePdKind::Zero, value: 0 };
        let mut json = ptr::null_mut();
        assert_eq!(unsafe { bifinite_extension_check(h, 30, &mut n_b, &mut json) }, BifiniteStatus::Ok);
        assert_eq!(n_b, BifinitePd { kind: BifinitePdKind::Finite, value: 2 });
        let report: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
        assert_eq!(report["dim_quotient"], 1);
        unsafe {
            bifinite_string_free(json);
            bifinite_extension_free(h);
        }
    }
}

#[test]
fn global_dimensions_of_dual_numbers() {
    let (s, h) = load(KX2, 1009);
    assert_eq!(s, BifiniteStatus::Ok);
    let mut out = BifinitePd { kind: BifinitePdKind::Zero, value: 0 };
    unsafe {
        assert_eq!(bifinite_extension_global_dimension(h, BifiniteSide::A, 7, &mut out), BifiniteStatus::Ok);
        assert_eq!(out, BifinitePd { kind: BifinitePdKind::AtLeast, value: 7 });
        assert_eq!(bifinite_extension_global_dimension(h, BifiniteSide::B, 7, &mut out), BifiniteStatus::Ok);
        assert_eq!(out, BifinitePd { kind: BifinitePdKind::Finite, value: 0 });
        assert_eq!(bifinite_extension_global_dimension(h, BifiniteSide::B, 0, &mut out), BifiniteStatus::InvalidArgument);
        bifinite_extension_free(h);
    }
}

#[test]
fn error_codes_and_messages() {
    let (s, h) = load("vertex 1\nvertex 2\narrow a: 1 -> 2\narrow b: 2 -> 1\nrelation a - b\ncap 3\n", 1009);
    assert_eq!(s, BifiniteStatus::ParseError);
    assert!(h.is_null());
    assert!(last_error().contains("line 5"), "{}", last_error());

    let (s, _) = load("vertex 1\narrow a: 1 -> 1\ncap 5\n\ngenerator 1\n", 1009);
    assert_eq!(s, BifiniteStatus::BuildError);
    assert!(last_error().starts_with("NotAdmissible"), "{}", last_error());

    assert_eq!(load(KX2, 10).0, BifiniteStatus::FieldError);
    assert_eq!(load(KX2.trim_end_matches("generator v\n"), 1009).0, BifiniteStatus::BuildError);
    assert!(last_error().contains("no subalgebra generators"), "{}", last_error());

    let mut h = ptr::null_mut();
    assert_eq!(unsafe { bifinite_extension_load(ptr::null(), 1009, false, &mut h) }, BifiniteStatus::NullArgument);
    let bad = [0xffu8, 0];
    assert_eq!(
        unsafe { bifinite_extension_load(bad.as_ptr().cast(), 1009, false, &mut h) },
        BifiniteStatus::InvalidUtf8
    );

    let (s, h) = load(KX2, 1009);
    assert_eq!(s, BifiniteStatus::Ok);
    assert!(bifinite_last_error().is_null());
    unsafe {
        assert_eq!(bifinite_extension_dims(h, ptr::null_mut(), ptr::null_mut()), BifiniteStatus::NullArgument);
        bifinite_extension_free(h);
        bifinite_extension_free(ptr::null_mut());
        bifinite_string_free(ptr::null_mut());
    }
}

#[test]
fn cli_passthrough() {
    let args: Vec<CString> = ["bifinite", "info", "builtin:kx2", "--format", "json"].iter().map(|a| CString::new(*a).unwrap()).collect();
    let argv: Vec<*const _> = args.iter().map(|a| a.as_ptr()).collect();
    let (mut out, mut err) = (ptr::null_mut(), ptr::null_mut());
    let code = unsafe { bifinite_cli_run(argv.len(), argv.as_ptr(), &mut out, &mut err) };
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(out) }.to_str().unwrap()).unwrap();
    assert_eq!(v["algebras"][0]["dim"], 2);
    unsafe {
        bifinite_string_free(out);
        bifinite_string_free(err);
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(bifinite_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Compiles `tests/smoke.c` against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).parent().unwrap().join("debug");
    let lib = lib_dir.join("libbifinite_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or {} missing", lib.display());
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("bifinite_smoke");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke program failed to build");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "dims 2 1\nn_b finite 0\nparse error 3\n");
}
