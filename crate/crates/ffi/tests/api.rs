use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use surfcalc_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn surface(json: &str) -> *mut SurfcalcSurface {
    let mut out = ptr::null_mut();
    let status = unsafe { surfcalc_surface_from_json(c(json).as_ptr(), &mut out) };
    assert_eq!(status, SurfcalcStatus::Ok);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(surfcalc_last_error()) }.to_string_lossy().into_owned()
}

const LADDER: &str = r#"{"genus":"inf","orient":"or","boundary":0,"ends":"union(pt(or), pt(or))"}"#;
const LOCH_NESS: &str = r#"{"genus":"inf","orient":"or","boundary":0,"ends":"pt(or)"}"#;

#[test]
fn surfaces_round_trip_through_handles() {
    let (a, b) = (surface(LADDER), surface(LOCH_NESS));
    let mut verdict = SurfcalcVerdict::Unknown;
    unsafe {
        assert_eq!(surfcalc_surface_homeomorphic(a, b, &mut verdict), SurfcalcStatus::Ok);
        assert_eq!(verdict, SurfcalcVerdict::Distinct);
        assert_eq!(surfcalc_surface_homeomorphic(a, a, &mut verdict), SurfcalcStatus::Ok);
        assert_eq!(verdict, SurfcalcVerdict::Homeomorphic);

        let mut n = 0;
        assert_eq!(surfcalc_surface_genus_ends(a, &mut n), SurfcalcStatus::Ok);
        assert_eq!(n, 2);
        assert_eq!(surfcalc_cohomology_rank(a, 4, &mut n), SurfcalcStatus::Ok);
        assert_eq!(n, 1);
        assert_eq!(surfcalc_cohomology_rank(b, 4, &mut n), SurfcalcStatus::Ok);
        assert_eq!(n, 0);
        assert_eq!(surfcalc_cohomology_rank(a, 0, &mut n), SurfcalcStatus::OutOfRange);

        surfcalc_surface_free(a);
        surfcalc_surface_free(b);
        surfcalc_surface_free(ptr::null_mut());
    }
}

#[test]
fn cantor_ends_report_infinite_rank() {
    let s = surface(r#"{"genus":"inf","orient":"or","boundary":0,"ends":"cantor(or)"}"#);
    let mut n = 0;
    unsafe {
        assert_eq!(surfcalc_surface_genus_ends(s, &mut n), SurfcalcStatus::Ok);
        assert_eq!(n, -1);
        assert_eq!(surfcalc_cohomology_rank(s, 3, &mut n), SurfcalcStatus::Ok);
        assert_eq!(n, -1);
        surfcalc_surface_free(s);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let mut out = ptr::null_mut();
    unsafe {
        let bad = c(r#"{"genus":"inf","orient":"or","boundary":1,"ends":"pt(or)"}"#);
        assert_eq!(surfcalc_surface_from_json(bad.as_ptr(), &mut out), SurfcalcStatus::InvalidSurface);
        assert!(out.is_null());
        assert!(last_error().contains("boundary"));

        assert_eq!(surfcalc_surface_from_json(c("{").as_ptr(), &mut out), SurfcalcStatus::ParseError);
        assert_eq!(surfcalc_surface_from_json(ptr::null(), &mut out), SurfcalcStatus::NullPointer);
        assert_eq!(surfcalc_surface_from_json(c("{}").as_ptr(), ptr::null_mut()), SurfcalcStatus::NullPointer);

        let small = surface(r#"{"genus":2,"orient":"or","boundary":0,"ends":"cantor(planar)"}"#);
        let mut n = 0;
        assert_eq!(surfcalc_cohomology_rank(small, 4, &mut n), SurfcalcStatus::GenusTooSmall);
        surfcalc_surface_free(small);
    }
}

#[test]
fn ends_and_words() {
    let mut verdict = SurfcalcVerdict::Unknown;
    unsafe {
        let (a, b) = (c("union(pt(or), cantor(planar))"), c("union(cantor(planar), pt(or))"));
        assert_eq!(surfcalc_ends_equivalent(a.as_ptr(), b.as_ptr(), &mut verdict), SurfcalcStatus::Ok);
        assert_eq!(verdict, SurfcalcVerdict::Homeomorphic);
        assert_eq!(surfcalc_ends_equivalent(c("pt(").as_ptr(), b.as_ptr(), &mut verdict), SurfcalcStatus::ParseError);

        let mut w = ptr::null_mut();
        assert_eq!(surfcalc_word_parse(c("h0.c{s0@1}.H0.h2.h2").as_ptr(), &mut w), SurfcalcStatus::Ok);
        let mut v = 0;
        assert_eq!(surfcalc_word_psi(w, 2, 0, &mut v), SurfcalcStatus::Ok);
        assert_eq!(v, 2);
        assert_eq!(surfcalc_word_psi(w, 0, 0, &mut v), SurfcalcStatus::Ok);
        assert_eq!(v, 0);
        assert_eq!(surfcalc_word_psi(w, 2, 2, &mut v), SurfcalcStatus::OutOfRange);

        let mut text = ptr::null_mut();
        assert_eq!(surfcalc_word_normal_form(w, &mut text), SurfcalcStatus::Ok);
        assert_eq!(CStr::from_ptr(text).to_str().unwrap(), "c{s0@2}.h2.h2");
        surfcalc_string_free(text);
        surfcalc_word_free(w);

        assert_eq!(surfcalc_word_parse(c("x1").as_ptr(), &mut w), SurfcalcStatus::ParseError);
        assert!(w.is_null());
    }
}

#[test]
fn relation_check() {
    let mut ok = false;
    unsafe {
        assert_eq!(surfcalc_relation_check(8, &mut ok), SurfcalcStatus::Ok);
        assert!(ok);
        assert_eq!(surfcalc_relation_check(3, &mut ok), SurfcalcStatus::OutOfRange);
    }
}

#[test]
fn header_declares_every_export_and_compiles() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/surfcalc.h")).unwrap();
    let src = include_str!("../src/lib.rs");
    for line in src.lines() {
        let Some(rest) = line.split("extern \"C\" fn ").nth(1) else { continue };
        let name = rest.split('(').next().unwrap();
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    // Syntax-check as C when a compiler is around.
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/surfcalc.h");
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", path]).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libsurfcalc_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let dir = env!("CARGO_MANIFEST_DIR");
    let bin = std::env::temp_dir().join(format!("surfcalc_smoke_{}", std::process::id()));
    let built = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-I", &format!("{dir}/include"), &format!("{dir}/tests/c/smoke.c")])
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(built.status.success(), "{}", String::from_utf8_lossy(&built.stderr));
    let ran = Command::new(&bin).output().unwrap();
    let _ = std::fs::remove_file(&bin);
    assert!(ran.status.success(), "exit {:?}", ran.status);
    assert_eq!(String::from_utf8_lossy(&ran.stdout), "rank=1 normal=1 relation=1\n");
}
