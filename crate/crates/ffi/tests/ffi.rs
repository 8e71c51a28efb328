use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

use golog_synth_ffi::*;

fn carrier() -> CString {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/carrier");
    CString::new(dir.display().to_string()).unwrap()
}

fn last_error() -> String {
    let p = gs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn load() -> *mut GsBundle {
    let mut b = ptr::null_mut();
    assert_eq!(
        unsafe { gs_bundle_load(carrier().as_ptr(), &mut b) },
        GsStatus::Ok
    );
    assert!(!b.is_null());
    b
}

#[test]
fn compile_and_serialize() {
    let b = load();
    let mut a = ptr::null_mut();
    unsafe {
        assert_eq!(gs_compile(b, 1000, &mut a), GsStatus::Ok);
        assert_eq!(gs_automaton_location_count(a), 6);
        let json = gs_automaton_to_json(a);
        let mut back = ptr::null_mut();
        assert_eq!(gs_automaton_from_json(json, &mut back), GsStatus::Ok);
        let again = gs_automaton_to_json(back);
        assert_eq!(CStr::from_ptr(json), CStr::from_ptr(again));
        let name = CString::new("pta").unwrap();
        let dot = gs_automaton_to_dot(a, name.as_ptr());
        assert!(CStr::from_ptr(dot).to_str().unwrap().starts_with("digraph"));
        for s in [json, again, dot] {
            gs_string_free(s);
        }
        gs_automaton_free(back);
        gs_automaton_free(a);
        gs_bundle_free(b);
    }
}

#[test]
fn synthesize_then_verify() {
    let b = load();
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(gs_synthesize(b, 0, 0, 0, &mut c), GsStatus::Ok);
        assert!(gs_automaton_location_count(c) > 0);
        assert_eq!(gs_verify(b, c, 8), GsStatus::Ok);
        gs_automaton_free(c);
        gs_bundle_free(b);
    }
}

#[test]
fn errors_are_reported() {
    let mut b = ptr::null_mut();
    let missing = CString::new("/nonexistent/project").unwrap();
    unsafe {
        assert_eq!(
            gs_bundle_load(missing.as_ptr(), &mut b),
            GsStatus::InvalidInput
        );
        assert!(b.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(gs_bundle_load(ptr::null(), &mut b), GsStatus::NullPointer);
        assert!(last_error().contains("dir"));
        let mut a = ptr::null_mut();
        assert_eq!(gs_compile(ptr::null(), 10, &mut a), GsStatus::NullPointer);
        let bad = CString::new("{").unwrap();
        assert_eq!(
            gs_automaton_from_json(bad.as_ptr(), &mut a),
            GsStatus::InvalidInput
        );
        assert!(a.is_null());
        let b = load();
        assert!(gs_last_error().is_null());
        assert_eq!(
            gs_synthesize(b, 1, 11, 5, &mut a),
            GsStatus::ResourceExhausted
        );
        assert_eq!(gs_verify(b, ptr::null(), 4), GsStatus::NullPointer);
        gs_bundle_free(b);
        gs_bundle_free(ptr::null_mut());
        gs_automaton_free(ptr::null_mut());
        gs_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/golog_synth.h"),
    )
    .unwrap();
    for f in [
        "gs_bundle_load",
        "gs_synthesize",
        "gs_verify",
        "gs_last_error",
        "gs_string_free",
        "GS_STATUS_UNREALIZABLE",
    ] {
        assert!(header.contains(f), "{f}");
    }
}

#[test]
fn header_compiles_as_c() {
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = std::env::temp_dir().join(format!("gs-header-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"golog_synth.h\"\nint main(void) { GsBundle *b = 0; return gs_bundle_load(\"x\", &b) == GS_STATUS_OK; }\n",
    )
    .unwrap();
    let status = std::process::Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .status();
    std::fs::remove_dir_all(&dir).ok();
    match status {
        Ok(s) => assert!(s.success()),
        Err(e) => eprintln!("no C compiler: {e}"),
    }
}
