//! The C interface exercised through its Rust declarations, then from C
//! itself against the generated header and the static library.

use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use incoherence_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { inc_string_free(p) };
    s
}

fn last_error() -> Option<String> {
    let p = inc_last_error_message();
    (!p.is_null()).then(|| take_string(p))
}

fn parse_diagram(text: &str) -> (IncStatus, *mut IncDiagram) {
    let c = CString::new(text).unwrap();
    let mut d = ptr::null_mut();
    let status = unsafe { inc_diagram_parse(c.as_ptr(), &mut d) };
    (status, d)
}

fn parse_cartan(json: &str) -> (IncStatus, *mut IncCartan) {
    let c = CString::new(json).unwrap();
    let mut a = ptr::null_mut();
    let status = unsafe { inc_cartan_from_json(c.as_ptr(), &mut a) };
    (status, a)
}

const PENTAGON_CARTAN: &str = "[[2,-1,0,0,-1],[-2,2,-1,0,0],[0,-1,2,-1,0],[0,0,-1,2,-1],[-1,0,0,-1,2]]";

#[test]
fn diagram_handles_and_analysis() {
    let (status, d) = parse_diagram("rank = 5\nedge 1 2 4\nedge 2 3 3\nedge 3 4 3\nedge 4 5 3\nedge 5 1 3\n");
    assert_eq!(status, IncStatus::Ok);
    assert_eq!(last_error(), None);
    let mut rank = 0usize;
    assert_eq!(unsafe { inc_diagram_rank(d, &mut rank) }, IncStatus::Ok);
    assert_eq!(rank, 5);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { inc_diagram_analyze_json(d, &mut out) }, IncStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["signature"]["value"], serde_json::json!({"positives": 4, "zeros": 0, "negatives": 1}));
    assert_eq!(v["lanner"]["value"], true);
    assert_eq!(v["subdiagrams"]["value"].as_array().unwrap().len(), 30);
    unsafe { inc_diagram_free(d) };
}

#[test]
fn parse_errors_set_status_and_message() {
    let (status, d) = parse_diagram("rank = 3\nedge 1 2 7\n");
    assert_eq!(status, IncStatus::InvalidInput);
    assert!(d.is_null());
    let msg = last_error().unwrap();
    assert!(msg.contains('7'), "{msg}");

    let (status, a) = parse_cartan("[[2,-1],[0,2]]");
    assert_eq!(status, IncStatus::InvalidInput);
    assert!(a.is_null());
    assert!(last_error().is_some());

    // A later success clears the message.
    let p = inc_diagram_pentagon();
    let mut rank = 0usize;
    assert_eq!(unsafe { inc_diagram_rank(p, &mut rank) }, IncStatus::Ok);
    assert_eq!(last_error(), None);
    unsafe { inc_diagram_free(p) };
}

#[test]
fn null_and_utf8_arguments() {
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { inc_diagram_parse(ptr::null(), &mut d) }, IncStatus::NullPointer);
    assert!(last_error().unwrap().contains("text"));
    let c = CString::new("rank = 2").unwrap();
    assert_eq!(unsafe { inc_diagram_parse(c.as_ptr(), ptr::null_mut()) }, IncStatus::NullPointer);
    let bad = [0xffu8 as c_char, 0];
    assert_eq!(unsafe { inc_diagram_parse(bad.as_ptr(), &mut d) }, IncStatus::InvalidUtf8);
    let mut rank = 0usize;
    assert_eq!(unsafe { inc_diagram_rank(ptr::null(), &mut rank) }, IncStatus::NullPointer);
    // Freeing null is a no-op.
    unsafe {
        inc_diagram_free(ptr::null_mut());
        inc_cartan_free(ptr::null_mut());
        inc_string_free(ptr::null_mut());
    }
}

#[test]
fn cartan_type_relations_and_round_trip() {
    let (status, a) = parse_cartan(PENTAGON_CARTAN);
    assert_eq!(status, IncStatus::Ok);
    let mut t = IncCartanType::Positive;
    assert_eq!(unsafe { inc_cartan_type(a, &mut t) }, IncStatus::Ok);
    assert_eq!(t, IncCartanType::Negative);

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { inc_cartan_to_json(a, &mut out) }, IncStatus::Ok);
    let json = take_string(out);
    assert_eq!(
        serde_json::from_str::<serde_json::Value>(&json).unwrap(),
        serde_json::from_str::<serde_json::Value>(PENTAGON_CARTAN).unwrap()
    );

    let d = inc_diagram_pentagon();
    let mut all_pass = false;
    assert_eq!(unsafe { inc_verify_relations_json(a, d, 50, &mut all_pass, &mut out) }, IncStatus::Ok);
    assert!(all_pass);
    let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(report["pairs"].as_array().unwrap().len(), 10);

    // The symmetric matrix of the same diagram is also of negative type.
    let mut sym = ptr::null_mut();
    assert_eq!(unsafe { inc_cartan_from_diagram(d, &mut sym) }, IncStatus::Ok);
    assert_eq!(unsafe { inc_cartan_type(sym, &mut t) }, IncStatus::Ok);
    assert_eq!(t, IncCartanType::Negative);
    unsafe {
        inc_cartan_free(sym);
        inc_cartan_free(a);
        inc_diagram_free(d);
    }
}

#[test]
fn tampered_relations_fail_without_error() {
    let (_, a) = parse_cartan("[[2,-1,0,0,-1],[-1,2,-1,0,0],[0,-1,2,-1,0],[0,0,-1,2,-1],[-1,0,0,-1,2]]");
    let d = inc_diagram_pentagon();
    let mut all_pass = true;
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { inc_verify_relations_json(a, d, 50, &mut all_pass, &mut out) }, IncStatus::Ok);
    assert!(!all_pass);
    let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    let failing: Vec<_> = report["pairs"].as_array().unwrap().iter().filter(|p| p["pass"] == false).collect();
    assert_eq!(failing.len(), 1);
    assert_eq!((failing[0]["i"].as_u64(), failing[0]["j"].as_u64()), (Some(0), Some(1)));
    unsafe {
        inc_cartan_free(a);
        inc_diagram_free(d);
    }
}

#[test]
fn density_certificate_and_budget_shortfall() {
    let (_, a) = parse_cartan(PENTAGON_CARTAN);
    let mut certified = false;
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { inc_density_certify_json(a, false, 8, 1000, 200_000, &mut certified, &mut out) }, IncStatus::Ok);
    assert!(certified);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["outcome"]["status"], "certified");
    assert_eq!(v["revalidation"]["valid"], true);

    assert_eq!(unsafe { inc_density_certify_json(a, true, 1, 2, 1, &mut certified, &mut out) }, IncStatus::Ok);
    assert!(!certified);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["outcome"]["status"], "inconclusive");
    assert!(v["revalidation"].is_null());
    unsafe { inc_cartan_free(a) };
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(inc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

/// Directory holding the library artifacts of this build (`target/<profile>`).
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|deps| deps.parent()).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header_and_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("incoherence.h").exists(), "build.rs writes the header");
    let lib = artifact_dir().join("libincoherence_ffi.a");
    assert!(lib.exists(), "static library at {}", lib.display());
    let dir = tempfile_dir();
    let src = dir.join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "incoherence.h"

int main(void) {
    IncDiagram *d = NULL;
    if (inc_diagram_parse("rank = 5\nedge 1 2 4\nedge 2 3 3\nedge 3 4 3\nedge 4 5 3\nedge 5 1 3\n", &d) != INC_STATUS_OK) return 10;
    IncCartan *a = NULL;
    if (inc_cartan_from_json("[[2,-1,0,0,-1],[-2,2,-1,0,0],[0,-1,2,-1,0],[0,0,-1,2,-1],[-1,0,0,-1,2]]", &a) != INC_STATUS_OK) return 11;
    IncCartanType t;
    if (inc_cartan_type(a, &t) != INC_STATUS_OK || t != INC_CARTAN_TYPE_NEGATIVE) return 12;
    bool pass = false;
    char *json = NULL;
    if (inc_verify_relations_json(a, d, 50, &pass, &json) != INC_STATUS_OK || !pass) return 13;
    inc_string_free(json);
    IncDiagram *bad = NULL;
    if (inc_diagram_parse("rank two", &bad) != INC_STATUS_INVALID_INPUT || bad != NULL) return 14;
    char *msg = inc_last_error_message();
    if (msg == NULL || strlen(msg) == 0) return 15;
    printf("%s\n", msg);
    inc_string_free(msg);
    inc_cartan_free(a);
    inc_diagram_free(d);
    printf("version %s\n", inc_version());
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".to_string());
    let status = Command::new(&cc)
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&header_dir)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler is available");
    assert!(status.success(), "C smoke program compiles and links");
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}: {}", run.status.code(), String::from_utf8_lossy(&run.stdout));
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.contains("parse error"), "{stdout}");
    assert!(stdout.contains(&format!("version {}", env!("CARGO_PKG_VERSION"))));
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("incoherence-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
