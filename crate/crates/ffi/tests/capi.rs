use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use tprqa_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> Option<String> {
    let p = tprqa_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string())
}

struct Session {
    engine: *mut TprqaEngine,
    story: *mut TprqaStory,
}

impl Session {
    fn new(config: Option<&str>, task: u8) -> Self {
        let cfg = config.map(c);
        let mut engine = ptr::null_mut();
        let mut story = ptr::null_mut();
        unsafe {
            let st = tprqa_engine_new(cfg.as_ref().map_or(ptr::null(), |s| s.as_ptr()), &mut engine);
            assert_eq!(st, TprqaStatus::Ok, "{:?}", last_error());
            assert_eq!(tprqa_story_new(engine, task, &mut story), TprqaStatus::Ok);
        }
        Self { engine, story }
    }

    fn feed(&self, line: &str) -> (TprqaStatus, Option<String>) {
        let line = c(line);
        let mut out = ptr::null_mut();
        unsafe {
            let st = tprqa_story_feed(self.story, line.as_ptr(), &mut out);
            let text = (!out.is_null()).then(|| CStr::from_ptr(out).to_str().unwrap().to_string());
            tprqa_string_free(out);
            (st, text)
        }
    }
}

impl Drop for Session {
    fn drop(&mut self) {
        unsafe {
            tprqa_story_free(self.story);
            tprqa_engine_free(self.engine);
        }
    }
}

#[test]
fn answers_a_location_story() {
    let s = Session::new(None, 1);
    for line in ["Mary moved to the bathroom.", "John went to the hallway.", "Daniel went back to the hallway."] {
        assert_eq!(s.feed(line), (TprqaStatus::Ok, None));
    }
    assert_eq!(s.feed("Where is Mary?"), (TprqaStatus::Ok, Some("bathroom".into())));
    assert_eq!(s.feed("Sandra moved to the garden."), (TprqaStatus::Ok, None));
    assert_eq!(s.feed("Where is Daniel?"), (TprqaStatus::Ok, Some("hallway".into())));

    let mut times = [0usize; 4];
    let mut len = 0;
    let st = unsafe { tprqa_story_clues(s.story, times.as_mut_ptr(), times.len(), &mut len) };
    assert_eq!(st, TprqaStatus::Ok);
    assert_eq!(&times[..len], &[3]);
}

#[test]
fn story_outlives_engine() {
    let mut engine = ptr::null_mut();
    let mut story = ptr::null_mut();
    unsafe {
        assert_eq!(tprqa_engine_new(ptr::null(), &mut engine), TprqaStatus::Ok);
        assert_eq!(tprqa_story_new(engine, 6, &mut story), TprqaStatus::Ok);
        tprqa_engine_free(engine);
        let mut out = ptr::null_mut();
        assert_eq!(tprqa_story_feed(story, c("John went to the kitchen.").as_ptr(), &mut out), TprqaStatus::Ok);
        assert_eq!(tprqa_story_feed(story, c("Is John in the kitchen?").as_ptr(), &mut out), TprqaStatus::Ok);
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), "yes");
        tprqa_string_free(out);
        tprqa_story_free(story);
    }
}

#[test]
fn error_codes() {
    let s = Session::new(None, 1);
    let (st, text) = s.feed("Colorless green ideas sleep furiously.");
    assert_eq!(st, TprqaStatus::Parse);
    assert!(text.is_none());
    assert!(last_error().is_some());
    assert_eq!(s.feed("Mary went to the office."), (TprqaStatus::Ok, None));
    assert!(last_error().is_none());
    assert_eq!(s.feed("Where is Bill?").0, TprqaStatus::NoAnswer);

    unsafe {
        assert_eq!(tprqa_story_feed(ptr::null_mut(), c("x").as_ptr(), ptr::null_mut()), TprqaStatus::NullPointer);
        assert_eq!(tprqa_story_feed(s.story, ptr::null(), ptr::null_mut()), TprqaStatus::NullPointer);
        let bad = [0xffu8, 0xfe, 0];
        assert_eq!(tprqa_story_feed(s.story, bad.as_ptr().cast(), ptr::null_mut()), TprqaStatus::InvalidUtf8);
        let mut story = ptr::null_mut();
        assert_eq!(tprqa_story_new(s.engine, 21, &mut story), TprqaStatus::InvalidArgument);
        assert!(story.is_null());
        assert_eq!(tprqa_engine_new(ptr::null(), ptr::null_mut()), TprqaStatus::NullPointer);
        let mut len = 0;
        assert_eq!(tprqa_story_clues(s.story, ptr::null_mut(), 0, &mut len), TprqaStatus::Ok);
        assert_eq!(len, 0);
    }
}

#[test]
fn config_text() {
    let mut engine = ptr::null_mut();
    unsafe {
        assert_eq!(tprqa_engine_new(c("dim = 4").as_ptr(), &mut engine), TprqaStatus::Config);
        assert!(engine.is_null());
        assert!(last_error().unwrap().contains("dim"));
        assert_eq!(tprqa_engine_new(c("dim = [").as_ptr(), &mut engine), TprqaStatus::Config);
        let missing = c("grammar_lexicon = \"/nonexistent/grammar.txt\"");
        assert_ne!(tprqa_engine_new(missing.as_ptr(), &mut engine), TprqaStatus::Ok);
    }
    let s = Session::new(Some("dim = 128\nmode = \"sampled\"\nseed = 9"), 1);
    s.feed("Sandra journeyed to the garden.");
    assert_eq!(s.feed("Where is Sandra?"), (TprqaStatus::Ok, Some("garden".into())));
}

#[test]
fn status_names_are_distinct() {
    use TprqaStatus::*;
    let all = [Ok, NullPointer, InvalidUtf8, InvalidArgument, Config, Io, Parse, NoAnswer, Panic];
    let names: std::collections::HashSet<String> = all
        .iter()
        .map(|&s| unsafe { CStr::from_ptr(tprqa_status_name(s)) }.to_str().unwrap().to_string())
        .collect();
    assert_eq!(names.len(), all.len());
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/tprqa.h")).unwrap();
    for name in [
        "typedef struct TprqaEngine TprqaEngine;",
        "typedef struct TprqaStory TprqaStory;",
        "TPRQA_STATUS_NO_ANSWER = 7",
        "tprqa_engine_new(",
        "tprqa_engine_free(",
        "tprqa_story_new(",
        "tprqa_story_feed(",
        "tprqa_story_clues(",
        "tprqa_story_free(",
        "tprqa_string_free(",
        "tprqa_last_error(",
        "tprqa_status_name(",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

// Compiles and runs a C program against the header and the static library.
#[test]
fn c_program_links() {
    let Some(cc) = ["cc", "gcc", "clang"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok()) else {
        eprintln!("no C compiler; skipped");
        return;
    };
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap();
    let lib = profile_dir.join("libtprqa_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipped", lib.display());
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new(cc)
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "bathroom");
}
