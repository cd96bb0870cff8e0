//! C interface to the tprqa reasoner.
//!
//! An engine holds the shared configuration and banks. Stories are created
//! from an engine and fed one line at a time; a question line yields an
//! answer string that the caller releases with [`tprqa_string_free`].
//!
//! Every function returns a [`TprqaStatus`]. On failure the message is
//! available from [`tprqa_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tprqa::answerer::AnswerLexicon;
use tprqa::harness::config::{Config, ConfigError};
use tprqa::reasoner::{Fed, Inference, ReasonError, Reasoner, StorySession};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TprqaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Config = 4,
    Io = 5,
    Parse = 6,
    NoAnswer = 7,
    Panic = 8,
}

/// Opaque engine handle.
pub struct TprqaEngine {
    reasoner: Reasoner,
    answers: AnswerLexicon,
    stories: usize,
}

/// Opaque story handle. Independent of the engine once created.
pub struct TprqaStory {
    session: StorySession<'static>,
    answers: AnswerLexicon,
    time: usize,
    last: Option<Inference>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(TprqaStatus, String);

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        let status = match &e {
            ConfigError::Io { .. } => TprqaStatus::Io,
            _ => TprqaStatus::Config,
        };
        Failure(status, e.to_string())
    }
}

impl From<ReasonError> for Failure {
    fn from(e: ReasonError) -> Self {
        let status = match &e {
            ReasonError::Parse(_) => TprqaStatus::Parse,
            _ => TprqaStatus::NoAnswer,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TprqaStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TprqaStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            TprqaStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(TprqaStatus::NullPointer, format!("`{what}` is null"))
}

/// # Safety
/// `s` must be null or a valid nul-terminated string.
unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Failure(TprqaStatus::InvalidUtf8, format!("`{what}`: {e}")))
}

/// Creates an engine. `config_toml` is the text of a configuration file, or
/// null for the defaults.
///
/// # Safety
/// `config_toml` must be null or a valid nul-terminated string; `out` must be
/// a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn tprqa_engine_new(config_toml: *const c_char, out: *mut *mut TprqaEngine) -> TprqaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let config = if config_toml.is_null() {
            Config::default()
        } else {
            Config::from_toml(text(config_toml, "config_toml")?, "<config>")?
        };
        let engine = TprqaEngine { reasoner: config.reasoner()?, answers: config.answers()?, stories: 0 };
        *out = Box::into_raw(Box::new(engine));
        Ok(())
    })
}

/// # Safety
/// `engine` must be null or a handle from [`tprqa_engine_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tprqa_engine_free(engine: *mut TprqaEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Starts a story in category `task` (1 to 20).
///
/// # Safety
/// `engine` must be a live engine handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tprqa_story_new(engine: *mut TprqaEngine, task: u8, out: *mut *mut TprqaStory) -> TprqaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let engine = engine.as_mut().ok_or_else(|| null("engine"))?;
        if !(1..=20).contains(&task) {
            return Err(Failure(TprqaStatus::InvalidArgument, format!("category {task} is not in 1..=20")));
        }
        let session = engine.reasoner.clone().into_session(task, engine.stories)?;
        engine.stories += 1;
        let story = TprqaStory { session, answers: engine.answers.clone(), time: 0, last: None };
        *out = Box::into_raw(Box::new(story));
        Ok(())
    })
}

/// Feeds one line. For a question, `*answer` receives a new string owned by
/// the caller; for a statement it is set to null. `answer` may be null when
/// the caller does not want the text.
///
/// # Safety
/// `story` must be a live story handle; `line` a valid nul-terminated string;
/// `answer` null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tprqa_story_feed(story: *mut TprqaStory, line: *const c_char, answer: *mut *mut c_char) -> TprqaStatus {
    guard(|| {
        if !answer.is_null() {
            *answer = ptr::null_mut();
        }
        let story = story.as_mut().ok_or_else(|| null("story"))?;
        let line = text(line, "line")?;
        story.time += 1;
        match story.session.feed(story.time, line)? {
            Fed::Statement(_) => Ok(()),
            Fed::Answered(_, inf) => {
                let s = story.answers.format(&inf.answer).map_err(|e| Failure(TprqaStatus::NoAnswer, e.to_string()))?;
                story.last = Some(inf);
                if !answer.is_null() {
                    *answer = CString::new(s).map_err(|e| Failure(TprqaStatus::NoAnswer, e.to_string()))?.into_raw();
                }
                Ok(())
            }
        }
    })
}

/// Writes up to `cap` line numbers used by the most recent answer into
/// `times` and their total number into `len`.
///
/// # Safety
/// `story` must be a live story handle; `times` must hold `cap` elements (it
/// may be null when `cap` is 0); `len` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tprqa_story_clues(story: *const TprqaStory, times: *mut usize, cap: usize, len: *mut usize) -> TprqaStatus {
    guard(|| {
        let story = story.as_ref().ok_or_else(|| null("story"))?;
        if len.is_null() {
            return Err(null("len"));
        }
        if times.is_null() && cap > 0 {
            return Err(null("times"));
        }
        let clues = story.last.as_ref().map(Inference::clue_times).unwrap_or_default();
        for (i, t) in clues.iter().take(cap).enumerate() {
            *times.add(i) = *t;
        }
        *len = clues.len();
        Ok(())
    })
}

/// # Safety
/// `story` must be null or a handle from [`tprqa_story_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tprqa_story_free(story: *mut TprqaStory) {
    if !story.is_null() {
        drop(Box::from_raw(story));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tprqa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn tprqa_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn tprqa_status_name(status: TprqaStatus) -> *const c_char {
    let s: &'static CStr = match status {
        TprqaStatus::Ok => c"ok",
        TprqaStatus::NullPointer => c"null pointer",
        TprqaStatus::InvalidUtf8 => c"invalid utf-8",
        TprqaStatus::InvalidArgument => c"invalid argument",
        TprqaStatus::Config => c"configuration error",
        TprqaStatus::Io => c"i/o error",
        TprqaStatus::Parse => c"parse error",
        TprqaStatus::NoAnswer => c"no answer",
        TprqaStatus::Panic => c"panic",
    };
    s.as_ptr()
}
