//! Synthetic bAbI-format stories with simulation-oracle answers.

pub mod emit;
mod worlds;

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::rng::story_rng;
use crate::parser::{LogicalForm, QuestionForm};

pub use worlds::{is_named, GridWorld};

/// Keeps generator streams apart from the reasoner's story streams.
const GENERATOR_SALT: u64 = 0x6765_6e65_7261_7465;

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("category {0} is not in 1..=20")]
    InvalidCategory(u8),
    #[error("writing {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenLine {
    Statement { form: LogicalForm, text: String },
    Question { form: QuestionForm, text: String, answer: String, clues: Vec<usize> },
}

impl GenLine {
    pub fn text(&self) -> &str {
        match self {
            GenLine::Statement { text, .. } | GenLine::Question { text, .. } => text,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenStory {
    pub task: u8,
    pub lines: Vec<GenLine>,
    /// The location graph, for path-finding stories.
    pub grid: Option<GridWorld>,
}

/// `n` stories for `category`; story `i` depends only on `(seed, category, i)`.
pub fn generate(category: u8, n: usize, seed: u64) -> Result<Vec<GenStory>, GenerateError> {
    if !(1..=20).contains(&category) {
        return Err(GenerateError::InvalidCategory(category));
    }
    Ok((0..n)
        .map(|i| {
            let mut rng = story_rng(seed ^ GENERATOR_SALT, category, i);
            worlds::story(category, &mut rng)
        })
        .collect())
}

/// bAbI layout: `N text`, questions as `N question\tanswer\tclues`.
pub fn to_babi_text(stories: &[GenStory]) -> String {
    let mut out = String::new();
    for story in stories {
        for (i, line) in story.lines.iter().enumerate() {
            match line {
                GenLine::Statement { text, .. } => writeln!(out, "{} {text}", i + 1),
                GenLine::Question { text, answer, clues, .. } => {
                    let clues: Vec<String> = clues.iter().map(usize::to_string).collect();
                    writeln!(out, "{} {text}\t{answer}\t{}", i + 1, clues.join(" "))
                }
            }
            .expect("writing to a String");
        }
    }
    out
}

#[derive(Debug, Serialize)]
struct KeyEntry<'a> {
    story: usize,
    time: usize,
    question: &'a str,
    answer: &'a str,
    clues: &'a [usize],
}

/// Oracle answer key as JSON, one entry per question.
pub fn answer_key(stories: &[GenStory]) -> String {
    let mut entries = Vec::new();
    for (s, story) in stories.iter().enumerate() {
        for (i, line) in story.lines.iter().enumerate() {
            if let GenLine::Question { text, answer, clues, .. } = line {
                entries.push(KeyEntry { story: s + 1, time: i + 1, question: text, answer, clues });
            }
        }
    }
    serde_json::to_string_pretty(&entries).expect("key entries serialize")
}

/// Writes `path` in bAbI layout and the answer key next to it
/// (`<path>.key.json`). Returns the key path.
pub fn write_generated(path: &Path, stories: &[GenStory]) -> Result<std::path::PathBuf, GenerateError> {
    let io = |p: &Path| {
        let path = p.display().to_string();
        move |source| GenerateError::Io { path, source }
    };
    std::fs::write(path, to_babi_text(stories)).map_err(io(path))?;
    let mut key = path.as_os_str().to_owned();
    key.push(".key.json");
    let key = std::path::PathBuf::from(key);
    std::fs::write(&key, answer_key(stories)).map_err(io(&key))?;
    Ok(key)
}

/// The file name the corpus loader expects for a generated category.
pub fn file_name(category: u8, split: &str) -> String {
    format!("qa{category}_generated_{split}.txt")
}
