//! Surface forms for [`Answer`] values.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::reasoner::{Answer, Ternary};
use crate::relation::Compass;

const DEFAULT_ANSWERS: &str = include_str!("../lexicon/answers.txt");
const MAX_COUNT: usize = 10;

#[derive(Debug, Error)]
pub enum AnswerError {
    #[error("no surface form for count {0}")]
    UnmappedCount(usize),
    #[error("`{key}` observed as both `{first}` and `{second}`")]
    ConflictingMapping { key: String, first: String, second: String },
    #[error("answer lexicon line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("reading answer lexicon: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerLexicon {
    counts: Vec<String>,
    empty_list: String,
    yes: String,
    no: String,
    maybe: String,
    dirs: [String; 4],
    separator: String,
}

impl Default for AnswerLexicon {
    fn default() -> Self {
        Self::parse(DEFAULT_ANSWERS).expect("bundled answer lexicon is well formed")
    }
}

fn dir_index(d: Compass) -> usize {
    Compass::ALL.iter().position(|&x| x == d).expect("listed")
}

impl AnswerLexicon {
    pub fn from_file(path: &Path) -> Result<Self, AnswerError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses `key=value` lines; every key must be present.
    pub fn parse(text: &str) -> Result<Self, AnswerError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| AnswerError::Malformed { line: i + 1, reason: "expected key=value".into() })?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut take = |key: &str| {
            map.remove(key).ok_or_else(|| AnswerError::Malformed { line: 0, reason: format!("missing key `{key}`") })
        };
        let counts = (0..=MAX_COUNT).map(|n| take(&format!("count.{n}"))).collect::<Result<Vec<_>, _>>()?;
        let dirs = [take("dir.north")?, take("dir.east")?, take("dir.south")?, take("dir.west")?];
        Ok(Self {
            counts,
            empty_list: take("list.empty")?,
            yes: take("yes")?,
            no: take("no")?,
            maybe: take("maybe")?,
            dirs,
            separator: take("separator")?,
        })
    }

    pub fn count(&self, n: usize) -> Option<&str> {
        self.counts.get(n).map(String::as_str)
    }

    pub fn direction(&self, d: Compass) -> &str {
        &self.dirs[dir_index(d)]
    }

    pub fn ternary(&self, t: Ternary) -> &str {
        match t {
            Ternary::Yes => &self.yes,
            Ternary::No => &self.no,
            Ternary::Maybe => &self.maybe,
        }
    }

    pub fn format(&self, answer: &Answer) -> Result<String, AnswerError> {
        let label = |s: &str| s.replace('_', " ");
        Ok(match answer {
            Answer::Entity(e) | Answer::Motivation(e) => label(e),
            Answer::EntityList(items) if items.is_empty() => self.empty_list.clone(),
            Answer::EntityList(items) => items.iter().map(|s| label(s)).collect::<Vec<_>>().join(&self.separator),
            Answer::YesNoMaybe(t) => self.ternary(*t).to_string(),
            Answer::Count(n) => self.count(*n).ok_or(AnswerError::UnmappedCount(*n))?.to_string(),
            Answer::Path(steps) => {
                steps.iter().map(|&d| self.direction(d).to_string()).collect::<Vec<_>>().join(&self.separator)
            }
        })
    }

    /// Overrides entries observed in (answer, gold) pairs; unobserved entries
    /// keep their current value.
    pub fn learn<'a>(&self, observations: impl IntoIterator<Item = (&'a Answer, &'a str)>) -> Result<Self, AnswerError> {
        let mut seen: BTreeMap<String, String> = BTreeMap::new();
        let mut note = |key: String, surface: &str| -> Result<(), AnswerError> {
            match seen.get(&key) {
                Some(first) if first != surface => {
                    Err(AnswerError::ConflictingMapping { key, first: first.clone(), second: surface.to_string() })
                }
                Some(_) => Ok(()),
                None => {
                    seen.insert(key, surface.to_string());
                    Ok(())
                }
            }
        };
        for (answer, gold) in observations {
            let gold = gold.trim();
            match answer {
                Answer::Count(n) if *n <= MAX_COUNT => note(format!("count.{n}"), gold)?,
                Answer::YesNoMaybe(t) => note(format!("{t}"), gold)?,
                Answer::EntityList(items) if items.is_empty() => note("list.empty".into(), gold)?,
                Answer::Path(steps) => {
                    let parts: Vec<&str> = gold.split(self.separator.as_str()).collect();
                    if parts.len() == steps.len() {
                        for (d, p) in steps.iter().zip(parts) {
                            note(format!("dir.{}", d.word()), p.trim())?;
                        }
                    }
                }
                _ => {}
            }
        }
        let mut out = self.clone();
        for (key, surface) in seen {
            match key.as_str() {
                "list.empty" => out.empty_list = surface,
                "yes" => out.yes = surface,
                "no" => out.no = surface,
                "maybe" => out.maybe = surface,
                k => {
                    if let Some(n) = k.strip_prefix("count.").and_then(|n| n.parse::<usize>().ok()) {
                        out.counts[n] = surface;
                    } else if let Some(d) = k.strip_prefix("dir.").and_then(Compass::from_word) {
                        out.dirs[dir_index(d)] = surface;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Gold comparison: case-insensitive, with `_` and spaces equivalent.
pub fn answers_match(predicted: &str, gold: &str) -> bool {
    let norm = |s: &str| s.trim().to_lowercase().replace('_', " ");
    norm(predicted) == norm(gold)
}
