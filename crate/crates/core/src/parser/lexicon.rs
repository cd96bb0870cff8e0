use std::collections::{HashMap, HashSet};
use std::path::Path;

use thiserror::Error;

use crate::relation::Stamp;

const DEFAULT_GRAMMAR: &str = include_str!("../../lexicon/grammar.txt");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("reading lexicon {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("lexicon line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// Verb classes and closed word lists driving the grammar.
#[derive(Debug, Clone)]
pub struct GrammarLexicon {
    classes: HashMap<String, Vec<Vec<String>>>,
    plural: HashMap<String, String>,
    stamp_order: Vec<Stamp>,
}

impl Default for GrammarLexicon {
    fn default() -> Self {
        Self::parse(DEFAULT_GRAMMAR).expect("built-in grammar lexicon is well formed")
    }
}

impl GrammarLexicon {
    pub fn from_file(path: &Path) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| LexiconError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut classes = HashMap::new();
        let mut plural = HashMap::new();
        let mut stamp_order = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, entries) = line.split_once('=').ok_or_else(|| LexiconError::Malformed {
                line: i + 1,
                reason: "expected `class = entries`".into(),
            })?;
            let name = name.trim();
            let entries: Vec<&str> = entries.split_whitespace().collect();
            match name {
                "plural" => {
                    for e in entries {
                        let (pl, sg) = e.split_once(':').ok_or_else(|| LexiconError::Malformed {
                            line: i + 1,
                            reason: format!("plural entry `{e}` lacks `:`"),
                        })?;
                        plural.insert(pl.to_string(), sg.to_string());
                    }
                }
                "stamp_order" => {
                    for e in entries {
                        let stamp = Stamp::from_word(e).ok_or_else(|| LexiconError::Malformed {
                            line: i + 1,
                            reason: format!("unknown stamp `{e}`"),
                        })?;
                        stamp_order.push(stamp);
                    }
                }
                _ => {
                    let phrases = entries.iter().map(|e| e.split('_').map(str::to_string).collect()).collect();
                    classes.insert(name.to_string(), phrases);
                }
            }
        }
        if stamp_order.is_empty() {
            stamp_order = Stamp::ALL.to_vec();
        }
        Ok(Self { classes, plural, stamp_order })
    }

    /// Phrases of a class, longest first so that matching is greedy.
    pub fn phrases(&self, class: &str) -> Vec<&[String]> {
        let mut out: Vec<&[String]> = self.classes.get(class).map(|v| v.iter().map(Vec::as_slice).collect()).unwrap_or_default();
        out.sort_by_key(|p| std::cmp::Reverse(p.len()));
        out
    }

    pub fn contains(&self, class: &str, word: &str) -> bool {
        self.classes.get(class).is_some_and(|v| v.iter().any(|p| p.len() == 1 && p[0] == word))
    }

    pub fn words(&self, class: &str) -> HashSet<String> {
        self.classes
            .get(class)
            .map(|v| v.iter().map(|p| p.join(" ")).collect())
            .unwrap_or_default()
    }

    pub fn singular<'a>(&'a self, word: &'a str) -> &'a str {
        self.plural.get(word).map(String::as_str).unwrap_or(word)
    }

    /// Chronological rank of a stamp.
    pub fn stamp_rank(&self, stamp: Stamp) -> usize {
        self.stamp_order.iter().position(|s| *s == stamp).unwrap_or(usize::MAX)
    }

    pub fn stamp_order(&self) -> &[Stamp] {
        &self.stamp_order
    }
}
