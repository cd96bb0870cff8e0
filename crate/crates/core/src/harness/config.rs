//! Run configuration: TOML file, then command-line flags, then the
//! `TPRQA_DATA_DIR` environment variable for the corpus location.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{CleanupPolicy, VectorMode};
use crate::answerer::{AnswerError, AnswerLexicon};
use crate::parser::{GrammarLexicon, LexiconError};
use crate::reasoner::{ReasonError, Reasoner, Settings};

pub const DATA_DIR_ENV: &str = "TPRQA_DATA_DIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parsing {path}: {source}")]
    Toml { path: String, source: toml::de::Error },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Answers(#[from] AnswerError),
    #[error(transparent)]
    Reasoner(#[from] ReasonError),
}

/// A known label defect in the official corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllowEntry {
    pub category: u8,
    pub split: String,
    /// 1-based story index within the file.
    pub story: usize,
    pub time: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub dim: usize,
    pub mode: VectorMode,
    pub seed: u64,
    pub score_threshold: f64,
    pub margin_ratio: f64,
    pub pair_cleanup: f64,
    pub pair_ratio: f64,
    pub eps_path: f64,
    pub block_tol: f64,
    pub max_path_len: usize,
    /// Worker threads; 0 means one per core.
    pub threads: usize,
    pub grammar_lexicon: Option<PathBuf>,
    pub answer_lexicon: Option<PathBuf>,
    pub data_dir: Option<PathBuf>,
    /// Corpus release recorded in reports, e.g. `en` for the 1k English set.
    pub release: String,
    pub split: String,
    /// Per-category accuracy floors; missing categories use `default_floor`.
    pub floors: BTreeMap<String, f64>,
    pub default_floor: f64,
    pub allowlist: Vec<AllowEntry>,
}

impl Default for Config {
    fn default() -> Self {
        let policy = CleanupPolicy::default();
        let settings = Settings::default();
        Self {
            dim: settings.dim,
            mode: settings.mode,
            seed: settings.seed,
            score_threshold: policy.score,
            margin_ratio: policy.margin_ratio,
            pair_cleanup: policy.pair_cleanup,
            pair_ratio: policy.pair_ratio,
            eps_path: settings.eps_path,
            block_tol: settings.block_tol,
            max_path_len: settings.max_path_len,
            threads: 0,
            grammar_lexicon: None,
            answer_lexicon: None,
            data_dir: None,
            release: "en".into(),
            split: "test".into(),
            floors: BTreeMap::from([("5".into(), 0.998), ("16".into(), 0.994)]),
            default_floor: 1.0,
            allowlist: vec![
                AllowEntry { category: 5, split: "train".into(), story: 8, time: 14 },
                AllowEntry { category: 5, split: "train".into(), story: 8, time: 17 },
                AllowEntry { category: 5, split: "test".into(), story: 63, time: 27 },
                AllowEntry { category: 5, split: "test".into(), story: 186, time: 22 },
            ],
        }
    }
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text, &path.display().to_string())
    }

    pub fn from_toml(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let cfg: Config = toml::from_str(text).map_err(|source| ConfigError::Toml { path: origin.to_string(), source })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Fills `data_dir` from the environment when it is not set already.
    pub fn with_env(mut self) -> Self {
        if self.data_dir.is_none() {
            self.data_dir = std::env::var_os(DATA_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
        }
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.dim < 8 {
            return bad(format!("dim must be at least 8, got {}", self.dim));
        }
        for (name, v) in [
            ("score_threshold", self.score_threshold),
            ("margin_ratio", self.margin_ratio),
            ("pair_cleanup", self.pair_cleanup),
            ("pair_ratio", self.pair_ratio),
            ("eps_path", self.eps_path),
            ("block_tol", self.block_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if self.max_path_len == 0 {
            return bad("max_path_len must be positive".into());
        }
        for (k, f) in &self.floors {
            if k.parse::<u8>().ok().filter(|c| (1..=20).contains(c)).is_none() {
                return bad(format!("floor for unknown category `{k}`"));
            }
            if !(0.0..=1.0).contains(f) {
                return bad(format!("floor for category {k} must be in [0, 1], got {f}"));
            }
        }
        Ok(())
    }

    pub fn settings(&self) -> Settings {
        Settings {
            dim: self.dim,
            mode: self.mode,
            seed: self.seed,
            policy: CleanupPolicy {
                score: self.score_threshold,
                margin_ratio: self.margin_ratio,
                pair_cleanup: self.pair_cleanup,
                pair_ratio: self.pair_ratio,
            },
            eps_path: self.eps_path,
            block_tol: self.block_tol,
            max_path_len: self.max_path_len,
        }
    }

    pub fn grammar(&self) -> Result<GrammarLexicon, ConfigError> {
        Ok(match &self.grammar_lexicon {
            Some(p) => GrammarLexicon::from_file(p)?,
            None => GrammarLexicon::default(),
        })
    }

    pub fn answers(&self) -> Result<AnswerLexicon, ConfigError> {
        Ok(match &self.answer_lexicon {
            Some(p) => AnswerLexicon::from_file(p)?,
            None => AnswerLexicon::default(),
        })
    }

    pub fn reasoner(&self) -> Result<Reasoner, ConfigError> {
        self.validate()?;
        Ok(Reasoner::new(self.settings(), Arc::new(self.grammar()?))?)
    }

    pub fn floor(&self, category: u8) -> f64 {
        self.floors.get(&category.to_string()).copied().unwrap_or(self.default_floor)
    }

    pub fn is_allowlisted(&self, category: u8, split: &str, story: usize, time: usize) -> bool {
        self.allowlist.iter().any(|e| e.category == category && e.split == split && e.story == story && e.time == time)
    }
}
