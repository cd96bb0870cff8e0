//! Corpus evaluation and reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::answerer::{answers_match, AnswerLexicon};
use crate::memory::RuleMemory;
use crate::parser::{load_babi_file, parse_babi_str, parse_line, tokenize, CorpusError, ParseContext, Parsed, Story};
use crate::reasoner::{Fed, Reasoner, ReasonError};

use super::config::{Config, ConfigError};
use super::generate::{self, GenerateError};

/// Categories whose gold clues are compared with inference traces.
pub const CLUE_CATEGORIES: [u8; 3] = [1, 2, 3];

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("no data directory configured (set {} or --data-dir)", super::config::DATA_DIR_ENV)]
    NoDataDir,
    #[error("no file for category {category} ({split}) under {dir}")]
    MissingCategory { category: u8, split: String, dir: String },
    #[error("story {story}, line {time}: {source}")]
    Reason { story: usize, time: usize, source: ReasonError },
    #[error("building thread pool: {0}")]
    Pool(String),
    #[error("writing {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Where the stories come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    /// `qa{N}_*_{split}.txt` files under the configured data directory.
    Official,
    /// The simulation-oracle generator, `stories` per category.
    Generated { stories: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub story: usize,
    pub time: usize,
    pub question: String,
    pub predicted: String,
    pub gold: String,
    pub gold_clues: Vec<usize>,
    pub slots_used: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClueCheck {
    pub checked: usize,
    pub consistent: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryReport {
    pub category: u8,
    pub total: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub floor: f64,
    pub passed: bool,
    pub unparseable: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clues: Option<ClueCheck>,
    pub mismatches: Vec<Mismatch>,
    pub allowlisted: Vec<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub release: String,
    pub split: String,
    pub mode: String,
    pub dim: usize,
    pub seed: u64,
    pub categories: Vec<CategoryReport>,
}

impl EvalReport {
    pub fn passed(&self) -> bool {
        self.categories.iter().all(|c| c.passed)
    }

    pub fn category(&self, category: u8) -> Option<&CategoryReport> {
        self.categories.iter().find(|c| c.category == category)
    }

    pub fn unparseable(&self) -> usize {
        self.categories.iter().map(|c| c.unparseable).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("category,total,correct,accuracy,floor,passed,mismatches,allowlisted,unparseable\n");
        for c in &self.categories {
            writeln!(
                out,
                "{},{},{},{:.4},{},{},{},{},{}",
                c.category,
                c.total,
                c.correct,
                c.accuracy,
                c.floor,
                c.passed,
                c.mismatches.len(),
                c.allowlisted.len(),
                c.unparseable
            )
            .expect("writing to a String");
        }
        out
    }

    /// Writes `<stem>.json` and `<stem>.csv`.
    pub fn write(&self, stem: &Path) -> Result<(PathBuf, PathBuf), EvalError> {
        let json = stem.with_extension("json");
        let csv = stem.with_extension("csv");
        for (path, body) in [(&json, self.to_json()), (&csv, self.to_csv())] {
            std::fs::write(path, body).map_err(|source| EvalError::Io { path: path.display().to_string(), source })?;
        }
        Ok((json, csv))
    }
}

/// One answered question, before comparison with gold.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub time: usize,
    pub question: String,
    pub answer: Result<String, String>,
    pub slots_used: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StoryRun {
    pub predictions: Vec<Prediction>,
    pub unparseable: usize,
}

/// Feeds one story line by line. Only the line texts are read; answer and
/// clue fields are never consulted.
pub fn predict_story(reasoner: &Reasoner, answers: &AnswerLexicon, task: u8, index: usize, story: &Story) -> Result<StoryRun, EvalError> {
    let reason = |time: usize| move |source| EvalError::Reason { story: index + 1, time, source };
    let mut session = reasoner.session(task, index).map_err(reason(0))?;
    let mut run = StoryRun::default();
    for line in &story.lines {
        match session.feed(line.time, &line.text) {
            Ok(Fed::Statement(_)) => {}
            Ok(Fed::Answered(_, inf)) => {
                let answer = answers.format(&inf.answer).map_err(|e| e.to_string());
                run.predictions.push(Prediction { time: line.time, question: line.text.clone(), answer, slots_used: inf.clue_times() });
            }
            Err(ReasonError::Parse(e)) => {
                run.unparseable += 1;
                if line.is_question() {
                    run.predictions.push(Prediction {
                        time: line.time,
                        question: line.text.clone(),
                        answer: Err(e.to_string()),
                        slots_used: Vec::new(),
                    });
                }
            }
            Err(e) if line.is_question() => {
                run.predictions.push(Prediction { time: line.time, question: line.text.clone(), answer: Err(e.to_string()), slots_used: Vec::new() });
            }
            // A statement the memory cannot take is a hard failure.
            Err(e) => return Err(reason(line.time)(e)),
        }
    }
    Ok(run)
}

/// Cross-story motivation rules from the statements of every story.
pub fn induce_corpus_rules(reasoner: &Reasoner, task: u8, stories: &[Story]) -> Result<RuleMemory, EvalError> {
    let per_story: Vec<Result<RuleMemory, EvalError>> = stories
        .par_iter()
        .enumerate()
        .map(|(i, story)| {
            let reason = |time: usize| move |source| EvalError::Reason { story: i + 1, time, source };
            let mut session = reasoner.session(task, i).map_err(reason(0))?;
            let mut ctx = ParseContext::default();
            for line in story.lines.iter().filter(|l| !l.is_question()) {
                let toks = tokenize(&line.text);
                if let Ok(Parsed::Statement(form)) = parse_line(&toks, task, &ctx, reasoner.lexicon()) {
                    ctx.observe(&form);
                    session.ingest(line.time, &form).map_err(reason(line.time))?;
                }
            }
            session.induce_rules().map_err(reason(0))
        })
        .collect();
    let mut rules = RuleMemory::default();
    for r in per_story {
        rules.merge(&r?);
    }
    Ok(rules)
}

/// Scores one category's stories against their gold fields.
pub fn evaluate_category(
    config: &Config,
    reasoner: &Reasoner,
    answers: &AnswerLexicon,
    category: u8,
    split: &str,
    stories: &[Story],
) -> Result<CategoryReport, EvalError> {
    let mut scoped;
    let reasoner = if category == 20 {
        scoped = reasoner.clone();
        scoped.set_rules(induce_corpus_rules(reasoner, category, stories)?);
        &scoped
    } else {
        reasoner
    };
    let runs: Vec<Result<StoryRun, EvalError>> =
        stories.par_iter().enumerate().map(|(i, s)| predict_story(reasoner, answers, category, i, s)).collect();

    let mut report = CategoryReport {
        category,
        total: 0,
        correct: 0,
        accuracy: 0.0,
        floor: config.floor(category),
        passed: false,
        unparseable: 0,
        clues: CLUE_CATEGORIES.contains(&category).then(ClueCheck::default),
        mismatches: Vec::new(),
        allowlisted: Vec::new(),
    };
    for (i, (story, run)) in stories.iter().zip(runs).enumerate() {
        let run = run?;
        report.unparseable += run.unparseable;
        let gold_lines = story.lines.iter().filter_map(|l| l.gold.as_ref().map(|g| (l.time, g)));
        for ((time, gold), pred) in gold_lines.zip(&run.predictions) {
            debug_assert_eq!(time, pred.time);
            report.total += 1;
            let predicted = pred.answer.clone().unwrap_or_default();
            if let Some(c) = report.clues.as_mut() {
                c.checked += 1;
                let mut used = pred.slots_used.clone();
                let mut want = gold.clues.clone();
                used.sort_unstable();
                want.sort_unstable();
                if used == want {
                    c.consistent += 1;
                }
            }
            if pred.answer.is_ok() && answers_match(&predicted, &gold.answer) {
                report.correct += 1;
                continue;
            }
            let m = Mismatch {
                story: i + 1,
                time,
                question: pred.question.clone(),
                predicted,
                gold: gold.answer.clone(),
                gold_clues: gold.clues.clone(),
                slots_used: pred.slots_used.clone(),
                error: pred.answer.clone().err(),
            };
            if config.is_allowlisted(category, split, i + 1, time) {
                report.allowlisted.push(m);
            } else {
                report.mismatches.push(m);
            }
        }
    }
    report.accuracy = if report.total == 0 { 0.0 } else { report.correct as f64 / report.total as f64 };
    report.passed = report.total > 0 && report.accuracy >= report.floor;
    Ok(report)
}

/// Official file for `category`, searched in the data directory and in its
/// `<release>` subdirectory.
pub fn find_category_file(dir: &Path, release: &str, category: u8, split: &str) -> Option<PathBuf> {
    let prefix = format!("qa{category}_");
    let suffix = format!("_{split}.txt");
    for d in [dir.to_path_buf(), dir.join(release)] {
        let Ok(entries) = std::fs::read_dir(&d) else { continue };
        let mut hits: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with(&prefix) && n.ends_with(&suffix))
            })
            .collect();
        hits.sort();
        if let Some(p) = hits.into_iter().next() {
            return Some(p);
        }
    }
    None
}

pub fn load_stories(config: &Config, source: &Source, category: u8) -> Result<Vec<Story>, EvalError> {
    match source {
        Source::Official => {
            let dir = config.data_dir.as_ref().ok_or(EvalError::NoDataDir)?;
            let path = find_category_file(dir, &config.release, category, &config.split).ok_or_else(|| {
                EvalError::MissingCategory { category, split: config.split.clone(), dir: dir.display().to_string() }
            })?;
            Ok(load_babi_file(&path)?)
        }
        Source::Generated { stories } => {
            let generated = generate::generate(category, *stories, config.seed)?;
            let name = generate::file_name(category, &config.split);
            Ok(parse_babi_str(&generate::to_babi_text(&generated), category, &name)?)
        }
    }
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, EvalError> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| EvalError::Pool(e.to_string()))
}

/// Loads, answers and scores every requested category.
pub fn run_eval(config: &Config, source: &Source, categories: &[u8]) -> Result<EvalReport, EvalError> {
    let reasoner = config.reasoner()?;
    let answers = config.answers()?;
    let pool = pool(config.threads)?;
    let mut reports = Vec::new();
    for &category in categories {
        let stories = load_stories(config, source, category)?;
        let split = match source {
            Source::Official => config.split.as_str(),
            Source::Generated { .. } => "generated",
        };
        reports.push(pool.install(|| evaluate_category(config, &reasoner, &answers, category, split, &stories))?);
    }
    let release = match source {
        Source::Official => config.release.clone(),
        Source::Generated { stories } => format!("generated-{stories}"),
    };
    Ok(EvalReport {
        release,
        split: config.split.clone(),
        mode: format!("{:?}", config.mode).to_lowercase(),
        dim: config.dim,
        seed: config.seed,
        categories: reports,
    })
}
