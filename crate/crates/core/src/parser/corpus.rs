//! Loader for the bAbI text layout: `N text` for statements and
//! `N question\tanswer\tclues` for questions.

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}: {reason}")]
    MalformedLine { path: String, line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Question {
    pub answer: String,
    pub clues: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoryLine {
    /// 1-based index within the story.
    pub time: usize,
    pub text: String,
    /// Gold annotation; present exactly on question lines.
    pub gold: Option<Question>,
    /// Line number in the source file.
    pub source_line: usize,
}

impl StoryLine {
    pub fn is_question(&self) -> bool {
        self.gold.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Story {
    pub task_id: u8,
    pub lines: Vec<StoryLine>,
}

impl Story {
    pub fn questions(&self) -> impl Iterator<Item = &StoryLine> {
        self.lines.iter().filter(|l| l.is_question())
    }

    /// Copy with every answer and clue field blanked.
    pub fn without_gold(&self) -> Story {
        let mut s = self.clone();
        for l in &mut s.lines {
            if let Some(g) = &mut l.gold {
                g.answer.clear();
                g.clues.clear();
            }
        }
        s
    }
}

/// Task number from a file name such as `qa5_three-arg-relations_test.txt`.
pub fn task_id_from_path(path: &Path) -> Option<u8> {
    let name = path.file_name()?.to_str()?;
    let rest = name.strip_prefix("qa")?;
    let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
    digits.parse().ok().filter(|t| (1..=20).contains(t))
}

pub fn load_babi_file(path: &Path) -> Result<Vec<Story>, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.display().to_string(), source })?;
    let task = task_id_from_path(path).unwrap_or(0);
    parse_babi_str(&text, task, &path.display().to_string())
}

/// Splits `text` into stories at every line numbered 1.
pub fn parse_babi_str(text: &str, task_id: u8, origin: &str) -> Result<Vec<Story>, CorpusError> {
    let mut stories: Vec<Story> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let malformed = |reason: String| CorpusError::MalformedLine { path: origin.to_string(), line: line_no, reason };
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() {
            continue;
        }
        let (index, rest) = raw.split_once(' ').ok_or_else(|| malformed("missing line index".into()))?;
        let time: usize = index.parse().map_err(|_| malformed(format!("non-integer index `{index}`")))?;
        let (text, gold) = if rest.contains('\t') {
            let fields: Vec<&str> = rest.split('\t').collect();
            if fields.len() < 3 {
                return Err(malformed(format!("question line has {} tab-separated fields, expected 3", fields.len())));
            }
            let clues = fields[2]
                .split_whitespace()
                .map(|c| c.parse::<usize>().map_err(|_| malformed(format!("non-integer clue `{c}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            (fields[0].trim().to_string(), Some(Question { answer: fields[1].trim().to_string(), clues }))
        } else {
            (rest.trim().to_string(), None)
        };
        let line = StoryLine { time, text, gold, source_line: line_no };
        if time == 1 || stories.is_empty() {
            stories.push(Story { task_id, lines: vec![line] });
            continue;
        }
        let story = stories.last_mut().expect("non-empty");
        let last = story.lines.last().map_or(0, |l| l.time);
        if time <= last {
            return Err(malformed(format!("index {time} does not follow {last}")));
        }
        story.lines.push(line);
    }
    Ok(stories)
}
