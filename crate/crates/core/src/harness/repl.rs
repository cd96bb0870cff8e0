//! Line-oriented story entry: statements and questions for one story, with
//! `:reset`, `:task N`, `:trace` and `:quit`.

use std::io::{BufRead, Write};

use crate::answerer::AnswerLexicon;
use crate::reasoner::{Fed, Inference, Reasoner, StorySession};

use super::config::{Config, ConfigError};

const HELP: &str = "commands: :reset, :task N, :trace, :quit";

struct Story<'r> {
    session: StorySession<'r>,
    time: usize,
    last: Option<Inference>,
}

impl<'r> Story<'r> {
    fn new(reasoner: &'r Reasoner, task: u8, index: usize) -> Result<Self, ConfigError> {
        Ok(Self { session: reasoner.session(task, index)?, time: 0, last: None })
    }
}

/// Runs until `:quit` or end of input. Errors on individual lines are
/// printed and the loop continues.
pub fn run_repl(config: &Config, task: u8, input: impl BufRead, mut out: impl Write) -> Result<(), ConfigError> {
    let reasoner = config.reasoner()?;
    let answers: AnswerLexicon = config.answers()?;
    let io = |source| ConfigError::Io { path: "<stdout>".into(), source };
    let mut task = task;
    let mut stories = 0;
    let mut story = Story::new(&reasoner, task, stories)?;
    for line in input.lines() {
        let line = line.map_err(|source| ConfigError::Io { path: "<stdin>".into(), source })?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(cmd) = line.strip_prefix(':') {
            let mut parts = cmd.split_whitespace();
            match (parts.next(), parts.next()) {
                (Some("quit" | "q"), _) => break,
                (Some("reset"), _) => {
                    stories += 1;
                    story = Story::new(&reasoner, task, stories)?;
                    writeln!(out, "new story (category {task})").map_err(io)?;
                }
                (Some("task"), Some(n)) => match n.parse::<u8>() {
                    Ok(t) if (1..=20).contains(&t) => {
                        task = t;
                        stories += 1;
                        story = Story::new(&reasoner, task, stories)?;
                        writeln!(out, "new story (category {task})").map_err(io)?;
                    }
                    _ => writeln!(out, "error: category must be 1..20").map_err(io)?,
                },
                (Some("trace"), _) => match &story.last {
                    Some(inf) => {
                        for s in &inf.trace {
                            writeln!(out, "  t={} {:?} {:.3}", s.time, s.kind, s.score).map_err(io)?;
                        }
                        let times: Vec<String> = inf.clue_times().iter().map(usize::to_string).collect();
                        writeln!(out, "slots: {}", times.join(" ")).map_err(io)?;
                    }
                    None => writeln!(out, "no answer yet").map_err(io)?,
                },
                _ => writeln!(out, "{HELP}").map_err(io)?,
            }
            continue;
        }
        // bAbI-style numbering is accepted and ignored.
        let text = match line.split_once(' ') {
            Some((n, rest)) if n.parse::<usize>().is_ok() => rest.split('\t').next().unwrap_or(rest),
            _ => line,
        };
        story.time += 1;
        match story.session.feed(story.time, text) {
            Ok(Fed::Statement(_)) => {}
            Ok(Fed::Answered(_, inf)) => {
                match answers.format(&inf.answer) {
                    Ok(s) => writeln!(out, "{s}").map_err(io)?,
                    Err(e) => writeln!(out, "error: {e}").map_err(io)?,
                }
                story.last = Some(inf);
            }
            Err(e) => writeln!(out, "error: {e}").map_err(io)?,
        }
    }
    out.flush().map_err(io)
}
