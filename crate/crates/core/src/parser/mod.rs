//! Deterministic front end: tokenizer, pattern grammar over the restricted
//! bAbI English, pronoun resolution, and the corpus loader.

mod corpus;
mod forms;
mod grammar;
mod lexicon;
mod tokenize;

pub use corpus::{load_babi_file, parse_babi_str, task_id_from_path, CorpusError, Question, Story, StoryLine};
pub use forms::{Deed, LogicalForm, Phrasing, QuestionForm};
pub use grammar::{parse_line, parse_question, parse_statement, Parsed, ParseContext};
pub use lexicon::{GrammarLexicon, LexiconError};
pub use tokenize::tokenize;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unparseable line: `{0}`")]
    UnparseableLine(String),
    #[error("pronoun `{pronoun}` has no antecedent in the previous statement")]
    UnresolvedPronoun { pronoun: String },
}
