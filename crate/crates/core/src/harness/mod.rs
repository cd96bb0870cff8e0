//! Evaluation, corpus generation and interactive entry points.

pub mod config;
pub mod eval;
pub mod generate;
pub mod repl;
pub mod selftest;

pub use config::{Config, ConfigError};
pub use eval::{run_eval, CategoryReport, EvalError, EvalReport, Mismatch};
