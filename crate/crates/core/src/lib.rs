//! Vector-space reasoning over tensor product representations for the
//! twenty bAbI question categories.
//!
//! Statements are parsed into logical forms, encoded as outer-product
//! bindings in a timestamped slot memory, and questions are answered by
//! matrix/vector algebra followed by cleanup against the story's entity
//! registry. See the README for the CLI and the evaluation workflow.

pub mod algebra;
pub mod answerer;
pub mod harness;
pub mod memory;
pub mod parser;
pub mod reasoner;
pub mod relation;
