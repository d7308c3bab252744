//! Command-line front end for the `hpisot` analyzer: the analysis pipeline,
//! corpus regression runs and command dispatch.

pub mod commands;
pub mod corpus;
pub mod pipeline;

pub use commands::{run, Outcome};
pub use pipeline::{analyze, AnalysisOptions, AnalysisReport};
