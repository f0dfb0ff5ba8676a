//! Experiment runner behind the `smoothlab` command line tool.

pub mod config;
pub mod corpus;
pub mod experiments;
pub mod report;

pub use config::{ExperimentConfig, ExperimentKind};
pub use corpus::{corpus_generate, CorpusFunction, CATALOG};
pub use experiments::run_experiment;
pub use report::{EquivalenceRow, RowFlag};
