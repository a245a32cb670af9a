//! Corpus pipeline and evaluation engine for argument-aware summarization of
//! legal cases: sentence-annotated corpora, argument-role marker injection,
//! encoder truncation, ROUGE scoring and corpus statistics.

pub mod argeval;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod io;
pub mod markup;
pub mod metrics;
mod numeric;
pub mod pipeline;
pub mod stats;

pub use corpus::{ArgRole, CaseRecord, Sentence, SplitAssignment, SplitRatios};
pub use error::{Error, Result};
pub use markup::{MarkedDocument, MarkerScheme};
pub use metrics::{EvalReport, RougeScore, ScoringConfig, TokenizerConfig};
