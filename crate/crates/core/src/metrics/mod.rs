//! ROUGE-1/2/L with a pinned tokenization, corpus-level score reports, and
//! classification metrics for argument-role prediction.

mod classification;
mod report;
mod rouge;
mod tokenize;

pub use classification::{classification_report, classification_report_with_labels, ClassMetrics, ClassificationReport};
pub(crate) use report::{score_cases, PendingCase};
pub use report::{
    evaluate_corpus, AggregateScores, Aggregation, CaseScores, EvalReport, Protocol, ScaledScore,
    ScoringConfig, ScoringPair,
};
pub use rouge::{
    f_measure, lcs_length, ngram_counts, rouge_l, rouge_l_overlap, rouge_l_union_overlap, rouge_l_with_mode,
    rouge_n, rouge_n_overlap, split_sentences, Overlap, RougeLMode, RougeScore,
};
pub use tokenize::{tokenize, TokenPattern, TokenizerConfig};
