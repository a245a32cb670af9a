//! Resolved pipeline configuration and the markup step shared by oracle and
//! predicted role sources.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{index_by_id, CaseRecord, Sentence};
use crate::error::{Error, Result};
use crate::io::{MarkedRecord, RolePredictions};
use crate::markup::{inject_markers, truncate_words, MarkerScheme, BART_WORD_LIMIT, LED_WORD_LIMIT};
use crate::metrics::TokenizerConfig;

/// Encoder word budget: a named preset or an explicit count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordLimit(pub usize);

impl WordLimit {
    pub const BART: WordLimit = WordLimit(BART_WORD_LIMIT);
    pub const LED: WordLimit = WordLimit(LED_WORD_LIMIT);
}

impl FromStr for WordLimit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bart" => Ok(WordLimit::BART),
            "led" => Ok(WordLimit::LED),
            n => match n.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(WordLimit(v)),
                _ => Err(format!("limit must be `bart`, `led` or a positive integer, got {s:?}")),
            },
        }
    }
}

impl fmt::Display for WordLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoleSource {
    /// Gold roles from the corpus.
    Oracle,
    /// Roles from a predictions file.
    Predicted(PathBuf),
}

impl FromStr for RoleSource {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "oracle" => Ok(RoleSource::Oracle),
            "" => Err("empty role source".into()),
            path => Ok(RoleSource::Predicted(PathBuf::from(path))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub scheme: MarkerScheme,
    pub truncation_limit: usize,
    pub role_source: RoleSource,
    pub tokenizer: TokenizerConfig,
    pub seed: u64,
}

/// Document sentences carrying the roles to mark: gold roles, or the
/// predicted ones when `predictions` is given. The summary side is never
/// touched.
pub fn resolve_document(case: &CaseRecord, predictions: Option<&RolePredictions>) -> Result<Vec<Sentence>> {
    let Some(predictions) = predictions else {
        return Ok(case.doc.clone());
    };
    let roles = predictions
        .get(&case.id)
        .ok_or_else(|| Error::MissingPredictions(case.id.clone()))?;
    if roles.len() != case.doc.len() {
        return Err(Error::LengthMismatch {
            context: format!("role predictions of case {:?}", case.id),
            expected: case.doc.len(),
            actual: roles.len(),
        });
    }
    Ok(case
        .doc
        .iter()
        .zip(roles)
        .map(|(s, &role)| Sentence {
            text: s.text.clone(),
            role,
        })
        .collect())
}

/// Marks then truncates one case; markers consume word budget.
pub fn marked_record(
    case: &CaseRecord,
    scheme: MarkerScheme,
    limit: usize,
    predictions: Option<&RolePredictions>,
) -> Result<MarkedRecord> {
    let doc = resolve_document(case, predictions)?;
    let marked = inject_markers(&doc, scheme)?;
    Ok(MarkedRecord {
        id: case.id.clone(),
        scheme,
        input_text: truncate_words(&marked.text, limit)?,
        target_text: case.summary_text(),
    })
}

/// Marked records for `ids`, in the given order.
pub fn marked_records(
    corpus: &[CaseRecord],
    ids: &[String],
    scheme: MarkerScheme,
    limit: usize,
    predictions: Option<&RolePredictions>,
) -> Result<Vec<MarkedRecord>> {
    let index = index_by_id(corpus);
    ids.iter()
        .map(|id| {
            let case = index.get(id.as_str()).ok_or_else(|| Error::UnknownId(id.clone()))?;
            marked_record(case, scheme, limit, predictions)
        })
        .collect()
}
