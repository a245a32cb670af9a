//! Descriptive corpus statistics: argumentative fractions, role counts,
//! argument positions against encoder word limits, length distributions and
//! class weights for the role classifier.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{ArgRole, CaseRecord, Sentence};
use crate::error::{Error, Result};
use crate::markup::{BART_WORD_LIMIT, LED_WORD_LIMIT};
use crate::numeric::{percentile_linear, stable_mean};

pub const PERCENTILE_RANKS: [u8; 5] = [10, 25, 50, 75, 90];
pub const HISTOGRAM_BINS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Doc,
    Summary,
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Doc => "doc",
            Scope::Summary => "summary",
        }
    }

    fn sentences(self, case: &CaseRecord) -> &[Sentence] {
        match self {
            Scope::Doc => &case.doc,
            Scope::Summary => &case.summary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Linear interpolation between closest ranks.
    pub percentiles: BTreeMap<u8, f64>,
    pub histogram: Vec<HistogramBin>,
}

impl DistributionSummary {
    /// Ten equal-width bins over `[min, max]`; the last bin is closed. A
    /// constant sample gets a single bin.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let min = sorted[0];
        let max = sorted[sorted.len() - 1];
        let percentiles = PERCENTILE_RANKS
            .iter()
            .map(|&p| (p, percentile_linear(&sorted, p as f64)))
            .collect();

        let histogram = if max > min {
            let width = (max - min) / HISTOGRAM_BINS as f64;
            let mut bins: Vec<HistogramBin> = (0..HISTOGRAM_BINS)
                .map(|i| HistogramBin {
                    lower: min + width * i as f64,
                    upper: if i + 1 == HISTOGRAM_BINS { max } else { min + width * (i + 1) as f64 },
                    count: 0,
                })
                .collect();
            for v in &sorted {
                let idx = (((v - min) / width).floor() as usize).min(HISTOGRAM_BINS - 1);
                bins[idx].count += 1;
            }
            bins
        } else {
            vec![HistogramBin {
                lower: min,
                upper: max,
                count: sorted.len(),
            }]
        };

        Ok(DistributionSummary {
            count: values.len(),
            mean: stable_mean(values),
            min,
            max,
            percentiles,
            histogram,
        })
    }
}

fn fraction_argumentative(sentences: &[Sentence]) -> f64 {
    if sentences.is_empty() {
        return 0.0;
    }
    let arg = sentences.iter().filter(|s| s.role.is_argumentative()).count();
    arg as f64 / sentences.len() as f64
}

/// Per-case argumentative fractions as `(case_id, doc, summary)`.
pub fn case_fractions(corpus: &[CaseRecord]) -> Vec<(String, f64, f64)> {
    corpus
        .iter()
        .map(|c| (c.id.clone(), fraction_argumentative(&c.doc), fraction_argumentative(&c.summary)))
        .collect()
}

/// Distribution of per-case argumentative fractions in documents and summaries.
pub fn argumentative_fraction(corpus: &[CaseRecord]) -> Result<(DistributionSummary, DistributionSummary)> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let rows = case_fractions(corpus);
    let doc: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let summary: Vec<f64> = rows.iter().map(|r| r.2).collect();
    Ok((DistributionSummary::from_values(&doc)?, DistributionSummary::from_values(&summary)?))
}

/// Sentence counts per role; every role is present in the map.
pub fn role_counts(corpus: &[CaseRecord], scope: Scope) -> BTreeMap<ArgRole, usize> {
    let mut counts: BTreeMap<ArgRole, usize> = ArgRole::ALL.iter().map(|&r| (r, 0)).collect();
    for case in corpus {
        for s in scope.sentences(case) {
            *counts.entry(s.role).or_insert(0) += 1;
        }
    }
    counts
}

fn split_counts(counts: &BTreeMap<ArgRole, usize>) -> (usize, usize) {
    counts.iter().fold((0, 0), |(arg, non), (role, &n)| {
        if role.is_argumentative() {
            (arg + n, non)
        } else {
            (arg, non + n)
        }
    })
}

/// Non-argumentative to argumentative sentence ratio; `None` without
/// argumentative sentences.
pub fn imbalance_ratio(counts: &BTreeMap<ArgRole, usize>) -> Option<f64> {
    let (arg, non) = split_counts(counts);
    (arg > 0).then(|| non as f64 / arg as f64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionRecord {
    pub case_id: String,
    pub role: ArgRole,
    /// Whitespace words before the sentence's first word in the unmarked
    /// joined document.
    pub word_offset: usize,
}

/// One record per argumentative document sentence.
pub fn position_records(corpus: &[CaseRecord]) -> Vec<PositionRecord> {
    let mut out = Vec::new();
    for case in corpus {
        let mut offset = 0;
        for s in &case.doc {
            if s.role.is_argumentative() {
                out.push(PositionRecord {
                    case_id: case.id.clone(),
                    role: s.role,
                    word_offset: offset,
                });
            }
            offset += s.word_count();
        }
    }
    out
}

/// Fraction of records whose offset falls inside the first `limit` words.
/// An empty record set is fully covered.
pub fn coverage_under_limit(records: &[PositionRecord], limit: usize) -> Result<f64> {
    if limit == 0 {
        return Err(Error::BadLimit(limit));
    }
    if records.is_empty() {
        return Ok(1.0);
    }
    let covered = records.iter().filter(|r| r.word_offset < limit).count();
    Ok(covered as f64 / records.len() as f64)
}

pub fn case_lengths(corpus: &[CaseRecord], scope: Scope) -> Vec<usize> {
    corpus
        .iter()
        .map(|c| scope.sentences(c).iter().map(Sentence::word_count).sum())
        .collect()
}

/// Word-count distribution per case.
pub fn length_distribution(corpus: &[CaseRecord], scope: Scope) -> Result<DistributionSummary> {
    let lengths: Vec<f64> = case_lengths(corpus, scope).into_iter().map(|n| n as f64).collect();
    DistributionSummary::from_values(&lengths)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassWeights {
    pub argumentative: u32,
    pub non_argumentative: u32,
}

/// Cross-entropy class weights from the label imbalance. The argumentative
/// weight is the rounded non/arg ratio clamped to [1, 10000], snapped to 1000
/// when the ratio is within 20% of 1000.
pub fn derive_class_weights(counts: &BTreeMap<ArgRole, usize>) -> Result<ClassWeights> {
    let ratio = imbalance_ratio(counts).ok_or(Error::NoArgumentative)?;
    let weight = if (ratio - 1000.0).abs() <= 200.0 {
        1000
    } else {
        ratio.round().clamp(1.0, 10_000.0) as u32
    };
    Ok(ClassWeights {
        argumentative: weight,
        non_argumentative: 1,
    })
}

/// Limits reported by default in coverage tables.
pub const DEFAULT_COVERAGE_LIMITS: [usize; 2] = [BART_WORD_LIMIT, LED_WORD_LIMIT];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub case_count: usize,
    pub doc_fractions: DistributionSummary,
    pub summary_fractions: DistributionSummary,
    pub doc_lengths: DistributionSummary,
    pub summary_lengths: DistributionSummary,
    pub doc_role_counts: BTreeMap<ArgRole, usize>,
    pub summary_role_counts: BTreeMap<ArgRole, usize>,
    pub doc_imbalance_ratio: Option<f64>,
    pub class_weights: Option<ClassWeights>,
    pub coverage: Vec<(usize, f64)>,
}

/// Output files of the stats command, as `(file name, contents)`.
pub fn stats_bundle(corpus: &[CaseRecord], limits: &[usize]) -> Result<Vec<(&'static str, String)>> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let csv_string = |header: &[&str], rows: Vec<Vec<String>>| -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::io("<csv>", e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    };

    let fractions = csv_string(
        &["case_id", "doc_fraction", "summary_fraction"],
        case_fractions(corpus)
            .into_iter()
            .map(|(id, d, s)| vec![id, format!("{d:.6}"), format!("{s:.6}")])
            .collect(),
    )?;

    let doc_counts = role_counts(corpus, Scope::Doc);
    let summary_counts = role_counts(corpus, Scope::Summary);
    let mut count_rows = Vec::new();
    for (scope, counts) in [(Scope::Doc, &doc_counts), (Scope::Summary, &summary_counts)] {
        for (role, n) in counts {
            count_rows.push(vec![scope.as_str().to_string(), role.to_string(), n.to_string()]);
        }
    }
    let role_counts_csv = csv_string(&["scope", "role", "count"], count_rows)?;

    let records = position_records(corpus);
    let positions = csv_string(
        &["case_id", "role", "word_offset"],
        records
            .iter()
            .map(|r| vec![r.case_id.clone(), r.role.to_string(), r.word_offset.to_string()])
            .collect(),
    )?;

    let doc_lengths = case_lengths(corpus, Scope::Doc);
    let summary_lengths = case_lengths(corpus, Scope::Summary);
    let lengths = csv_string(
        &["case_id", "doc_words", "summary_words"],
        corpus
            .iter()
            .zip(doc_lengths.iter().zip(&summary_lengths))
            .map(|(c, (d, s))| vec![c.id.clone(), d.to_string(), s.to_string()])
            .collect(),
    )?;

    let mut coverage_rows = Vec::new();
    for &limit in limits {
        coverage_rows.push((limit, coverage_under_limit(&records, limit)?));
    }
    let coverage = csv_string(
        &["limit", "fraction"],
        coverage_rows
            .iter()
            .map(|(l, f)| vec![l.to_string(), format!("{f:.6}")])
            .collect(),
    )?;

    let (doc_fractions, summary_fractions) = argumentative_fraction(corpus)?;
    let summary = CorpusSummary {
        case_count: corpus.len(),
        doc_fractions,
        summary_fractions,
        doc_lengths: length_distribution(corpus, Scope::Doc)?,
        summary_lengths: length_distribution(corpus, Scope::Summary)?,
        doc_imbalance_ratio: imbalance_ratio(&doc_counts),
        class_weights: derive_class_weights(&doc_counts).ok(),
        doc_role_counts: doc_counts,
        summary_role_counts: summary_counts,
        coverage: coverage_rows,
    };
    let mut summary_json = serde_json::to_string_pretty(&summary)?;
    summary_json.push('\n');

    Ok(vec![
        ("fractions.csv", fractions),
        ("role_counts.csv", role_counts_csv),
        ("positions.csv", positions),
        ("lengths.csv", lengths),
        ("coverage.csv", coverage),
        ("summary.json", summary_json),
    ])
}
