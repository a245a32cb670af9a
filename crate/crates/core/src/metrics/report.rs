use std::collections::HashSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::rouge::{rouge_l_overlap_text, rouge_n_overlap, Overlap, RougeLMode, RougeScore};
use super::tokenize::{tokenize, TokenizerConfig};
use crate::error::{Error, Result};
use crate::markup::strip_all_markers;
use crate::numeric::stable_mean;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Unweighted mean of per-case scores.
    #[default]
    MeanOfCases,
    /// Scores from match counts summed over all cases.
    Pooled,
}

/// Everything that affects scoring; echoed verbatim in every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoringConfig {
    pub tokenizer: TokenizerConfig,
    pub beta: f64,
    pub rouge_l_mode: RougeLMode,
    pub aggregation: Aggregation,
    /// Marker tokens of both schemes are removed from both texts before scoring.
    pub strip_markers: bool,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig {
            tokenizer: TokenizerConfig::default(),
            beta: 1.0,
            rouge_l_mode: RougeLMode::WholeSequence,
            aggregation: Aggregation::MeanOfCases,
            strip_markers: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    /// Hypothesis against the whole reference summary.
    FullReference,
    /// Hypothesis against the argumentative sentences of the reference only.
    IrcSubset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoringPair {
    pub id: String,
    pub reference: String,
    pub hypothesis: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseScores {
    pub id: String,
    /// `None` when the case was excluded from ROUGE scoring.
    pub rouge1: Option<RougeScore>,
    pub rouge2: Option<RougeScore>,
    pub rouge_l: Option<RougeScore>,
    pub hyp_words: usize,
}

/// Score on the 0-100 reporting scale, rounded to two decimals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl ScaledScore {
    fn from_unit(s: RougeScore) -> Self {
        ScaledScore {
            precision: round2(s.precision * 100.0),
            recall: round2(s.recall * 100.0),
            f1: round2(s.f1 * 100.0),
        }
    }
}

pub(crate) fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateScores {
    pub rouge1: ScaledScore,
    pub rouge2: ScaledScore,
    pub rouge_l: ScaledScore,
    /// Mean whitespace word count of the (marker-stripped) hypotheses, over
    /// every case including excluded ones.
    pub mean_hyp_words: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub protocol: Protocol,
    pub config: ScoringConfig,
    pub case_count: usize,
    pub scored_count: usize,
    /// Cases left out of the ROUGE aggregates (empty reference).
    pub excluded_ids: Vec<String>,
    pub aggregate: AggregateScores,
    pub per_case: Vec<CaseScores>,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    /// Per-case table: `id, rouge1_f, rouge2_f, rougeL_f, hyp_words`, F1 on
    /// the 0-100 scale. Excluded cases have empty score cells.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["id", "rouge1_f", "rouge2_f", "rougeL_f", "hyp_words"])?;
        let cell = |s: &Option<RougeScore>| {
            s.map(|s| format!("{:.4}", s.f1 * 100.0)).unwrap_or_default()
        };
        for case in &self.per_case {
            w.write_record([
                case.id.clone(),
                cell(&case.rouge1),
                cell(&case.rouge2),
                cell(&case.rouge_l),
                case.hyp_words.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// One unit of work for [`score_cases`]; `reference = None` excludes the case
/// from ROUGE while still counting its hypothesis length.
pub(crate) struct PendingCase<'a> {
    pub id: &'a str,
    pub reference: Option<&'a str>,
    pub hypothesis: &'a str,
}

pub(crate) fn score_cases(protocol: Protocol, cases: &[PendingCase<'_>], config: &ScoringConfig) -> Result<EvalReport> {
    if cases.is_empty() {
        return Err(Error::EmptyPairList);
    }
    let mut seen = HashSet::new();
    for c in cases {
        if !seen.insert(c.id) {
            return Err(Error::DuplicateId(c.id.to_string()));
        }
    }

    let clean = |t: &str| if config.strip_markers { strip_all_markers(t) } else { t.to_string() };
    let mut per_case = Vec::with_capacity(cases.len());
    let mut overlaps: Vec<[Overlap; 3]> = Vec::new();
    let mut excluded_ids = Vec::new();
    let mut lengths = Vec::with_capacity(cases.len());

    for case in cases {
        let hyp = clean(case.hypothesis);
        let hyp_words = hyp.split_whitespace().count();
        lengths.push(hyp_words as f64);
        let Some(reference) = case.reference else {
            excluded_ids.push(case.id.to_string());
            per_case.push(CaseScores {
                id: case.id.to_string(),
                rouge1: None,
                rouge2: None,
                rouge_l: None,
                hyp_words,
            });
            continue;
        };
        let reference = clean(reference);
        let ref_tokens = tokenize(&reference, &config.tokenizer);
        let hyp_tokens = tokenize(&hyp, &config.tokenizer);
        let o = [
            rouge_n_overlap(&ref_tokens, &hyp_tokens, 1)?,
            rouge_n_overlap(&ref_tokens, &hyp_tokens, 2)?,
            rouge_l_overlap_text(&reference, &hyp, &config.tokenizer, config.rouge_l_mode),
        ];
        per_case.push(CaseScores {
            id: case.id.to_string(),
            rouge1: Some(o[0].score()),
            rouge2: Some(o[1].score()),
            rouge_l: Some(o[2].score()),
            hyp_words,
        });
        overlaps.push(o);
    }

    let aggregate_metric = |k: usize| -> ScaledScore {
        if overlaps.is_empty() {
            return ScaledScore::from_unit(RougeScore::ZERO);
        }
        let unit = match config.aggregation {
            Aggregation::MeanOfCases => {
                let scores: Vec<RougeScore> = overlaps.iter().map(|o| o[k].score()).collect();
                let mean = |f: fn(&RougeScore) -> f64| stable_mean(&scores.iter().map(f).collect::<Vec<_>>());
                RougeScore {
                    precision: mean(|s| s.precision),
                    recall: mean(|s| s.recall),
                    f1: mean(|s| s.f1),
                }
            }
            Aggregation::Pooled => overlaps
                .iter()
                .map(|o| o[k])
                .fold(Overlap::default(), |a, b| a + b)
                .score(),
        };
        ScaledScore::from_unit(unit)
    };

    Ok(EvalReport {
        protocol,
        config: *config,
        case_count: cases.len(),
        scored_count: overlaps.len(),
        excluded_ids,
        aggregate: AggregateScores {
            rouge1: aggregate_metric(0),
            rouge2: aggregate_metric(1),
            rouge_l: aggregate_metric(2),
            mean_hyp_words: round2(stable_mean(&lengths)),
        },
        per_case,
    })
}

/// Scores each hypothesis against its full reference.
pub fn evaluate_corpus(pairs: &[ScoringPair], config: &ScoringConfig) -> Result<EvalReport> {
    let pending: Vec<PendingCase<'_>> = pairs
        .iter()
        .map(|p| PendingCase {
            id: &p.id,
            reference: Some(&p.reference),
            hypothesis: &p.hypothesis,
        })
        .collect();
    score_cases(Protocol::FullReference, &pending, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(id: &str, r: &str, h: &str) -> ScoringPair {
        ScoringPair {
            id: id.into(),
            reference: r.into(),
            hypothesis: h.into(),
        }
    }

    #[test]
    fn identical_pair_scores_hundred() {
        let rep = evaluate_corpus(&[pair("a", "the court held", "the court held")], &ScoringConfig::default()).unwrap();
        for s in [rep.aggregate.rouge1, rep.aggregate.rouge2, rep.aggregate.rouge_l] {
            assert_eq!(s.f1, 100.0);
        }
    }

    #[test]
    fn aggregate_is_mean_of_cases() {
        // second case: ref "a b", hyp "a c" -> R1 P = R = 0.5
        let pairs = [pair("x", "a b", "a b"), pair("y", "a b", "a c")];
        let rep = evaluate_corpus(&pairs, &ScoringConfig::default()).unwrap();
        assert_eq!(rep.per_case[1].rouge1.unwrap().f1, 0.5);
        assert_eq!(rep.aggregate.rouge1.f1, 75.0);
    }

    #[test]
    fn pooled_aggregation() {
        let pairs = [pair("x", "a b c d", "a b c d"), pair("y", "a b", "z")];
        let cfg = ScoringConfig {
            aggregation: Aggregation::Pooled,
            ..Default::default()
        };
        let rep = evaluate_corpus(&pairs, &cfg).unwrap();
        // matched 4, ref 6, hyp 5
        assert_eq!(rep.aggregate.rouge1.recall, round2(400.0 / 6.0));
        assert_eq!(rep.aggregate.rouge1.precision, 80.0);
    }

    #[test]
    fn mean_hypothesis_length() {
        let pairs = [pair("x", "r", "a b c"), pair("y", "r", "a b c d e")];
        let rep = evaluate_corpus(&pairs, &ScoringConfig::default()).unwrap();
        assert_eq!(rep.aggregate.mean_hyp_words, 4.0);
    }

    #[test]
    fn markers_in_hypotheses_do_not_change_scores() {
        let plain = evaluate_corpus(&[pair("x", "the judge erred", "the judge erred badly")], &ScoringConfig::default()).unwrap();
        let marked = evaluate_corpus(
            &[pair("x", "the judge erred", "<Issue> the judge erred </Issue> <IRC> badly")],
            &ScoringConfig::default(),
        )
        .unwrap();
        assert_eq!(plain, marked);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            evaluate_corpus(&[], &ScoringConfig::default()),
            Err(Error::EmptyPairList)
        ));
        let dup = [pair("x", "a", "a"), pair("x", "b", "b")];
        assert!(matches!(
            evaluate_corpus(&dup, &ScoringConfig::default()),
            Err(Error::DuplicateId(id)) if id == "x"
        ));
    }

    #[test]
    fn csv_layout() {
        let rep = evaluate_corpus(&[pair("c1", "a b", "a b")], &ScoringConfig::default()).unwrap();
        assert_eq!(
            rep.csv_string(),
            "id,rouge1_f,rouge2_f,rougeL_f,hyp_words\nc1,100.0000,100.0000,100.0000,2\n"
        );
    }
}
