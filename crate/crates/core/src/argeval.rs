//! Argumentativeness evaluation: generated summaries scored against only the
//! argumentative sentences of each reference summary.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{CaseRecord, Sentence};
use crate::error::{Error, Result};
use crate::metrics::{score_cases, EvalReport, PendingCase, Protocol, ScoringConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrcReference {
    pub id: String,
    /// Argumentative reference sentences in order, joined by single spaces.
    pub irc_text: String,
    pub irc_sentence_count: usize,
}

/// Keeps the argumentative sentences of a summary, in order.
pub fn irc_subset(summary: &[Sentence]) -> (String, usize) {
    let kept: Vec<&str> = summary
        .iter()
        .filter(|s| s.role.is_argumentative())
        .map(|s| s.text.as_str())
        .collect();
    (kept.join(" "), kept.len())
}

pub fn irc_reference(case: &CaseRecord) -> IrcReference {
    let (irc_text, irc_sentence_count) = irc_subset(&case.summary);
    IrcReference {
        id: case.id.clone(),
        irc_text,
        irc_sentence_count,
    }
}

/// Scores `hypotheses[id]` against each case's argumentative reference subset.
/// Cases whose reference has no argumentative sentence are excluded from the
/// ROUGE aggregates and listed in `excluded_ids`.
pub fn evaluate_argumentativeness(
    cases: &[CaseRecord],
    hypotheses: &BTreeMap<String, String>,
    config: &ScoringConfig,
) -> Result<EvalReport> {
    let mut seen = HashSet::new();
    let mut refs = Vec::with_capacity(cases.len());
    for case in cases {
        if !seen.insert(case.id.as_str()) {
            return Err(Error::DuplicateId(case.id.clone()));
        }
        if !hypotheses.contains_key(&case.id) {
            return Err(Error::MissingHypothesis(case.id.clone()));
        }
        refs.push(irc_reference(case));
    }
    let pending: Vec<PendingCase<'_>> = refs
        .iter()
        .map(|r| PendingCase {
            id: &r.id,
            reference: (r.irc_sentence_count > 0).then_some(r.irc_text.as_str()),
            hypothesis: &hypotheses[&r.id],
        })
        .collect();
    score_cases(Protocol::IrcSubset, &pending, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::ArgRole::{self, *};
    use crate::metrics::{evaluate_corpus, ScoringPair};

    fn sents(xs: &[(&str, ArgRole)]) -> Vec<Sentence> {
        xs.iter().map(|(t, r)| Sentence::new(*t, *r).unwrap()).collect()
    }

    fn case(id: &str, summary: &[(&str, ArgRole)]) -> CaseRecord {
        CaseRecord {
            id: id.into(),
            doc: sents(&[("Some document text.", NonArgument)]),
            summary: sents(summary),
        }
    }

    #[test]
    fn subset_examples() {
        let s = sents(&[("Facts.", NonArgument), ("Held: damages awarded.", Conclusion)]);
        assert_eq!(irc_subset(&s), ("Held: damages awarded.".to_string(), 1));
        assert_eq!(irc_subset(&sents(&[("Facts.", NonArgument)])), (String::new(), 0));
        let all = sents(&[("Is it valid?", Issue), ("Yes.", Conclusion)]);
        assert_eq!(irc_subset(&all).0, crate::corpus::join_sentences(&all));
    }

    #[test]
    fn adding_non_argument_sentences_keeps_subset() {
        let base = sents(&[("Is it valid?", Issue), ("Because of X.", Reason)]);
        let mut padded = base.clone();
        padded.insert(1, Sentence::new("Background.", NonArgument).unwrap());
        padded.push(Sentence::new("More facts.", NonArgument).unwrap());
        assert_eq!(irc_subset(&base), irc_subset(&padded));
    }

    #[test]
    fn identity_hypothesis_scores_one() {
        let c = case("a", &[("Facts here.", NonArgument), ("The appeal is allowed.", Conclusion)]);
        let hyps = BTreeMap::from([("a".to_string(), "The appeal is allowed.".to_string())]);
        let rep = evaluate_argumentativeness(&[c], &hyps, &ScoringConfig::default()).unwrap();
        let pc = &rep.per_case[0];
        assert_eq!(pc.rouge1.unwrap().f1, 1.0);
        assert_eq!(pc.rouge2.unwrap().f1, 1.0);
        assert_eq!(pc.rouge_l.unwrap().f1, 1.0);
    }

    #[test]
    fn full_reference_hypothesis_has_full_recall() {
        // 4 argumentative words + 4 non-argumentative words, all distinct
        let c = case("a", &[("alpha beta gamma delta", Issue), ("one two three four", NonArgument)]);
        let hyps = BTreeMap::from([("a".to_string(), c.summary_text())]);
        let rep = evaluate_argumentativeness(&[c], &hyps, &ScoringConfig::default()).unwrap();
        let r1 = rep.per_case[0].rouge1.unwrap();
        assert_eq!(r1.recall, 1.0);
        assert_eq!(r1.precision, 0.5);
    }

    #[test]
    fn mean_length_column() {
        let words = |n: usize| vec!["w"; n].join(" ");
        let cases = [case("a", &[("x y", Issue)]), case("b", &[("x y", Issue)])];
        let hyps = BTreeMap::from([("a".to_string(), words(156)), ("b".to_string(), words(174))]);
        let rep = evaluate_argumentativeness(&cases, &hyps, &ScoringConfig::default()).unwrap();
        assert_eq!(rep.aggregate.mean_hyp_words, 165.0);
    }

    #[test]
    fn empty_subsets_are_excluded_and_counted() {
        let cases = [
            case("a", &[("The appeal is allowed.", Conclusion)]),
            case("b", &[("Only facts.", NonArgument)]),
        ];
        let hyps = BTreeMap::from([
            ("a".to_string(), "The appeal is allowed.".to_string()),
            ("b".to_string(), "anything".to_string()),
        ]);
        let rep = evaluate_argumentativeness(&cases, &hyps, &ScoringConfig::default()).unwrap();
        assert_eq!(rep.excluded_ids, ["b"]);
        assert_eq!(rep.scored_count, 1);
        assert_eq!(rep.aggregate.rouge1.f1, 100.0);
        assert!(rep.per_case[1].rouge1.is_none());
    }

    #[test]
    fn all_argumentative_equals_full_protocol() {
        let cases = [
            case("a", &[("Is the will valid?", Issue), ("It is not.", Conclusion)]),
            case("b", &[("The judge erred in law.", Reason)]),
        ];
        let hyps = BTreeMap::from([
            ("a".to_string(), "The will is not valid.".to_string()),
            ("b".to_string(), "The judge erred.".to_string()),
        ]);
        let cfg = ScoringConfig::default();
        let arg = evaluate_argumentativeness(&cases, &hyps, &cfg).unwrap();
        let pairs: Vec<ScoringPair> = cases
            .iter()
            .map(|c| ScoringPair {
                id: c.id.clone(),
                reference: c.summary_text(),
                hypothesis: hyps[&c.id].clone(),
            })
            .collect();
        let full = evaluate_corpus(&pairs, &cfg).unwrap();
        assert_eq!(arg.aggregate, full.aggregate);
        assert_eq!(arg.per_case, full.per_case);
    }

    #[test]
    fn errors() {
        let c = case("a", &[("x", Issue)]);
        let err = evaluate_argumentativeness(&[c.clone()], &BTreeMap::new(), &ScoringConfig::default()).unwrap_err();
        assert!(matches!(err, Error::MissingHypothesis(id) if id == "a"));
        let hyps = BTreeMap::from([("a".to_string(), "x".to_string())]);
        let err = evaluate_argumentativeness(&[c.clone(), c], &hyps, &ScoringConfig::default()).unwrap_err();
        assert!(matches!(err, Error::DuplicateId(_)));
    }
}
