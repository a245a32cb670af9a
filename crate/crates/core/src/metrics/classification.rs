use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::rouge::f_measure;
use crate::corpus::ArgRole;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

impl ClassMetrics {
    fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let ratio = |n: usize, d: usize| if d == 0 { 0.0 } else { n as f64 / d as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        ClassMetrics {
            precision,
            recall,
            f1: f_measure(precision, recall),
            support: tp + fn_,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub per_class: BTreeMap<ArgRole, ClassMetrics>,
    /// Unweighted mean of per-class F1 over the evaluated labels.
    pub macro_f1: f64,
    /// F1 of the "argumentative" class after collapsing Issue/Reason/Conclusion.
    pub binary_f1: f64,
    /// Labels that occur in neither gold nor predictions; they count as F1 = 0.
    pub absent_classes: Vec<ArgRole>,
}

/// Per-role report over all four roles.
pub fn classification_report(gold: &[ArgRole], predicted: &[ArgRole]) -> Result<ClassificationReport> {
    classification_report_with_labels(gold, predicted, &ArgRole::ALL)
}

/// As [`classification_report`], restricting the per-class table and the
/// macro average to `labels`. The binary score always uses every item.
pub fn classification_report_with_labels(
    gold: &[ArgRole],
    predicted: &[ArgRole],
    labels: &[ArgRole],
) -> Result<ClassificationReport> {
    if gold.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            context: "gold vs predicted roles".into(),
            expected: gold.len(),
            actual: predicted.len(),
        });
    }
    if gold.is_empty() || labels.is_empty() {
        return Err(Error::EmptyInput);
    }

    let mut per_class = BTreeMap::new();
    let mut absent_classes = Vec::new();
    for &label in labels {
        let (mut tp, mut fp, mut fn_) = (0, 0, 0);
        for (&g, &p) in gold.iter().zip(predicted) {
            match (g == label, p == label) {
                (true, true) => tp += 1,
                (false, true) => fp += 1,
                (true, false) => fn_ += 1,
                (false, false) => {}
            }
        }
        if tp + fp + fn_ == 0 {
            absent_classes.push(label);
        }
        per_class.insert(label, ClassMetrics::from_counts(tp, fp, fn_));
    }
    let macro_f1 = per_class.values().map(|m| m.f1).sum::<f64>() / labels.len() as f64;

    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (g, p) in gold.iter().zip(predicted) {
        match (g.is_argumentative(), p.is_argumentative()) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            (false, false) => {}
        }
    }
    let binary_f1 = ClassMetrics::from_counts(tp, fp, fn_).f1;

    Ok(ClassificationReport {
        per_class,
        macro_f1,
        binary_f1,
        absent_classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ArgRole::*;

    #[test]
    fn perfect_predictions() {
        let gold = [Issue, Reason, Conclusion, NonArgument, NonArgument];
        let r = classification_report(&gold, &gold).unwrap();
        assert_eq!(r.macro_f1, 1.0);
        assert_eq!(r.binary_f1, 1.0);
        assert!(r.absent_classes.is_empty());
    }

    #[test]
    fn two_class_confusion() {
        // A = Issue, B = Reason
        let gold = [Issue, Issue, Reason, Reason];
        let pred = [Issue, Reason, Reason, Reason];
        let r = classification_report_with_labels(&gold, &pred, &[Issue, Reason]).unwrap();
        assert!((r.per_class[&Issue].f1 - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.per_class[&Reason].f1 - 0.8).abs() < 1e-12);
        assert!((r.macro_f1 - 0.7333).abs() < 1e-4);
        assert_eq!(r.per_class[&Issue].support, 2);
    }

    #[test]
    fn absent_classes_count_as_zero() {
        let gold = [Issue, Issue, Reason, Reason];
        let pred = [Issue, Reason, Reason, Reason];
        let r = classification_report(&gold, &pred).unwrap();
        assert_eq!(r.absent_classes, vec![Conclusion, NonArgument]);
        assert!((r.macro_f1 - (2.0 / 3.0 + 0.8) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn all_non_argument_predictions() {
        let gold = [Issue, NonArgument, Reason];
        let pred = [NonArgument; 3];
        assert_eq!(classification_report(&gold, &pred).unwrap().binary_f1, 0.0);
    }

    #[test]
    fn input_errors() {
        assert!(matches!(
            classification_report(&[Issue], &[]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(classification_report(&[], &[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn macro_invariant_under_relabeling() {
        let gold = [Issue, Reason, Reason, Conclusion, NonArgument, Issue];
        let pred = [Issue, Issue, Reason, NonArgument, NonArgument, Conclusion];
        let perm = |r: &ArgRole| match r {
            Issue => Reason,
            Reason => Conclusion,
            Conclusion => NonArgument,
            NonArgument => Issue,
        };
        let g2: Vec<_> = gold.iter().map(perm).collect();
        let p2: Vec<_> = pred.iter().map(perm).collect();
        let a = classification_report(&gold, &pred).unwrap().macro_f1;
        let b = classification_report(&g2, &p2).unwrap().macro_f1;
        assert!((a - b).abs() < 1e-12);
    }
}
