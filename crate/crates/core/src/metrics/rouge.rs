use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::tokenize::{tokenize, TokenizerConfig};
use crate::error::{Error, Result};

/// Precision / recall / F1 on a 0-1 scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl RougeScore {
    pub const ZERO: RougeScore = RougeScore {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
    };

    pub fn from_pr(precision: f64, recall: f64) -> Self {
        RougeScore {
            precision,
            recall,
            f1: f_measure(precision, recall),
        }
    }
}

/// Balanced F-measure (beta = 1); zero when both inputs are zero.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

/// Raw match counts behind a ROUGE score, kept so scores can also be pooled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Overlap {
    pub matched: usize,
    pub reference_total: usize,
    pub hypothesis_total: usize,
}

impl Overlap {
    pub fn score(&self) -> RougeScore {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        RougeScore::from_pr(
            ratio(self.matched, self.hypothesis_total),
            ratio(self.matched, self.reference_total),
        )
    }
}

impl std::ops::Add for Overlap {
    type Output = Overlap;

    fn add(self, o: Overlap) -> Overlap {
        Overlap {
            matched: self.matched + o.matched,
            reference_total: self.reference_total + o.reference_total,
            hypothesis_total: self.hypothesis_total + o.hypothesis_total,
        }
    }
}

/// Contiguous n-grams with multiplicity. Fewer than `n` tokens gives an empty map.
pub fn ngram_counts<T: Hash + Eq>(tokens: &[T], n: usize) -> Result<HashMap<&[T], usize>> {
    if n == 0 {
        return Err(Error::BadN(n));
    }
    let mut counts = HashMap::new();
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    Ok(counts)
}

pub fn rouge_n_overlap<T: Hash + Eq>(reference: &[T], hypothesis: &[T], n: usize) -> Result<Overlap> {
    let ref_counts = ngram_counts(reference, n)?;
    let hyp_counts = ngram_counts(hypothesis, n)?;
    let matched = ref_counts
        .iter()
        .map(|(gram, &c)| c.min(hyp_counts.get(gram).copied().unwrap_or(0)))
        .sum();
    Ok(Overlap {
        matched,
        reference_total: reference.len().saturating_sub(n - 1),
        hypothesis_total: hypothesis.len().saturating_sub(n - 1),
    })
}

pub fn rouge_n(reference: &str, hypothesis: &str, n: usize, config: &TokenizerConfig) -> Result<RougeScore> {
    let r = tokenize(reference, config);
    let h = tokenize(hypothesis, config);
    Ok(rouge_n_overlap(&r, &h, n)?.score())
}

/// LCS length in O(|a|·|b|) time and O(min(|a|, |b|)) memory.
pub fn lcs_length<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; short.len() + 1];
    let mut cur = vec![0usize; short.len() + 1];
    for x in long {
        for (j, y) in short.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                cur[j].max(prev[j + 1])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len()]
}

/// Indices into `a` of one longest common subsequence with `b`.
fn lcs_indices<T: PartialEq>(a: &[T], b: &[T]) -> Vec<usize> {
    let (n, m) = (a.len(), b.len());
    let mut table = vec![vec![0usize; m + 1]; n + 1];
    for i in 1..=n {
        for j in 1..=m {
            table[i][j] = if a[i - 1] == b[j - 1] {
                table[i - 1][j - 1] + 1
            } else {
                table[i - 1][j].max(table[i][j - 1])
            };
        }
    }
    let (mut i, mut j) = (n, m);
    let mut out = Vec::with_capacity(table[n][m]);
    while i > 0 && j > 0 {
        if a[i - 1] == b[j - 1] {
            out.push(i - 1);
            i -= 1;
            j -= 1;
        } else if table[i - 1][j] >= table[i][j - 1] {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    out.reverse();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RougeLMode {
    /// Each text is one token sequence.
    #[default]
    WholeSequence,
    /// Summary-level union LCS over sentences.
    SentenceUnion,
}

pub fn rouge_l_overlap<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> Overlap {
    Overlap {
        matched: lcs_length(reference, hypothesis),
        reference_total: reference.len(),
        hypothesis_total: hypothesis.len(),
    }
}

/// Union-LCS over sentences. For each reference sentence the union of its LCS
/// positions against every hypothesis sentence is taken; a union position
/// counts as a hit only while that token still has unused occurrences in both
/// texts, so no token is credited more often than it appears.
pub fn rouge_l_union_overlap<T: Hash + Eq + Clone>(reference: &[Vec<T>], hypothesis: &[Vec<T>]) -> Overlap {
    let mut ref_left: HashMap<&T, usize> = HashMap::new();
    let mut hyp_left: HashMap<&T, usize> = HashMap::new();
    for t in reference.iter().flatten() {
        *ref_left.entry(t).or_insert(0) += 1;
    }
    for t in hypothesis.iter().flatten() {
        *hyp_left.entry(t).or_insert(0) += 1;
    }
    let mut matched = 0;
    for r in reference {
        let union: BTreeSet<usize> = hypothesis.iter().flat_map(|h| lcs_indices(r, h)).collect();
        for idx in union {
            let token = &r[idx];
            let (Some(rc), Some(hc)) = (ref_left.get(token).copied(), hyp_left.get(token).copied()) else {
                continue;
            };
            if rc > 0 && hc > 0 {
                matched += 1;
                ref_left.insert(token, rc - 1);
                hyp_left.insert(token, hc - 1);
            }
        }
    }
    Overlap {
        matched,
        reference_total: reference.iter().map(Vec::len).sum(),
        hypothesis_total: hypothesis.iter().map(Vec::len).sum(),
    }
}

/// Sentence segmentation for union mode: newline-separated lines when the
/// text has more than one, otherwise breaks after tokens ending in `.`, `!`
/// or `?`.
pub fn split_sentences(text: &str) -> Vec<String> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.len() > 1 {
        return lines.into_iter().map(str::to_string).collect();
    }
    let mut out = Vec::new();
    let mut cur: Vec<&str> = Vec::new();
    for word in text.split_whitespace() {
        cur.push(word);
        if word.ends_with(['.', '!', '?']) {
            out.push(cur.join(" "));
            cur.clear();
        }
    }
    if !cur.is_empty() {
        out.push(cur.join(" "));
    }
    out
}

pub fn rouge_l_overlap_text(reference: &str, hypothesis: &str, config: &TokenizerConfig, mode: RougeLMode) -> Overlap {
    match mode {
        RougeLMode::WholeSequence => {
            rouge_l_overlap(&tokenize(reference, config), &tokenize(hypothesis, config))
        }
        RougeLMode::SentenceUnion => {
            let seg = |t: &str| -> Vec<Vec<String>> {
                split_sentences(t).iter().map(|s| tokenize(s, config)).collect()
            };
            rouge_l_union_overlap(&seg(reference), &seg(hypothesis))
        }
    }
}

/// ROUGE-L over whole token sequences.
pub fn rouge_l(reference: &str, hypothesis: &str, config: &TokenizerConfig) -> RougeScore {
    rouge_l_overlap_text(reference, hypothesis, config, RougeLMode::WholeSequence).score()
}

pub fn rouge_l_with_mode(reference: &str, hypothesis: &str, config: &TokenizerConfig, mode: RougeLMode) -> RougeScore {
    rouge_l_overlap_text(reference, hypothesis, config, mode).score()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const REF: &str = "the cat sat on the mat";
    const HYP: &str = "the cat sat";

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-4
    }

    #[test]
    fn ngram_examples() {
        let counts = ngram_counts(&["a", "b", "a"], 1).unwrap();
        assert_eq!(counts[&["a"][..]], 2);
        assert_eq!(counts[&["b"][..]], 1);
        let counts = ngram_counts(&["a", "b", "a", "b"], 2).unwrap();
        assert_eq!(counts.len(), 2);
        assert_eq!(counts[&["a", "b"][..]], 2);
        assert_eq!(counts[&["b", "a"][..]], 1);
        assert!(ngram_counts(&["a"], 2).unwrap().is_empty());
        assert!(matches!(ngram_counts(&["a"], 0), Err(Error::BadN(0))));
    }

    #[test]
    fn rouge_cat_fixture() {
        let cfg = TokenizerConfig::default();
        let r1 = rouge_n(REF, HYP, 1, &cfg).unwrap();
        assert_eq!((r1.precision, r1.recall), (1.0, 0.5));
        assert!(close(r1.f1, 0.6667));
        let r2 = rouge_n(REF, HYP, 2, &cfg).unwrap();
        assert_eq!((r2.precision, r2.recall), (1.0, 0.4));
        assert!(close(r2.f1, 0.5714));
        let rl = rouge_l(REF, HYP, &cfg);
        assert_eq!((rl.precision, rl.recall), (1.0, 0.5));
        assert!(close(rl.f1, 0.6667));
    }

    #[test]
    fn rouge_degenerate_inputs() {
        let cfg = TokenizerConfig::default();
        assert_eq!(rouge_l(REF, "", &cfg), RougeScore::ZERO);
        assert_eq!(rouge_n("", "", 1, &cfg).unwrap(), RougeScore::ZERO);
        for n in 1..=6 {
            let s = rouge_n(REF, REF, n, &cfg).unwrap();
            assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
        }
        let s = rouge_l(REF, REF, &cfg);
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn lcs_examples() {
        assert_eq!(lcs_length(&["a", "b", "c", "d", "e"], &["a", "c", "e"]), 3);
        let x = ["p", "q", "p"];
        assert_eq!(lcs_length(&x, &x), 3);
        assert_eq!(lcs_length(&x, &[]), 0);
        assert_eq!(lcs_indices(&["a", "b", "c", "d", "e"], &["a", "c", "e"]), [0, 2, 4]);
    }

    #[test]
    fn union_lcs_matches_hand_count() {
        // Classic union-LCS example: ref "w1 w2 w3 w4 w5", hyps "w1 w2 w6 w7 w8"
        // and "w1 w3 w8 w9 w5" give a union {w1 w2 w3 w5} of size 4.
        let r = vec![vec!["w1", "w2", "w3", "w4", "w5"]];
        let h = vec![vec!["w1", "w2", "w6", "w7", "w8"], vec!["w1", "w3", "w8", "w9", "w5"]];
        let o = rouge_l_union_overlap(&r, &h);
        assert_eq!(o.matched, 4);
        assert_eq!((o.reference_total, o.hypothesis_total), (5, 10));
    }

    #[test]
    fn union_mode_on_single_sentence_equals_whole() {
        let cfg = TokenizerConfig::default();
        let a = rouge_l_with_mode(REF, HYP, &cfg, RougeLMode::SentenceUnion);
        assert_eq!(a, rouge_l(REF, HYP, &cfg));
        assert_eq!(split_sentences("A b. C d! e"), ["A b.", "C d!", "e"]);
        assert_eq!(split_sentences("x. y\nz"), ["x. y", "z"]);
    }

    fn seq() -> impl Strategy<Value = Vec<u8>> {
        prop::collection::vec(0u8..5, 0..20)
    }

    proptest! {
        #[test]
        fn swap_duality(a in seq(), b in seq(), n in 1usize..4) {
            let ab = rouge_n_overlap(&a, &b, n).unwrap().score();
            let ba = rouge_n_overlap(&b, &a, n).unwrap().score();
            prop_assert_eq!(ab.precision, ba.recall);
            prop_assert_eq!(ab.recall, ba.precision);
            let lab = rouge_l_overlap(&a, &b).score();
            let lba = rouge_l_overlap(&b, &a).score();
            prop_assert_eq!(lab.precision, lba.recall);
        }

        #[test]
        fn bounds_hold(a in seq(), b in seq(), n in 1usize..4) {
            let o = rouge_n_overlap(&a, &b, n).unwrap();
            prop_assert!(o.matched <= o.reference_total.min(o.hypothesis_total));
            let s = o.score();
            for v in [s.precision, s.recall, s.f1] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }

        #[test]
        fn lcs_properties(a in seq(), b in seq()) {
            let l = lcs_length(&a, &b);
            prop_assert!(l <= a.len().min(b.len()));
            prop_assert_eq!(l, lcs_length(&b, &a));
            let ab: Vec<u8> = a.iter().chain(b.iter()).copied().collect();
            prop_assert_eq!(lcs_length(&a, &ab), a.len());
            prop_assert_eq!(lcs_indices(&a, &b).len(), l);
        }
    }
}
