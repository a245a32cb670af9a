#![allow(dead_code)]

use argsumm::{ArgRole, CaseRecord, Sentence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WORDS: &[&str] = &[
    "the", "court", "appeal", "judge", "estate", "will", "gift", "costs", "trial", "evidence",
    "probate", "claim", "order", "application", "respondent", "appellant", "balance", "finding",
    "error", "law", "Mrs.", "Scott", "Akerley", "$2,533.45", "intended", "validity", "s.", "12(3)",
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_text(rng: &mut impl Rng, min_words: usize, max_words: usize) -> String {
    let n = rng.random_range(min_words..=max_words);
    let mut out = String::new();
    for i in 0..n {
        if i > 0 {
            // occasional double space to exercise byte-exact round trips
            out.push_str(if rng.random_bool(0.05) { "  " } else { " " });
        }
        out.push_str(WORDS[rng.random_range(0..WORDS.len())]);
    }
    out.push('.');
    out
}

pub fn random_role(rng: &mut impl Rng, p_argumentative: f64) -> ArgRole {
    if rng.random_bool(p_argumentative) {
        [ArgRole::Issue, ArgRole::Reason, ArgRole::Conclusion][rng.random_range(0..3)]
    } else {
        ArgRole::NonArgument
    }
}

pub fn random_sentences(rng: &mut impl Rng, count: usize, p_argumentative: f64) -> Vec<Sentence> {
    (0..count)
        .map(|_| {
            let text = random_text(rng, 1, 14);
            Sentence::new(text, random_role(rng, p_argumentative)).unwrap()
        })
        .collect()
}

/// Synthetic case: sparse argument roles in the document, dense in the
/// summary, and at least one argumentative summary sentence.
pub fn synthetic_case(rng: &mut impl Rng, id: String) -> CaseRecord {
    let doc_len = rng.random_range(5..40);
    let mut doc = random_sentences(rng, doc_len, 0.15);
    let at = rng.random_range(0..doc.len());
    doc[at].role = ArgRole::Issue;
    let sum_len = rng.random_range(2..6);
    let mut summary = random_sentences(rng, sum_len, 0.8);
    summary[0].role = ArgRole::Conclusion;
    CaseRecord { id, doc, summary }
}

pub fn synthetic_corpus(n: usize, seed: u64) -> Vec<CaseRecord> {
    let mut r = rng(seed);
    (0..n).map(|i| synthetic_case(&mut r, format!("case{i:04}"))).collect()
}

pub fn corpus_jsonl(corpus: &[CaseRecord]) -> String {
    corpus.iter().map(|c| c.to_line() + "\n").collect()
}
