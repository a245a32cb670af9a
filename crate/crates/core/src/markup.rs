//! Argument-role marker tokens: injection, stripping, scheme downgrade and
//! word-limit truncation.
//!
//! Markers are always standalone whitespace-delimited tokens. An argumentative
//! sentence is emitted as `<open> text </close>`, and sentences are joined by
//! single spaces.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{ArgRole, CaseRecord, Sentence};
use crate::error::{Error, Result};

/// Short-context encoder budget (BART-style), in words.
pub const BART_WORD_LIMIT: usize = 1024;
/// Long-context encoder budget (Longformer-style), in words.
pub const LED_WORD_LIMIT: usize = 6144;

const BINARY2_VOCAB: [&str; 2] = ["<IRC>", "</IRC>"];
const ROLES6_VOCAB: [&str; 6] = [
    "<Issue>",
    "</Issue>",
    "<Reason>",
    "</Reason>",
    "<Conclusion>",
    "</Conclusion>",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MarkerScheme {
    /// One generic pair for every argumentative sentence.
    #[serde(rename = "binary2")]
    Binary2,
    /// One pair per role.
    #[serde(rename = "roles6")]
    Roles6,
}

impl MarkerScheme {
    pub const ALL: [MarkerScheme; 2] = [MarkerScheme::Binary2, MarkerScheme::Roles6];

    pub fn as_str(self) -> &'static str {
        match self {
            MarkerScheme::Binary2 => "binary2",
            MarkerScheme::Roles6 => "roles6",
        }
    }
}

impl fmt::Display for MarkerScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MarkerScheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "binary2" => Ok(MarkerScheme::Binary2),
            "roles6" => Ok(MarkerScheme::Roles6),
            other => Err(format!("unknown marker scheme {other:?} (binary2|roles6)")),
        }
    }
}

/// Reserved tokens of a scheme, open/close pairs in role order.
pub fn marker_vocabulary(scheme: MarkerScheme) -> &'static [&'static str] {
    match scheme {
        MarkerScheme::Binary2 => &BINARY2_VOCAB,
        MarkerScheme::Roles6 => &ROLES6_VOCAB,
    }
}

/// First reserved token (of either scheme) occurring anywhere in `text`.
pub fn find_reserved_marker(text: &str) -> Option<&'static str> {
    if !text.contains('<') {
        return None;
    }
    BINARY2_VOCAB
        .iter()
        .chain(ROLES6_VOCAB.iter())
        .find(|m| text.contains(**m))
        .copied()
}

fn marker_pair(role: ArgRole, scheme: MarkerScheme) -> Option<(&'static str, &'static str)> {
    match (scheme, role) {
        (_, ArgRole::NonArgument) => None,
        (MarkerScheme::Binary2, _) => Some((BINARY2_VOCAB[0], BINARY2_VOCAB[1])),
        (MarkerScheme::Roles6, ArgRole::Issue) => Some((ROLES6_VOCAB[0], ROLES6_VOCAB[1])),
        (MarkerScheme::Roles6, ArgRole::Reason) => Some((ROLES6_VOCAB[2], ROLES6_VOCAB[3])),
        (MarkerScheme::Roles6, ArgRole::Conclusion) => Some((ROLES6_VOCAB[4], ROLES6_VOCAB[5])),
    }
}

/// Role carried by a recovered marker span. Binary2 markers only say that a
/// sentence is argumentative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkedRole {
    Argumentative,
    Issue,
    Reason,
    Conclusion,
}

impl MarkedRole {
    /// The span role that injecting `role` under `scheme` produces.
    pub fn from_role(role: ArgRole, scheme: MarkerScheme) -> Option<MarkedRole> {
        match (scheme, role) {
            (_, ArgRole::NonArgument) => None,
            (MarkerScheme::Binary2, _) => Some(MarkedRole::Argumentative),
            (MarkerScheme::Roles6, ArgRole::Issue) => Some(MarkedRole::Issue),
            (MarkerScheme::Roles6, ArgRole::Reason) => Some(MarkedRole::Reason),
            (MarkerScheme::Roles6, ArgRole::Conclusion) => Some(MarkedRole::Conclusion),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Marker {
    role: MarkedRole,
    open: bool,
}

fn parse_marker(token: &str, scheme: MarkerScheme) -> Option<Marker> {
    let (role, open) = match (scheme, token) {
        (MarkerScheme::Binary2, "<IRC>") => (MarkedRole::Argumentative, true),
        (MarkerScheme::Binary2, "</IRC>") => (MarkedRole::Argumentative, false),
        (MarkerScheme::Roles6, "<Issue>") => (MarkedRole::Issue, true),
        (MarkerScheme::Roles6, "</Issue>") => (MarkedRole::Issue, false),
        (MarkerScheme::Roles6, "<Reason>") => (MarkedRole::Reason, true),
        (MarkerScheme::Roles6, "</Reason>") => (MarkedRole::Reason, false),
        (MarkerScheme::Roles6, "<Conclusion>") => (MarkedRole::Conclusion, true),
        (MarkerScheme::Roles6, "</Conclusion>") => (MarkedRole::Conclusion, false),
        _ => return None,
    };
    Some(Marker { role, open })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedDocument {
    pub text: String,
    pub scheme: MarkerScheme,
    pub source_id: String,
}

/// Wraps every argumentative sentence in its scheme's markers and joins all
/// sentences with single spaces. Non-argumentative sentences pass through.
pub fn inject_markers(sentences: &[Sentence], scheme: MarkerScheme) -> Result<MarkedDocument> {
    let mut text = String::new();
    for (i, sentence) in sentences.iter().enumerate() {
        if let Some(marker) = find_reserved_marker(&sentence.text) {
            return Err(Error::MarkerCollision { marker });
        }
        if i > 0 {
            text.push(' ');
        }
        match marker_pair(sentence.role, scheme) {
            Some((open, close)) => {
                text.push_str(open);
                text.push(' ');
                text.push_str(&sentence.text);
                text.push(' ');
                text.push_str(close);
            }
            None => text.push_str(&sentence.text),
        }
    }
    Ok(MarkedDocument {
        text,
        scheme,
        source_id: String::new(),
    })
}

/// Marks a case's document with its gold roles.
pub fn mark_case(case: &CaseRecord, scheme: MarkerScheme) -> Result<MarkedDocument> {
    let mut marked = inject_markers(&case.doc, scheme)?;
    marked.source_id = case.id.clone();
    Ok(marked)
}

/// Byte ranges of whitespace-delimited tokens.
pub(crate) fn token_ranges(text: &str) -> Vec<(usize, usize)> {
    let mut ranges = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                ranges.push((s, i));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        ranges.push((s, text.len()));
    }
    ranges
}

/// A role span recovered from marker tokens. `start..end` indexes the
/// whitespace tokens of the cleaned text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleSpan {
    pub role: MarkedRole,
    pub start: usize,
    pub end: usize,
    /// Set when the span came from an unbalanced or mismatched marker.
    pub degenerate: bool,
}

/// Removes the scheme's marker tokens and recovers role spans.
///
/// Each marker is deleted together with one adjacent whitespace character
/// (the following one, or the preceding one at end of text), which makes
/// `strip(inject(S))` reproduce the plain joined text byte for byte.
///
/// Unbalanced input is tolerated: an open marker left unclosed spans to the
/// next open marker or to the end of text, a close marker without a matching
/// open yields an empty span, and all of these are flagged `degenerate`.
pub fn strip_markers(text: &str, scheme: MarkerScheme) -> (String, Vec<RoleSpan>) {
    let mut deletions: Vec<(usize, usize)> = Vec::new();
    let mut spans = Vec::new();
    let mut open: Option<(MarkedRole, usize)> = None;
    let mut words = 0usize;

    for (s, e) in token_ranges(text) {
        let Some(marker) = parse_marker(&text[s..e], scheme) else {
            words += 1;
            continue;
        };
        deletions.push(deletion_range(text, s, e));
        if marker.open {
            if let Some((role, start)) = open.take() {
                spans.push(RoleSpan { role, start, end: words, degenerate: true });
            }
            open = Some((marker.role, words));
        } else {
            match open.take() {
                Some((role, start)) => spans.push(RoleSpan {
                    role,
                    start,
                    end: words,
                    degenerate: role != marker.role,
                }),
                None => spans.push(RoleSpan {
                    role: marker.role,
                    start: words,
                    end: words,
                    degenerate: true,
                }),
            }
        }
    }
    if let Some((role, start)) = open {
        spans.push(RoleSpan { role, start, end: words, degenerate: true });
    }

    (apply_deletions(text, &deletions), spans)
}

/// Removes the marker tokens of both schemes.
pub fn strip_all_markers(text: &str) -> String {
    let mut deletions = Vec::new();
    for (s, e) in token_ranges(text) {
        let token = &text[s..e];
        if MarkerScheme::ALL.iter().any(|sc| parse_marker(token, *sc).is_some()) {
            deletions.push(deletion_range(text, s, e));
        }
    }
    apply_deletions(text, &deletions)
}

fn deletion_range(text: &str, start: usize, end: usize) -> (usize, usize) {
    if let Some(c) = text[end..].chars().next() {
        // token ranges always end at whitespace or end of text
        return (start, end + c.len_utf8());
    }
    match text[..start].chars().next_back() {
        Some(c) if c.is_whitespace() => (start - c.len_utf8(), end),
        _ => (start, end),
    }
}

fn apply_deletions(text: &str, deletions: &[(usize, usize)]) -> String {
    let mut sorted = deletions.to_vec();
    sorted.sort_unstable();
    let mut out = String::with_capacity(text.len());
    let mut cursor = 0;
    for (s, e) in sorted {
        if s > cursor {
            out.push_str(&text[cursor..s]);
        }
        cursor = cursor.max(e);
    }
    out.push_str(&text[cursor.min(text.len())..]);
    out
}

/// Keeps the first `limit` whitespace tokens, rejoined by single spaces.
/// Markers count as words, so truncation can leave an open marker unclosed,
/// the same as naive encoder truncation would.
pub fn truncate_words(text: &str, limit: usize) -> Result<String> {
    if limit == 0 {
        return Err(Error::BadLimit(limit));
    }
    Ok(text.split_whitespace().take(limit).collect::<Vec<_>>().join(" "))
}

/// Rewrites every role-specific marker to its `<IRC>` / `</IRC>` equivalent,
/// leaving all other bytes untouched.
pub fn downgrade_scheme(text_roles6: &str) -> String {
    let mut out = String::with_capacity(text_roles6.len());
    let mut cursor = 0;
    for (s, e) in token_ranges(text_roles6) {
        if let Some(marker) = parse_marker(&text_roles6[s..e], MarkerScheme::Roles6) {
            out.push_str(&text_roles6[cursor..s]);
            out.push_str(if marker.open { BINARY2_VOCAB[0] } else { BINARY2_VOCAB[1] });
            cursor = e;
        }
    }
    out.push_str(&text_roles6[cursor..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str, role: ArgRole) -> Sentence {
        Sentence::new(text, role).unwrap()
    }

    #[test]
    fn vocabularies() {
        assert_eq!(marker_vocabulary(MarkerScheme::Binary2), ["<IRC>", "</IRC>"]);
        let roles6 = marker_vocabulary(MarkerScheme::Roles6);
        assert_eq!(roles6.len(), 6);
        assert_eq!(&roles6[2..4], ["<Reason>", "</Reason>"]);
    }

    #[test]
    fn inject_examples() {
        let issue = s(
            "Mr. Comeau appeals, arguing that the probate court judge erred:",
            ArgRole::Issue,
        );
        assert_eq!(
            inject_markers(&[issue], MarkerScheme::Roles6).unwrap().text,
            "<Issue> Mr. Comeau appeals, arguing that the probate court judge erred: </Issue>"
        );
        let reason = s("He also found ... gift to Ms. Akerley.", ArgRole::Reason);
        assert_eq!(
            inject_markers(&[reason], MarkerScheme::Binary2).unwrap().text,
            "<IRC> He also found ... gift to Ms. Akerley. </IRC>"
        );
        let doc = [
            s("Background facts.", ArgRole::NonArgument),
            s("Costs awarded.", ArgRole::Conclusion),
        ];
        assert_eq!(
            inject_markers(&doc, MarkerScheme::Roles6).unwrap().text,
            "Background facts. <Conclusion> Costs awarded. </Conclusion>"
        );
    }

    #[test]
    fn inject_rejects_collision() {
        let bad = Sentence {
            text: "see <Issue> here".into(),
            role: ArgRole::NonArgument,
        };
        assert!(matches!(
            inject_markers(&[bad], MarkerScheme::Binary2),
            Err(Error::MarkerCollision { marker: "<Issue>" })
        ));
    }

    #[test]
    fn strip_plain_and_orphans() {
        let (clean, spans) = strip_markers("plain text with no markers", MarkerScheme::Binary2);
        assert_eq!(clean, "plain text with no markers");
        assert!(spans.is_empty());

        let (clean, spans) = strip_markers("<IRC> orphaned open marker text", MarkerScheme::Binary2);
        assert_eq!(clean, "orphaned open marker text");
        assert_eq!(
            spans,
            vec![RoleSpan { role: MarkedRole::Argumentative, start: 0, end: 4, degenerate: true }]
        );

        let (clean, spans) = strip_markers("a </Reason> b", MarkerScheme::Roles6);
        assert_eq!(clean, "a b");
        assert_eq!(spans.len(), 1);
        assert!(spans[0].degenerate);
        assert_eq!((spans[0].start, spans[0].end), (1, 1));
    }

    #[test]
    fn strip_mismatched_and_nested() {
        let (clean, spans) =
            strip_markers("<Issue> a <Reason> b </Reason> c </Issue>", MarkerScheme::Roles6);
        assert_eq!(clean, "a b c");
        assert_eq!(spans[0], RoleSpan { role: MarkedRole::Issue, start: 0, end: 1, degenerate: true });
        assert_eq!(spans[1], RoleSpan { role: MarkedRole::Reason, start: 1, end: 2, degenerate: false });
        assert!(spans[2].degenerate);

        let (_, spans) = strip_markers("<Issue> a </Reason>", MarkerScheme::Roles6);
        assert_eq!(spans, vec![RoleSpan { role: MarkedRole::Issue, start: 0, end: 1, degenerate: true }]);
    }

    #[test]
    fn strip_only_touches_own_scheme() {
        let (clean, spans) = strip_markers("<Issue> a </Issue>", MarkerScheme::Binary2);
        assert_eq!(clean, "<Issue> a </Issue>");
        assert!(spans.is_empty());
        assert_eq!(strip_all_markers("<IRC> a </IRC> <Issue> b </Issue>"), "a b");
        assert_eq!(strip_all_markers("<IRC> </IRC>"), "");
    }

    #[test]
    fn truncation() {
        let text = "one two three four five six seven eight nine ten";
        assert_eq!(truncate_words(text, 3).unwrap(), "one two three");
        assert_eq!(truncate_words(text, 100).unwrap(), text);
        assert_eq!(truncate_words("a\t b\n c", 5).unwrap(), "a b c");
        assert!(matches!(truncate_words(text, 0), Err(Error::BadLimit(0))));
    }

    #[test]
    fn truncation_drops_late_issue_marker() {
        let filler = vec!["w"; 1500].join(" ");
        let doc = [
            s(&filler, ArgRole::NonArgument),
            s("The question is whether the gift was valid.", ArgRole::Issue),
        ];
        let marked = inject_markers(&doc, MarkerScheme::Roles6).unwrap().text;
        // the marker is preceded by exactly 1500 words
        let first_marker = marked.split_whitespace().position(|t| t == "<Issue>").unwrap();
        assert_eq!(first_marker, 1500);
        assert!(!truncate_words(&marked, BART_WORD_LIMIT).unwrap().contains("<Issue>"));
        assert!(truncate_words(&marked, LED_WORD_LIMIT).unwrap().contains("<Issue>"));
    }

    #[test]
    fn downgrade_examples() {
        assert_eq!(downgrade_scheme("<Reason> because X </Reason>"), "<IRC> because X </IRC>");
        assert_eq!(downgrade_scheme("no markers  here "), "no markers  here ");
    }

    fn arb_sentences() -> impl Strategy<Value = Vec<Sentence>> {
        let role = prop::sample::select(ArgRole::ALL.to_vec());
        let text = "[a-zA-Z.,]{1,6}( {1,2}[a-zA-Z.,<>/]{1,6}){0,5}".prop_filter_map(
            "must be a valid sentence",
            |t| check_valid(&t).then_some(t),
        );
        prop::collection::vec((text, role), 1..12)
            .prop_map(|v| v.into_iter().map(|(text, role)| Sentence { text, role }).collect())
    }

    fn check_valid(t: &str) -> bool {
        crate::corpus::check_sentence_text(t).is_ok()
    }

    proptest! {
        #[test]
        fn marker_counts_match_argumentative_sentences(doc in arb_sentences()) {
            let arg = doc.iter().filter(|s| s.role.is_argumentative()).count();
            for scheme in MarkerScheme::ALL {
                let text = inject_markers(&doc, scheme).unwrap().text;
                let vocab = marker_vocabulary(scheme);
                let opens = text.split_whitespace().filter(|t| vocab.iter().step_by(2).any(|v| v == t)).count();
                let closes = text.split_whitespace().filter(|t| vocab.iter().skip(1).step_by(2).any(|v| v == t)).count();
                prop_assert_eq!(opens, arg);
                prop_assert_eq!(closes, arg);
                let plain: Vec<&str> = text.split_whitespace().filter(|t| !vocab.contains(t)).collect();
                let joined = crate::corpus::join_sentences(&doc);
                prop_assert_eq!(plain, joined.split_whitespace().collect::<Vec<_>>());
            }
        }

        #[test]
        fn truncation_is_monotone(doc in arb_sentences(), a in 1usize..40, b in 1usize..40) {
            let text = inject_markers(&doc, MarkerScheme::Roles6).unwrap().text;
            let (lo, hi) = (a.min(b), a.max(b));
            let short = truncate_words(&text, lo).unwrap();
            let long = truncate_words(&text, hi).unwrap();
            prop_assert!(long.starts_with(&short));
        }
    }
}
