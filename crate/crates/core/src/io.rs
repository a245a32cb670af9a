//! Line-delimited record formats exchanged with the model bridge, and atomic
//! file output.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{ArgRole, SplitAssignment};
use crate::error::{Error, Result};
use crate::markup::MarkerScheme;

/// One line of a marked-corpus file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedRecord {
    pub id: String,
    pub scheme: MarkerScheme,
    /// Marked and truncated document.
    pub input_text: String,
    /// Reference summary without markers.
    pub target_text: String,
}

/// One line of a hypothesis file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisRecord {
    pub id: String,
    pub summary: String,
}

/// One line of a role-predictions file: one role per document sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub roles: Vec<ArgRole>,
}

pub type RolePredictions = BTreeMap<String, Vec<ArgRole>>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Parses every non-blank line as `T`. Any bad line fails the whole file.
pub fn parse_jsonl<T: for<'de> Deserialize<'de>>(content: &str) -> Result<Vec<T>> {
    content
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::MalformedRecord(format!("line {}: {e}", i + 1)))
        })
        .collect()
}

pub fn to_jsonl<T: Serialize>(records: &[T]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

fn unique_map<V>(pairs: impl IntoIterator<Item = (String, V)>) -> Result<BTreeMap<String, V>> {
    let mut map = BTreeMap::new();
    for (id, v) in pairs {
        if map.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        map.insert(id, v);
    }
    Ok(map)
}

pub fn parse_hypotheses(content: &str) -> Result<BTreeMap<String, String>> {
    unique_map(parse_jsonl::<HypothesisRecord>(content)?.into_iter().map(|h| (h.id, h.summary)))
}

pub fn load_hypotheses(path: impl AsRef<Path>) -> Result<BTreeMap<String, String>> {
    parse_hypotheses(&read(path.as_ref())?)
}

pub fn parse_predictions(content: &str) -> Result<RolePredictions> {
    unique_map(parse_jsonl::<PredictionRecord>(content)?.into_iter().map(|p| (p.id, p.roles)))
}

pub fn load_predictions(path: impl AsRef<Path>) -> Result<RolePredictions> {
    parse_predictions(&read(path.as_ref())?)
}

pub fn load_marked(path: impl AsRef<Path>) -> Result<Vec<MarkedRecord>> {
    parse_jsonl(&read(path.as_ref())?)
}

pub fn load_split(path: impl AsRef<Path>) -> Result<SplitAssignment> {
    Ok(serde_json::from_str(&read(path.as_ref())?)?)
}

pub fn split_to_json(split: &SplitAssignment) -> String {
    let mut s = serde_json::to_string_pretty(split).expect("splits always serialize");
    s.push('\n');
    s
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: impl AsRef<Path>, contents: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predictions_format() {
        let p = parse_predictions("{\"id\":\"a\",\"roles\":[\"issue\",\"non_irc\"]}\n\n").unwrap();
        assert_eq!(p["a"], vec![ArgRole::Issue, ArgRole::NonArgument]);
        assert!(matches!(
            parse_predictions("{\"id\":\"a\",\"roles\":[\"Issue\"]}"),
            Err(Error::MalformedRecord(_))
        ));
        let dup = "{\"id\":\"a\",\"roles\":[]}\n{\"id\":\"a\",\"roles\":[]}";
        assert!(matches!(parse_predictions(dup), Err(Error::DuplicateId(_))));
    }

    #[test]
    fn marked_record_wire_format() {
        let rec = MarkedRecord {
            id: "c1".into(),
            scheme: MarkerScheme::Binary2,
            input_text: "<IRC> a </IRC>".into(),
            target_text: "b".into(),
        };
        assert_eq!(
            to_jsonl(&[rec.clone()]).unwrap(),
            "{\"id\":\"c1\",\"scheme\":\"binary2\",\"input_text\":\"<IRC> a </IRC>\",\"target_text\":\"b\"}\n"
        );
        assert_eq!(parse_jsonl::<MarkedRecord>(&to_jsonl(&[rec.clone()]).unwrap()).unwrap(), [rec]);
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/out.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
