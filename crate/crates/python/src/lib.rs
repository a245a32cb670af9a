use std::collections::BTreeMap;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use argsumm::argeval;
use argsumm::corpus::{self, CaseRecord, SplitRatios};
use argsumm::markup::{self, MarkerScheme};
use argsumm::metrics::{self, RougeLMode, ScoringConfig, ScoringPair, TokenizerConfig};
use argsumm::stats::{self, PositionRecord};
use argsumm::{ArgRole, Error, Sentence};

fn py_err(e: Error) -> PyErr {
    if e.is_io() {
        PyOSError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn scheme(name: &str) -> PyResult<MarkerScheme> {
    name.parse().map_err(PyValueError::new_err)
}

fn role(name: &str) -> PyResult<ArgRole> {
    name.parse().map_err(py_err)
}

fn sentences(items: Vec<(String, String)>) -> PyResult<Vec<Sentence>> {
    items
        .into_iter()
        .map(|(text, r)| Sentence::new(text, role(&r)?).map_err(py_err))
        .collect()
}

fn tokenizer(lowercase: bool, stemming: bool) -> TokenizerConfig {
    TokenizerConfig {
        lowercase,
        stemming,
        ..Default::default()
    }
}

/// Precision / recall / F1 on a 0-1 scale.
#[pyclass(name = "RougeScore", frozen)]
struct PyRougeScore {
    #[pyo3(get)]
    precision: f64,
    #[pyo3(get)]
    recall: f64,
    #[pyo3(get)]
    f1: f64,
}

impl From<metrics::RougeScore> for PyRougeScore {
    fn from(s: metrics::RougeScore) -> Self {
        PyRougeScore {
            precision: s.precision,
            recall: s.recall,
            f1: s.f1,
        }
    }
}

#[pymethods]
impl PyRougeScore {
    fn __repr__(&self) -> String {
        format!("RougeScore(precision={:.4}, recall={:.4}, f1={:.4})", self.precision, self.recall, self.f1)
    }
}

/// One annotated case; sentences are `(text, role)` tuples.
#[pyclass(name = "CaseRecord", from_py_object)]
#[derive(Clone)]
struct PyCaseRecord {
    inner: CaseRecord,
}

fn pairs(xs: &[Sentence]) -> Vec<(String, String)> {
    xs.iter().map(|s| (s.text.clone(), s.role.to_string())).collect()
}

#[pymethods]
impl PyCaseRecord {
    #[new]
    fn new(id: String, doc: Vec<(String, String)>, summary: Vec<(String, String)>) -> PyResult<Self> {
        let inner = CaseRecord {
            id,
            doc: sentences(doc)?,
            summary: sentences(summary)?,
        };
        // same checks as the file parser
        corpus::parse_case_record(&inner.to_line()).map_err(py_err)?;
        Ok(PyCaseRecord { inner })
    }

    #[staticmethod]
    fn from_json(line: &str) -> PyResult<Self> {
        corpus::parse_case_record(line)
            .map(|inner| PyCaseRecord { inner })
            .map_err(py_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_line()
    }

    #[getter]
    fn id(&self) -> String {
        self.inner.id.clone()
    }

    #[getter]
    fn doc(&self) -> Vec<(String, String)> {
        pairs(&self.inner.doc)
    }

    #[getter]
    fn summary(&self) -> Vec<(String, String)> {
        pairs(&self.inner.summary)
    }

    fn doc_text(&self) -> String {
        self.inner.doc_text()
    }

    fn summary_text(&self) -> String {
        self.inner.summary_text()
    }

    fn __repr__(&self) -> String {
        format!(
            "CaseRecord(id={:?}, doc={} sentences, summary={} sentences)",
            self.inner.id,
            self.inner.doc.len(),
            self.inner.summary.len()
        )
    }
}

fn unwrap_cases(cases: &[PyCaseRecord]) -> Vec<CaseRecord> {
    cases.iter().map(|c| c.inner.clone()).collect()
}

/// Returns `(cases, validation_report)`.
#[pyfunction]
fn load_corpus<'py>(py: Python<'py>, path: &str) -> PyResult<(Vec<PyCaseRecord>, Bound<'py, PyAny>)> {
    let (cases, report) = corpus::load_corpus(path).map_err(py_err)?;
    let cases = cases.into_iter().map(|inner| PyCaseRecord { inner }).collect();
    Ok((cases, to_py(py, &report)?))
}

#[pyfunction]
fn validate_corpus<'py>(py: Python<'py>, cases: Vec<PyCaseRecord>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &corpus::validate_corpus(&unwrap_cases(&cases)))
}

#[pyfunction]
#[pyo3(signature = (cases, ratios = (0.8, 0.1, 0.1), seed = 42))]
fn split_corpus<'py>(
    py: Python<'py>,
    cases: Vec<PyCaseRecord>,
    ratios: (f64, f64, f64),
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let ratios = SplitRatios::new(ratios.0, ratios.1, ratios.2).map_err(py_err)?;
    let split = corpus::split_corpus(&unwrap_cases(&cases), ratios, seed).map_err(py_err)?;
    to_py(py, &split)
}

#[pyfunction]
fn marker_vocabulary(scheme_name: &str) -> PyResult<Vec<&'static str>> {
    Ok(markup::marker_vocabulary(scheme(scheme_name)?).to_vec())
}

#[pyfunction]
fn inject_markers(sentence_list: Vec<(String, String)>, scheme_name: &str) -> PyResult<String> {
    markup::inject_markers(&sentences(sentence_list)?, scheme(scheme_name)?)
        .map(|m| m.text)
        .map_err(py_err)
}

/// Returns `(clean_text, [(role, start, end, degenerate), ...])`.
#[pyfunction]
fn strip_markers(text: &str, scheme_name: &str) -> PyResult<(String, Vec<(String, usize, usize, bool)>)> {
    let (clean, spans) = markup::strip_markers(text, scheme(scheme_name)?);
    let spans = spans
        .into_iter()
        .map(|s| {
            let role = serde_json::to_value(s.role)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default();
            (role, s.start, s.end, s.degenerate)
        })
        .collect();
    Ok((clean, spans))
}

#[pyfunction]
fn truncate_words(text: &str, limit: usize) -> PyResult<String> {
    markup::truncate_words(text, limit).map_err(py_err)
}

#[pyfunction]
fn downgrade_scheme(text: &str) -> String {
    markup::downgrade_scheme(text)
}

#[pyfunction]
#[pyo3(signature = (text, lowercase = true, stemming = false))]
fn tokenize(text: &str, lowercase: bool, stemming: bool) -> Vec<String> {
    metrics::tokenize(text, &tokenizer(lowercase, stemming))
}

#[pyfunction]
#[pyo3(signature = (reference, hypothesis, n = 1, stemming = false))]
fn rouge_n(reference: &str, hypothesis: &str, n: usize, stemming: bool) -> PyResult<PyRougeScore> {
    metrics::rouge_n(reference, hypothesis, n, &tokenizer(true, stemming))
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (reference, hypothesis, stemming = false, union = false))]
fn rouge_l(reference: &str, hypothesis: &str, stemming: bool, union: bool) -> PyRougeScore {
    let mode = if union { RougeLMode::SentenceUnion } else { RougeLMode::WholeSequence };
    metrics::rouge_l_with_mode(reference, hypothesis, &tokenizer(true, stemming), mode).into()
}

#[pyfunction]
fn lcs_length(a: Vec<String>, b: Vec<String>) -> usize {
    metrics::lcs_length(&a, &b)
}

#[pyfunction]
fn classification_report<'py>(py: Python<'py>, gold: Vec<String>, predicted: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let gold: Vec<ArgRole> = gold.iter().map(|r| role(r)).collect::<PyResult<_>>()?;
    let predicted: Vec<ArgRole> = predicted.iter().map(|r| role(r)).collect::<PyResult<_>>()?;
    let report = metrics::classification_report(&gold, &predicted).map_err(py_err)?;
    to_py(py, &report)
}

fn scoring_config(stemming: bool) -> ScoringConfig {
    ScoringConfig {
        tokenizer: tokenizer(true, stemming),
        ..Default::default()
    }
}

/// `pairs` are `(id, reference, hypothesis)`; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (pairs, stemming = false))]
fn evaluate_corpus<'py>(py: Python<'py>, pairs: Vec<(String, String, String)>, stemming: bool) -> PyResult<Bound<'py, PyAny>> {
    let pairs: Vec<ScoringPair> = pairs
        .into_iter()
        .map(|(id, reference, hypothesis)| ScoringPair { id, reference, hypothesis })
        .collect();
    let report = metrics::evaluate_corpus(&pairs, &scoring_config(stemming)).map_err(py_err)?;
    to_py(py, &report)
}

#[pyfunction]
fn irc_subset(summary: Vec<(String, String)>) -> PyResult<(String, usize)> {
    Ok(argeval::irc_subset(&sentences(summary)?))
}

#[pyfunction]
#[pyo3(signature = (cases, hypotheses, stemming = false))]
fn evaluate_argumentativeness<'py>(
    py: Python<'py>,
    cases: Vec<PyCaseRecord>,
    hypotheses: BTreeMap<String, String>,
    stemming: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let report = argeval::evaluate_argumentativeness(&unwrap_cases(&cases), &hypotheses, &scoring_config(stemming))
        .map_err(py_err)?;
    to_py(py, &report)
}

/// Returns `[(case_id, role, word_offset), ...]`.
#[pyfunction]
fn position_records(cases: Vec<PyCaseRecord>) -> Vec<(String, String, usize)> {
    stats::position_records(&unwrap_cases(&cases))
        .into_iter()
        .map(|r| (r.case_id, r.role.to_string(), r.word_offset))
        .collect()
}

#[pyfunction]
fn coverage_under_limit(offsets: Vec<usize>, limit: usize) -> PyResult<f64> {
    let records: Vec<PositionRecord> = offsets
        .into_iter()
        .map(|word_offset| PositionRecord {
            case_id: String::new(),
            role: ArgRole::Issue,
            word_offset,
        })
        .collect();
    stats::coverage_under_limit(&records, limit).map_err(py_err)
}

/// `counts` maps role names to sentence counts.
#[pyfunction]
fn derive_class_weights<'py>(py: Python<'py>, counts: BTreeMap<String, usize>) -> PyResult<Bound<'py, PyAny>> {
    let counts: BTreeMap<ArgRole, usize> = counts
        .iter()
        .map(|(r, &n)| Ok((role(r)?, n)))
        .collect::<PyResult<_>>()?;
    to_py(py, &stats::derive_class_weights(&counts).map_err(py_err)?)
}

/// Runs the command line with `args` (without the program name) and returns
/// its exit status.
#[pyfunction]
fn cli_main(args: Vec<String>) -> i32 {
    argsumm::cli::run(std::iter::once("argsumm".to_string()).chain(args))
}

#[pymodule]
fn argsumm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRougeScore>()?;
    m.add_class::<PyCaseRecord>()?;
    m.add("BART_WORD_LIMIT", markup::BART_WORD_LIMIT)?;
    m.add("LED_WORD_LIMIT", markup::LED_WORD_LIMIT)?;
    m.add_function(wrap_pyfunction!(load_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(validate_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(split_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(marker_vocabulary, m)?)?;
    m.add_function(wrap_pyfunction!(inject_markers, m)?)?;
    m.add_function(wrap_pyfunction!(strip_markers, m)?)?;
    m.add_function(wrap_pyfunction!(truncate_words, m)?)?;
    m.add_function(wrap_pyfunction!(downgrade_scheme, m)?)?;
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(rouge_n, m)?)?;
    m.add_function(wrap_pyfunction!(rouge_l, m)?)?;
    m.add_function(wrap_pyfunction!(lcs_length, m)?)?;
    m.add_function(wrap_pyfunction!(classification_report, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(irc_subset, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_argumentativeness, m)?)?;
    m.add_function(wrap_pyfunction!(position_records, m)?)?;
    m.add_function(wrap_pyfunction!(coverage_under_limit, m)?)?;
    m.add_function(wrap_pyfunction!(derive_class_weights, m)?)?;
    m.add_function(wrap_pyfunction!(cli_main, m)?)?;
    Ok(())
}
