//! The `argsumm` command line. Exit status: 0 success, 1 domain error,
//! 2 I/O or usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::argeval::evaluate_argumentativeness;
use crate::corpus::{load_corpus, split_corpus, CaseRecord, SplitAssignment, SplitPart, SplitRatios};
use crate::error::{Error, Result};
use crate::io::{load_hypotheses, load_predictions, load_split, split_to_json, to_jsonl, write_atomic};
use crate::markup::MarkerScheme;
use crate::metrics::{evaluate_corpus, Aggregation, EvalReport, RougeLMode, ScoringConfig, ScoringPair, TokenizerConfig};
use crate::pipeline::{marked_records, PipelineConfig, RoleSource, WordLimit};
use crate::stats::{stats_bundle, DEFAULT_COVERAGE_LIMITS};

#[derive(Debug, Parser)]
#[command(name = "argsumm", version, about = "Argument-aware legal summarization corpus tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a corpus file; exits 1 when any record is invalid.
    Validate {
        corpus: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Seeded train/validation/test split.
    Split {
        corpus: PathBuf,
        /// Comma-separated train,validation,test ratios.
        #[arg(long, default_value = "0.8,0.1,0.1")]
        ratios: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Inject role markers and truncate, writing one marked file per split.
    Markup {
        corpus: PathBuf,
        #[arg(long)]
        split: PathBuf,
        #[arg(long, default_value = "roles6")]
        scheme: MarkerScheme,
        /// `bart` (1024), `led` (6144) or a word count.
        #[arg(long, default_value = "led")]
        limit: WordLimit,
        /// `oracle` or a role-predictions file.
        #[arg(long, default_value = "oracle")]
        roles: RoleSource,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// ROUGE-1/2/L of hypotheses against full reference summaries.
    Score(ScoreArgs),
    /// ROUGE-1/2/L against the argumentative sentences of each reference.
    ArgScore(ScoreArgs),
    /// Corpus statistics as CSV/JSON.
    Stats {
        corpus: PathBuf,
        /// Extra coverage limits besides 1024 and 6144.
        #[arg(long = "limit")]
        limits: Vec<WordLimit>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RougeLArg {
    Whole,
    Union,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AggregateArg {
    Mean,
    Pooled,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    corpus: PathBuf,
    hypotheses: PathBuf,
    /// Score only the test ids of this split.
    #[arg(long)]
    split: Option<PathBuf>,
    #[arg(long)]
    stemming: bool,
    #[arg(long, value_enum, default_value = "whole")]
    rouge_l: RougeLArg,
    #[arg(long, value_enum, default_value = "mean")]
    aggregate: AggregateArg,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl ScoreArgs {
    fn config(&self) -> ScoringConfig {
        ScoringConfig {
            tokenizer: TokenizerConfig {
                stemming: self.stemming,
                ..Default::default()
            },
            rouge_l_mode: match self.rouge_l {
                RougeLArg::Whole => RougeLMode::WholeSequence,
                RougeLArg::Union => RougeLMode::SentenceUnion,
            },
            aggregation: match self.aggregate {
                AggregateArg::Mean => Aggregation::MeanOfCases,
                AggregateArg::Pooled => Aggregation::Pooled,
            },
            ..Default::default()
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_io() {
                2
            } else {
                1
            }
        }
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

fn load_valid_corpus(path: &Path) -> Result<Vec<CaseRecord>> {
    let (cases, report) = load_corpus(path)?;
    if !report.is_valid {
        return Err(Error::InvalidCorpus(report.errors.len()));
    }
    Ok(cases)
}

fn parse_ratios(s: &str) -> Result<SplitRatios> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::BadRatios(format!("{s:?}: {e}")))?;
    match parts[..] {
        [a, b, c] => SplitRatios::new(a, b, c),
        _ => Err(Error::BadRatios(format!("expected three ratios, got {s:?}"))),
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Validate { corpus, out } => {
            let (_, report) = load_corpus(&corpus)?;
            write_json(&out.join("validation_report.json"), &report)?;
            for issue in &report.errors {
                eprintln!("{}: {:?}: {}", issue.id, issue.kind, issue.message);
            }
            println!(
                "{} cases, {} problem(s)",
                report.case_count,
                report.errors.len()
            );
            Ok(if report.is_valid { 0 } else { 1 })
        }
        Command::Split { corpus, ratios, seed, out } => {
            let cases = load_valid_corpus(&corpus)?;
            let split = split_corpus(&cases, parse_ratios(&ratios)?, seed)?;
            write_atomic(out.join("split.json"), split_to_json(&split).as_bytes())?;
            println!(
                "train {} / validation {} / test {}",
                split.train.len(),
                split.validation.len(),
                split.test.len()
            );
            Ok(0)
        }
        Command::Markup { corpus, split, scheme, limit, roles, seed, out } => {
            let cases = load_valid_corpus(&corpus)?;
            let split = load_split(&split)?;
            let predictions = match &roles {
                RoleSource::Oracle => None,
                RoleSource::Predicted(path) => Some(load_predictions(path)?),
            };
            let config = PipelineConfig {
                scheme,
                truncation_limit: limit.0,
                role_source: roles,
                tokenizer: TokenizerConfig::default(),
                seed,
            };
            for part in SplitPart::ALL {
                let records = marked_records(&cases, split.part(part), scheme, limit.0, predictions.as_ref())?;
                write_atomic(out.join(format!("{}.jsonl", part.as_str())), to_jsonl(&records)?.as_bytes())?;
            }
            write_json(&out.join("markup_config.json"), &config)?;
            println!("marked {} cases ({scheme}, limit {limit})", cases.len());
            Ok(0)
        }
        Command::Score(args) => {
            let report = score_command(&args, false)?;
            write_report(&args.out, "score", &report)?;
            Ok(0)
        }
        Command::ArgScore(args) => {
            let report = score_command(&args, true)?;
            write_report(&args.out, "argscore", &report)?;
            Ok(0)
        }
        Command::Stats { corpus, limits, out } => {
            let (cases, _) = load_corpus(&corpus)?;
            let mut all: Vec<usize> = DEFAULT_COVERAGE_LIMITS.to_vec();
            all.extend(limits.iter().map(|l| l.0));
            all.sort_unstable();
            all.dedup();
            let files = stats_bundle(&cases, &all)?;
            for (name, contents) in &files {
                write_atomic(out.join(name), contents.as_bytes())?;
            }
            println!("wrote {} files for {} cases", files.len(), cases.len());
            Ok(0)
        }
    }
}

fn scored_cases(cases: Vec<CaseRecord>, split: Option<&SplitAssignment>) -> Result<Vec<CaseRecord>> {
    let Some(split) = split else {
        return Ok(cases);
    };
    let mut by_id: BTreeMap<String, CaseRecord> = cases.into_iter().map(|c| (c.id.clone(), c)).collect();
    split
        .test
        .iter()
        .map(|id| by_id.remove(id).ok_or_else(|| Error::UnknownId(id.clone())))
        .collect()
}

fn score_command(args: &ScoreArgs, irc_only: bool) -> Result<EvalReport> {
    let cases = load_valid_corpus(&args.corpus)?;
    let split = args.split.as_deref().map(load_split).transpose()?;
    let cases = scored_cases(cases, split.as_ref())?;
    let hypotheses = load_hypotheses(&args.hypotheses)?;
    let config = args.config();
    if irc_only {
        return evaluate_argumentativeness(&cases, &hypotheses, &config);
    }
    let pairs = cases
        .iter()
        .map(|c| {
            let hypothesis = hypotheses
                .get(&c.id)
                .ok_or_else(|| Error::MissingHypothesis(c.id.clone()))?;
            Ok(ScoringPair {
                id: c.id.clone(),
                reference: c.summary_text(),
                hypothesis: hypothesis.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    evaluate_corpus(&pairs, &config)
}

fn write_report(out: &Path, stem: &str, report: &EvalReport) -> Result<()> {
    write_atomic(out.join(format!("{stem}_report.json")), report.to_json().as_bytes())?;
    write_atomic(out.join(format!("{stem}_cases.csv")), report.csv_string().as_bytes())?;
    let a = &report.aggregate;
    println!(
        "R1 {:.2}  R2 {:.2}  RL {:.2}  mean length {:.2}  ({} scored, {} excluded)",
        a.rouge1.f1,
        a.rouge2.f1,
        a.rouge_l.f1,
        a.mean_hyp_words,
        report.scored_count,
        report.excluded_ids.len()
    );
    Ok(())
}
