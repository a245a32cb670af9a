use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenPattern {
    /// Maximal runs of Unicode alphanumeric characters.
    AlphanumericRuns,
}

/// Tokenization used for every ROUGE computation. Defaults: lowercase on,
/// stemming off. Stemming is the Snowball English (Porter2) stemmer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    pub stemming: bool,
    pub token_pattern: TokenPattern,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            lowercase: true,
            stemming: false,
            token_pattern: TokenPattern::AlphanumericRuns,
        }
    }
}

pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    let stemmer = config.stemming.then(|| Stemmer::create(Algorithm::English));
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| {
            let t = if config.lowercase {
                t.to_lowercase()
            } else {
                t.to_string()
            };
            match &stemmer {
                Some(st) => st.stem(&t).into_owned(),
                None => t,
            }
        })
        .collect()
}
