//! Tokenization and chart parsing into denotation-carrying derivations.

mod chart;
mod combine;
mod derivation;
mod oracle;
mod replay;
mod rules;

use thiserror::Error;

use crate::categories::Cat;
use crate::lexicon::Lexicon;
use crate::terms::Term;

pub use chart::{parse_with_stats, ChartStats};
pub use derivation::{Derivation, Rule, Span, Step};
pub use oracle::{enumerate_parses_bruteforce, enumerate_with_lift};
pub use replay::{replay, replay_goal, ReplayError, ReplayErrorKind};
pub use rules::{apply_rule, Applied, RuleError};

/// Splits on whitespace; runs of whitespace collapse.
pub fn tokenize(sentence: &str) -> Vec<String> {
    sentence.split_whitespace().map(str::to_string).collect()
}

/// Resource caps on a single parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Deepest coordination lift (arguments threaded through `and`/`or`).
    pub max_lift_level: usize,
    /// Most parses returned.
    pub max_parses: usize,
    /// Most items kept per chart cell.
    pub max_span_items: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_lift_level: 3,
            max_parses: 16,
            max_span_items: 256,
        }
    }
}

impl SearchLimits {
    pub fn validate(&self) -> Result<(), ParseError> {
        if self.max_lift_level == 0 || self.max_parses == 0 || self.max_span_items == 0 {
            return Err(ParseError::InvalidLimits(*self));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    EmptyInput,
    #[error("unknown word {word:?} at position {position}")]
    UnknownWord { word: String, position: usize },
    #[error("no parse")]
    NoParse,
    #[error("search was truncated by a resource cap before any parse was found")]
    ResourceExceeded,
    #[error("goal category `{0}` must be ground")]
    NonGroundGoal(Cat),
    #[error("search limits must be positive: {0:?}")]
    InvalidLimits(SearchLimits),
}

/// A complete analysis: ground derivation and beta-normal denotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parse {
    pub derivation: Derivation,
    pub term: Term,
}

impl Parse {
    pub fn cat(&self) -> &Cat {
        &self.derivation.cat
    }
}

/// All parses of `words` at category `goal`, distinct up to alpha
/// equivalence of the denotation, smallest derivations first.
pub fn parse(words: &[String], goal: &Cat, lex: &Lexicon, limits: &SearchLimits) -> Result<Vec<Parse>, ParseError> {
    parse_with_stats(words, goal, lex, limits).map(|(p, _)| p)
}

/// Tokenizes and parses at `S` with default limits.
pub fn parse_sentence(sentence: &str, lex: &Lexicon) -> Result<Vec<Parse>, ParseError> {
    parse(&tokenize(sentence), &Cat::S, lex, &SearchLimits::default())
}
