//! Typed categorial-grammar parsing of controlled English into logical
//! formulas, with replayable derivation certificates and interchangeable
//! semantic targets.
//!
//! ```
//! use catgram::{engine, lexicon::Lexicon};
//!
//! let lex = Lexicon::core();
//! let parses = engine::parse_sentence("every natural is even", &lex).unwrap();
//! assert_eq!(parses[0].term.to_string(), "forall n:nat, even n");
//! ```

pub mod categories;
pub mod cli;
pub mod certificates;
pub mod engine;
pub mod lexicon;
pub mod syntax;
pub mod targets;
pub mod terms;

pub use categories::{Cat, SemType, Subst};
pub use engine::{parse, parse_sentence, tokenize, Derivation, Parse, ParseError, SearchLimits};
pub use lexicon::Lexicon;
pub use terms::Term;
