//! Typed lexicons: word entries, coordination schemas and constant
//! signatures, plus the shipped core and temporal demo lexicons.

mod coord;
mod file;
mod lint;

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::categories::{interp, Cat, SemType};
use crate::terms::{type_check, Term, TypeEnv};

pub use coord::{instantiate_coord, lift_depth, proplike, CoordError};
pub use lint::{lint_ambiguity, lint_entries, AmbiguityWarning};

/// Text of the shipped core lexicon.
pub const CORE_LEXICON: &str = include_str!("../../lexicons/core.lex");
/// Text of the temporal-logic demo lexicon.
pub const LTL_LEXICON: &str = include_str!("../../lexicons/ltl.lex");

/// Where a declaration came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Provenance {
    pub source: String,
    pub line: usize,
}

impl Provenance {
    pub fn builtin(what: &str) -> Self {
        Provenance {
            source: format!("<{what}>"),
            line: 0,
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.source, self.line)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub id: String,
    pub word: String,
    pub cat: Cat,
    pub denotation: Term,
    pub provenance: Provenance,
}

impl fmt::Display for LexEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "word {} @{} {} := {}",
            quote(&self.word),
            self.id,
            self.cat,
            self.denotation
        )
    }
}

/// Binary truth-value operation lifted by a coordinator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoordOp {
    And,
    Or,
}

impl CoordOp {
    pub fn name(self) -> &'static str {
        match self {
            CoordOp::And => "and",
            CoordOp::Or => "or",
        }
    }

    pub fn apply(self, a: Term, b: Term) -> Term {
        match self {
            CoordOp::And => Term::and(a, b),
            CoordOp::Or => Term::or(a, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordSchema {
    pub word: String,
    pub op: CoordOp,
    pub provenance: Provenance,
}

impl CoordSchema {
    /// Identifier used by derivations and certificates.
    pub fn id(&self) -> String {
        format!("coord/{}", self.word)
    }
}

impl fmt::Display for CoordSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coord {} {}", quote(&self.word), self.op.name())
    }
}

pub(crate) fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization cannot fail")
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{at}: column {column}: {message}")]
    Syntax {
        at: Provenance,
        column: usize,
        message: String,
    },
    #[error("{at}: entry `{id}` is inconsistent with its category: expected {expected}, found {found}")]
    TypeConsistency {
        at: Provenance,
        id: String,
        expected: SemType,
        found: String,
    },
    #[error("{at}: duplicate entry id `{id}` (first declared at {first})")]
    DuplicateId {
        at: Provenance,
        id: String,
        first: Provenance,
    },
    #[error("{at}: constant `{name}` redeclared as {new} (was {old})")]
    ConstConflict {
        at: Provenance,
        name: String,
        old: SemType,
        new: SemType,
    },
}

impl LexiconError {
    pub fn provenance(&self) -> Option<&Provenance> {
        match self {
            LexiconError::Io { .. } => None,
            LexiconError::Syntax { at, .. }
            | LexiconError::TypeConsistency { at, .. }
            | LexiconError::DuplicateId { at, .. }
            | LexiconError::ConstConflict { at, .. } => Some(at),
        }
    }
}

/// All problems found while loading one or more lexicon sources.
#[derive(Debug, Error)]
#[error("{}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))]
pub struct LoadErrors(pub Vec<LexiconError>);

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: Vec<LexEntry>,
    by_word: BTreeMap<String, Vec<usize>>,
    by_id: HashMap<String, usize>,
    coords: Vec<CoordSchema>,
    constants: TypeEnv,
    const_origin: BTreeMap<String, Provenance>,
}

const NUMERAL_PREFIX: &str = "num/";

fn numeral_value(word: &str) -> Option<u64> {
    if !word.is_empty() && word.bytes().all(|b| b.is_ascii_digit()) {
        word.parse().ok()
    } else {
        None
    }
}

impl Lexicon {
    pub fn new() -> Self {
        Lexicon::default()
    }

    /// The shipped core lexicon.
    pub fn core() -> Lexicon {
        Lexicon::from_sources(&[("<core>", CORE_LEXICON)]).expect("core lexicon is well-formed")
    }

    /// The temporal demo lexicon.
    pub fn ltl_demo() -> Lexicon {
        Lexicon::from_sources(&[("<ltl>", LTL_LEXICON)]).expect("ltl lexicon is well-formed")
    }

    /// Loads and merges lexicon files in order.
    pub fn load<P: AsRef<Path>>(paths: &[P]) -> Result<Lexicon, LoadErrors> {
        let mut sources = Vec::new();
        let mut errors = Vec::new();
        for p in paths {
            let p = p.as_ref();
            match std::fs::read_to_string(p) {
                Ok(text) => sources.push((p.display().to_string(), text)),
                Err(source) => errors.push(LexiconError::Io {
                    path: p.display().to_string(),
                    source,
                }),
            }
        }
        if !errors.is_empty() {
            return Err(LoadErrors(errors));
        }
        let refs: Vec<(&str, &str)> = sources.iter().map(|(n, t)| (n.as_str(), t.as_str())).collect();
        Lexicon::from_sources(&refs)
    }

    /// Parses and merges in-memory sources given as `(name, text)` pairs.
    pub fn from_sources(sources: &[(&str, &str)]) -> Result<Lexicon, LoadErrors> {
        let mut lex = Lexicon::new();
        let mut errors = Vec::new();
        for (name, text) in sources {
            file::parse_into(&mut lex, name, text, &mut errors);
        }
        errors.extend(lex.check_consistency());
        if errors.is_empty() {
            Ok(lex)
        } else {
            Err(LoadErrors(errors))
        }
    }

    pub fn declare_const(&mut self, name: &str, ty: SemType, at: Provenance) -> Result<(), LexiconError> {
        if let Some(old) = self.constants.get(name) {
            if *old != ty {
                return Err(LexiconError::ConstConflict {
                    at,
                    name: name.to_string(),
                    old: old.clone(),
                    new: ty,
                });
            }
            return Ok(());
        }
        self.constants.insert(name, ty);
        self.const_origin.insert(name.to_string(), at);
        Ok(())
    }

    /// Adds an entry without type-checking it; `id` defaults to `word/N`.
    pub fn add_entry(
        &mut self,
        word: &str,
        id: Option<&str>,
        cat: Cat,
        denotation: Term,
        at: Provenance,
    ) -> Result<&LexEntry, LexiconError> {
        let id = match id {
            Some(id) => id.to_string(),
            None => {
                let n = self.by_word.get(word).map_or(0, Vec::len) + 1;
                let mut candidate = format!("{word}/{n}");
                let mut k = n;
                while self.by_id.contains_key(&candidate) {
                    k += 1;
                    candidate = format!("{word}/{k}");
                }
                candidate
            }
        };
        if let Some(&prev) = self.by_id.get(&id) {
            return Err(LexiconError::DuplicateId {
                at,
                id,
                first: self.entries[prev].provenance.clone(),
            });
        }
        let idx = self.entries.len();
        self.entries.push(LexEntry {
            id: id.clone(),
            word: word.to_string(),
            cat,
            denotation,
            provenance: at,
        });
        self.by_word.entry(word.to_string()).or_default().push(idx);
        self.by_id.insert(id, idx);
        Ok(&self.entries[idx])
    }

    pub fn add_coord(&mut self, word: &str, op: CoordOp, at: Provenance) {
        self.coords.push(CoordSchema {
            word: word.to_string(),
            op,
            provenance: at,
        });
    }

    /// Type-consistency of every entry: the denotation's type must be the
    /// interpretation of its category (type variables as rigid names).
    pub fn check_consistency(&self) -> Vec<LexiconError> {
        self.entries
            .iter()
            .filter_map(|e| check_entry(e, &self.constants).err())
            .collect()
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn coord_schemas(&self) -> &[CoordSchema] {
        &self.coords
    }

    pub fn constants(&self) -> &TypeEnv {
        &self.constants
    }

    /// All entries for a word, including the automatic numeral entry for
    /// all-digit tokens.
    pub fn entries_for(&self, word: &str) -> Vec<Cow<'_, LexEntry>> {
        let mut out: Vec<Cow<'_, LexEntry>> = self
            .by_word
            .get(word)
            .into_iter()
            .flatten()
            .map(|&i| Cow::Borrowed(&self.entries[i]))
            .collect();
        if let Some(n) = numeral_value(word) {
            out.push(Cow::Owned(numeral_entry(word, n)));
        }
        out
    }

    pub fn coords_for(&self, word: &str) -> Vec<&CoordSchema> {
        self.coords.iter().filter(|c| c.word == word).collect()
    }

    pub fn knows(&self, word: &str) -> bool {
        self.by_word.contains_key(word)
            || numeral_value(word).is_some()
            || self.coords.iter().any(|c| c.word == word)
    }

    pub fn entry(&self, id: &str) -> Option<Cow<'_, LexEntry>> {
        if let Some(&i) = self.by_id.get(id) {
            return Some(Cow::Borrowed(&self.entries[i]));
        }
        let digits = id.strip_prefix(NUMERAL_PREFIX)?;
        numeral_value(digits).map(|n| Cow::Owned(numeral_entry(digits, n)))
    }

    pub fn coord(&self, id: &str) -> Option<&CoordSchema> {
        self.coords.iter().find(|c| c.id() == id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Renders the lexicon back into the file format.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, ty) in self.constants.iter() {
            out.push_str(&format!("const {name} : {ty}\n"));
        }
        for e in &self.entries {
            out.push_str(&format!("{e}\n"));
        }
        for c in &self.coords {
            out.push_str(&format!("{c}\n"));
        }
        out
    }
}

fn numeral_entry(word: &str, n: u64) -> LexEntry {
    LexEntry {
        id: format!("{NUMERAL_PREFIX}{word}"),
        word: word.to_string(),
        cat: Cat::NP(SemType::nat()),
        denotation: Term::Lit(n),
        provenance: Provenance::builtin("numeral"),
    }
}

pub(crate) fn check_entry(e: &LexEntry, env: &TypeEnv) -> Result<(), LexiconError> {
    let expected = interp(&e.cat);
    let mismatch = |found: String| LexiconError::TypeConsistency {
        at: e.provenance.clone(),
        id: e.id.clone(),
        expected: expected.clone(),
        found,
    };
    if !e.denotation.is_closed() {
        return Err(mismatch(format!(
            "open term with free variables {:?}",
            e.denotation.free_vars()
        )));
    }
    match type_check(&e.denotation, env) {
        Ok(found) if found == expected => Ok(()),
        Ok(found) => Err(mismatch(found.to_string())),
        Err(err) => Err(mismatch(err.to_string())),
    }
}
