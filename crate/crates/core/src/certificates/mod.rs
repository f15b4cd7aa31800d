//! Certificates: a derivation plus digests of the lexicon entries it uses,
//! re-checkable without trusting the parser.

mod digest;
mod format;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::categories::{interp, Cat};
use crate::engine::{replay, tokenize, Derivation, ReplayError, Step};
use crate::lexicon::{lint_entries, AmbiguityWarning, Lexicon};
use crate::terms::{alpha_eq, type_check, Term};

pub use digest::{coord_digest, entry_digest, render_coord, render_entry, sha256_hex};
pub use format::{parse_derivation_lines, render_derivation, CertParseError, HEADER};

/// Digest of one referenced lexicon entry or coordination schema.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EntryDigest {
    pub id: String,
    pub word: String,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub sentence: String,
    pub tokens: Vec<String>,
    pub category: Cat,
    pub denotation: Term,
    /// SHA-256 over the entry digests, each followed by a newline, in
    /// entry order.
    pub lexicon_digest: String,
    /// Sorted by id.
    pub entries: Vec<EntryDigest>,
    pub derivation: Derivation,
}

impl Certificate {
    pub fn render(&self) -> String {
        format::render(self)
    }

    pub fn parse(text: &str) -> Result<Certificate, CertParseError> {
        format::parse(text)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A failed certificate clause.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("tokens {recorded:?} do not match the sentence, which tokenizes to {actual:?}")]
    TokenMismatch { recorded: Vec<String>, actual: Vec<String> },
    #[error("entry `{id}` is not in the lexicon")]
    MissingEntry { id: String },
    #[error("entry `{id}` changed: certificate digest {recorded}, lexicon digest {actual}")]
    DigestMismatch { id: String, recorded: String, actual: String },
    #[error("derivation uses `{id}`, which the certificate does not list")]
    UnlistedEntry { id: String },
    #[error("replay failed: {reason}")]
    ReplayFailure { path: String, reason: String },
    #[error("claimed category `{claimed}` but replay yields `{replayed}`")]
    CategoryMismatch { claimed: Cat, replayed: Cat },
    #[error("claimed denotation `{claimed}` but replay yields `{replayed}`")]
    DenotationMismatch { claimed: Term, replayed: Term },
    #[error("claimed denotation has type {found}, category needs {expected}")]
    TypeInconsistent { expected: String, found: String },
    #[error("{0}")]
    Ambiguity(AmbiguityWarning),
}

impl Violation {
    /// Stable kebab-case class name.
    pub fn class(&self) -> &'static str {
        match self {
            Violation::TokenMismatch { .. } => "token-mismatch",
            Violation::MissingEntry { .. } => "missing-entry",
            Violation::DigestMismatch { .. } => "digest-mismatch",
            Violation::UnlistedEntry { .. } => "unlisted-entry",
            Violation::ReplayFailure { .. } => "replay-failure",
            Violation::CategoryMismatch { .. } => "category-mismatch",
            Violation::DenotationMismatch { .. } => "denotation-mismatch",
            Violation::TypeInconsistent { .. } => "type-inconsistent",
            Violation::Ambiguity(_) => "ambiguity",
        }
    }
}

impl From<ReplayError> for Violation {
    fn from(e: ReplayError) -> Self {
        Violation::ReplayFailure {
            path: e.path.clone(),
            reason: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error(transparent)]
    Replay(#[from] ReplayError),
    #[error("derivation does not match the sentence: {0}")]
    Leaves(String),
    #[error("entry `{0}` is not in the lexicon")]
    MissingEntry(String),
}

/// Looks up the word and digest of a leaf id.
fn lookup(lex: &Lexicon, id: &str) -> Option<(String, String)> {
    if let Some(e) = lex.entry(id) {
        return Some((e.word.clone(), entry_digest(&e)));
    }
    lex.coord(id).map(|c| (c.word.clone(), coord_digest(c)))
}

fn leaves_with_paths<'d>(d: &'d Derivation, path: String, out: &mut Vec<(String, &'d Derivation)>) {
    match &d.step {
        Step::Lex { .. } | Step::Coord { .. } => out.push((path, d)),
        _ => {
            for (i, c) in d.children().into_iter().enumerate() {
                leaves_with_paths(c, format!("{path}.{i}"), out);
            }
        }
    }
}

/// Checks that the leaves cover `tokens` left to right and that every
/// leaf's entry is for the token at its position.
fn check_leaves(d: &Derivation, tokens: &[String], lex: &Lexicon) -> Result<(), (String, String)> {
    if d.span.start != 0 || d.span.end != tokens.len() {
        return Err((
            "root".into(),
            format!("root span {}..{} does not cover {} tokens", d.span.start, d.span.end, tokens.len()),
        ));
    }
    let mut leaves = Vec::new();
    leaves_with_paths(d, "root".into(), &mut leaves);
    for (i, (path, leaf)) in leaves.iter().enumerate() {
        if leaf.span.start != i || leaf.span.end != i + 1 {
            return Err((path.clone(), format!("leaf {i} has span {}..{}", leaf.span.start, leaf.span.end)));
        }
        let id = leaf.leaf_id().expect("leaves have ids");
        if let Some((word, _)) = lookup(lex, id) {
            if word != tokens[i] {
                return Err((
                    path.clone(),
                    format!("entry `{id}` is for {word:?}, token {i} is {:?}", tokens[i]),
                ));
            }
        }
    }
    Ok(())
}

fn leaf_ids(d: &Derivation) -> Vec<String> {
    let mut ids: Vec<String> = d.leaves().iter().filter_map(|l| l.leaf_id()).map(str::to_string).collect();
    ids.sort();
    ids.dedup();
    ids
}

fn combined_digest(entries: &[EntryDigest]) -> String {
    let text: String = entries.iter().map(|e| format!("{}\n", e.digest)).collect();
    sha256_hex(&text)
}

/// Builds a certificate for `d`, a derivation of `tokenize(sentence)`.
pub fn emit(sentence: &str, d: &Derivation, lex: &Lexicon) -> Result<Certificate, EmitError> {
    let tokens = tokenize(sentence);
    check_leaves(d, &tokens, lex).map_err(|(p, m)| EmitError::Leaves(format!("{p}: {m}")))?;
    let (category, denotation) = replay(d, lex)?;
    let mut entries = Vec::new();
    for id in leaf_ids(d) {
        let (word, digest) = lookup(lex, &id).ok_or_else(|| EmitError::MissingEntry(id.clone()))?;
        entries.push(EntryDigest { id, word, digest });
    }
    Ok(Certificate {
        sentence: sentence.to_string(),
        tokens,
        category,
        denotation,
        lexicon_digest: combined_digest(&entries),
        entries,
        derivation: d.clone(),
    })
}

/// All violated clauses, in clause order; empty means the certificate
/// holds against `lex`.
pub fn violations(cert: &Certificate, lex: &Lexicon) -> Vec<Violation> {
    let mut out = Vec::new();

    let actual = tokenize(&cert.sentence);
    if actual != cert.tokens {
        out.push(Violation::TokenMismatch {
            recorded: cert.tokens.clone(),
            actual,
        });
    }

    let listed: BTreeMap<&str, &EntryDigest> = cert.entries.iter().map(|e| (e.id.as_str(), e)).collect();
    for e in &cert.entries {
        match lookup(lex, &e.id) {
            None => out.push(Violation::MissingEntry { id: e.id.clone() }),
            Some((_, digest)) if digest != e.digest => out.push(Violation::DigestMismatch {
                id: e.id.clone(),
                recorded: e.digest.clone(),
                actual: digest,
            }),
            Some(_) => {}
        }
    }
    let combined = combined_digest(&cert.entries);
    if combined != cert.lexicon_digest {
        out.push(Violation::DigestMismatch {
            id: "lexicon-digest".into(),
            recorded: cert.lexicon_digest.clone(),
            actual: combined,
        });
    }
    let used = leaf_ids(&cert.derivation);
    for id in &used {
        if !listed.contains_key(id.as_str()) {
            out.push(Violation::UnlistedEntry { id: id.clone() });
        }
    }

    let replayed = match check_leaves(&cert.derivation, &cert.tokens, lex) {
        Err((path, reason)) => {
            out.push(Violation::ReplayFailure { path, reason });
            None
        }
        Ok(()) => match replay(&cert.derivation, lex) {
            Ok(r) => Some(r),
            Err(e) => {
                out.push(e.into());
                None
            }
        },
    };
    if let Some((cat, term)) = replayed {
        if cat != cert.category {
            out.push(Violation::CategoryMismatch {
                claimed: cert.category.clone(),
                replayed: cat,
            });
        }
        if !alpha_eq(&term, &cert.denotation) {
            out.push(Violation::DenotationMismatch {
                claimed: cert.denotation.clone(),
                replayed: term,
            });
        }
    }

    let expected = interp(&cert.category);
    match type_check(&cert.denotation, lex.constants()) {
        Ok(found) if found == expected => {}
        Ok(found) => out.push(Violation::TypeInconsistent {
            expected: expected.to_string(),
            found: found.to_string(),
        }),
        Err(e) => out.push(Violation::TypeInconsistent {
            expected: expected.to_string(),
            found: e.to_string(),
        }),
    }

    out.extend(lint_entries(lex, used.iter().map(String::as_str)).into_iter().map(Violation::Ambiguity));
    out
}

/// `Ok` iff every clause holds.
pub fn check(cert: &Certificate, lex: &Lexicon) -> Result<(), Vec<Violation>> {
    let v = violations(cert, lex);
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}
