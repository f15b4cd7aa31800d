//! Bottom-up recomputation of a derivation from its lexical leaves.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::derivation::{Derivation, Rule, Span, Step};
use super::rules::{apply_rule, RuleError};
use crate::categories::{interp, unify_cat_in_place, unify_sem, Cat, SemType, Subst, UnifyError};
use crate::lexicon::{instantiate_coord, lift_depth, Lexicon};
use crate::terms::{beta_normalize, type_check, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayErrorKind {
    #[error("unknown lexicon entry `{0}`")]
    UnknownEntry(String),
    #[error("unknown coordination schema `{0}`")]
    UnknownSchema(String),
    #[error("span {found:?} where {expected:?} was required")]
    Span { expected: Span, found: Span },
    #[error("`{0}` is not a Prop-like conjunct")]
    NotPropLike(Cat),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("instantiation ?{var}: {source}")]
    Instantiation {
        var: u32,
        #[source]
        source: UnifyError,
    },
    #[error("instantiation names ?{0}, which the entry does not have")]
    ExtraVariable(u32),
    #[error("recorded category `{recorded}` but the rule yields `{computed}`")]
    CatMismatch { recorded: Cat, computed: Cat },
    #[error("does not match the goal category: {0}")]
    Goal(UnifyError),
    #[error("category `{0}` is not ground")]
    NonGround(Cat),
    #[error("denotation has type `{found}` but its category needs `{expected}`")]
    TypeInconsistent { expected: SemType, found: String },
}

/// A derivation node that fails to replay, with its position as child
/// indices from the root (`root.1.0`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ReplayError {
    pub path: String,
    pub kind: ReplayErrorKind,
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid node at {}: {}", self.path, self.kind)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Recorded categories and instantiations must agree with the rules.
    Check,
    /// Recorded categories are ignored and recomputed.
    Fill,
}

struct Walker<'l> {
    lex: &'l Lexicon,
    mode: Mode,
    next: u32,
    s: Subst,
}

fn err(path: &str, kind: impl Into<ReplayErrorKind>) -> ReplayError {
    ReplayError {
        path: path.to_string(),
        kind: kind.into(),
    }
}

impl Walker<'_> {
    fn fresh_map(&mut self, vars: impl IntoIterator<Item = u32>) -> BTreeMap<u32, u32> {
        let mut map = BTreeMap::new();
        for v in vars {
            if let std::collections::btree_map::Entry::Vacant(e) = map.entry(v) {
                e.insert(self.next);
                self.next += 1;
            }
        }
        map
    }

    /// Returns the rebuilt node (categories not yet substituted) and its
    /// denotation.
    fn walk(&mut self, d: &Derivation, path: &str) -> Result<(Derivation, Term), ReplayError> {
        let one_token = |d: &Derivation| {
            if d.span.len() != 1 {
                return Err(err(
                    path,
                    ReplayErrorKind::Span {
                        expected: Span::new(d.span.start, d.span.start + 1),
                        found: d.span,
                    },
                ));
            }
            Ok(())
        };
        match &d.step {
            Step::Lex { entry, inst } => {
                one_token(d)?;
                let e = self
                    .lex
                    .entry(entry)
                    .ok_or_else(|| err(path, ReplayErrorKind::UnknownEntry(entry.clone())))?;
                let map = self.fresh_map(e.cat.tvars().into_iter().chain(e.denotation.tvars()));
                let f = |v: u32| map[&v];
                let cat = e.cat.map_tvars(&f);
                let term = e.denotation.map_types(&|t| t.map_tvars(&f));
                if self.mode == Mode::Check {
                    for (v, ty) in inst.iter() {
                        let fresh = map
                            .get(&v)
                            .ok_or_else(|| err(path, ReplayErrorKind::ExtraVariable(v)))?;
                        self.s = unify_sem(&SemType::TVar(*fresh), ty, &self.s)
                            .map_err(|source| err(path, ReplayErrorKind::Instantiation { var: v, source }))?;
                    }
                }
                let inst = map.iter().map(|(&v, &f)| (v, SemType::TVar(f))).collect();
                let node = Derivation {
                    step: Step::Lex {
                        entry: entry.clone(),
                        inst,
                    },
                    span: d.span,
                    cat,
                };
                Ok((node, term))
            }
            Step::Coord { schema, conj } => {
                one_token(d)?;
                let sch = self
                    .lex
                    .coord(schema)
                    .ok_or_else(|| err(path, ReplayErrorKind::UnknownSchema(schema.clone())))?;
                let map = self.fresh_map(conj.tvars());
                let conj = conj.map_tvars(&|v| map[&v]);
                let depth = lift_depth(&conj).ok_or_else(|| err(path, ReplayErrorKind::NotPropLike(conj.clone())))?;
                let e = instantiate_coord(sch, &conj, depth)
                    .map_err(|_| err(path, ReplayErrorKind::NotPropLike(conj.clone())))?;
                let mut node = Derivation::coord(schema, d.span.start, conj);
                node.cat = e.cat;
                Ok((node, e.denotation))
            }
            Step::Binary { rule, left, right } => {
                let (ln, lt) = self.walk(left, &format!("{path}.0"))?;
                let (rn, rt) = self.walk(right, &format!("{path}.1"))?;
                if left.span.end != right.span.start || d.span != Span::new(left.span.start, right.span.end) {
                    return Err(err(
                        path,
                        ReplayErrorKind::Span {
                            expected: Span::new(left.span.start, right.span.end),
                            found: d.span,
                        },
                    ));
                }
                let lc = self.s.apply_cat(&ln.cat);
                let rc = self.s.apply_cat(&rn.cat);
                let a = apply_rule(*rule, &[(&lc, &lt), (&rc, &rt)], &self.s).map_err(|e| err(path, e))?;
                self.s = a.subst;
                Ok((Derivation::binary(*rule, ln, rn, a.cat), a.term))
            }
            Step::Shift(child) => {
                let (cn, ct) = self.walk(child, &format!("{path}.0"))?;
                if child.span != d.span {
                    return Err(err(
                        path,
                        ReplayErrorKind::Span {
                            expected: child.span,
                            found: d.span,
                        },
                    ));
                }
                let cc = self.s.apply_cat(&cn.cat);
                let a = apply_rule(Rule::Shift, &[(&cc, &ct)], &self.s).map_err(|e| err(path, e))?;
                Ok((Derivation::shift(cn, a.cat), a.term))
            }
        }
    }
}

fn substitute_all(d: &Derivation, s: &Subst) -> Derivation {
    let step = match &d.step {
        Step::Lex { entry, inst } => Step::Lex {
            entry: entry.clone(),
            inst: inst.iter().map(|(v, t)| (v, s.apply(t))).collect(),
        },
        Step::Coord { schema, conj } => Step::Coord {
            schema: schema.clone(),
            conj: s.apply_cat(conj),
        },
        Step::Binary { rule, left, right } => Step::Binary {
            rule: *rule,
            left: Arc::new(substitute_all(left, s)),
            right: Arc::new(substitute_all(right, s)),
        },
        Step::Shift(c) => Step::Shift(Arc::new(substitute_all(c, s))),
    };
    Derivation {
        step,
        span: d.span,
        cat: s.apply_cat(&d.cat),
    }
}

/// First node (preorder) that is not ground.
fn first_non_ground(d: &Derivation, path: &str) -> Option<ReplayError> {
    let leaf_ground = match &d.step {
        Step::Lex { inst, .. } => inst.iter().all(|(_, t)| t.is_ground()),
        Step::Coord { conj, .. } => conj.is_ground(),
        _ => true,
    };
    if !d.cat.is_ground() || !leaf_ground {
        return Some(err(path, ReplayErrorKind::NonGround(d.cat.clone())));
    }
    d.children()
        .iter()
        .enumerate()
        .find_map(|(i, c)| first_non_ground(c, &format!("{path}.{i}")))
}

/// First node (preorder) whose recorded category differs from `rebuilt`.
fn first_cat_mismatch(recorded: &Derivation, rebuilt: &Derivation, path: &str) -> Option<ReplayError> {
    if recorded.cat != rebuilt.cat {
        return Some(err(
            path,
            ReplayErrorKind::CatMismatch {
                recorded: recorded.cat.clone(),
                computed: rebuilt.cat.clone(),
            },
        ));
    }
    recorded
        .children()
        .iter()
        .zip(rebuilt.children())
        .enumerate()
        .find_map(|(i, (a, b))| first_cat_mismatch(a, b, &format!("{path}.{i}")))
}

fn run(d: &Derivation, lex: &Lexicon, goal: Option<&Cat>, mode: Mode) -> Result<(Derivation, Term), ReplayError> {
    let mut w = Walker {
        lex,
        mode,
        next: 0,
        s: Subst::new(),
    };
    let (node, term) = w.walk(d, "root")?;
    if let Some(goal) = goal {
        unify_cat_in_place(&node.cat, goal, &mut w.s).map_err(|e| err("root", ReplayErrorKind::Goal(e)))?;
    }
    let rebuilt = substitute_all(&node, &w.s);
    let term = beta_normalize(&term.apply_subst(&w.s));
    if let Some(e) = first_non_ground(&rebuilt, "root") {
        return Err(e);
    }
    if mode == Mode::Check {
        if let Some(e) = first_cat_mismatch(d, &rebuilt, "root") {
            return Err(e);
        }
    }
    let expected = interp(&rebuilt.cat);
    match type_check(&term, lex.constants()) {
        Ok(found) if found == expected => Ok((rebuilt, term)),
        Ok(found) => Err(err(
            "root",
            ReplayErrorKind::TypeInconsistent {
                expected,
                found: found.to_string(),
            },
        )),
        Err(e) => Err(err(
            "root",
            ReplayErrorKind::TypeInconsistent {
                expected,
                found: e.to_string(),
            },
        )),
    }
}

/// Recomputes category and beta-normal denotation of `d`, checking every
/// node against the rules and the recorded categories.
pub fn replay(d: &Derivation, lex: &Lexicon) -> Result<(Cat, Term), ReplayError> {
    run(d, lex, None, Mode::Check).map(|(n, t)| (n.cat, t))
}

/// Like [`replay`], additionally requiring the root to match `goal`.
pub fn replay_goal(d: &Derivation, lex: &Lexicon, goal: &Cat) -> Result<(Cat, Term), ReplayError> {
    run(d, lex, Some(goal), Mode::Check).map(|(n, t)| (n.cat, t))
}

/// Recomputes every category of a parser-built derivation and records the
/// ground instantiation of each lexical leaf.
pub(crate) fn finalize(d: &Derivation, lex: &Lexicon, goal: Option<&Cat>) -> Result<(Derivation, Term), ReplayError> {
    run(d, lex, goal, Mode::Fill)
}
