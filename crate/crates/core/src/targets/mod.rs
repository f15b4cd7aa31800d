//! Retargeting denotations into different logics.
//!
//! A [`TargetAlgebra`] supplies the truth-value operations; [`retarget`]
//! folds a closed proposition into it homomorphically.

mod ltl;
mod model;

use thiserror::Error;

use crate::categories::SemType;
use crate::terms::{beta_normalize, Term};

pub use crate::terms::pretty;
pub use ltl::{LtlFormula, LtlTarget};
pub use model::{eval_prop, eval_prop_in, Expr, FiniteModel, ModelError, ModelTarget, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TargetError {
    #[error("unsupported construct for this target: {0}")]
    UnsupportedConstruct(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("no finite domain for sort `{0}`")]
    DomainMissing(String),
    #[error("term is not closed: free variables {0:?}")]
    OpenTerm(Vec<String>),
    #[error("evaluation failed: {0}")]
    Eval(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// Recursion handle passed to algebra hooks that need to retarget
/// subterms.
pub type Recurse<'r, V> = &'r mut dyn FnMut(&Term) -> Result<V, TargetError>;

/// Operations of a Heyting algebra, plus optional equality and
/// quantifiers.
pub trait TargetAlgebra {
    type Value;

    fn top(&self) -> Self::Value;
    fn bot(&self) -> Self::Value;
    fn and(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn or(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn implies(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn not(&self, a: Self::Value) -> Self::Value;

    /// A proposition whose head is not a connective, e.g. `even 4`.
    fn atom(&self, t: &Term, rec: Recurse<'_, Self::Value>) -> Result<Self::Value, TargetError>;

    fn equal(&self, a: &Term, b: &Term) -> Result<Self::Value, TargetError> {
        Err(TargetError::UnsupportedConstruct(format!("equality `{} = {}`", pretty(a), pretty(b))))
    }

    /// `lam` is the quantified one-argument abstraction over `dom`.
    fn quantify(
        &self,
        q: Quantifier,
        _dom: &SemType,
        lam: &Term,
        _rec: Recurse<'_, Self::Value>,
    ) -> Result<Self::Value, TargetError> {
        let word = match q {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        };
        Err(TargetError::UnsupportedConstruct(format!("{word} over `{}`", pretty(lam))))
    }
}

fn fold<A: TargetAlgebra>(t: &Term, alg: &A) -> Result<A::Value, TargetError> {
    let mut rec = |s: &Term| fold(s, alg);
    Ok(match t {
        Term::Top => alg.top(),
        Term::Bot => alg.bot(),
        Term::And(a, b) => alg.and(fold(a, alg)?, fold(b, alg)?),
        Term::Or(a, b) => alg.or(fold(a, alg)?, fold(b, alg)?),
        Term::Impl(a, b) => alg.implies(fold(a, alg)?, fold(b, alg)?),
        Term::Not(a) => alg.not(fold(a, alg)?),
        Term::Eq(a, b) => alg.equal(a, b)?,
        Term::Forall(dom, lam) => alg.quantify(Quantifier::Forall, dom, lam, &mut rec)?,
        Term::Exists(dom, lam) => alg.quantify(Quantifier::Exists, dom, lam, &mut rec)?,
        other => alg.atom(other, &mut rec)?,
    })
}

/// Maps a closed proposition into `alg`.
pub fn retarget<A: TargetAlgebra>(t: &Term, alg: &A) -> Result<A::Value, TargetError> {
    let fv = t.free_vars();
    if !fv.is_empty() {
        return Err(TargetError::OpenTerm(fv.into_iter().collect()));
    }
    fold(&beta_normalize(t), alg)
}

/// Head and arguments of an application spine.
pub(crate) fn spine(t: &Term) -> (&Term, Vec<&Term>) {
    let mut args = Vec::new();
    let mut head = t;
    while let Term::App(f, a) = head {
        args.push(a.as_ref());
        head = f;
    }
    args.reverse();
    (head, args)
}

/// The identity target: propositions stay terms, constants stay symbolic.
#[derive(Debug, Clone, Copy, Default)]
pub struct PropSymbolic;

impl TargetAlgebra for PropSymbolic {
    type Value = Term;

    fn top(&self) -> Term {
        Term::Top
    }
    fn bot(&self) -> Term {
        Term::Bot
    }
    fn and(&self, a: Term, b: Term) -> Term {
        Term::and(a, b)
    }
    fn or(&self, a: Term, b: Term) -> Term {
        Term::or(a, b)
    }
    fn implies(&self, a: Term, b: Term) -> Term {
        Term::imp(a, b)
    }
    fn not(&self, a: Term) -> Term {
        Term::negate(a)
    }
    fn atom(&self, t: &Term, _: Recurse<'_, Term>) -> Result<Term, TargetError> {
        Ok(t.clone())
    }
    fn equal(&self, a: &Term, b: &Term) -> Result<Term, TargetError> {
        Ok(Term::eq(a.clone(), b.clone()))
    }
    fn quantify(&self, q: Quantifier, dom: &SemType, lam: &Term, rec: Recurse<'_, Term>) -> Result<Term, TargetError> {
        let Term::Lam(x, ty, body) = lam else {
            return Err(TargetError::UnsupportedConstruct(format!("quantifier body `{}`", pretty(lam))));
        };
        let lam = Term::lam(x, ty.clone(), rec(body)?);
        Ok(match q {
            Quantifier::Forall => Term::Forall(dom.clone(), Box::new(lam)),
            Quantifier::Exists => Term::Exists(dom.clone(), Box::new(lam)),
        })
    }
}
