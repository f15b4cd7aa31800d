//! Coordination: "and"/"or" conjoin any two fragments of one Prop-like
//! category by lifting the truth-value operation pointwise.

use thiserror::Error;

use super::{CoordSchema, LexEntry};
use crate::categories::{interp, Cat, SemType};
use crate::terms::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoordError {
    #[error("`{0}` is not Prop-like at lift level {1}")]
    NotPropLike(Cat, usize),
}

/// Level 0: `S` or `ADJ[t]`; level k+1: a slash whose result is Prop-like
/// at level k.
pub fn proplike(c: &Cat, level: usize) -> bool {
    match (c, level) {
        (Cat::S | Cat::ADJ(_), 0) => true,
        (Cat::Over(result, _) | Cat::Under(_, result), k) if k > 0 => proplike(result, k - 1),
        _ => false,
    }
}

/// Number of arguments a Prop-like category's denotation takes before
/// reaching `Prop` (an `ADJ` contributes its own argument), or `None` if
/// the category is not Prop-like.
pub fn lift_depth(c: &Cat) -> Option<usize> {
    match c {
        Cat::S => Some(0),
        Cat::ADJ(_) => Some(1),
        Cat::Over(result, _) | Cat::Under(_, result) => lift_depth(result).map(|d| d + 1),
        _ => None,
    }
}

/// Instantiates the coordination schema at conjunct category `x`, giving
/// `(x \ x) / x`. The right conjunct is consumed first; the left conjunct
/// is the `\` argument.
pub fn instantiate_coord(schema: &CoordSchema, x: &Cat, level: usize) -> Result<LexEntry, CoordError> {
    if lift_depth(x) != Some(level) {
        return Err(CoordError::NotPropLike(x.clone(), level));
    }
    let ty = interp(x);
    let (arg_tys, _) = ty.uncurry();
    let arg_tys: Vec<SemType> = arg_tys.into_iter().cloned().collect();
    debug_assert_eq!(arg_tys.len(), level);

    let (q, p) = if level == 0 { ("q", "p") } else { ("Q", "P") };
    let vars: Vec<String> = match level {
        0 => vec![],
        1 => vec!["x".to_string()],
        n => (1..=n).map(|i| format!("x{i}")).collect(),
    };
    let applied = |f: &str| Term::apps(Term::var(f), vars.iter().map(|v| Term::var(v)));
    let mut body = schema.op.apply(applied(p), applied(q));
    for (v, t) in vars.iter().zip(&arg_tys).rev() {
        body = Term::lam(v, t.clone(), body);
    }
    let denotation = Term::lam(q, ty.clone(), Term::lam(p, ty, body));
    Ok(LexEntry {
        id: schema.id(),
        word: schema.word.clone(),
        cat: Cat::over(Cat::under(x.clone(), x.clone()), x.clone()),
        denotation,
        provenance: schema.provenance.clone(),
    })
}
