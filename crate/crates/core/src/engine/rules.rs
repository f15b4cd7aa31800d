//! Local semantics of each combination rule.

use thiserror::Error;

use super::derivation::Rule;
use crate::categories::{interp, unify_cat, Cat, Subst, UnifyError};
use crate::terms::{beta_normalize, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("{rule} expects {expected} children, got {got}")]
    Arity { rule: Rule, expected: usize, got: usize },
    #[error("{rule} does not apply to `{cat}`")]
    Shape { rule: Rule, cat: Cat },
    #[error("{rule}: {source}")]
    Unify {
        rule: Rule,
        #[source]
        source: UnifyError,
    },
}

/// Category, beta-normal denotation, and extended substitution produced
/// by one rule application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Applied {
    pub cat: Cat,
    pub term: Term,
    pub subst: Subst,
}

fn binder_avoiding(base: &str, terms: &[&Term]) -> String {
    let clash = |n: &str| terms.iter().any(|t| t.free_vars().contains(n));
    if !clash(base) {
        return base.to_string();
    }
    (0..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !clash(n))
        .expect("unbounded name supply")
}

/// Applies `rule` to children given as `(category, denotation)` pairs.
/// Children must not share type variables unless they are meant to.
pub fn apply_rule(rule: Rule, children: &[(&Cat, &Term)], s: &Subst) -> Result<Applied, RuleError> {
    let arity = match rule {
        Rule::Shift => 1,
        Rule::Lex | Rule::Coord => 0,
        _ => 2,
    };
    if children.len() != arity || arity == 0 {
        return Err(RuleError::Arity {
            rule,
            expected: arity,
            got: children.len(),
        });
    }
    let shape = |cat: &Cat| RuleError::Shape {
        rule,
        cat: cat.clone(),
    };
    let unify = |a: &Cat, b: &Cat| {
        unify_cat(a, b, s).map_err(|source| RuleError::Unify { rule, source })
    };

    let (cat, term, subst) = match rule {
        Rule::RApp => {
            let ((lc, lt), (rc, rt)) = (children[0], children[1]);
            let Cat::Over(a, b) = lc else { return Err(shape(lc)) };
            let s2 = unify(b, rc)?;
            (s2.apply_cat(a), Term::app(lt.clone(), rt.clone()), s2)
        }
        Rule::LApp => {
            let ((lc, lt), (rc, rt)) = (children[0], children[1]);
            let Cat::Under(a, b) = rc else { return Err(shape(rc)) };
            let s2 = unify(a, lc)?;
            (s2.apply_cat(b), Term::app(rt.clone(), lt.clone()), s2)
        }
        Rule::RComp => {
            let ((lc, lt), (rc, rt)) = (children[0], children[1]);
            let Cat::Over(a, b) = lc else { return Err(shape(lc)) };
            let Cat::Over(b2, c) = rc else { return Err(shape(rc)) };
            let s2 = unify(b, b2)?;
            let x = binder_avoiding("x", &[lt, rt]);
            let body = Term::app(lt.clone(), Term::app(rt.clone(), Term::var(&x)));
            let term = Term::lam(&x, interp(c), body);
            (s2.apply_cat(&Cat::Over(a.clone(), c.clone())), term, s2)
        }
        Rule::LComp => {
            let ((lc, lt), (rc, rt)) = (children[0], children[1]);
            let Cat::Under(a, b) = lc else { return Err(shape(lc)) };
            let Cat::Under(b2, c) = rc else { return Err(shape(rc)) };
            let s2 = unify(b, b2)?;
            let x = binder_avoiding("x", &[lt, rt]);
            let body = Term::app(rt.clone(), Term::app(lt.clone(), Term::var(&x)));
            let term = Term::lam(&x, interp(a), body);
            (s2.apply_cat(&Cat::Under(a.clone(), c.clone())), term, s2)
        }
        Rule::Shift => {
            let (cc, t) = children[0];
            let Cat::Under(a, inner) = cc else { return Err(shape(cc)) };
            let Cat::Over(b, c) = inner.as_ref() else { return Err(shape(cc)) };
            let r = binder_avoiding("r", &[t]);
            let l = binder_avoiding("l", &[t]);
            let body = Term::apps(t.clone(), [Term::var(&l), Term::var(&r)]);
            let term = Term::lam(&r, interp(c), Term::lam(&l, interp(a), body));
            let cat = Cat::over(Cat::under((**a).clone(), (**b).clone()), (**c).clone());
            (s.apply_cat(&cat), term, s.clone())
        }
        Rule::Lex | Rule::Coord => unreachable!("leaves have arity 0"),
    };
    let term = beta_normalize(&term).apply_subst(&subst);
    Ok(Applied { cat, term, subst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{alpha_eq, parse_term};

    fn cat(s: &str) -> Cat {
        s.parse().unwrap()
    }

    fn term(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn rapp_is_even() {
        let is = cat("(NP[nat] \\ S) / ADJ[nat]");
        let is_t = term("\\p:nat -> Prop. \\x:nat. p x");
        let even = cat("ADJ[nat]");
        let even_t = term("even");
        let r = apply_rule(Rule::RApp, &[(&is, &is_t), (&even, &even_t)], &Subst::new()).unwrap();
        assert_eq!(r.cat, cat("NP[nat] \\ S"));
        assert!(alpha_eq(&r.term, &term("\\n:nat. even n")));
    }

    #[test]
    fn shift_moves_the_slash() {
        let c = cat("NP[nat] \\ (S / ADJ[nat])");
        let t = term("\\n:nat. \\p:nat -> Prop. p n");
        let r = apply_rule(Rule::Shift, &[(&c, &t)], &Subst::new()).unwrap();
        assert_eq!(r.cat, cat("(NP[nat] \\ S) / ADJ[nat]"));
        assert!(alpha_eq(&r.term, &term("\\r:nat -> Prop. \\l:nat. r l")));
        assert!(matches!(
            apply_rule(Rule::Shift, &[(&cat("NP[nat] \\ S"), &t)], &Subst::new()),
            Err(RuleError::Shape { .. })
        ));
    }

    #[test]
    fn lcomp_requires_matching_middle() {
        let l = cat("NP[nat] \\ S");
        let r = cat("ADJ[nat] \\ S");
        let t = term("true");
        assert!(matches!(
            apply_rule(Rule::LComp, &[(&l, &t), (&r, &t)], &Subst::new()),
            Err(RuleError::Unify { .. })
        ));
        let ok = apply_rule(
            Rule::LComp,
            &[(&cat("NP[nat] \\ S"), &term("even")), (&cat("S \\ S"), &term("\\p:Prop. ~p"))],
            &Subst::new(),
        )
        .unwrap();
        assert_eq!(ok.cat, cat("NP[nat] \\ S"));
        assert!(alpha_eq(&ok.term, &term("\\x:nat. ~even x")));
    }

    #[test]
    fn rcomp_composes() {
        let r = apply_rule(
            Rule::RComp,
            &[(&cat("S / S"), &term("\\p:Prop. ~p")), (&cat("S / NP[nat]"), &term("even"))],
            &Subst::new(),
        )
        .unwrap();
        assert_eq!(r.cat, cat("S / NP[nat]"));
        assert!(alpha_eq(&r.term, &term("\\x:nat. ~even x")));
    }

    #[test]
    fn lapp_unifies_indices() {
        let is = cat("NP[?0] \\ (S / ADJ[?0])");
        let is_t = term("\\n:?0. \\p:?0 -> Prop. p n");
        let r = apply_rule(Rule::LApp, &[(&cat("NP[nat]"), &term("4")), (&is, &is_t)], &Subst::new())
            .unwrap();
        assert_eq!(r.cat, cat("S / ADJ[nat]"));
        assert!(alpha_eq(&r.term, &term("\\p:nat -> Prop. p 4")));
    }

    #[test]
    fn arity_is_checked() {
        let t = term("true");
        assert!(matches!(
            apply_rule(Rule::RApp, &[(&Cat::S, &t)], &Subst::new()),
            Err(RuleError::Arity { .. })
        ));
    }
}
