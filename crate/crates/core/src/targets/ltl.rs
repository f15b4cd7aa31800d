//! Linear temporal logic formulas over propositional atoms.

use std::fmt;

use super::{spine, Recurse, TargetAlgebra, TargetError};
use crate::terms::{pretty, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LtlFormula {
    True,
    False,
    Atom(String),
    Not(Box<LtlFormula>),
    And(Box<LtlFormula>, Box<LtlFormula>),
    Or(Box<LtlFormula>, Box<LtlFormula>),
    Implies(Box<LtlFormula>, Box<LtlFormula>),
    Always(Box<LtlFormula>),
    Eventually(Box<LtlFormula>),
    Until(Box<LtlFormula>, Box<LtlFormula>),
}

impl LtlFormula {
    pub fn size(&self) -> usize {
        use LtlFormula::*;
        match self {
            True | False | Atom(_) => 1,
            Not(a) | Always(a) | Eventually(a) => 1 + a.size(),
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Atoms in order of first occurrence.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        use LtlFormula::*;
        match self {
            Atom(a) if !out.contains(&a.as_str()) => out.push(a),
            True | False | Atom(_) => {}
            Not(a) | Always(a) | Eventually(a) => a.collect_atoms(out),
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    fn prec(&self) -> u8 {
        use LtlFormula::*;
        match self {
            Implies(..) => 1,
            Or(..) => 2,
            And(..) => 3,
            Until(..) => 4,
            _ => 5,
        }
    }
}

/// Standard notation: `G`, `F`, `U`, `!`, `&`, `|`, `->`.
impl fmt::Display for LtlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use LtlFormula::*;
        let sub = |f: &mut fmt::Formatter<'_>, g: &LtlFormula, min: u8| {
            if g.prec() < min {
                write!(f, "({g})")
            } else {
                write!(f, "{g}")
            }
        };
        match self {
            True => f.write_str("true"),
            False => f.write_str("false"),
            Atom(a) => f.write_str(a),
            Not(a) => {
                f.write_str("!")?;
                sub(f, a, 5)
            }
            Always(a) => {
                f.write_str("G ")?;
                sub(f, a, 5)
            }
            Eventually(a) => {
                f.write_str("F ")?;
                sub(f, a, 5)
            }
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) => {
                let (op, p) = match self {
                    And(..) => ("&", 3),
                    Or(..) => ("|", 2),
                    Implies(..) => ("->", 1),
                    _ => ("U", 4),
                };
                sub(f, a, p + 1)?;
                write!(f, " {op} ")?;
                sub(f, b, p)
            }
        }
    }
}

/// Emits LTL: `always`, `eventually` and `until` become temporal
/// operators, nullary constants become atoms. Quantifiers and equality are
/// outside the fragment.
#[derive(Debug, Clone, Copy, Default)]
pub struct LtlTarget;

impl TargetAlgebra for LtlTarget {
    type Value = LtlFormula;

    fn top(&self) -> LtlFormula {
        LtlFormula::True
    }
    fn bot(&self) -> LtlFormula {
        LtlFormula::False
    }
    fn and(&self, a: LtlFormula, b: LtlFormula) -> LtlFormula {
        LtlFormula::And(Box::new(a), Box::new(b))
    }
    fn or(&self, a: LtlFormula, b: LtlFormula) -> LtlFormula {
        LtlFormula::Or(Box::new(a), Box::new(b))
    }
    fn implies(&self, a: LtlFormula, b: LtlFormula) -> LtlFormula {
        LtlFormula::Implies(Box::new(a), Box::new(b))
    }
    fn not(&self, a: LtlFormula) -> LtlFormula {
        LtlFormula::Not(Box::new(a))
    }

    fn atom(&self, t: &Term, rec: Recurse<'_, LtlFormula>) -> Result<LtlFormula, TargetError> {
        let (head, args) = spine(t);
        let Term::Const(c) = head else {
            return Err(TargetError::UnsupportedConstruct(format!("`{}`", pretty(t))));
        };
        Ok(match (c.as_str(), args.as_slice()) {
            ("always", [p]) => LtlFormula::Always(Box::new(rec(p)?)),
            ("eventually", [p]) => LtlFormula::Eventually(Box::new(rec(p)?)),
            ("until", [p, q]) => LtlFormula::Until(Box::new(rec(p)?), Box::new(rec(q)?)),
            (name, []) => LtlFormula::Atom(name.to_string()),
            _ => {
                return Err(TargetError::UnsupportedConstruct(format!(
                    "application `{}` outside the temporal fragment",
                    pretty(t)
                )))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::retarget;
    use crate::terms::parse_term;

    fn ltl(s: &str) -> Result<LtlFormula, TargetError> {
        retarget(&parse_term(s).unwrap(), &LtlTarget)
    }

    #[test]
    fn connectives_map_homomorphically() {
        let f = ltl("p /\\ q").unwrap();
        assert_eq!(
            f,
            LtlFormula::And(Box::new(LtlFormula::Atom("p".into())), Box::new(LtlFormula::Atom("q".into())))
        );
    }

    #[test]
    fn temporal_operators() {
        assert_eq!(ltl("always (ready -> eventually busy)").unwrap().to_string(), "G (ready -> F busy)");
        assert_eq!(ltl("until ready busy \\/ ~ready").unwrap().to_string(), "ready U busy | !ready");
        assert_eq!(ltl("always (eventually ready)").unwrap().atoms(), ["ready"]);
    }

    #[test]
    fn quantifiers_are_unsupported() {
        assert!(matches!(ltl("forall n:nat, even n"), Err(TargetError::UnsupportedConstruct(_))));
        assert!(matches!(ltl("addone 3 = 4"), Err(TargetError::UnsupportedConstruct(_))));
        assert!(matches!(ltl("even 4"), Err(TargetError::UnsupportedConstruct(_))));
    }
}
