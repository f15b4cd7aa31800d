#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use catgram::terms::{beta_normalize, Term};
use catgram::SemType;

/// Ten words drawn from the core lexicon: a noun phrase, a numeral, a
/// function name and its applicator, the copula, a quantifier with its
/// noun, two adjectives and a coordinator.
pub const MINI_WORDS: [&str; 10] = [
    "four", "3", "addone", "given", "is", "every", "natural", "even", "positive", "and",
];

pub fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

/// Every token sequence of exactly `len` words over `vocab`.
pub fn sequences(vocab: &[&str], len: usize) -> Vec<Vec<String>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<String>| {
                vocab.iter().map(move |w| {
                    let mut p = prefix.clone();
                    p.push(w.to_string());
                    p
                })
            })
            .collect();
    }
    out
}

// ---------------------------------------------------------------------------
// A reference evaluator written directly over terms, sharing nothing with
// the library's model target except the term datatype.

#[derive(Debug, Clone, PartialEq)]
pub enum V {
    B(bool),
    N(i64),
    U,
    F(Term, BTreeMap<String, V>, String),
    Prim(String, Vec<V>),
}

type Prim = (usize, fn(&[i64]) -> V);

pub struct RefModel {
    pub domain: Vec<i64>,
    pub prims: BTreeMap<&'static str, Prim>,
}

impl RefModel {
    pub fn arith() -> RefModel {
        let mut prims: BTreeMap<&'static str, Prim> = BTreeMap::new();
        prims.insert("even", (1, |a| V::B(a[0] % 2 == 0)));
        prims.insert("positive", (1, |a| V::B(a[0] > 0)));
        prims.insert("le", (2, |a| V::B(a[0] <= a[1])));
        prims.insert("ge", (2, |a| V::B(a[0] >= a[1])));
        prims.insert("addone", (1, |a| V::N(a[0] + 1)));
        RefModel {
            domain: (0..=9).collect(),
            prims,
        }
    }

    pub fn eval(&self, t: &Term) -> bool {
        match self.ev(&beta_normalize(t), &BTreeMap::new()) {
            V::B(b) => b,
            v => panic!("not a truth value: {v:?}"),
        }
    }

    fn apply(&self, f: V, a: V) -> V {
        match f {
            V::F(body, mut env, x) => {
                env.insert(x, a);
                self.ev(&body, &env)
            }
            V::Prim(name, mut args) => {
                args.push(a);
                let (arity, f) = self.prims[name.as_str()];
                if args.len() == arity {
                    let nums: Vec<i64> = args
                        .iter()
                        .map(|v| match v {
                            V::N(n) => *n,
                            v => panic!("non-numeric argument {v:?}"),
                        })
                        .collect();
                    f(&nums)
                } else {
                    V::Prim(name, args)
                }
            }
            v => panic!("applying a non-function {v:?}"),
        }
    }

    fn truth(&self, t: &Term, env: &BTreeMap<String, V>) -> bool {
        match self.ev(t, env) {
            V::B(b) => b,
            v => panic!("expected a truth value, got {v:?}"),
        }
    }

    fn ev(&self, t: &Term, env: &BTreeMap<String, V>) -> V {
        match t {
            Term::Var(x) => env[x].clone(),
            Term::Const(c) => V::Prim(c.clone(), vec![]),
            Term::Lit(n) => V::N(*n as i64),
            Term::Lam(x, _, b) => V::F((**b).clone(), env.clone(), x.clone()),
            Term::App(f, a) => {
                let f = self.ev(f, env);
                let a = self.ev(a, env);
                self.apply(f, a)
            }
            Term::And(a, b) => V::B(self.truth(a, env) && self.truth(b, env)),
            Term::Or(a, b) => V::B(self.truth(a, env) || self.truth(b, env)),
            Term::Impl(a, b) => V::B(!self.truth(a, env) || self.truth(b, env)),
            Term::Not(a) => V::B(!self.truth(a, env)),
            Term::Top => V::B(true),
            Term::Bot => V::B(false),
            Term::Eq(a, b) => V::B(self.ev(a, env) == self.ev(b, env)),
            Term::Forall(dom, lam) | Term::Exists(dom, lam) => {
                assert_eq!(dom, &SemType::nat(), "reference model only knows nat");
                let f = self.ev(lam, env);
                let mut results = self.domain.iter().map(|&n| match self.apply(f.clone(), V::N(n)) {
                    V::B(b) => b,
                    v => panic!("quantifier body gave {v:?}"),
                });
                V::B(if matches!(t, Term::Forall(..)) {
                    results.all(|b| b)
                } else {
                    results.any(|b| b)
                })
            }
            Term::UnitVal => V::U,
        }
    }
}

/// Beta-normal alpha keys of the denotations, as a set.
pub fn denotation_set<'a>(terms: impl IntoIterator<Item = &'a Term>) -> BTreeSet<String> {
    terms
        .into_iter()
        .map(|t| catgram::terms::alpha_key(&beta_normalize(t)))
        .collect()
}
