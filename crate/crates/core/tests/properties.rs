mod common;

use proptest::prelude::*;

use catgram::categories::{interp, unify_sem, SemType, Subst};
use catgram::engine::{enumerate_parses_bruteforce, parse, replay};
use catgram::targets::{eval_prop, FiniteModel};
use catgram::terms::{alpha_eq, beta_normalize, is_beta_normal, parse_term, pretty, type_check, Term};
use catgram::{Cat, Lexicon, SearchLimits};

use common::{denotation_set, RefModel, MINI_WORDS};

// ---------------------------------------------------------------------------
// Unification

fn semtype() -> impl Strategy<Value = SemType> {
    let leaf = prop_oneof![
        Just(SemType::nat()),
        Just(SemType::Prop),
        (0u32..3).prop_map(SemType::TVar),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| SemType::arrow(a, b))
    })
}

/// Small ground types, enough to witness any unifier of the generated
/// shapes up to their depth.
fn ground_pool() -> Vec<SemType> {
    let base = [SemType::nat(), SemType::Prop];
    let mut pool: Vec<SemType> = base.to_vec();
    for a in &base {
        for b in &base {
            pool.push(SemType::arrow(a.clone(), b.clone()));
        }
    }
    let first = pool.clone();
    for a in &base {
        for b in &first {
            pool.push(SemType::arrow(a.clone(), b.clone()));
        }
    }
    pool
}

/// Every assignment of pool types to `vars`.
fn assignments(vars: &[u32], pool: &[SemType]) -> Vec<Subst> {
    let mut out = vec![Subst::new()];
    for &v in vars {
        out = out
            .into_iter()
            .flat_map(|g| {
                pool.iter().map(move |t| {
                    let mut g = g.clone();
                    g.insert_raw(v, t.clone());
                    g
                })
            })
            .collect();
    }
    out
}

fn vars(a: &SemType, b: &SemType) -> Vec<u32> {
    let mut v = Vec::new();
    a.collect_tvars(&mut v);
    b.collect_tvars(&mut v);
    v.sort_unstable();
    v.dedup();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn unify_is_a_most_general_idempotent_unifier(a in semtype(), b in semtype()) {
        let pool = ground_pool();
        let result = unify_sem(&a, &b, &Subst::new());
        if let Ok(s) = &result {
            prop_assert_eq!(s.apply(&a), s.apply(&b));
            prop_assert_eq!(s.apply(&s.apply(&a)), s.apply(&a));
            for (_, t) in s.iter() {
                prop_assert_eq!(&s.apply(t), t);
            }
        }
        let vs = vars(&a, &b);
        let mut witnessed = false;
        for g in assignments(&vs, &pool) {
            if g.apply(&a) != g.apply(&b) {
                continue;
            }
            witnessed = true;
            let s = result.as_ref().map_err(|e| TestCaseError::fail(format!("missed unifier: {e}")))?;
            // g factors through s: g = g . s on every variable.
            for &v in &vs {
                let tv = SemType::TVar(v);
                prop_assert_eq!(g.apply(&s.apply(&tv)), g.apply(&tv));
            }
        }
        if result.is_ok() && vs.is_empty() {
            prop_assert!(witnessed);
        }
    }
}

// ---------------------------------------------------------------------------
// Terms, generated type-directed from a stream of choices

struct Gen<'c> {
    choices: &'c [u32],
    pos: usize,
    fresh: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Ty {
    Nat,
    Prop,
    Pred,
    Fun,
}

impl Ty {
    fn sem(self) -> SemType {
        let nat = SemType::nat;
        match self {
            Ty::Nat => nat(),
            Ty::Prop => SemType::Prop,
            Ty::Pred => SemType::arrow(nat(), SemType::Prop),
            Ty::Fun => SemType::arrow(nat(), nat()),
        }
    }
}

impl Gen<'_> {
    fn pick(&mut self, n: u32) -> u32 {
        let c = self.choices.get(self.pos).copied().unwrap_or(0);
        self.pos += 1;
        c % n
    }

    fn var(&mut self) -> String {
        self.fresh += 1;
        format!("v{}", self.fresh)
    }

    fn term(&mut self, ty: Ty, nats: &[String], depth: usize) -> Term {
        let leaf = depth == 0;
        match ty {
            Ty::Nat => match self.pick(if leaf { 2 } else { 4 }) {
                0 if !nats.is_empty() => Term::var(&nats[self.pick(nats.len() as u32) as usize]),
                0 | 1 => Term::Lit(u64::from(self.pick(12))),
                2 => Term::app(self.term(Ty::Fun, nats, depth - 1), self.term(Ty::Nat, nats, depth - 1)),
                _ => {
                    let x = self.var();
                    let mut inner = nats.to_vec();
                    inner.push(x.clone());
                    let body = self.term(Ty::Nat, &inner, depth - 1);
                    Term::app(Term::lam(&x, SemType::nat(), body), self.term(Ty::Nat, nats, depth - 1))
                }
            },
            Ty::Prop => match self.pick(if leaf { 2 } else { 10 }) {
                0 => Term::Top,
                1 => Term::Bot,
                2 => Term::app(self.term(Ty::Pred, nats, depth - 1), self.term(Ty::Nat, nats, depth - 1)),
                3 => Term::apps(
                    Term::cnst(if self.pick(2) == 0 { "le" } else { "ge" }),
                    [self.term(Ty::Nat, nats, depth - 1), self.term(Ty::Nat, nats, depth - 1)],
                ),
                4 => Term::and(self.term(Ty::Prop, nats, depth - 1), self.term(Ty::Prop, nats, depth - 1)),
                5 => Term::or(self.term(Ty::Prop, nats, depth - 1), self.term(Ty::Prop, nats, depth - 1)),
                6 => Term::imp(self.term(Ty::Prop, nats, depth - 1), self.term(Ty::Prop, nats, depth - 1)),
                7 => Term::negate(self.term(Ty::Prop, nats, depth - 1)),
                8 => Term::eq(self.term(Ty::Nat, nats, depth - 1), self.term(Ty::Nat, nats, depth - 1)),
                _ => {
                    let x = self.var();
                    let mut inner = nats.to_vec();
                    inner.push(x.clone());
                    let body = self.term(Ty::Prop, &inner, depth - 1);
                    if self.pick(2) == 0 {
                        Term::forall(&x, SemType::nat(), body)
                    } else {
                        Term::exists(&x, SemType::nat(), body)
                    }
                }
            },
            Ty::Pred => match self.pick(if leaf { 2 } else { 4 }) {
                0 => Term::cnst("even"),
                1 => Term::cnst("positive"),
                2 => {
                    let x = self.var();
                    let mut inner = nats.to_vec();
                    inner.push(x.clone());
                    Term::lam(&x, SemType::nat(), self.term(Ty::Prop, &inner, depth - 1))
                }
                _ => {
                    // A predicate passed through an identity-like redex.
                    let p = self.var();
                    let f = Term::lam(&p, Ty::Pred.sem(), Term::var(&p));
                    Term::app(f, self.term(Ty::Pred, nats, depth - 1))
                }
            },
            Ty::Fun => match self.pick(if leaf { 1 } else { 2 }) {
                0 => Term::cnst("addone"),
                _ => {
                    let x = self.var();
                    let mut inner = nats.to_vec();
                    inner.push(x.clone());
                    Term::lam(&x, SemType::nat(), self.term(Ty::Nat, &inner, depth - 1))
                }
            },
        }
    }
}

fn prop_term() -> impl Strategy<Value = Term> {
    (prop::collection::vec(any::<u32>(), 80), 1usize..5).prop_map(|(choices, depth)| {
        let mut g = Gen {
            choices: &choices,
            pos: 0,
            fresh: 0,
        };
        g.term(Ty::Prop, &[], depth)
    })
}

fn arith() -> FiniteModel {
    FiniteModel::parse("arith.model", include_str!("../models/arith.model")).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn subject_reduction(t in prop_term()) {
        let env = Lexicon::core().constants().clone();
        let ty = type_check(&t, &env).unwrap();
        prop_assert_eq!(&ty, &SemType::Prop);
        let n = beta_normalize(&t);
        prop_assert_eq!(type_check(&n, &env).unwrap(), ty);
        prop_assert!(is_beta_normal(&n));
        prop_assert_eq!(beta_normalize(&n), n);
    }

    #[test]
    fn pretty_round_trips(t in prop_term()) {
        for u in [t.clone(), beta_normalize(&t)] {
            let text = pretty(&u);
            let back = parse_term(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
            prop_assert!(alpha_eq(&back, &u), "{} reparsed as {}", text, pretty(&back));
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(t in prop_term()) {
        let m = arith();
        let library = eval_prop(&t, &m).unwrap();
        prop_assert_eq!(library, RefModel::arith().eval(&t));
        prop_assert_eq!(eval_prop(&beta_normalize(&t), &m).unwrap(), library);
    }
}

// ---------------------------------------------------------------------------
// Parsing

fn sentence() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(&MINI_WORDS[..]), 1..7)
        .prop_map(|ws| ws.into_iter().map(str::to_string).collect())
}

/// Sequences biased towards grammatical sentences.
fn likely_sentence() -> impl Strategy<Value = Vec<String>> {
    let subject = prop::sample::select(vec!["four", "3", "addone given 3", "every natural", "addone given four"]);
    let adj = prop::sample::select(vec!["even", "positive", "even and positive", "3", "four"]);
    prop_oneof![
        (subject.clone(), adj.clone()).prop_map(|(s, a)| format!("{s} is {a}")),
        (subject.clone(), adj.clone(), subject, adj).prop_map(|(s, a, t, b)| format!("{s} is {a} and {t} is {b}")),
    ]
    .prop_map(|s| common::words(&s))
}

fn unlimited() -> SearchLimits {
    SearchLimits {
        max_parses: 100_000,
        max_span_items: 100_000,
        ..SearchLimits::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn every_parse_replays(ws in prop_oneof![sentence(), likely_sentence()]) {
        let lex = Lexicon::core();
        for goal in [Cat::S, "NP[nat]".parse().unwrap()] {
            let Ok(parses) = parse(&ws, &goal, &lex, &unlimited()) else { continue };
            for p in parses {
                let (cat, term) = replay(&p.derivation, &lex).unwrap();
                prop_assert_eq!(&cat, &goal);
                prop_assert!(alpha_eq(&term, &p.term));
                prop_assert_eq!(type_check(&p.term, lex.constants()).unwrap(), interp(&cat));
                prop_assert_eq!(p.derivation.span.end, ws.len());
            }
        }
    }

    #[test]
    fn chart_finds_every_oracle_denotation(ws in prop_oneof![sentence(), likely_sentence()]) {
        let lex = Lexicon::core();
        let oracle = enumerate_parses_bruteforce(&ws, &Cat::S, &lex, 64).unwrap_or_default();
        let chart = parse(&ws, &Cat::S, &lex, &unlimited()).unwrap_or_default();
        prop_assert_eq!(
            denotation_set(chart.iter().map(|p| &p.term)),
            denotation_set(oracle.iter().map(|p| &p.term))
        );
    }

    #[test]
    fn parsing_is_deterministic(ws in likely_sentence()) {
        let lex = Lexicon::core();
        let a = parse(&ws, &Cat::S, &lex, &SearchLimits::default());
        let b = std::thread::scope(|s| s.spawn(|| parse(&ws, &Cat::S, &Lexicon::core(), &SearchLimits::default())).join().unwrap());
        prop_assert_eq!(a, b);
    }
}
