//! Logical forms: a simply typed lambda calculus with Heyting connectives,
//! quantifiers over semantic types, and equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::categories::{parse_semtype, SemType, Subst};
use crate::syntax::{is_ident_char, Cursor, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    Lit(u64),
    Lam(String, SemType, Box<Term>),
    App(Box<Term>, Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Impl(Box<Term>, Box<Term>),
    Not(Box<Term>),
    Top,
    Bot,
    Eq(Box<Term>, Box<Term>),
    /// `forall x:T, body`; the body is a one-argument abstraction over `T`.
    Forall(SemType, Box<Term>),
    Exists(SemType, Box<Term>),
    UnitVal,
}

/// Binary comparison constants rendered infix.
const INFIX: [(&str, &str); 4] = [("le", "<="), ("ge", ">="), ("lt", "<"), ("gt", ">")];

const KEYWORDS: [&str; 5] = ["forall", "exists", "true", "false", "unit"];

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn cnst(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn lam(x: &str, ty: SemType, body: Term) -> Term {
        Term::Lam(x.to_string(), ty, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn and(a: Term, b: Term) -> Term {
        Term::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Term, b: Term) -> Term {
        Term::Impl(Box::new(a), Box::new(b))
    }

    pub fn negate(a: Term) -> Term {
        Term::Not(Box::new(a))
    }

    pub fn eq(a: Term, b: Term) -> Term {
        Term::Eq(Box::new(a), Box::new(b))
    }

    pub fn forall(x: &str, dom: SemType, body: Term) -> Term {
        Term::Forall(dom.clone(), Box::new(Term::lam(x, dom, body)))
    }

    pub fn exists(x: &str, dom: SemType, body: Term) -> Term {
        Term::Exists(dom.clone(), Box::new(Term::lam(x, dom, body)))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(&x.as_str()) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(x, _, b) => {
                bound.push(x);
                b.collect_free(bound, out);
                bound.pop();
            }
            _ => self.for_each_child(|c| c.collect_free(bound, out)),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_consts(&mut out);
        out
    }

    fn collect_consts(&self, out: &mut BTreeSet<String>) {
        if let Term::Const(c) = self {
            out.insert(c.clone());
        }
        self.for_each_child(|c| c.collect_consts(out));
    }

    fn for_each_child<'a>(&'a self, mut f: impl FnMut(&'a Term)) {
        match self {
            Term::Lam(_, _, b) | Term::Not(b) | Term::Forall(_, b) | Term::Exists(_, b) => f(b),
            Term::App(a, b)
            | Term::And(a, b)
            | Term::Or(a, b)
            | Term::Impl(a, b)
            | Term::Eq(a, b) => {
                f(a);
                f(b);
            }
            Term::Var(_) | Term::Const(_) | Term::Lit(_) | Term::Top | Term::Bot | Term::UnitVal => {}
        }
    }

    /// Rebuilds the term with every semantic type rewritten by `f`.
    pub fn map_types(&self, f: &impl Fn(&SemType) -> SemType) -> Term {
        let bx = |t: &Term| Box::new(t.map_types(f));
        match self {
            Term::Lam(x, ty, b) => Term::Lam(x.clone(), f(ty), bx(b)),
            Term::Forall(d, b) => Term::Forall(f(d), bx(b)),
            Term::Exists(d, b) => Term::Exists(f(d), bx(b)),
            Term::App(a, b) => Term::App(bx(a), bx(b)),
            Term::And(a, b) => Term::And(bx(a), bx(b)),
            Term::Or(a, b) => Term::Or(bx(a), bx(b)),
            Term::Impl(a, b) => Term::Impl(bx(a), bx(b)),
            Term::Eq(a, b) => Term::Eq(bx(a), bx(b)),
            Term::Not(a) => Term::Not(bx(a)),
            other => other.clone(),
        }
    }

    pub fn apply_subst(&self, s: &Subst) -> Term {
        if s.is_empty() {
            return self.clone();
        }
        self.map_types(&|t| s.apply(t))
    }

    pub fn tvars(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_tvars(&mut out);
        out
    }

    fn collect_tvars(&self, out: &mut Vec<u32>) {
        match self {
            Term::Lam(_, ty, _) | Term::Forall(ty, _) | Term::Exists(ty, _) => {
                ty.collect_tvars(out)
            }
            _ => {}
        }
        self.for_each_child(|c| c.collect_tvars(out));
    }

    pub fn size(&self) -> usize {
        let mut n = 1;
        self.for_each_child(|c| n += c.size());
        n
    }
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    (0..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded name supply")
}

/// Capture-avoiding substitution of `value` for free occurrences of `x`.
pub fn substitute(t: &Term, x: &str, value: &Term) -> Term {
    let fv = value.free_vars();
    subst_rec(t, x, value, &fv)
}

fn subst_rec(t: &Term, x: &str, value: &Term, fv: &BTreeSet<String>) -> Term {
    let rec = |c: &Term| Box::new(subst_rec(c, x, value, fv));
    match t {
        Term::Var(y) if y == x => value.clone(),
        Term::Lam(y, ty, body) => {
            if y == x {
                t.clone()
            } else if fv.contains(y) {
                let mut avoid = fv.clone();
                avoid.extend(body.free_vars());
                avoid.insert(x.to_string());
                let fresh = fresh_name(y, &avoid);
                let renamed = substitute(body, y, &Term::Var(fresh.clone()));
                Term::Lam(fresh, ty.clone(), rec(&renamed))
            } else {
                Term::Lam(y.clone(), ty.clone(), rec(body))
            }
        }
        Term::App(a, b) => Term::App(rec(a), rec(b)),
        Term::And(a, b) => Term::And(rec(a), rec(b)),
        Term::Or(a, b) => Term::Or(rec(a), rec(b)),
        Term::Impl(a, b) => Term::Impl(rec(a), rec(b)),
        Term::Eq(a, b) => Term::Eq(rec(a), rec(b)),
        Term::Not(a) => Term::Not(rec(a)),
        Term::Forall(d, b) => Term::Forall(d.clone(), rec(b)),
        Term::Exists(d, b) => Term::Exists(d.clone(), rec(b)),
        other => other.clone(),
    }
}

/// Full beta normalization (no eta, no connective simplification).
pub fn beta_normalize(t: &Term) -> Term {
    let bx = |c: &Term| Box::new(beta_normalize(c));
    match t {
        Term::App(f, a) => {
            let f = beta_normalize(f);
            let a = beta_normalize(a);
            match f {
                Term::Lam(x, _, body) => beta_normalize(&substitute(&body, &x, &a)),
                f => Term::App(Box::new(f), Box::new(a)),
            }
        }
        Term::Lam(x, ty, b) => Term::Lam(x.clone(), ty.clone(), bx(b)),
        Term::And(a, b) => Term::And(bx(a), bx(b)),
        Term::Or(a, b) => Term::Or(bx(a), bx(b)),
        Term::Impl(a, b) => Term::Impl(bx(a), bx(b)),
        Term::Eq(a, b) => Term::Eq(bx(a), bx(b)),
        Term::Not(a) => Term::Not(bx(a)),
        Term::Forall(d, b) => Term::Forall(d.clone(), bx(b)),
        Term::Exists(d, b) => Term::Exists(d.clone(), bx(b)),
        other => other.clone(),
    }
}

pub fn is_beta_normal(t: &Term) -> bool {
    if let Term::App(f, _) = t {
        if matches!(**f, Term::Lam(..)) {
            return false;
        }
    }
    let mut ok = true;
    t.for_each_child(|c| ok &= is_beta_normal(c));
    ok
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    alpha_rec(a, b, &mut Vec::new(), &mut Vec::new())
}

fn lookup(stack: &[&str], x: &str) -> Option<usize> {
    stack.iter().rposition(|y| *y == x).map(|i| stack.len() - 1 - i)
}

fn alpha_rec<'a>(a: &'a Term, b: &'a Term, sa: &mut Vec<&'a str>, sb: &mut Vec<&'a str>) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => match (lookup(sa, x), lookup(sb, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Term::Lam(x, tx, bx), Term::Lam(y, ty, by)) => {
            if tx != ty {
                return false;
            }
            sa.push(x);
            sb.push(y);
            let r = alpha_rec(bx, by, sa, sb);
            sa.pop();
            sb.pop();
            r
        }
        (Term::Forall(d1, b1), Term::Forall(d2, b2)) | (Term::Exists(d1, b1), Term::Exists(d2, b2)) => {
            d1 == d2 && alpha_rec(b1, b2, sa, sb)
        }
        (Term::App(a1, b1), Term::App(a2, b2))
        | (Term::And(a1, b1), Term::And(a2, b2))
        | (Term::Or(a1, b1), Term::Or(a2, b2))
        | (Term::Impl(a1, b1), Term::Impl(a2, b2))
        | (Term::Eq(a1, b1), Term::Eq(a2, b2)) => {
            alpha_rec(a1, a2, sa, sb) && alpha_rec(b1, b2, sa, sb)
        }
        (Term::Not(x), Term::Not(y)) => alpha_rec(x, y, sa, sb),
        (Term::Const(x), Term::Const(y)) => x == y,
        (Term::Lit(x), Term::Lit(y)) => x == y,
        (Term::Top, Term::Top) | (Term::Bot, Term::Bot) | (Term::UnitVal, Term::UnitVal) => true,
        _ => false,
    }
}

/// A rendering that is identical for exactly the alpha-equivalent terms
/// (binders replaced by de Bruijn indices).
pub fn alpha_key(t: &Term) -> String {
    let mut out = String::new();
    key_rec(t, &mut Vec::new(), &mut out);
    out
}

fn key_rec<'a>(t: &'a Term, stack: &mut Vec<&'a str>, out: &mut String) {
    use std::fmt::Write;
    match t {
        Term::Var(x) => match lookup(stack, x) {
            Some(i) => write!(out, "#{i}").unwrap(),
            None => write!(out, "${x}").unwrap(),
        },
        Term::Const(c) => write!(out, "{c}").unwrap(),
        Term::Lit(n) => write!(out, "{n}").unwrap(),
        Term::Lam(x, ty, b) => {
            write!(out, "(L {ty} ").unwrap();
            stack.push(x);
            key_rec(b, stack, out);
            stack.pop();
            out.push(')');
        }
        Term::Forall(d, b) | Term::Exists(d, b) => {
            let tag = if matches!(t, Term::Forall(..)) { "A" } else { "E" };
            write!(out, "({tag} {d} ").unwrap();
            key_rec(b, stack, out);
            out.push(')');
        }
        Term::Not(a) => {
            out.push_str("(~ ");
            key_rec(a, stack, out);
            out.push(')');
        }
        Term::App(a, b) | Term::And(a, b) | Term::Or(a, b) | Term::Impl(a, b) | Term::Eq(a, b) => {
            let tag = match t {
                Term::App(..) => "@",
                Term::And(..) => "&",
                Term::Or(..) => "|",
                Term::Impl(..) => ">",
                _ => "=",
            };
            write!(out, "({tag} ").unwrap();
            key_rec(a, stack, out);
            out.push(' ');
            key_rec(b, stack, out);
            out.push(')');
        }
        Term::Top => out.push('T'),
        Term::Bot => out.push('F'),
        Term::UnitVal => out.push('U'),
    }
}

// ---------------------------------------------------------------------------
// Typing

/// Signatures of the constants that denotations may mention.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypeEnv(BTreeMap<String, SemType>);

impl TypeEnv {
    pub fn new() -> Self {
        TypeEnv::default()
    }

    pub fn get(&self, name: &str) -> Option<&SemType> {
        self.0.get(name)
    }

    pub fn insert(&mut self, name: &str, ty: SemType) -> Option<SemType> {
        self.0.insert(name.to_string(), ty)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SemType)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(String, SemType)> for TypeEnv {
    fn from_iter<I: IntoIterator<Item = (String, SemType)>>(iter: I) -> Self {
        TypeEnv(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ill-typed subterm `{subterm}`: {message}")]
pub struct TypeError {
    pub subterm: String,
    pub message: String,
}

fn type_err(t: &Term, message: String) -> TypeError {
    TypeError {
        subterm: t.to_string(),
        message,
    }
}

/// Infers the type of `t`. Type variables are treated as rigid names.
pub fn type_check(t: &Term, env: &TypeEnv) -> Result<SemType, TypeError> {
    check_rec(t, env, &mut Vec::new())
}

fn check_rec(t: &Term, env: &TypeEnv, ctx: &mut Vec<(String, SemType)>) -> Result<SemType, TypeError> {
    let expect_prop = |sub: &Term, ctx: &mut Vec<(String, SemType)>| -> Result<(), TypeError> {
        let ty = check_rec(sub, env, ctx)?;
        if ty == SemType::Prop {
            Ok(())
        } else {
            Err(type_err(sub, format!("expected Prop, found {ty}")))
        }
    };
    match t {
        Term::Var(x) => ctx
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, ty)| ty.clone())
            .ok_or_else(|| type_err(t, format!("unbound variable `{x}`"))),
        Term::Const(c) => env
            .get(c)
            .cloned()
            .ok_or_else(|| type_err(t, format!("constant `{c}` has no declared signature"))),
        Term::Lit(_) => Ok(SemType::nat()),
        Term::UnitVal => Ok(SemType::Unit),
        Term::Top | Term::Bot => Ok(SemType::Prop),
        Term::Lam(x, ty, body) => {
            ctx.push((x.clone(), ty.clone()));
            let res = check_rec(body, env, ctx);
            ctx.pop();
            Ok(SemType::arrow(ty.clone(), res?))
        }
        Term::App(f, a) => {
            let fty = check_rec(f, env, ctx)?;
            let aty = check_rec(a, env, ctx)?;
            match fty {
                SemType::Arrow(dom, cod) if *dom == aty => Ok(*cod),
                SemType::Arrow(dom, _) => Err(type_err(
                    t,
                    format!("argument `{a}` has type {aty}, expected {dom}"),
                )),
                other => Err(type_err(t, format!("`{f}` has non-function type {other}"))),
            }
        }
        Term::And(a, b) | Term::Or(a, b) | Term::Impl(a, b) => {
            expect_prop(a, ctx)?;
            expect_prop(b, ctx)?;
            Ok(SemType::Prop)
        }
        Term::Not(a) => {
            expect_prop(a, ctx)?;
            Ok(SemType::Prop)
        }
        Term::Eq(a, b) => {
            let ta = check_rec(a, env, ctx)?;
            let tb = check_rec(b, env, ctx)?;
            if ta == tb {
                Ok(SemType::Prop)
            } else {
                Err(type_err(t, format!("equated sides have types {ta} and {tb}")))
            }
        }
        Term::Forall(dom, body) | Term::Exists(dom, body) => {
            let Term::Lam(_, bty, _) = body.as_ref() else {
                return Err(type_err(t, "quantifier body must be an abstraction".into()));
            };
            if bty != dom {
                return Err(type_err(
                    t,
                    format!("binder type {bty} differs from quantifier domain {dom}"),
                ));
            }
            let ty = check_rec(body, env, ctx)?;
            let want = SemType::arrow(dom.clone(), SemType::Prop);
            if ty == want {
                Ok(SemType::Prop)
            } else {
                Err(type_err(body, format!("expected {want}, found {ty}")))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Concrete syntax

const P_BINDER: u8 = 0;
const P_IMPL: u8 = 1;
const P_OR: u8 = 2;
const P_AND: u8 = 3;
const P_NOT: u8 = 4;
const P_CMP: u8 = 5;
const P_APP: u8 = 6;
const P_ATOM: u8 = 7;

struct Printer {
    reserved: BTreeSet<String>,
    scope: Vec<(String, String)>,
}

fn infix_of(t: &Term) -> Option<(&'static str, &Term, &Term)> {
    if let Term::App(f, rhs) = t {
        if let Term::App(g, lhs) = f.as_ref() {
            if let Term::Const(c) = g.as_ref() {
                return INFIX
                    .iter()
                    .find(|(name, _)| name == c)
                    .map(|(_, op)| (*op, lhs.as_ref(), rhs.as_ref()));
            }
        }
    }
    None
}

impl Printer {
    fn new(t: &Term) -> Self {
        let mut reserved = t.constants();
        reserved.extend(t.free_vars());
        reserved.extend(KEYWORDS.iter().map(|k| k.to_string()));
        Printer {
            reserved,
            scope: Vec::new(),
        }
    }

    fn binder_name(&self, x: &str) -> String {
        let in_scope = |n: &str| self.scope.iter().any(|(_, p)| p == n);
        let valid = crate::syntax::is_ident_start(x.chars().next().unwrap_or('0'))
            && x.chars().all(is_ident_char);
        if valid && !self.reserved.contains(x) && !in_scope(x) {
            return x.to_string();
        }
        (0..)
            .map(|i| format!("x{i}"))
            .find(|n| !self.reserved.contains(n) && !in_scope(n))
            .expect("unbounded name supply")
    }

    fn print(&mut self, t: &Term, prec: u8, out: &mut String) {
        let own = match t {
            Term::Lam(..) | Term::Forall(..) | Term::Exists(..) => P_BINDER,
            Term::Impl(..) => P_IMPL,
            Term::Or(..) => P_OR,
            Term::And(..) => P_AND,
            Term::Not(..) => P_NOT,
            Term::Eq(..) => P_CMP,
            Term::App(..) if infix_of(t).is_some() => P_CMP,
            Term::App(..) => P_APP,
            _ => P_ATOM,
        };
        let paren = prec > own;
        if paren {
            out.push('(');
        }
        match t {
            Term::Var(x) => {
                let name = self
                    .scope
                    .iter()
                    .rev()
                    .find(|(o, _)| o == x)
                    .map(|(_, p)| p.clone())
                    .unwrap_or_else(|| x.clone());
                out.push_str(&name);
            }
            Term::Const(c) => out.push_str(c),
            Term::Lit(n) => out.push_str(&n.to_string()),
            Term::Top => out.push_str("true"),
            Term::Bot => out.push_str("false"),
            Term::UnitVal => out.push_str("unit"),
            Term::Lam(x, ty, body) => {
                let name = self.binder_name(x);
                out.push_str(&format!("\\{name}:{ty}. "));
                self.scope.push((x.clone(), name));
                self.print(body, P_BINDER, out);
                self.scope.pop();
            }
            Term::Forall(dom, body) | Term::Exists(dom, body) => {
                let kw = if matches!(t, Term::Forall(..)) { "forall" } else { "exists" };
                match body.as_ref() {
                    Term::Lam(x, _, inner) => {
                        let name = self.binder_name(x);
                        out.push_str(&format!("{kw} {name}:{dom}, "));
                        self.scope.push((x.clone(), name));
                        self.print(inner, P_BINDER, out);
                        self.scope.pop();
                    }
                    other => {
                        // eta-expand a non-abstraction body for display
                        let name = self.binder_name("x");
                        out.push_str(&format!("{kw} {name}:{dom}, "));
                        self.print(other, P_APP, out);
                        out.push(' ');
                        out.push_str(&name);
                    }
                }
            }
            Term::Impl(a, b) => self.binop(a, " -> ", b, P_OR, P_IMPL, out),
            Term::Or(a, b) => self.binop(a, " \\/ ", b, P_AND, P_OR, out),
            Term::And(a, b) => self.binop(a, " /\\ ", b, P_NOT, P_AND, out),
            Term::Not(a) => {
                out.push('~');
                self.print(a, P_NOT, out);
            }
            Term::Eq(a, b) => self.binop(a, " = ", b, P_APP, P_APP, out),
            Term::App(f, a) => {
                if let Some((op, lhs, rhs)) = infix_of(t) {
                    self.binop(lhs, &format!(" {op} "), rhs, P_APP, P_APP, out);
                } else {
                    self.print(f, P_APP, out);
                    out.push(' ');
                    self.print(a, P_ATOM, out);
                }
            }
        }
        if paren {
            out.push(')');
        }
    }

    fn binop(&mut self, a: &Term, op: &str, b: &Term, pa: u8, pb: u8, out: &mut String) {
        // binder operands are always parenthesized for readability
        let pa = pa.max(P_IMPL);
        let pb = pb.max(P_IMPL);
        self.print(a, pa, out);
        out.push_str(op);
        self.print(b, pb, out);
    }
}

/// Deterministic, re-parseable rendering.
pub fn pretty(t: &Term) -> String {
    let mut out = String::new();
    Printer::new(t).print(t, P_BINDER, &mut out);
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

struct TermParser<'a> {
    cur: Cursor<'a>,
    bound: Vec<String>,
}

impl<'a> TermParser<'a> {
    fn at_lambda(&mut self) -> bool {
        self.cur.peek() == Some('\\') && !self.cur.rest().starts_with("\\/")
    }

    fn at_binder(&mut self) -> bool {
        if self.at_lambda() {
            return true;
        }
        matches!(self.cur.peek_ident(), Some("forall") | Some("exists"))
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        if self.at_binder() {
            self.binder()
        } else {
            self.impl_level()
        }
    }

    fn binder_name(&mut self) -> Result<String, SyntaxError> {
        match self.cur.ident() {
            Some(x) if KEYWORDS.contains(&x) => Err(SyntaxError::new(
                self.cur.pos() - x.len(),
                format!("keyword `{x}` cannot be a binder"),
            )),
            Some(x) => Ok(x.to_string()),
            None => Err(self.cur.error("expected binder name")),
        }
    }

    fn binder(&mut self) -> Result<Term, SyntaxError> {
        let kind = if self.cur.eat("\\") {
            0
        } else if self.cur.eat_keyword("forall") {
            1
        } else {
            self.cur.expect("exists")?;
            2
        };
        let x = self.binder_name()?;
        self.cur.expect(":")?;
        let ty = parse_semtype(&mut self.cur)?;
        self.cur.expect(if kind == 0 { "." } else { "," })?;
        self.bound.push(x.clone());
        let body = self.term();
        self.bound.pop();
        let lam = Term::Lam(x, ty.clone(), Box::new(body?));
        Ok(match kind {
            0 => lam,
            1 => Term::Forall(ty, Box::new(lam)),
            _ => Term::Exists(ty, Box::new(lam)),
        })
    }

    fn operand(&mut self, next: fn(&mut Self) -> Result<Term, SyntaxError>) -> Result<Term, SyntaxError> {
        if self.at_binder() {
            self.binder()
        } else {
            next(self)
        }
    }

    fn impl_level(&mut self) -> Result<Term, SyntaxError> {
        let lhs = self.or_level()?;
        if self.cur.eat("->") {
            let rhs = self.operand(Self::impl_level)?;
            Ok(Term::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or_level(&mut self) -> Result<Term, SyntaxError> {
        let lhs = self.and_level()?;
        if self.cur.eat("\\/") {
            let rhs = self.operand(Self::or_level)?;
            Ok(Term::or(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn and_level(&mut self) -> Result<Term, SyntaxError> {
        let lhs = self.not_level()?;
        if self.cur.eat("/\\") {
            let rhs = self.operand(Self::and_level)?;
            Ok(Term::and(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn not_level(&mut self) -> Result<Term, SyntaxError> {
        if self.cur.eat("~") {
            let inner = self.operand(Self::not_level)?;
            Ok(Term::negate(inner))
        } else {
            self.cmp_level()
        }
    }

    fn cmp_level(&mut self) -> Result<Term, SyntaxError> {
        let lhs = self.app_level()?;
        let op = if self.cur.eat("<=") {
            Some("le")
        } else if self.cur.eat(">=") {
            Some("ge")
        } else if self.cur.eat("<") {
            Some("lt")
        } else if self.cur.eat(">") {
            Some("gt")
        } else if self.cur.eat("=") {
            None
        } else {
            return Ok(lhs);
        };
        let rhs = self.app_level()?;
        Ok(match op {
            Some(c) => Term::apps(Term::cnst(c), [lhs, rhs]),
            None => Term::eq(lhs, rhs),
        })
    }

    fn at_atom(&mut self) -> bool {
        match self.cur.peek() {
            Some('(') => true,
            Some(c) if c.is_ascii_digit() => true,
            Some(_) => matches!(self.cur.peek_ident(), Some(id) if id != "forall" && id != "exists"),
            None => false,
        }
    }

    fn app_level(&mut self) -> Result<Term, SyntaxError> {
        let mut acc = self.atom()?;
        while self.at_atom() {
            let arg = self.atom()?;
            acc = Term::app(acc, arg);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Term, SyntaxError> {
        if self.cur.eat("(") {
            let t = self.term()?;
            self.cur.expect(")")?;
            return Ok(t);
        }
        if let Some(n) = self.cur.number() {
            return Ok(Term::Lit(n?));
        }
        match self.cur.ident() {
            Some("true") => Ok(Term::Top),
            Some("false") => Ok(Term::Bot),
            Some("unit") => Ok(Term::UnitVal),
            Some(x) if KEYWORDS.contains(&x) => Err(SyntaxError::new(
                self.cur.pos() - x.len(),
                format!("unexpected keyword `{x}`"),
            )),
            Some(x) => Ok(if self.bound.iter().any(|b| b == x) {
                Term::var(x)
            } else {
                Term::cnst(x)
            }),
            None => Err(self.cur.error("expected a term")),
        }
    }
}

/// Parses a term; identifiers not bound by an enclosing binder are constants.
pub fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    let mut p = TermParser {
        cur: Cursor::new(src),
        bound: Vec::new(),
    };
    let t = p.term()?;
    p.cur.finish()?;
    Ok(t)
}

impl FromStr for Term {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> SemType {
        SemType::nat()
    }

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn arith_env() -> TypeEnv {
        let mut env = TypeEnv::new();
        env.insert("even", "nat -> Prop".parse().unwrap());
        env.insert("le", "nat -> nat -> Prop".parse().unwrap());
        env
    }

    #[test]
    fn beta_examples() {
        let redex = Term::app(
            Term::lam("x", nat(), Term::app(Term::cnst("even"), Term::var("x"))),
            Term::Lit(4),
        );
        assert_eq!(beta_normalize(&redex), t("even 4"));

        let p = SemType::arrow(nat(), SemType::Prop);
        let is_adj = Term::lam(
            "n",
            nat(),
            Term::lam("p", p, Term::app(Term::var("p"), Term::var("n"))),
        );
        let applied = Term::apps(is_adj, [Term::Lit(4), Term::cnst("even")]);
        assert_eq!(beta_normalize(&applied), t("even 4"));

        let normal = Term::and(Term::Top, Term::Bot);
        assert_eq!(beta_normalize(&normal), normal);
    }

    #[test]
    fn alpha_examples() {
        assert!(alpha_eq(&t("\\x:nat. x"), &t("\\y:nat. y")));
        assert!(!alpha_eq(&t("\\x:nat. \\y:nat. x"), &t("\\a:nat. \\b:nat. b")));
        assert!(alpha_eq(
            &t("forall n:nat, even n"),
            &t("forall m:nat, even m")
        ));
        assert!(!alpha_eq(&t("\\x:nat. x"), &t("\\x:Prop. x")));
    }

    #[test]
    fn normalization_avoids_capture() {
        // (\x. \y. x) y  must not become \y. y
        let k = t("\\x:nat. \\y:nat. x");
        let open = Term::app(k, Term::var("y"));
        let n = beta_normalize(&open);
        let Term::Lam(binder, _, body) = &n else { panic!("{n:?}") };
        assert_ne!(binder, "y");
        assert_eq!(**body, Term::var("y"));
    }

    #[test]
    fn type_check_examples() {
        let env = arith_env();
        assert_eq!(type_check(&t("even 4"), &env).unwrap(), SemType::Prop);

        let mut env2 = env.clone();
        env2.insert("addone", "nat -> nat".parse().unwrap());
        let monotone = t("\\f:nat -> nat. forall x:nat, forall y:nat, x <= y -> f x <= f y");
        assert_eq!(
            type_check(&monotone, &env2).unwrap(),
            "(nat -> nat) -> Prop".parse().unwrap()
        );

        let err = type_check(&t("even even"), &env).unwrap_err();
        assert_eq!(err.subterm, "even even");
    }

    #[test]
    fn type_check_rejects_bad_connectives() {
        let env = arith_env();
        assert!(type_check(&t("4 /\\ true"), &env).is_err());
        assert!(type_check(&t("4 = even"), &env).is_err());
        assert!(type_check(&t("forall x:nat, x"), &env).is_err());
        assert!(type_check(&t("mystery 4"), &env).is_err());
    }

    #[test]
    fn pretty_examples() {
        assert_eq!(pretty(&Term::app(Term::cnst("even"), Term::Lit(4))), "even 4");
        assert_eq!(
            pretty(&Term::forall("n", nat(), Term::app(Term::cnst("even"), Term::var("n")))),
            "forall n:nat, even n"
        );
        let conj = t("(forall n:nat, n >= 0) /\\ (exists n:nat, even n)");
        assert_eq!(pretty(&conj), "(forall n:nat, n >= 0) /\\ (exists n:nat, even n)");
        assert_eq!(
            pretty(&t("forall x:nat, forall y:nat, x <= y -> addone x <= addone y")),
            "forall x:nat, forall y:nat, x <= y -> addone x <= addone y"
        );
        assert_eq!(pretty(&t("~(a /\\ b) \\/ c")), "~(a /\\ b) \\/ c");
        assert_eq!(pretty(&t("(a -> b) -> c")), "(a -> b) -> c");
        assert_eq!(pretty(&t("f (g x) 3")), "f (g x) 3");
    }

    #[test]
    fn pretty_renames_binders_that_clash_with_constants() {
        // binder named like a constant used in the body
        let tm = Term::lam("even", nat(), Term::app(Term::cnst("even"), Term::var("even")));
        let s = pretty(&tm);
        assert_eq!(s, "\\x0:nat. even x0");
        assert!(alpha_eq(&parse_term(&s).unwrap(), &tm));
    }

    #[test]
    fn parser_reports_positions() {
        let err = parse_term("\\x:nat x").unwrap_err();
        assert_eq!(err.offset, 7);
        assert!(parse_term("forall forall:nat, true").is_err());
        assert!(parse_term("(a /\\ b").is_err());
    }
}
