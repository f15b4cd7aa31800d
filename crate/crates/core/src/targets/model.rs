//! Finite models: sorts with finite domains and constants defined by
//! small arithmetic expressions.
//!
//! ```text
//! domain nat = 0..9          # inclusive range; `domain s = 1, 3, 5` also works
//! fun even(n) = n mod 2 == 0
//! fun addone(n) = n + 1
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use super::{retarget, spine, Quantifier, Recurse, TargetAlgebra, TargetError};
use crate::categories::SemType;
use crate::syntax::{Cursor, SyntaxError};
use crate::terms::{beta_normalize, pretty, Term, TypeEnv};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    Num(i64),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Num(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

/// Body of a model function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(i64),
    Bool(bool),
    Param(String),
    Call(String, Vec<Expr>),
    Not(Box<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Fun {
    params: Vec<String>,
    body: Expr,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}:{column}: {message}")]
    Syntax {
        file: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{file}:{line}: {message}")]
    Invalid {
        file: String,
        line: usize,
        message: String,
    },
    #[error("constant `{name}`: {message}")]
    Signature { name: String, message: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FiniteModel {
    domains: BTreeMap<String, Vec<u64>>,
    funs: BTreeMap<String, Fun>,
}

const MAX_CALL_DEPTH: usize = 64;

fn parse_expr(cur: &mut Cursor<'_>) -> Result<Expr, SyntaxError> {
    parse_or(cur)
}

fn parse_or(cur: &mut Cursor<'_>) -> Result<Expr, SyntaxError> {
    let mut e = parse_and(cur)?;
    while cur.eat("||") {
        e = Expr::Bin(BinOp::Or, Box::new(e), Box::new(parse_and(cur)?));
    }
    Ok(e)
}

fn parse_and(cur: &mut Cursor<'_>) -> Result<Expr, SyntaxError> {
    let mut e = parse_cmp(cur)?;
    while cur.eat("&&") {
        e = Expr::Bin(BinOp::And, Box::new(e), Box::new(parse_cmp(cur)?));
    }
    Ok(e)
}

fn parse_cmp(cur: &mut Cursor<'_>) -> Result<Expr, SyntaxError> {
    let e = parse_add(cur)?;
    let ops = [
        ("==", BinOp::Eq),
        ("!=", BinOp::Ne),
        ("<=", BinOp::Le),
        (">=", BinOp::Ge),
        ("<", BinOp::Lt),
        (">", BinOp::Gt),
    ];
    for (tok, op) in ops {
        if cur.eat(tok) {
            return Ok(Expr::Bin(op, Box::new(e), Box::new(parse_add(cur)?)));
        }
    }
    Ok(e)
}

fn parse_add(cur: &mut Cursor<'_>) -> Result<Expr, SyntaxError> {
    let mut e = parse_mul(cur)?;
    loop {
        let op = if cur.eat("+") {
            BinOp::Add
        } else if cur.eat("-") {
            BinOp::Sub
        } else {
            return Ok(e);
        };
        e = Expr::Bin(op, Box::new(e), Box::new(parse_mul(cur)?));
    }
}

fn parse_mul(cur: &mut Cursor<'_>) -> Result<Expr, SyntaxError> {
    let mut e = parse_unary(cur)?;
    loop {
        let op = if cur.eat("*") {
            BinOp::Mul
        } else if cur.eat("/") {
            BinOp::Div
        } else if cur.eat("%") || cur.eat_keyword("mod") {
            BinOp::Mod
        } else {
            return Ok(e);
        };
        e = Expr::Bin(op, Box::new(e), Box::new(parse_unary(cur)?));
    }
}

fn parse_unary(cur: &mut Cursor<'_>) -> Result<Expr, SyntaxError> {
    if cur.peek() == Some('!') && !cur.rest().starts_with("!=") {
        cur.eat("!");
        return Ok(Expr::Not(Box::new(parse_unary(cur)?)));
    }
    if cur.eat("-") {
        return Ok(Expr::Neg(Box::new(parse_unary(cur)?)));
    }
    parse_atom(cur)
}

fn parse_atom(cur: &mut Cursor<'_>) -> Result<Expr, SyntaxError> {
    if let Some(n) = cur.number() {
        let start = cur.pos();
        let n = n?;
        return i64::try_from(n)
            .map(Expr::Num)
            .map_err(|_| SyntaxError::new(start, "numeric literal out of range"));
    }
    if cur.eat("(") {
        let e = parse_expr(cur)?;
        cur.expect(")")?;
        return Ok(e);
    }
    match cur.ident() {
        Some("true") => Ok(Expr::Bool(true)),
        Some("false") => Ok(Expr::Bool(false)),
        Some("mod") => Err(cur.error("`mod` is an operator")),
        Some(name) => {
            if !cur.eat("(") {
                return Ok(Expr::Param(name.to_string()));
            }
            let mut args = Vec::new();
            if !cur.eat(")") {
                loop {
                    args.push(parse_expr(cur)?);
                    if cur.eat(")") {
                        break;
                    }
                    cur.expect(",")?;
                }
            }
            Ok(Expr::Call(name.to_string(), args))
        }
        None => Err(cur.error("expected an expression")),
    }
}

fn parse_domain(cur: &mut Cursor<'_>) -> Result<Vec<u64>, SyntaxError> {
    let mut values = Vec::new();
    loop {
        let lo = cur.number().ok_or_else(|| cur.error("expected a natural number"))??;
        if cur.eat("..") {
            let hi = cur.number().ok_or_else(|| cur.error("expected range end"))??;
            values.extend(lo..=hi);
        } else {
            values.push(lo);
        }
        if !cur.eat(",") {
            break;
        }
    }
    cur.finish()?;
    values.sort_unstable();
    values.dedup();
    Ok(values)
}

impl FiniteModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FiniteModel, ModelError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: path.display().to_string(),
            source,
        })?;
        FiniteModel::parse(&path.display().to_string(), &text)
    }

    pub fn parse(source: &str, text: &str) -> Result<FiniteModel, ModelError> {
        let mut m = FiniteModel::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let syntax = |e: SyntaxError| ModelError::Syntax {
                file: source.to_string(),
                line: i + 1,
                column: e.offset + 1,
                message: e.message,
            };
            let invalid = |message: String| ModelError::Invalid {
                file: source.to_string(),
                line: i + 1,
                message,
            };
            let mut cur = Cursor::new(line);
            if cur.at_end() {
                continue;
            }
            match cur.ident() {
                Some("domain") => {
                    let sort = cur.ident().ok_or_else(|| syntax(cur.error("expected a sort name")))?;
                    cur.expect("=").map_err(syntax)?;
                    let values = parse_domain(&mut cur).map_err(syntax)?;
                    if values.is_empty() {
                        return Err(invalid(format!("domain `{sort}` is empty")));
                    }
                    if m.domains.insert(sort.to_string(), values).is_some() {
                        return Err(invalid(format!("domain `{sort}` declared twice")));
                    }
                }
                Some("fun") => {
                    let name = cur.ident().ok_or_else(|| syntax(cur.error("expected a function name")))?;
                    cur.expect("(").map_err(syntax)?;
                    let mut params = Vec::new();
                    if !cur.eat(")") {
                        loop {
                            let p = cur.ident().ok_or_else(|| syntax(cur.error("expected a parameter")))?;
                            params.push(p.to_string());
                            if cur.eat(")") {
                                break;
                            }
                            cur.expect(",").map_err(syntax)?;
                        }
                    }
                    cur.expect("=").map_err(syntax)?;
                    let body = parse_expr(&mut cur).map_err(syntax)?;
                    cur.finish().map_err(syntax)?;
                    let f = Fun { params, body };
                    if let Some(p) = unbound_param(&f.body, &f.params) {
                        return Err(invalid(format!("`{p}` is not a parameter of `{name}`")));
                    }
                    if m.funs.insert(name.to_string(), f).is_some() {
                        return Err(invalid(format!("function `{name}` defined twice")));
                    }
                }
                _ => return Err(syntax(SyntaxError::new(0, "expected `domain` or `fun`"))),
            }
        }
        Ok(m)
    }

    pub fn with_domain(mut self, sort: &str, values: impl IntoIterator<Item = u64>) -> Self {
        self.domains.insert(sort.to_string(), values.into_iter().collect());
        self
    }

    /// Adds or replaces a function; `body` uses the model expression syntax.
    pub fn with_fun(mut self, name: &str, params: &[&str], body: &str) -> Result<Self, SyntaxError> {
        let mut cur = Cursor::new(body);
        let body = parse_expr(&mut cur)?;
        cur.finish()?;
        let params: Vec<String> = params.iter().map(|p| p.to_string()).collect();
        if let Some(p) = unbound_param(&body, &params) {
            return Err(SyntaxError::new(0, format!("`{p}` is not a parameter")));
        }
        self.funs.insert(name.to_string(), Fun { params, body });
        Ok(self)
    }

    pub fn domain(&self, sort: &str) -> Option<&[u64]> {
        self.domains.get(sort).map(Vec::as_slice)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.funs.iter().map(|(n, f)| (n.as_str(), f.params.len()))
    }

    /// Applies a model function to argument values.
    pub fn call(&self, name: &str, args: &[Value]) -> Result<Value, TargetError> {
        self.call_at(name, args, 0)
    }

    fn call_at(&self, name: &str, args: &[Value], depth: usize) -> Result<Value, TargetError> {
        let f = self
            .funs
            .get(name)
            .ok_or_else(|| TargetError::UnknownConstant(name.to_string()))?;
        if f.params.len() != args.len() {
            return Err(TargetError::Eval(format!(
                "`{name}` takes {} arguments, got {}",
                f.params.len(),
                args.len()
            )));
        }
        if depth > MAX_CALL_DEPTH {
            return Err(TargetError::Eval(format!("call depth exceeded in `{name}`")));
        }
        let env: BTreeMap<&str, Value> = f.params.iter().map(String::as_str).zip(args.iter().copied()).collect();
        self.eval_expr(&f.body, &env, depth)
    }

    fn eval_expr(&self, e: &Expr, env: &BTreeMap<&str, Value>, depth: usize) -> Result<Value, TargetError> {
        let num = |v: Value| match v {
            Value::Num(n) => Ok(n),
            Value::Bool(_) => Err(TargetError::Eval(format!("expected a number, got {v}"))),
        };
        let boolean = |v: Value| match v {
            Value::Bool(b) => Ok(b),
            Value::Num(_) => Err(TargetError::Eval(format!("expected a boolean, got {v}"))),
        };
        let overflow = || TargetError::Eval("arithmetic overflow or division by zero".into());
        Ok(match e {
            Expr::Num(n) => Value::Num(*n),
            Expr::Bool(b) => Value::Bool(*b),
            Expr::Param(p) => env[p.as_str()],
            Expr::Call(f, args) => {
                let vals = args
                    .iter()
                    .map(|a| self.eval_expr(a, env, depth))
                    .collect::<Result<Vec<_>, _>>()?;
                self.call_at(f, &vals, depth + 1)?
            }
            Expr::Not(a) => Value::Bool(!boolean(self.eval_expr(a, env, depth)?)?),
            Expr::Neg(a) => Value::Num(num(self.eval_expr(a, env, depth)?)?.checked_neg().ok_or_else(overflow)?),
            Expr::Bin(op @ (BinOp::And | BinOp::Or), a, b) => {
                let a = boolean(self.eval_expr(a, env, depth)?)?;
                match (op, a) {
                    (BinOp::And, false) => Value::Bool(false),
                    (BinOp::Or, true) => Value::Bool(true),
                    _ => Value::Bool(boolean(self.eval_expr(b, env, depth)?)?),
                }
            }
            Expr::Bin(op @ (BinOp::Eq | BinOp::Ne), a, b) => {
                let eq = self.eval_expr(a, env, depth)? == self.eval_expr(b, env, depth)?;
                Value::Bool(eq == (*op == BinOp::Eq))
            }
            Expr::Bin(op, a, b) => {
                let x = num(self.eval_expr(a, env, depth)?)?;
                let y = num(self.eval_expr(b, env, depth)?)?;
                match op {
                    BinOp::Add => Value::Num(x.checked_add(y).ok_or_else(overflow)?),
                    BinOp::Sub => Value::Num(x.checked_sub(y).ok_or_else(overflow)?),
                    BinOp::Mul => Value::Num(x.checked_mul(y).ok_or_else(overflow)?),
                    BinOp::Div => Value::Num(x.checked_div(y).ok_or_else(overflow)?),
                    BinOp::Mod => Value::Num(x.checked_rem_euclid(y).ok_or_else(overflow)?),
                    BinOp::Lt => Value::Bool(x < y),
                    BinOp::Le => Value::Bool(x <= y),
                    BinOp::Gt => Value::Bool(x > y),
                    BinOp::Ge => Value::Bool(x >= y),
                    BinOp::And | BinOp::Or | BinOp::Eq | BinOp::Ne => unreachable!("handled above"),
                }
            }
        })
    }

    /// Checks every first-order constant of `env` against the model: the
    /// function exists with the right arity, every argument sort has a
    /// domain, and the full table evaluates to values of the right kind.
    /// Higher-order constants are skipped.
    pub fn check_signatures(&self, env: &TypeEnv) -> Result<(), ModelError> {
        for (name, ty) in env.iter() {
            let (args, result) = ty.uncurry();
            let first_order = |t: &SemType| matches!(t, SemType::Base(_) | SemType::Prop);
            if !args.iter().all(|t| matches!(t, SemType::Base(_))) || !first_order(result) {
                continue;
            }
            let bad = |message: String| ModelError::Signature {
                name: name.to_string(),
                message,
            };
            let table = self.table(name, &args).map_err(|e| bad(e.to_string()))?;
            for (point, v) in table {
                let ok = matches!((result, v), (SemType::Prop, Value::Bool(_)) | (SemType::Base(_), Value::Num(_)));
                if !ok {
                    return Err(bad(format!("at {point:?} the value {v} does not have type {result}")));
                }
            }
        }
        Ok(())
    }

    /// The value table of a first-order constant over its argument domains.
    pub fn table(&self, name: &str, arg_sorts: &[&SemType]) -> Result<Vec<(Vec<u64>, Value)>, TargetError> {
        let f = self
            .funs
            .get(name)
            .ok_or_else(|| TargetError::UnknownConstant(name.to_string()))?;
        if f.params.len() != arg_sorts.len() {
            return Err(TargetError::Eval(format!(
                "model defines {} parameters, signature has {}",
                f.params.len(),
                arg_sorts.len()
            )));
        }
        let mut points: Vec<Vec<u64>> = vec![vec![]];
        for sort in arg_sorts {
            let dom = self.sort_domain(sort)?;
            points = points
                .into_iter()
                .flat_map(|p| {
                    dom.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        points
            .into_iter()
            .map(|p| {
                let args: Vec<Value> = p.iter().map(|&v| Value::Num(v as i64)).collect();
                self.call(name, &args).map(|v| (p, v))
            })
            .collect()
    }

    fn sort_domain(&self, sort: &SemType) -> Result<&[u64], TargetError> {
        match sort {
            SemType::Base(s) => self.domain(s).ok_or_else(|| TargetError::DomainMissing(s.clone())),
            other => Err(TargetError::UnsupportedConstruct(format!("quantification over `{other}`"))),
        }
    }

    /// Value of a closed first-order term.
    pub fn eval_term(&self, t: &Term) -> Result<Value, TargetError> {
        let (head, args) = spine(t);
        match head {
            Term::Lit(n) if args.is_empty() => i64::try_from(*n)
                .map(Value::Num)
                .map_err(|_| TargetError::Eval(format!("literal {n} out of range"))),
            Term::Const(c) => {
                let vals = args.iter().map(|a| self.eval_term(a)).collect::<Result<Vec<_>, _>>()?;
                self.call(c, &vals)
            }
            _ => match retarget(t, &ModelTarget(self)) {
                Ok(b) => Ok(Value::Bool(b)),
                Err(e) => Err(e),
            },
        }
    }
}

fn unbound_param<'e>(e: &'e Expr, params: &[String]) -> Option<&'e str> {
    match e {
        Expr::Param(p) if !params.contains(p) => Some(p),
        Expr::Num(_) | Expr::Bool(_) | Expr::Param(_) => None,
        Expr::Call(_, args) => args.iter().find_map(|a| unbound_param(a, params)),
        Expr::Not(a) | Expr::Neg(a) => unbound_param(a, params),
        Expr::Bin(_, a, b) => unbound_param(a, params).or_else(|| unbound_param(b, params)),
    }
}

/// Classical two-valued evaluation in a finite model.
#[derive(Debug, Clone, Copy)]
pub struct ModelTarget<'m>(pub &'m FiniteModel);

impl TargetAlgebra for ModelTarget<'_> {
    type Value = bool;

    fn top(&self) -> bool {
        true
    }
    fn bot(&self) -> bool {
        false
    }
    fn and(&self, a: bool, b: bool) -> bool {
        a && b
    }
    fn or(&self, a: bool, b: bool) -> bool {
        a || b
    }
    fn implies(&self, a: bool, b: bool) -> bool {
        !a || b
    }
    fn not(&self, a: bool) -> bool {
        !a
    }

    fn atom(&self, t: &Term, _: Recurse<'_, bool>) -> Result<bool, TargetError> {
        let (head, _) = spine(t);
        if !matches!(head, Term::Const(_)) {
            return Err(TargetError::UnsupportedConstruct(format!("proposition `{}`", pretty(t))));
        }
        match self.0.eval_term(t)? {
            Value::Bool(b) => Ok(b),
            v => Err(TargetError::Eval(format!("`{}` evaluates to {v}, not a truth value", pretty(t)))),
        }
    }

    fn equal(&self, a: &Term, b: &Term) -> Result<bool, TargetError> {
        Ok(self.0.eval_term(a)? == self.0.eval_term(b)?)
    }

    fn quantify(&self, q: Quantifier, dom: &SemType, lam: &Term, rec: Recurse<'_, bool>) -> Result<bool, TargetError> {
        for &v in self.0.sort_domain(dom)? {
            let inst = beta_normalize(&Term::app(lam.clone(), Term::Lit(v)));
            let holds = rec(&inst)?;
            match (q, holds) {
                (Quantifier::Forall, false) => return Ok(false),
                (Quantifier::Exists, true) => return Ok(true),
                _ => {}
            }
        }
        Ok(q == Quantifier::Forall)
    }
}

/// Truth value of a closed proposition in `m`.
pub fn eval_prop(t: &Term, m: &FiniteModel) -> Result<bool, TargetError> {
    retarget(t, &ModelTarget(m))
}

/// Like [`eval_prop`], first checking the model against the constant
/// signatures in `env`.
pub fn eval_prop_in(t: &Term, m: &FiniteModel, env: &TypeEnv) -> Result<bool, TargetError> {
    m.check_signatures(env).map_err(|e| TargetError::Eval(e.to_string()))?;
    eval_prop(t, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_term;

    const ARITH: &str = include_str!("../../models/arith.model");

    fn arith() -> FiniteModel {
        FiniteModel::parse("arith", ARITH).unwrap()
    }

    fn eval(s: &str, m: &FiniteModel) -> Result<bool, TargetError> {
        eval_prop(&parse_term(s).unwrap(), m)
    }

    #[test]
    fn arith_examples() {
        let m = arith();
        assert_eq!(m.domain("nat").unwrap(), (0..=9).collect::<Vec<u64>>());
        assert_eq!(eval("even 4", &m), Ok(true));
        assert_eq!(eval("even 3", &m), Ok(false));
        assert_eq!(eval("false", &m), Ok(false));
        assert_eq!(eval("addone 3 = 4", &m), Ok(true));
        assert_eq!(eval("forall n:nat, ge n 0", &m.clone().with_domain("nat", 0..=5)), Ok(true));
        assert_eq!(eval("exists n:nat, even n /\\ positive n", &m), Ok(true));
        assert_eq!(eval("forall n:nat, positive n", &m), Ok(false));
    }

    #[test]
    fn homomorphism_over_connectives() {
        let m = arith();
        let atoms = [("even 4", true), ("even 3", false)];
        for (a, va) in atoms {
            for (b, vb) in atoms {
                assert_eq!(eval(&format!("({a}) /\\ ({b})"), &m), Ok(va && vb));
                assert_eq!(eval(&format!("({a}) \\/ ({b})"), &m), Ok(va || vb));
                assert_eq!(eval(&format!("({a}) -> ({b})"), &m), Ok(!va || vb));
            }
            assert_eq!(eval(&format!("~({a})"), &m), Ok(!va));
        }
    }

    #[test]
    fn errors() {
        let m = arith();
        assert_eq!(eval("odd 3", &m), Err(TargetError::UnknownConstant("odd".into())));
        assert_eq!(
            eval("forall b:bool, true", &m),
            Err(TargetError::DomainMissing("bool".into()))
        );
    }

    #[test]
    fn signatures_are_checked() {
        let lex = crate::lexicon::Lexicon::core();
        arith().check_signatures(lex.constants()).unwrap();
        let broken = arith().with_fun("even", &["a", "b"], "a == b").unwrap();
        assert!(broken.check_signatures(lex.constants()).is_err());
        let wrong_kind = arith().with_fun("even", &["n"], "n + 1").unwrap();
        assert!(wrong_kind.check_signatures(lex.constants()).is_err());
    }

    #[test]
    fn file_errors_carry_location() {
        match FiniteModel::parse("m", "domain nat = 0..3\nfun f(n) = n +\n") {
            Err(ModelError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            FiniteModel::parse("m", "fun f(n) = m\n"),
            Err(ModelError::Invalid { .. })
        ));
    }

    #[test]
    fn expression_language() {
        let m = FiniteModel::new()
            .with_fun("f", &["a", "b"], "(a * 3 - b) % 4 == 1 && !(a > b) || a != a")
            .unwrap();
        let call = |a, b| m.call("f", &[Value::Num(a), Value::Num(b)]).unwrap();
        assert_eq!(call(1, 2), Value::Bool(true));
        assert_eq!(call(3, 2), Value::Bool(false));
    }
}
