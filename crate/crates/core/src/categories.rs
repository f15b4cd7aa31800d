//! Semantic types, grammatical categories, and first-order unification
//! over the type indices of categories.
//!
//! Categories are indexed by the semantic type of the thing they talk
//! about: `NP[nat]` is a noun phrase denoting a natural number, `ADJ[nat]`
//! a predicate over naturals. Lexicon entries may leave an index open as a
//! type variable (`NP[?0]`); parsing fixes those variables by unification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{Cursor, SyntaxError};

/// A semantic type: the codomain of [`interp`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemType {
    Prop,
    Unit,
    Base(String),
    Arrow(Box<SemType>, Box<SemType>),
    TVar(u32),
}

impl SemType {
    pub fn base(name: &str) -> SemType {
        SemType::Base(name.to_string())
    }

    pub fn nat() -> SemType {
        SemType::base("nat")
    }

    pub fn arrow(dom: SemType, cod: SemType) -> SemType {
        SemType::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            SemType::TVar(_) => false,
            SemType::Arrow(a, b) => a.is_ground() && b.is_ground(),
            _ => true,
        }
    }

    pub fn occurs(&self, var: u32) -> bool {
        match self {
            SemType::TVar(v) => *v == var,
            SemType::Arrow(a, b) => a.occurs(var) || b.occurs(var),
            _ => false,
        }
    }

    pub fn collect_tvars(&self, out: &mut Vec<u32>) {
        match self {
            SemType::TVar(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            SemType::Arrow(a, b) => {
                a.collect_tvars(out);
                b.collect_tvars(out);
            }
            _ => {}
        }
    }

    /// Renames type variables through `f`.
    pub fn map_tvars(&self, f: &impl Fn(u32) -> u32) -> SemType {
        match self {
            SemType::TVar(v) => SemType::TVar(f(*v)),
            SemType::Arrow(a, b) => SemType::arrow(a.map_tvars(f), b.map_tvars(f)),
            other => other.clone(),
        }
    }

    /// Splits `a -> b -> ... -> r` into its argument types and final result.
    pub fn uncurry(&self) -> (Vec<&SemType>, &SemType) {
        let mut args = Vec::new();
        let mut cur = self;
        while let SemType::Arrow(a, b) = cur {
            args.push(a.as_ref());
            cur = b;
        }
        (args, cur)
    }
}

/// A grammatical category.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cat {
    S,
    NP(SemType),
    ADJ(SemType),
    CN(SemType),
    /// `A / B`: yields an `A` when given a `B` on the right.
    Over(Box<Cat>, Box<Cat>),
    /// `A \ B`: yields a `B` when given an `A` on the left.
    Under(Box<Cat>, Box<Cat>),
}

impl Cat {
    pub fn over(result: Cat, arg: Cat) -> Cat {
        Cat::Over(Box::new(result), Box::new(arg))
    }

    pub fn under(arg: Cat, result: Cat) -> Cat {
        Cat::Under(Box::new(arg), Box::new(result))
    }

    /// `(S / (NP[t] \ S)) / CN[t]`
    pub fn quant(index: SemType) -> Cat {
        Cat::over(
            Cat::over(Cat::S, Cat::under(Cat::NP(index.clone()), Cat::S)),
            Cat::CN(index),
        )
    }

    pub fn is_ground(&self) -> bool {
        self.indices().into_iter().all(SemType::is_ground)
    }

    /// The type indices in left-to-right order.
    pub fn indices(&self) -> Vec<&SemType> {
        let mut out = Vec::new();
        self.push_indices(&mut out);
        out
    }

    fn push_indices<'a>(&'a self, out: &mut Vec<&'a SemType>) {
        match self {
            Cat::S => {}
            Cat::NP(t) | Cat::ADJ(t) | Cat::CN(t) => out.push(t),
            Cat::Over(a, b) | Cat::Under(a, b) => {
                a.push_indices(out);
                b.push_indices(out);
            }
        }
    }

    /// Type variables in order of first occurrence.
    pub fn tvars(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for t in self.indices() {
            t.collect_tvars(&mut out);
        }
        out
    }

    pub fn max_tvar(&self) -> Option<u32> {
        self.tvars().into_iter().max()
    }

    pub fn map_tvars(&self, f: &impl Fn(u32) -> u32) -> Cat {
        self.map_indices(&|t| t.map_tvars(f))
    }

    pub fn map_indices(&self, f: &impl Fn(&SemType) -> SemType) -> Cat {
        match self {
            Cat::S => Cat::S,
            Cat::NP(t) => Cat::NP(f(t)),
            Cat::ADJ(t) => Cat::ADJ(f(t)),
            Cat::CN(t) => Cat::CN(f(t)),
            Cat::Over(a, b) => Cat::over(a.map_indices(f), b.map_indices(f)),
            Cat::Under(a, b) => Cat::under(a.map_indices(f), b.map_indices(f)),
        }
    }

    pub fn is_slash(&self) -> bool {
        matches!(self, Cat::Over(..) | Cat::Under(..))
    }
}

/// A category with its type indices dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErasedCat {
    S,
    NP,
    ADJ,
    CN,
    Over(Box<ErasedCat>, Box<ErasedCat>),
    Under(Box<ErasedCat>, Box<ErasedCat>),
}

/// Maps a category to the semantic type of its denotations.
pub fn interp(c: &Cat) -> SemType {
    match c {
        Cat::S => SemType::Prop,
        Cat::NP(t) => t.clone(),
        Cat::ADJ(t) => SemType::arrow(t.clone(), SemType::Prop),
        Cat::CN(_) => SemType::Unit,
        Cat::Over(a, b) => SemType::arrow(interp(b), interp(a)),
        Cat::Under(a, b) => SemType::arrow(interp(a), interp(b)),
    }
}

pub fn erase(c: &Cat) -> ErasedCat {
    match c {
        Cat::S => ErasedCat::S,
        Cat::NP(_) => ErasedCat::NP,
        Cat::ADJ(_) => ErasedCat::ADJ,
        Cat::CN(_) => ErasedCat::CN,
        Cat::Over(a, b) => ErasedCat::Over(Box::new(erase(a)), Box::new(erase(b))),
        Cat::Under(a, b) => ErasedCat::Under(Box::new(erase(a)), Box::new(erase(b))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("cannot unify `{0}` with `{1}`")]
    TypeClash(SemType, SemType),
    #[error("occurs check: ?{0} occurs in `{1}`")]
    Occurs(u32, SemType),
    #[error("category mismatch: `{0}` vs `{1}`")]
    CatClash(Cat, Cat),
}

/// An idempotent substitution of type variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Subst(BTreeMap<u32, SemType>);

impl Subst {
    pub fn new() -> Self {
        Subst::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, var: u32) -> Option<&SemType> {
        self.0.get(&var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &SemType)> {
        self.0.iter().map(|(k, v)| (*k, v))
    }

    pub fn apply(&self, t: &SemType) -> SemType {
        match t {
            SemType::TVar(v) => self.0.get(v).cloned().unwrap_or_else(|| t.clone()),
            SemType::Arrow(a, b) => SemType::arrow(self.apply(a), self.apply(b)),
            other => other.clone(),
        }
    }

    pub fn apply_cat(&self, c: &Cat) -> Cat {
        if self.0.is_empty() {
            return c.clone();
        }
        c.map_indices(&|t| self.apply(t))
    }

    /// Adds `var := ty`, keeping the map idempotent.
    pub fn bind(&mut self, var: u32, ty: SemType) -> Result<(), UnifyError> {
        let ty = self.apply(&ty);
        if ty == SemType::TVar(var) {
            return Ok(());
        }
        if ty.occurs(var) {
            return Err(UnifyError::Occurs(var, ty));
        }
        let single = Subst(BTreeMap::from([(var, ty.clone())]));
        for v in self.0.values_mut() {
            *v = single.apply(v);
        }
        self.0.insert(var, ty);
        Ok(())
    }

    /// Restricts the substitution to the given variables.
    pub fn restrict(&self, vars: &[u32]) -> Subst {
        Subst(
            self.0
                .iter()
                .filter(|(k, _)| vars.contains(k))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        )
    }

    pub fn insert_raw(&mut self, var: u32, ty: SemType) {
        self.0.insert(var, ty);
    }
}

impl FromIterator<(u32, SemType)> for Subst {
    fn from_iter<I: IntoIterator<Item = (u32, SemType)>>(iter: I) -> Self {
        Subst(iter.into_iter().collect())
    }
}

pub fn unify_sem(a: &SemType, b: &SemType, s: &Subst) -> Result<Subst, UnifyError> {
    let mut out = s.clone();
    unify_sem_in_place(a, b, &mut out)?;
    Ok(out)
}

fn unify_sem_in_place(a: &SemType, b: &SemType, s: &mut Subst) -> Result<(), UnifyError> {
    let a = s.apply(a);
    let b = s.apply(b);
    match (&a, &b) {
        (SemType::TVar(x), SemType::TVar(y)) if x == y => Ok(()),
        (SemType::TVar(x), t) | (t, SemType::TVar(x)) => s.bind(*x, t.clone()),
        (SemType::Arrow(a1, b1), SemType::Arrow(a2, b2)) => {
            unify_sem_in_place(a1, a2, s)?;
            unify_sem_in_place(b1, b2, s)
        }
        _ if a == b => Ok(()),
        _ => Err(UnifyError::TypeClash(a, b)),
    }
}

pub fn unify_cat(a: &Cat, b: &Cat, s: &Subst) -> Result<Subst, UnifyError> {
    let mut out = s.clone();
    unify_cat_in_place(a, b, &mut out)?;
    Ok(out)
}

pub(crate) fn unify_cat_in_place(a: &Cat, b: &Cat, s: &mut Subst) -> Result<(), UnifyError> {
    match (a, b) {
        (Cat::S, Cat::S) => Ok(()),
        (Cat::NP(x), Cat::NP(y)) | (Cat::ADJ(x), Cat::ADJ(y)) | (Cat::CN(x), Cat::CN(y)) => {
            unify_sem_in_place(x, y, s)
        }
        (Cat::Over(a1, b1), Cat::Over(a2, b2)) | (Cat::Under(a1, b1), Cat::Under(a2, b2)) => {
            unify_cat_in_place(a1, a2, s)?;
            unify_cat_in_place(b1, b2, s)
        }
        _ => Err(UnifyError::CatClash(s.apply_cat(a), s.apply_cat(b))),
    }
}

/// Renumbers type variables of `cat` to `0..n` in order of first
/// occurrence, returning the renaming used.
pub fn canonical_renaming(vars: &[u32]) -> BTreeMap<u32, u32> {
    vars.iter()
        .enumerate()
        .map(|(i, v)| (*v, i as u32))
        .collect()
}

// ---------------------------------------------------------------------------
// Concrete syntax

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::Prop => write!(f, "Prop"),
            SemType::Unit => write!(f, "unit"),
            SemType::Base(n) => write!(f, "{n}"),
            SemType::TVar(v) => write!(f, "?{v}"),
            SemType::Arrow(a, b) => {
                if matches!(**a, SemType::Arrow(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
        }
    }
}

fn fmt_child<T: fmt::Display>(f: &mut fmt::Formatter<'_>, c: &T, compound: bool) -> fmt::Result {
    if compound {
        write!(f, "({c})")
    } else {
        write!(f, "{c}")
    }
}

impl fmt::Display for Cat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cat::S => write!(f, "S"),
            Cat::NP(t) => write!(f, "NP[{t}]"),
            Cat::ADJ(t) => write!(f, "ADJ[{t}]"),
            Cat::CN(t) => write!(f, "CN[{t}]"),
            Cat::Over(a, b) | Cat::Under(a, b) => {
                fmt_child(f, a, a.is_slash())?;
                write!(f, " {} ", if matches!(self, Cat::Over(..)) { '/' } else { '\\' })?;
                fmt_child(f, b, b.is_slash())
            }
        }
    }
}

impl fmt::Display for ErasedCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let slash = |c: &ErasedCat| matches!(c, ErasedCat::Over(..) | ErasedCat::Under(..));
        match self {
            ErasedCat::S => write!(f, "S"),
            ErasedCat::NP => write!(f, "NP"),
            ErasedCat::ADJ => write!(f, "ADJ"),
            ErasedCat::CN => write!(f, "CN"),
            ErasedCat::Over(a, b) | ErasedCat::Under(a, b) => {
                fmt_child(f, a, slash(a))?;
                write!(
                    f,
                    " {} ",
                    if matches!(self, ErasedCat::Over(..)) { '/' } else { '\\' }
                )?;
                fmt_child(f, b, slash(b))
            }
        }
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("?{k}={v}")).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub(crate) fn parse_semtype(cur: &mut Cursor<'_>) -> Result<SemType, SyntaxError> {
    let dom = parse_semtype_atom(cur)?;
    if cur.eat("->") {
        let cod = parse_semtype(cur)?;
        Ok(SemType::arrow(dom, cod))
    } else {
        Ok(dom)
    }
}

fn parse_semtype_atom(cur: &mut Cursor<'_>) -> Result<SemType, SyntaxError> {
    if cur.eat("(") {
        let t = parse_semtype(cur)?;
        cur.expect(")")?;
        return Ok(t);
    }
    if cur.eat("?") {
        return match cur.number() {
            Some(Ok(n)) if n <= u32::MAX as u64 => Ok(SemType::TVar(n as u32)),
            Some(Err(e)) => Err(e),
            _ => Err(cur.error("expected type variable number after `?`")),
        };
    }
    match cur.ident() {
        Some("Prop") => Ok(SemType::Prop),
        Some("unit") => Ok(SemType::Unit),
        Some(name) => Ok(SemType::base(name)),
        None => Err(cur.error("expected a semantic type")),
    }
}

pub(crate) fn parse_cat(cur: &mut Cursor<'_>) -> Result<Cat, SyntaxError> {
    let mut acc = parse_cat_primary(cur)?;
    loop {
        if cur.eat("/") {
            let rhs = parse_cat_primary(cur)?;
            acc = Cat::over(acc, rhs);
        } else if cur.eat("\\") {
            let rhs = parse_cat_primary(cur)?;
            acc = Cat::under(acc, rhs);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_index(cur: &mut Cursor<'_>) -> Result<SemType, SyntaxError> {
    cur.expect("[")?;
    let t = parse_semtype(cur)?;
    cur.expect("]")?;
    Ok(t)
}

fn parse_cat_primary(cur: &mut Cursor<'_>) -> Result<Cat, SyntaxError> {
    if cur.eat("(") {
        let c = parse_cat(cur)?;
        cur.expect(")")?;
        return Ok(c);
    }
    match cur.ident() {
        Some("S") => Ok(Cat::S),
        Some("NP") => Ok(Cat::NP(parse_index(cur)?)),
        Some("ADJ") => Ok(Cat::ADJ(parse_index(cur)?)),
        Some("CN") => Ok(Cat::CN(parse_index(cur)?)),
        Some("Quant") => Ok(Cat::quant(parse_index(cur)?)),
        Some(other) => Err(SyntaxError::new(
            cur.pos() - other.len(),
            format!("unknown category `{other}`"),
        )),
        None => Err(cur.error("expected a category")),
    }
}

impl FromStr for SemType {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        let t = parse_semtype(&mut cur)?;
        cur.finish()?;
        Ok(t)
    }
}

impl FromStr for Cat {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        let c = parse_cat(&mut cur)?;
        cur.finish()?;
        Ok(c)
    }
}

/// Parses `?0=nat; ?1=nat -> Prop` (the rendering produced by `Display`).
impl FromStr for Subst {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Subst::new();
        let mut cur = Cursor::new(s);
        if cur.at_end() {
            return Ok(out);
        }
        loop {
            cur.expect("?")?;
            let var = match cur.number() {
                Some(Ok(n)) if n <= u32::MAX as u64 => n as u32,
                _ => return Err(cur.error("expected type variable number")),
            };
            cur.expect("=")?;
            let ty = parse_semtype(&mut cur)?;
            if out.0.insert(var, ty).is_some() {
                return Err(cur.error(format!("?{var} bound twice")));
            }
            if !cur.eat(";") {
                break;
            }
        }
        cur.finish()?;
        Ok(out)
    }
}

/// Variables bound by `s` that also appear in its range (should be empty).
pub fn non_idempotent_vars(s: &Subst) -> BTreeSet<u32> {
    let mut range_vars = Vec::new();
    for t in s.0.values() {
        t.collect_tvars(&mut range_vars);
    }
    range_vars.into_iter().filter(|v| s.0.contains_key(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> SemType {
        SemType::nat()
    }

    fn cat(s: &str) -> Cat {
        s.parse().unwrap()
    }

    #[test]
    fn interp_clauses() {
        assert_eq!(interp(&Cat::S), SemType::Prop);
        assert_eq!(interp(&Cat::ADJ(nat())), SemType::arrow(nat(), SemType::Prop));
        assert_eq!(
            interp(&Cat::under(Cat::NP(nat()), Cat::S)),
            SemType::arrow(nat(), SemType::Prop)
        );
        assert_eq!(interp(&Cat::CN(nat())), SemType::Unit);
        assert_eq!(interp(&Cat::NP(SemType::TVar(3))), SemType::TVar(3));
    }

    #[test]
    fn unify_sem_examples() {
        let s = unify_sem(&SemType::TVar(0), &nat(), &Subst::new()).unwrap();
        assert_eq!(s.get(0), Some(&nat()));
        assert_eq!(s.len(), 1);

        let s = unify_sem(&SemType::Prop, &SemType::Prop, &Subst::new()).unwrap();
        assert!(s.is_empty());

        let a = SemType::arrow(SemType::TVar(0), SemType::TVar(0));
        let b = SemType::arrow(nat(), SemType::Prop);
        assert!(matches!(
            unify_sem(&a, &b, &Subst::new()),
            Err(UnifyError::TypeClash(..))
        ));
    }

    #[test]
    fn occurs_check_fires() {
        let a = SemType::TVar(0);
        let b = SemType::arrow(SemType::TVar(0), nat());
        assert!(matches!(
            unify_sem(&a, &b, &Subst::new()),
            Err(UnifyError::Occurs(0, _))
        ));
    }

    #[test]
    fn unify_cat_examples() {
        let s = unify_cat(&Cat::NP(SemType::TVar(0)), &Cat::NP(nat()), &Subst::new()).unwrap();
        assert_eq!(s.get(0), Some(&nat()));
        assert!(unify_cat(&Cat::S, &Cat::S, &Subst::new()).unwrap().is_empty());
        assert!(matches!(
            unify_cat(&Cat::NP(nat()), &Cat::ADJ(nat()), &Subst::new()),
            Err(UnifyError::CatClash(..))
        ));
    }

    #[test]
    fn bind_keeps_map_idempotent() {
        let mut s = Subst::new();
        s.bind(0, SemType::arrow(SemType::TVar(1), nat())).unwrap();
        s.bind(1, SemType::Prop).unwrap();
        assert!(non_idempotent_vars(&s).is_empty());
        assert_eq!(s.apply(&SemType::TVar(0)), SemType::arrow(SemType::Prop, nat()));
    }

    #[test]
    fn erase_examples() {
        assert_eq!(erase(&Cat::NP(nat())), ErasedCat::NP);
        assert_eq!(erase(&Cat::S), ErasedCat::S);
        let c = cat("NP[nat] \\ (S / ADJ[nat])");
        assert_eq!(erase(&c).to_string(), "NP \\ (S / ADJ)");
    }

    #[test]
    fn concrete_syntax() {
        let c = cat("(NP[nat] \\ S) / ADJ[nat]");
        assert_eq!(c, Cat::over(Cat::under(Cat::NP(nat()), Cat::S), Cat::ADJ(nat())));
        assert_eq!(c.to_string(), "(NP[nat] \\ S) / ADJ[nat]");
        // unparenthesized chains associate to the left
        assert_eq!(cat("NP[nat] \\ S / ADJ[nat]"), c);
        assert_eq!(
            cat("Quant[?0]"),
            cat("(S / (NP[?0] \\ S)) / CN[?0]")
        );
        let t: SemType = "(nat -> nat) -> Prop".parse().unwrap();
        assert_eq!(t.to_string(), "(nat -> nat) -> Prop");
        assert_eq!("?12".parse::<SemType>().unwrap(), SemType::TVar(12));
        assert!("NP[nat".parse::<Cat>().is_err());
        assert!("VP".parse::<Cat>().is_err());
    }

    #[test]
    fn subst_round_trips_through_text() {
        let s: Subst = "?0=nat; ?1=nat -> Prop".parse().unwrap();
        assert_eq!(s.to_string(), "?0=nat; ?1=nat -> Prop");
        assert!("".parse::<Subst>().unwrap().is_empty());
    }
}
