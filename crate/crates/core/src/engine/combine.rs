//! Items and the one-step combination shared by the chart parser and the
//! brute-force enumerator.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::derivation::{Derivation, Rule};
use super::rules::apply_rule;
use crate::categories::{Cat, Subst};
use crate::lexicon::{instantiate_coord, lift_depth, CoordSchema, LexEntry};
use crate::terms::Term;

/// A partial analysis: category and denotation with type variables
/// numbered `0..n` in order of first occurrence.
#[derive(Debug, Clone)]
pub(crate) struct Item {
    pub cat: Cat,
    pub term: Term,
    pub deriv: Arc<Derivation>,
}

/// A cell entry: an item, or a coordinator awaiting its conjunct category.
#[derive(Debug, Clone)]
pub(crate) enum Entry<'l> {
    Item(Item),
    Slot(&'l CoordSchema, usize),
}

fn renumber(cat: &Cat, term: &Term, map: &BTreeMap<u32, u32>) -> (Cat, Term) {
    let f = |v: u32| map.get(&v).copied().unwrap_or(v);
    (cat.map_tvars(&f), term.map_types(&|t| t.map_tvars(&f)))
}

pub(crate) fn canonical(cat: &Cat, term: &Term) -> (Cat, Term) {
    let mut map = BTreeMap::new();
    for v in cat.tvars().into_iter().chain(term.tvars()) {
        let next = map.len() as u32;
        map.entry(v).or_insert(next);
    }
    renumber(cat, term, &map)
}

fn max_var(cat: &Cat, term: &Term) -> Option<u32> {
    cat.tvars().into_iter().chain(term.tvars()).max()
}

impl Item {
    pub fn new(cat: &Cat, term: &Term, deriv: Derivation) -> Item {
        let (cat, term) = canonical(cat, term);
        let deriv = Arc::new(Derivation { cat: cat.clone(), ..deriv });
        Item { cat, term, deriv }
    }

    pub fn lexical(e: &LexEntry, position: usize) -> Item {
        Item::new(&e.cat, &e.denotation, Derivation::lex(&e.id, position, e.cat.clone()))
    }

    fn shifted(&self, offset: u32) -> (Cat, Term) {
        let f = |v: u32| v + offset;
        (self.cat.map_tvars(&f), self.term.map_types(&|t| t.map_tvars(&f)))
    }
}

fn coord_item(schema: &CoordSchema, position: usize, conj: &Cat, max_lift: usize) -> Option<Item> {
    let depth = lift_depth(conj).filter(|&d| d <= max_lift)?;
    let e = instantiate_coord(schema, conj, depth).ok()?;
    Some(Item::new(
        &e.cat,
        &e.denotation,
        Derivation::coord(&schema.id(), position, conj.clone()),
    ))
}

fn binary(rule: Rule, l: &Item, r: &Item, out: &mut Vec<Item>) {
    let offset = max_var(&l.cat, &l.term).map_or(0, |m| m + 1);
    let (rc, rt) = r.shifted(offset);
    if let Ok(a) = apply_rule(rule, &[(&l.cat, &l.term), (&rc, &rt)], &Subst::new()) {
        let d = Derivation::binary_arc(rule, l.deriv.clone(), r.deriv.clone(), a.cat.clone());
        out.push(Item::new(&a.cat, &a.term, d));
    }
}

/// Combines a left and a right neighbour by every applicable binary rule.
/// A coordinator's conjunct category is read off its neighbour:
/// as left child of `RApp`/`RComp` it conjoins the right item's category
/// (or that category's result), as right child it conjoins the argument
/// the left item expects of it.
pub(crate) fn combine(l: &Entry<'_>, r: &Entry<'_>, max_lift: usize, out: &mut Vec<Item>) {
    match (l, r) {
        (Entry::Item(l), Entry::Item(r)) => {
            for rule in Rule::BINARY {
                binary(rule, l, r, out);
            }
        }
        (Entry::Slot(schema, pos), Entry::Item(r)) => {
            if let Some(c) = coord_item(schema, *pos, &r.cat, max_lift) {
                binary(Rule::RApp, &c, r, out);
            }
            if let Cat::Over(x, _) = &r.cat {
                if let Some(c) = coord_item(schema, *pos, x, max_lift) {
                    binary(Rule::RComp, &c, r, out);
                }
            }
        }
        (Entry::Item(l), Entry::Slot(schema, pos)) => {
            let Cat::Over(_, arg) = &l.cat else { return };
            let conj = match arg.as_ref() {
                Cat::Under(x, _) => Some((x, Rule::RComp)),
                Cat::Over(inner, _) => match inner.as_ref() {
                    Cat::Under(x, _) => Some((x, Rule::RApp)),
                    _ => None,
                },
                _ => None,
            };
            if let Some((x, rule)) = conj {
                if let Some(c) = coord_item(schema, *pos, x, max_lift) {
                    binary(rule, l, &c, out);
                }
            }
        }
        (Entry::Slot(..), Entry::Slot(..)) => {}
    }
}

/// Adds the `Shift` result of every item whose category allows it.
pub(crate) fn shift_closure(items: &mut Vec<Item>) {
    let mut extra = Vec::new();
    for it in items.iter() {
        if let Ok(a) = apply_rule(Rule::Shift, &[(&it.cat, &it.term)], &Subst::new()) {
            let d = Derivation::shift_arc(it.deriv.clone(), a.cat.clone());
            extra.push(Item::new(&a.cat, &a.term, d));
        }
    }
    items.extend(extra);
}

/// Lexical items and coordinator slots for one token, or `None` if the
/// word is unknown.
pub(crate) fn leaf_entries<'l>(
    lex: &'l crate::lexicon::Lexicon,
    word: &str,
    position: usize,
) -> Option<Vec<Entry<'l>>> {
    if !lex.knows(word) {
        return None;
    }
    let mut items: Vec<Item> = lex
        .entries_for(word)
        .iter()
        .map(|e| Item::lexical(e, position))
        .collect();
    shift_closure(&mut items);
    let mut out: Vec<Entry<'l>> = items.into_iter().map(Entry::Item).collect();
    out.extend(lex.coords_for(word).into_iter().map(|c| Entry::Slot(c, position)));
    Some(out)
}
