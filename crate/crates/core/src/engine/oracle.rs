//! Exhaustive enumeration without sharing, used as a reference for the
//! chart parser.

use super::chart::{check_input, root_candidates};
use super::combine::{combine, leaf_entries, shift_closure, Entry, Item};
use super::replay::finalize;
use super::{Parse, ParseError, SearchLimits};
use crate::categories::Cat;
use crate::lexicon::Lexicon;

struct Enumerator<'a> {
    words: &'a [String],
    lex: &'a Lexicon,
    depth_cap: usize,
    max_lift: usize,
}

impl<'a> Enumerator<'a> {
    /// Every analysis of `words[i..j]`, recomputed from scratch on each call.
    fn span(&self, i: usize, j: usize) -> Vec<Entry<'a>> {
        if j == i + 1 {
            return leaf_entries(self.lex, &self.words[i], i).unwrap_or_default();
        }
        let mut found = Vec::new();
        for k in i + 1..j {
            let left = self.span(i, k);
            let right = self.span(k, j);
            for l in &left {
                for r in &right {
                    combine(l, r, self.max_lift, &mut found);
                }
            }
        }
        shift_closure(&mut found);
        found
            .into_iter()
            .filter(|it| it.deriv.depth() <= self.depth_cap)
            .map(Entry::Item)
            .collect()
    }
}

/// All derivations of `words` with category `goal` and depth at most
/// `depth_cap`, in derivation order, without deduplication.
pub fn enumerate_parses_bruteforce(
    words: &[String],
    goal: &Cat,
    lex: &Lexicon,
    depth_cap: usize,
) -> Result<Vec<Parse>, ParseError> {
    enumerate_with_lift(words, goal, lex, depth_cap, SearchLimits::default().max_lift_level)
}

pub fn enumerate_with_lift(
    words: &[String],
    goal: &Cat,
    lex: &Lexicon,
    depth_cap: usize,
    max_lift: usize,
) -> Result<Vec<Parse>, ParseError> {
    check_input(words, goal, lex)?;
    let e = Enumerator {
        words,
        lex,
        depth_cap,
        max_lift,
    };
    let top: Vec<Item> = e
        .span(0, words.len())
        .into_iter()
        .filter_map(|x| match x {
            Entry::Item(it) => Some(it),
            Entry::Slot(..) => None,
        })
        .collect();
    let mut out: Vec<Parse> = root_candidates(&top, goal)
        .into_iter()
        .filter_map(|(it, _)| finalize(&it.deriv, lex, Some(goal)).ok())
        .map(|(derivation, term)| Parse { derivation, term })
        .collect();
    out.sort_by(|a, b| a.derivation.order(&b.derivation));
    Ok(out)
}
