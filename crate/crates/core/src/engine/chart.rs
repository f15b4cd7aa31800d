use std::collections::HashSet;

use super::combine::{combine, leaf_entries, shift_closure, Entry, Item};
use super::replay::finalize;
use super::{Parse, ParseError, SearchLimits};
use crate::categories::{unify_cat, Cat, Subst};
use crate::lexicon::Lexicon;
use crate::terms::{alpha_key, Term};

/// Counters describing one chart run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ChartStats {
    /// Items kept across all cells.
    pub items: usize,
    /// Whether some cell dropped items because of `max_span_items`.
    pub truncated: bool,
}

/// Sorts by derivation order and keeps the first item per
/// (category, denotation up to alpha), at most `cap` of them.
fn prune(mut items: Vec<Item>, cap: usize, truncated: &mut bool) -> Vec<Item> {
    items.sort_by(|a, b| a.deriv.order(&b.deriv));
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for it in items {
        if seen.insert((it.cat.clone(), alpha_key(&it.term))) {
            if out.len() == cap {
                *truncated = true;
                break;
            }
            out.push(it);
        }
    }
    out
}

pub(crate) fn root_candidates(items: &[Item], goal: &Cat) -> Vec<(Item, Term)> {
    items
        .iter()
        .filter_map(|it| {
            let s = unify_cat(&it.cat, goal, &Subst::new()).ok()?;
            let term = it.term.apply_subst(&s);
            term.tvars().is_empty().then(|| (it.clone(), term))
        })
        .collect()
}

pub(crate) fn check_input(words: &[String], goal: &Cat, lex: &Lexicon) -> Result<(), ParseError> {
    if words.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    if !goal.is_ground() {
        return Err(ParseError::NonGroundGoal(goal.clone()));
    }
    if let Some((position, w)) = words.iter().enumerate().find(|(_, w)| !lex.knows(w)) {
        return Err(ParseError::UnknownWord {
            word: w.clone(),
            position,
        });
    }
    Ok(())
}

pub fn parse_with_stats(
    words: &[String],
    goal: &Cat,
    lex: &Lexicon,
    limits: &SearchLimits,
) -> Result<(Vec<Parse>, ChartStats), ParseError> {
    limits.validate()?;
    check_input(words, goal, lex)?;
    let n = words.len();
    let mut stats = ChartStats::default();
    // cells[i][len - 1] covers words[i..i + len]
    let mut cells: Vec<Vec<Vec<Entry<'_>>>> = vec![Vec::with_capacity(n); n];
    for (i, w) in words.iter().enumerate() {
        let leaf = leaf_entries(lex, w, i).expect("checked above");
        let (slots, items): (Vec<_>, Vec<_>) = leaf.into_iter().partition(|e| matches!(e, Entry::Slot(..)));
        let items = items
            .into_iter()
            .map(|e| match e {
                Entry::Item(it) => it,
                Entry::Slot(..) => unreachable!(),
            })
            .collect();
        let mut cell: Vec<Entry<'_>> = prune(items, limits.max_span_items, &mut stats.truncated)
            .into_iter()
            .map(Entry::Item)
            .collect();
        cell.extend(slots);
        stats.items += cell.len();
        cells[i].push(cell);
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let mut found = Vec::new();
            for split in 1..len {
                for l in &cells[i][split - 1] {
                    for r in &cells[i + split][len - split - 1] {
                        combine(l, r, limits.max_lift_level, &mut found);
                    }
                }
            }
            shift_closure(&mut found);
            let kept = prune(found, limits.max_span_items, &mut stats.truncated);
            stats.items += kept.len();
            cells[i].push(kept.into_iter().map(Entry::Item).collect());
        }
    }

    let top: Vec<Item> = cells[0][n - 1]
        .iter()
        .filter_map(|e| match e {
            Entry::Item(it) => Some(it.clone()),
            Entry::Slot(..) => None,
        })
        .collect();
    let mut roots = root_candidates(&top, goal);
    roots.sort_by(|a, b| a.0.deriv.order(&b.0.deriv));
    let mut seen = HashSet::new();
    let mut parses = Vec::new();
    for (it, _) in roots {
        if parses.len() == limits.max_parses {
            break;
        }
        let Ok((derivation, term)) = finalize(&it.deriv, lex, Some(goal)) else {
            continue;
        };
        if seen.insert(alpha_key(&term)) {
            parses.push(Parse { derivation, term });
        }
    }
    if parses.is_empty() {
        return Err(if stats.truncated {
            ParseError::ResourceExceeded
        } else {
            ParseError::NoParse
        });
    }
    Ok((parses, stats))
}
