use std::collections::BTreeSet;
use std::fmt;

use super::{LexEntry, Lexicon};
use crate::categories::{erase, unify_cat, Cat, ErasedCat, Subst};

/// Two entries for one word that a parse could not tell apart by their
/// index-erased category and indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AmbiguityWarning {
    pub word: String,
    pub erased: ErasedCat,
    pub first: String,
    pub second: String,
}

impl fmt::Display for AmbiguityWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ambiguous word {:?}: entries `{}` and `{}` share category {} without distinct indices",
            self.word, self.first, self.second, self.erased
        )
    }
}

fn rename_apart(c: &Cat, offset: u32) -> Cat {
    c.map_tvars(&|v| v + offset)
}

/// Entries clash when their erased categories agree and their indices can
/// be made equal (identical ground indices, or overlapping schemas).
fn clash(a: &LexEntry, b: &LexEntry) -> bool {
    if a.word != b.word || erase(&a.cat) != erase(&b.cat) {
        return false;
    }
    let offset = a.cat.max_tvar().map_or(0, |m| m + 1);
    unify_cat(&a.cat, &rename_apart(&b.cat, offset), &Subst::new()).is_ok()
}

fn warning(a: &LexEntry, b: &LexEntry) -> AmbiguityWarning {
    let (first, second) = if a.id <= b.id { (a, b) } else { (b, a) };
    AmbiguityWarning {
        word: a.word.clone(),
        erased: erase(&a.cat),
        first: first.id.clone(),
        second: second.id.clone(),
    }
}

/// One warning per clashing pair of entries, plus one per duplicated
/// coordinator word. Sorted, so independent of declaration order.
pub fn lint_ambiguity(lex: &Lexicon) -> Vec<AmbiguityWarning> {
    let all: Vec<&LexEntry> = lex.entries().iter().collect();
    let mut out = BTreeSet::new();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            if clash(a, b) {
                out.insert(warning(a, b));
            }
        }
    }
    let coords = lex.coord_schemas();
    for (i, a) in coords.iter().enumerate() {
        for b in &coords[i + 1..] {
            if a.word == b.word {
                out.insert(AmbiguityWarning {
                    word: a.word.clone(),
                    erased: ErasedCat::S,
                    first: format!("{}#{}", a.id(), a.provenance),
                    second: format!("{}#{}", b.id(), b.provenance),
                });
            }
        }
    }
    out.into_iter().collect()
}

/// Warnings that involve at least one of the given entries.
pub fn lint_entries<'a>(lex: &Lexicon, ids: impl IntoIterator<Item = &'a str>) -> Vec<AmbiguityWarning> {
    let ids: BTreeSet<&str> = ids.into_iter().collect();
    let mut out = BTreeSet::new();
    for id in &ids {
        let Some(entry) = lex.entry(id) else { continue };
        for other in lex.entries_for(&entry.word) {
            if other.id != entry.id && clash(&entry, &other) {
                out.insert(warning(&entry, &other));
            }
        }
        if let Some(stripped) = id.strip_prefix("coord/") {
            let dups = lex.coords_for(stripped);
            if dups.len() > 1 {
                out.insert(AmbiguityWarning {
                    word: stripped.to_string(),
                    erased: ErasedCat::S,
                    first: format!("{}#{}", dups[0].id(), dups[0].provenance),
                    second: format!("{}#{}", dups[1].id(), dups[1].provenance),
                });
            }
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::CORE_LEXICON;

    #[test]
    fn core_is_clean() {
        assert!(lint_ambiguity(&Lexicon::core()).is_empty());
    }

    #[test]
    fn duplicate_even_warns_once() {
        let extra = "word \"even\" ADJ[nat] := \\n:nat. true\n";
        let lex = Lexicon::from_sources(&[("<core>", CORE_LEXICON), ("x", extra)]).unwrap();
        let w = lint_ambiguity(&lex);
        assert_eq!(w.len(), 1, "{w:?}");
        assert_eq!(w[0].word, "even");
    }

    #[test]
    fn distinct_indices_do_not_warn() {
        let src = "const even : nat -> Prop\nconst ieven : int -> Prop\n\
                   word \"even\" ADJ[nat] := even\nword \"even\" ADJ[int] := ieven\n";
        let lex = Lexicon::from_sources(&[("x", src)]).unwrap();
        assert!(lint_ambiguity(&lex).is_empty());
    }

    #[test]
    fn schema_overlapping_ground_entry_warns() {
        let src = "const even : nat -> Prop\n\
                   word \"it\" NP[?0] \\ S := \\x:?0. true\nword \"it\" NP[nat] \\ S := even\n";
        let lex = Lexicon::from_sources(&[("x", src)]).unwrap();
        assert_eq!(lint_ambiguity(&lex).len(), 1);
    }

    #[test]
    fn order_insensitive() {
        let a = "word \"even\" ADJ[nat] := \\n:nat. true\n";
        let l1 = Lexicon::from_sources(&[("<core>", CORE_LEXICON), ("a", a)]).unwrap();
        let l2 = Lexicon::from_sources(&[("a", a), ("<core>", CORE_LEXICON)]).unwrap();
        let words = |l: &Lexicon| lint_ambiguity(l).into_iter().map(|w| (w.word, w.erased)).collect::<Vec<_>>();
        assert_eq!(words(&l1), words(&l2));
    }
}
