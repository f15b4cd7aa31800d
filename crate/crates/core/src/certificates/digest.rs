//! Canonical entry renderings and their SHA-256 digests.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use crate::categories::Cat;
use crate::lexicon::{CoordSchema, LexEntry};
use crate::terms::{alpha_key, Term};

fn canonical_vars(cat: &Cat, term: &Term) -> (Cat, Term) {
    let mut map = BTreeMap::new();
    for v in cat.tvars().into_iter().chain(term.tvars()) {
        let next = map.len() as u32;
        map.entry(v).or_insert(next);
    }
    let f = |v: u32| map[&v];
    (cat.map_tvars(&f), term.map_types(&|t| t.map_tvars(&f)))
}

fn json(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// `key=value` lines in key order. Type variables are renumbered by first
/// occurrence and binders replaced by de Bruijn indices, so the rendering
/// ignores incidental formatting of the lexicon file.
pub fn render_entry(e: &LexEntry) -> String {
    let (cat, term) = canonical_vars(&e.cat, &e.denotation);
    format!(
        "cat={}\ndenotation={}\nid={}\nword={}\n",
        json(&cat.to_string()),
        json(&alpha_key(&term)),
        json(&e.id),
        json(&e.word)
    )
}

pub fn render_coord(c: &CoordSchema) -> String {
    format!(
        "id={}\nop={}\nword={}\n",
        json(&c.id()),
        json(c.op.name()),
        json(&c.word)
    )
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn entry_digest(e: &LexEntry) -> String {
    sha256_hex(&render_entry(e))
}

pub fn coord_digest(c: &CoordSchema) -> String {
    sha256_hex(&render_coord(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Lexicon;

    #[test]
    fn insensitive_to_binder_names_and_layout() {
        let a = Lexicon::from_sources(&[(
            "a",
            "const even : nat -> Prop\nword \"even\" @e ADJ[nat] := \\n:nat. even n\n",
        )])
        .unwrap();
        let b = Lexicon::from_sources(&[(
            "b",
            "const even : nat -> Prop\n\n\nword   \"even\"  @e   ADJ[nat]   :=  \\m : nat .  even m  # note\n",
        )])
        .unwrap();
        assert_eq!(
            entry_digest(&a.entry("e").unwrap()),
            entry_digest(&b.entry("e").unwrap())
        );
    }

    #[test]
    fn sensitive_to_denotation() {
        let lex = Lexicon::core();
        let mut e = lex.entry("monotone_lex").unwrap().into_owned();
        let before = entry_digest(&e);
        e.denotation = crate::terms::parse_term("\\f:nat -> nat. true").unwrap();
        assert_ne!(before, entry_digest(&e));
    }

    #[test]
    fn known_digest() {
        // independent: `printf 'id="coord/and"\nop="and"\nword="and"\n' | sha256sum`
        let lex = Lexicon::core();
        let c = lex.coord("coord/and").unwrap();
        assert_eq!(render_coord(c), "id=\"coord/and\"\nop=\"and\"\nword=\"and\"\n");
        assert_eq!(
            coord_digest(c),
            "46f2e8ea29c0afd5d341b18db9f750df521ce82991ec64be7c8cdbb4ac03f92b"
        );
    }
}
