//! Line-oriented lexicon file format.
//!
//! ```text
//! const even : nat -> Prop
//! word "even"     ADJ[nat]                      := even
//! word "is" @is_adj NP[?0] \ (S / ADJ[?0])       := \n:?0. \p:?0 -> Prop. p n
//! coord "and" and
//! ```

use super::{CoordOp, Lexicon, LexiconError, Provenance};
use crate::categories::{parse_cat, parse_semtype};
use crate::syntax::{Cursor, SyntaxError};
use crate::terms::parse_term;

/// Strips a `#` comment that is not inside a quoted string.
fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if in_str => escaped = true,
            '"' => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

fn quoted(cur: &mut Cursor<'_>) -> Result<String, SyntaxError> {
    cur.skip_ws();
    let rest = cur.rest();
    if !rest.starts_with('"') {
        return Err(cur.error("expected a quoted word"));
    }
    let mut escaped = false;
    let mut end = None;
    for (i, c) in rest.char_indices().skip(1) {
        match c {
            _ if escaped => escaped = false,
            '\\' => escaped = true,
            '"' => {
                end = Some(i);
                break;
            }
            _ => {}
        }
    }
    let end = end.ok_or_else(|| cur.error("unterminated string"))?;
    let start = cur.pos();
    let s: String = serde_json::from_str(&rest[..=end])
        .map_err(|e| SyntaxError::new(start, format!("bad string literal: {e}")))?;
    cur.eat(&rest[..=end]);
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(SyntaxError::new(start, "words must be non-empty and contain no whitespace"));
    }
    Ok(s)
}

fn entry_id<'a>(cur: &mut Cursor<'a>) -> Result<Option<&'a str>, SyntaxError> {
    if !cur.eat("@") {
        return Ok(None);
    }
    let rest = cur.rest();
    let len = rest
        .find(|c: char| c.is_whitespace())
        .unwrap_or(rest.len());
    if len == 0 {
        return Err(cur.error("expected an entry id after `@`"));
    }
    let id = &rest[..len];
    cur.eat(id);
    Ok(Some(id))
}

enum Decl<'a> {
    Const(&'a str, crate::categories::SemType),
    Word {
        word: String,
        id: Option<&'a str>,
        cat: crate::categories::Cat,
        denotation: crate::terms::Term,
    },
    Coord(String, CoordOp),
}

fn parse_line(line: &str) -> Result<Option<Decl<'_>>, SyntaxError> {
    let mut cur = Cursor::new(line);
    if cur.at_end() {
        return Ok(None);
    }
    match cur.ident() {
        Some("const") => {
            let name = cur.ident().ok_or_else(|| cur.error("expected constant name"))?;
            cur.expect(":")?;
            let ty = parse_semtype(&mut cur)?;
            cur.finish()?;
            Ok(Some(Decl::Const(name, ty)))
        }
        Some("word") => {
            let word = quoted(&mut cur)?;
            let id = entry_id(&mut cur)?;
            let cat = parse_cat(&mut cur)?;
            cur.expect(":=")?;
            let offset = cur.pos();
            let denotation = parse_term(cur.rest())
                .map_err(|e| SyntaxError::new(offset + e.offset, e.message))?;
            Ok(Some(Decl::Word {
                word,
                id,
                cat,
                denotation,
            }))
        }
        Some("coord") => {
            let word = quoted(&mut cur)?;
            let op = match cur.ident() {
                Some("and") => CoordOp::And,
                Some("or") => CoordOp::Or,
                _ => return Err(cur.error("expected `and` or `or`")),
            };
            cur.finish()?;
            Ok(Some(Decl::Coord(word, op)))
        }
        _ => Err(SyntaxError::new(0, "expected `const`, `word` or `coord`")),
    }
}

pub(super) fn parse_into(lex: &mut Lexicon, source: &str, text: &str, errors: &mut Vec<LexiconError>) {
    for (i, raw) in text.lines().enumerate() {
        let at = Provenance {
            source: source.to_string(),
            line: i + 1,
        };
        let line = strip_comment(raw);
        let result = match parse_line(line) {
            Ok(None) => Ok(()),
            Ok(Some(Decl::Const(name, ty))) => lex.declare_const(name, ty, at),
            Ok(Some(Decl::Word {
                word,
                id,
                cat,
                denotation,
            })) => lex.add_entry(&word, id, cat, denotation, at).map(|_| ()),
            Ok(Some(Decl::Coord(word, op))) => {
                lex.add_coord(&word, op, at);
                Ok(())
            }
            Err(e) => Err(LexiconError::Syntax {
                at,
                column: e.offset + 1,
                message: e.message,
            }),
        };
        if let Err(e) = result {
            errors.push(e);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_outside_strings_are_stripped() {
        assert_eq!(strip_comment("word \"#\" S := true # note"), "word \"#\" S := true ");
        assert_eq!(strip_comment("# whole line"), "");
    }

    #[test]
    fn syntax_errors_carry_location() {
        let mut lex = Lexicon::new();
        let mut errors = Vec::new();
        parse_into(&mut lex, "x.lex", "\n\nword \"even\" ADJ[nat] = even\n", &mut errors);
        assert_eq!(errors.len(), 1);
        match &errors[0] {
            LexiconError::Syntax { at, column, .. } => {
                assert_eq!(at.line, 3);
                assert_eq!(*column, 22);
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn unknown_keyword_is_a_syntax_error() {
        let mut lex = Lexicon::new();
        let mut errors = Vec::new();
        parse_into(&mut lex, "x.lex", "lemma foo\n", &mut errors);
        assert!(matches!(errors[0], LexiconError::Syntax { .. }));
    }
}
