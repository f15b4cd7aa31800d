//! The `ccg-cert/1` text format. See `docs/certificate-format.md`.

use std::sync::Arc;

use thiserror::Error;

use super::{Certificate, EntryDigest};
use crate::categories::{Cat, Subst};
use crate::engine::{Derivation, Rule, Span, Step};
use crate::terms::Term;

pub const HEADER: &str = "ccg-cert/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct CertParseError {
    pub line: usize,
    pub message: String,
}

fn json(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn render_node(d: &Derivation, depth: usize, out: &mut String) {
    out.push_str(&"  ".repeat(depth));
    out.push_str(&format!(
        "({} {} {} {}",
        d.rule(),
        d.span.start,
        d.span.end,
        json(&d.cat.to_string())
    ));
    match &d.step {
        Step::Lex { entry, inst } => out.push_str(&format!(" {} {})", json(entry), json(&inst.to_string()))),
        Step::Coord { schema, conj } => {
            out.push_str(&format!(" {} {})", json(schema), json(&conj.to_string())))
        }
        Step::Binary { left, right, .. } => {
            out.push('\n');
            render_node(left, depth + 1, out);
            out.push('\n');
            render_node(right, depth + 1, out);
            out.push(')');
        }
        Step::Shift(c) => {
            out.push('\n');
            render_node(c, depth + 1, out);
            out.push(')');
        }
    }
}

pub fn render_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    render_node(d, 0, &mut out);
    out
}

pub fn render(c: &Certificate) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("sentence: {}\n", json(&c.sentence)));
    out.push_str(&format!(
        "tokens: {}\n",
        serde_json::to_string(&c.tokens).expect("strings serialize")
    ));
    out.push_str(&format!("category: {}\n", json(&c.category.to_string())));
    out.push_str(&format!("denotation: {}\n", json(&c.denotation.to_string())));
    out.push_str(&format!("lexicon-digest: {}\n", c.lexicon_digest));
    for e in &c.entries {
        out.push_str(&format!("entry: {} {} {}\n", json(&e.id), json(&e.word), e.digest));
    }
    out.push_str("derivation:\n");
    out.push_str(&render_derivation(&c.derivation));
    out.push_str("\nend\n");
    out
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Str(String),
    Atom(String),
}

struct Lexer<'a> {
    lines: &'a [(usize, &'a str)],
    toks: Vec<(usize, Tok)>,
}

impl<'a> Lexer<'a> {
    fn run(lines: &'a [(usize, &'a str)]) -> Result<Vec<(usize, Tok)>, CertParseError> {
        let mut lx = Lexer { lines, toks: vec![] };
        for &(n, line) in lx.lines {
            let mut rest = line;
            loop {
                rest = rest.trim_start();
                let Some(c) = rest.chars().next() else { break };
                match c {
                    '(' => {
                        lx.toks.push((n, Tok::Open));
                        rest = &rest[1..];
                    }
                    ')' => {
                        lx.toks.push((n, Tok::Close));
                        rest = &rest[1..];
                    }
                    '"' => {
                        let (s, len) = json_prefix(rest).map_err(|m| err(n, m))?;
                        lx.toks.push((n, Tok::Str(s)));
                        rest = &rest[len..];
                    }
                    _ => {
                        let len = rest
                            .find(|c: char| c.is_whitespace() || c == '(' || c == ')' || c == '"')
                            .unwrap_or(rest.len());
                        lx.toks.push((n, Tok::Atom(rest[..len].to_string())));
                        rest = &rest[len..];
                    }
                }
            }
        }
        Ok(lx.toks)
    }
}

fn err(line: usize, message: impl Into<String>) -> CertParseError {
    CertParseError {
        line,
        message: message.into(),
    }
}

/// Parses a JSON string literal at the start of `s`, returning it and its
/// byte length.
fn json_prefix(s: &str) -> Result<(String, usize), String> {
    let mut escaped = false;
    for (i, c) in s.char_indices().skip(1) {
        match c {
            _ if escaped => escaped = false,
            '\\' => escaped = true,
            '"' => {
                let v: String = serde_json::from_str(&s[..=i]).map_err(|e| format!("bad string: {e}"))?;
                return Ok((v, i + 1));
            }
            _ => {}
        }
    }
    Err("unterminated string".into())
}

/// Parses a field value that must be exactly one JSON string.
fn json_field(line: usize, v: &str) -> Result<String, CertParseError> {
    let (s, len) = json_prefix(v).map_err(|m| err(line, m))?;
    if len != v.len() {
        return Err(err(line, "trailing text after string"));
    }
    Ok(s)
}

struct NodeParser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    last_line: usize,
}

impl NodeParser {
    fn line(&self) -> usize {
        self.toks.get(self.pos).map_or(self.last_line, |t| t.0)
    }

    fn next(&mut self) -> Result<Tok, CertParseError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| err(self.last_line, "unexpected end of derivation"))?;
        self.pos += 1;
        Ok(t.1)
    }

    fn expect_close(&mut self) -> Result<(), CertParseError> {
        let line = self.line();
        match self.next()? {
            Tok::Close => Ok(()),
            t => Err(err(line, format!("expected `)`, found {t:?}"))),
        }
    }

    fn string(&mut self, what: &str) -> Result<String, CertParseError> {
        let line = self.line();
        match self.next()? {
            Tok::Str(s) => Ok(s),
            t => Err(err(line, format!("expected {what} string, found {t:?}"))),
        }
    }

    fn number(&mut self) -> Result<usize, CertParseError> {
        let line = self.line();
        match self.next()? {
            Tok::Atom(a) => a.parse().map_err(|_| err(line, format!("expected a position, found `{a}`"))),
            t => Err(err(line, format!("expected a position, found {t:?}"))),
        }
    }

    fn cat(&mut self) -> Result<Cat, CertParseError> {
        let line = self.line();
        let s = self.string("category")?;
        s.parse().map_err(|e| err(line, format!("category: {e}")))
    }

    fn node(&mut self) -> Result<Derivation, CertParseError> {
        let line = self.line();
        if self.next()? != Tok::Open {
            return Err(err(line, "expected `(`"));
        }
        let line = self.line();
        let rule = match self.next()? {
            Tok::Atom(a) => Rule::from_name(&a).ok_or_else(|| err(line, format!("unknown rule `{a}`")))?,
            t => return Err(err(line, format!("expected a rule name, found {t:?}"))),
        };
        let start = self.number()?;
        let end = self.number()?;
        let span = Span::new(start, end);
        let cat = self.cat()?;
        let step = match rule {
            Rule::Lex => {
                let entry = self.string("entry id")?;
                let line = self.line();
                let inst: Subst = self
                    .string("instantiation")?
                    .parse()
                    .map_err(|e| err(line, format!("instantiation: {e}")))?;
                Step::Lex { entry, inst }
            }
            Rule::Coord => {
                let schema = self.string("schema id")?;
                let conj = self.cat()?;
                Step::Coord { schema, conj }
            }
            Rule::Shift => Step::Shift(Arc::new(self.node()?)),
            _ => {
                let left = Arc::new(self.node()?);
                let right = Arc::new(self.node()?);
                Step::Binary { rule, left, right }
            }
        };
        self.expect_close()?;
        Ok(Derivation { step, span, cat })
    }
}

pub fn parse_derivation_lines(lines: &[(usize, &str)]) -> Result<Derivation, CertParseError> {
    let toks = Lexer::run(lines)?;
    let last_line = lines.last().map_or(0, |l| l.0);
    let mut p = NodeParser { toks, pos: 0, last_line };
    let d = p.node()?;
    if p.pos != p.toks.len() {
        return Err(err(p.line(), "trailing tokens after derivation"));
    }
    Ok(d)
}

fn is_hex_digest(s: &str) -> bool {
    s.len() == 64 && s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
}

pub fn parse(text: &str) -> Result<Certificate, CertParseError> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    let mut it = lines.iter().copied().peekable();
    let mut next_line = |what: &str| it.next().ok_or_else(|| err(lines.len(), format!("missing {what}")));

    let (n, h) = next_line("header")?;
    if h != HEADER {
        return Err(err(n, format!("expected header `{HEADER}`")));
    }
    let mut field = |key: &str| -> Result<(usize, &str), CertParseError> {
        let (n, l) = next_line(key)?;
        let v = l
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix(": "))
            .ok_or_else(|| err(n, format!("expected field `{key}`")))?;
        Ok((n, v))
    };

    let (n, v) = field("sentence")?;
    let sentence = json_field(n, v)?;
    let (n, v) = field("tokens")?;
    let tokens: Vec<String> = serde_json::from_str(v).map_err(|e| err(n, format!("tokens: {e}")))?;
    let (n, v) = field("category")?;
    let category: Cat = json_field(n, v)?
        .parse()
        .map_err(|e| err(n, format!("category: {e}")))?;
    let (n, v) = field("denotation")?;
    let denotation: Term = json_field(n, v)?
        .parse()
        .map_err(|e| err(n, format!("denotation: {e}")))?;
    let (n, v) = field("lexicon-digest")?;
    if !is_hex_digest(v) {
        return Err(err(n, "expected 64 lowercase hex digits"));
    }
    let lexicon_digest = v.to_string();

    let mut entries = Vec::new();
    loop {
        let (n, l) = next_line("derivation")?;
        if l == "derivation:" {
            break;
        }
        let v = l
            .strip_prefix("entry: ")
            .ok_or_else(|| err(n, "expected `entry:` or `derivation:`"))?;
        let (id, len) = json_prefix(v).map_err(|m| err(n, m))?;
        let rest = v[len..].strip_prefix(' ').ok_or_else(|| err(n, "expected word"))?;
        let (word, len) = json_prefix(rest).map_err(|m| err(n, m))?;
        let digest = rest[len..].strip_prefix(' ').ok_or_else(|| err(n, "expected digest"))?;
        if !is_hex_digest(digest) {
            return Err(err(n, "expected 64 lowercase hex digits"));
        }
        entries.push(EntryDigest {
            id,
            word,
            digest: digest.to_string(),
        });
    }

    let mut body = Vec::new();
    loop {
        let (n, l) = next_line("`end`")?;
        if l == "end" {
            break;
        }
        body.push((n, l));
    }
    if let Some((n, _)) = it.find(|(_, l)| !l.trim().is_empty()) {
        return Err(err(n, "text after `end`"));
    }
    let derivation = parse_derivation_lines(&body)?;
    Ok(Certificate {
        sentence,
        tokens,
        category,
        denotation,
        lexicon_digest,
        entries,
        derivation,
    })
}
