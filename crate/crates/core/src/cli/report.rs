use std::io::{self, Write};

use serde_json::{json, Value as Json};

use super::{Format, Target};
use crate::certificates::{render_derivation, Violation};
use crate::engine::{Parse, ParseError};
use crate::lexicon::{AmbiguityWarning, Lexicon};
use crate::targets::{eval_prop, retarget, LtlTarget};

pub(super) enum Outcome {
    Parsed(Vec<Parse>),
    Failed(ParseError),
}

pub(super) struct SentenceReport {
    pub sentence: String,
    pub tokens: Vec<String>,
    pub outcome: Outcome,
    /// Per parse: the retargeted value, absent for the `prop` target.
    targets: Vec<Option<Result<TargetValue, String>>>,
}

enum TargetValue {
    Truth(bool),
    Ltl(String),
}

impl TargetValue {
    fn text(&self) -> String {
        match self {
            TargetValue::Truth(b) => b.to_string(),
            TargetValue::Ltl(s) => s.clone(),
        }
    }

    fn json(&self) -> Json {
        match self {
            TargetValue::Truth(b) => json!({"kind": "model", "value": b}),
            TargetValue::Ltl(s) => json!({"kind": "ltl", "value": s}),
        }
    }
}

fn error_kind(e: &ParseError) -> &'static str {
    match e {
        ParseError::EmptyInput => "empty-input",
        ParseError::UnknownWord { .. } => "unknown-word",
        ParseError::NoParse => "no-parse",
        ParseError::ResourceExceeded => "resource-exceeded",
        ParseError::NonGroundGoal(_) | ParseError::InvalidLimits(_) => "config",
    }
}

impl SentenceReport {
    pub fn new(sentence: &str, tokens: Vec<String>, outcome: Result<Vec<Parse>, ParseError>, target: &Target) -> Self {
        let outcome = match outcome {
            Ok(p) => Outcome::Parsed(p),
            Err(e) => Outcome::Failed(e),
        };
        let targets = match &outcome {
            Outcome::Failed(_) => vec![],
            Outcome::Parsed(parses) => parses
                .iter()
                .map(|p| match target {
                    Target::Prop => None,
                    Target::Model(m) => Some(eval_prop(&p.term, m).map(TargetValue::Truth).map_err(|e| e.to_string())),
                    Target::Ltl => Some(
                        retarget(&p.term, &LtlTarget)
                            .map(|f| TargetValue::Ltl(f.to_string()))
                            .map_err(|e| e.to_string()),
                    ),
                })
                .collect(),
        };
        SentenceReport {
            sentence: sentence.to_string(),
            tokens,
            outcome,
            targets,
        }
    }

    pub fn target_failed(&self) -> bool {
        self.targets.iter().any(|t| matches!(t, Some(Err(_))))
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Text => self.write_text(out),
            Format::Structured => writeln!(out, "{}", self.json()),
        }
    }

    fn write_text(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{}", self.sentence)?;
        match &self.outcome {
            Outcome::Failed(e) => writeln!(out, "  error: {e}"),
            Outcome::Parsed(parses) => {
                for (i, (p, t)) in parses.iter().zip(&self.targets).enumerate() {
                    write!(out, "  {}. {} : {}", i + 1, p.cat(), p.term)?;
                    match t {
                        None => writeln!(out)?,
                        Some(Ok(v)) => writeln!(out, "  ==> {}", v.text())?,
                        Some(Err(e)) => writeln!(out, "  ==> error: {e}")?,
                    }
                }
                Ok(())
            }
        }
    }

    fn json(&self) -> Json {
        let mut doc = json!({
            "sentence": self.sentence,
            "tokens": self.tokens,
        });
        match &self.outcome {
            Outcome::Failed(e) => {
                doc["status"] = json!("error");
                doc["error"] = json!({"kind": error_kind(e), "message": e.to_string()});
                if let ParseError::UnknownWord { word, position } = e {
                    doc["error"]["word"] = json!(word);
                    doc["error"]["position"] = json!(position);
                }
                doc["parses"] = json!([]);
            }
            Outcome::Parsed(parses) => {
                doc["status"] = json!("ok");
                let items: Vec<Json> = parses
                    .iter()
                    .zip(&self.targets)
                    .map(|(p, t)| {
                        let mut item = json!({
                            "category": p.cat().to_string(),
                            "denotation": p.term.to_string(),
                            "outline": p.derivation.outline(),
                            "derivation": render_derivation(&p.derivation),
                        });
                        match t {
                            None => {}
                            Some(Ok(v)) => item["target"] = v.json(),
                            Some(Err(e)) => item["target"] = json!({"error": e}),
                        }
                        item
                    })
                    .collect();
                doc["parses"] = Json::Array(items);
            }
        }
        doc
    }
}

pub(super) fn write_check(format: Format, violations: &[Violation], out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Text if violations.is_empty() => writeln!(out, "ok"),
        Format::Text => {
            for v in violations {
                writeln!(out, "violation [{}]: {v}", v.class())?;
            }
            Ok(())
        }
        Format::Structured => {
            let list: Vec<Json> = violations
                .iter()
                .map(|v| json!({"class": v.class(), "message": v.to_string()}))
                .collect();
            writeln!(out, "{}", json!({"ok": violations.is_empty(), "violations": list}))
        }
    }
}

pub(super) fn write_lint(format: Format, warnings: &[AmbiguityWarning], out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Text if warnings.is_empty() => writeln!(out, "no ambiguity warnings"),
        Format::Text => {
            for w in warnings {
                writeln!(out, "warning: {w}")?;
            }
            Ok(())
        }
        Format::Structured => {
            let list: Vec<Json> = warnings
                .iter()
                .map(|w| {
                    json!({
                        "word": w.word,
                        "category": w.erased.to_string(),
                        "first": w.first,
                        "second": w.second,
                        "message": w.to_string(),
                    })
                })
                .collect();
            writeln!(out, "{}", json!({"warnings": list}))
        }
    }
}

pub(super) fn write_lexicon(format: Format, lex: &Lexicon, word: Option<&str>, out: &mut dyn Write) -> io::Result<()> {
    let keep = |w: &str| word.is_none_or(|x| x == w);
    match format {
        Format::Text => {
            if word.is_none() {
                for (name, ty) in lex.constants().iter() {
                    writeln!(out, "const {name} : {ty}")?;
                }
            }
            for e in lex.entries().iter().filter(|e| keep(&e.word)) {
                writeln!(out, "{e}")?;
            }
            for c in lex.coord_schemas().iter().filter(|c| keep(&c.word)) {
                writeln!(out, "{c}")?;
            }
            Ok(())
        }
        Format::Structured => {
            let constants: serde_json::Map<String, Json> = lex
                .constants()
                .iter()
                .map(|(n, t)| (n.to_string(), json!(t.to_string())))
                .collect();
            let entries: Vec<Json> = lex
                .entries()
                .iter()
                .filter(|e| keep(&e.word))
                .map(|e| {
                    json!({
                        "id": e.id,
                        "word": e.word,
                        "category": e.cat.to_string(),
                        "denotation": e.denotation.to_string(),
                        "source": e.provenance.to_string(),
                    })
                })
                .collect();
            let coords: Vec<Json> = lex
                .coord_schemas()
                .iter()
                .filter(|c| keep(&c.word))
                .map(|c| json!({"id": c.id(), "word": c.word, "op": c.op.name()}))
                .collect();
            writeln!(
                out,
                "{}",
                json!({"constants": constants, "entries": entries, "coordinators": coords})
            )
        }
    }
}
