//! Command-line frontend. Exit codes: 0 success, 1 no parse / failed
//! check / lint warnings under `--strict`, 2 unknown word, 3 bad
//! configuration, unreadable or malformed input.

mod report;

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::categories::Cat;
use crate::certificates::{self, Certificate};
use crate::engine::{self, tokenize, ParseError, SearchLimits};
use crate::lexicon::{lint_ambiguity, Lexicon, CORE_LEXICON, LTL_LEXICON};
use crate::targets::FiniteModel;

use report::{Outcome, SentenceReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNKNOWN_WORD: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

/// Shipped arithmetic model used by `eval` when no `--model` is given.
pub const ARITH_MODEL: &str = include_str!("../../models/arith.model");

#[derive(Debug, Parser)]
#[command(name = "catgram", version, about = "Typed categorial-grammar parser for controlled English")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One JSON document per line.
    Structured,
}

#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Lexicon file; repeatable. `builtin:core` and `builtin:ltl` name the
    /// shipped lexicons. Defaults to `builtin:core`.
    #[arg(long = "lexicon", global = true, value_name = "PATH")]
    pub lexicons: Vec<String>,
    /// Goal category.
    #[arg(long, global = true, default_value = "S", value_name = "CAT")]
    pub goal: String,
    /// Output logic: `prop`, `model:FILE` or `ltl`.
    #[arg(long, global = true, default_value = "prop", value_name = "TARGET")]
    pub target: String,
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_parses: u32,
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_lift: u32,
    /// Treat lint warnings as errors.
    #[arg(long, global = true)]
    pub strict: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse sentences (argument, or one per stdin line).
    Parse {
        sentence: Option<String>,
        /// Also write a certificate for the first parse.
        #[arg(long, value_name = "OUT")]
        cert: Option<PathBuf>,
    },
    /// Write a certificate for the first parse of a sentence.
    Certify {
        sentence: String,
        /// Output file; stdout if omitted.
        #[arg(long, value_name = "OUT")]
        cert: Option<PathBuf>,
    },
    /// Check a certificate against the lexicon.
    Check { cert: PathBuf },
    /// Report ambiguous lexicon entries.
    Lint,
    /// Evaluate sentences in a finite model.
    Eval {
        sentence: Option<String>,
        /// Model file; the shipped arithmetic model if omitted.
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
    },
    /// Print the loaded lexicon.
    LexiconShow {
        /// Only entries for this word.
        #[arg(long)]
        word: Option<String>,
    },
}

/// Output destination of a parse.
#[derive(Debug, Clone)]
pub enum Target {
    Prop,
    Model(FiniteModel),
    Ltl,
}

struct Ctx {
    lex: Lexicon,
    goal: Cat,
    limits: SearchLimits,
    format: Format,
}

/// A failure that ends the command with a message and exit code.
struct Fatal(i32, String);

fn config_error(msg: impl Into<String>) -> Fatal {
    Fatal(EXIT_CONFIG, msg.into())
}

pub fn load_lexicon(specs: &[String]) -> Result<Lexicon, String> {
    let default = ["builtin:core".to_string()];
    let specs = if specs.is_empty() { &default[..] } else { specs };
    let mut sources = Vec::new();
    for spec in specs {
        let text = match spec.as_str() {
            "builtin:core" => CORE_LEXICON.to_string(),
            "builtin:ltl" => LTL_LEXICON.to_string(),
            path => std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?,
        };
        sources.push((spec.clone(), text));
    }
    let refs: Vec<(&str, &str)> = sources.iter().map(|(n, t)| (n.as_str(), t.as_str())).collect();
    Lexicon::from_sources(&refs).map_err(|e| e.to_string())
}

fn load_model(path: Option<&PathBuf>) -> Result<FiniteModel, Fatal> {
    match path {
        Some(p) => FiniteModel::load(p).map_err(|e| config_error(e.to_string())),
        None => FiniteModel::parse("<arith>", ARITH_MODEL).map_err(|e| config_error(e.to_string())),
    }
}

fn parse_target(spec: &str) -> Result<Target, Fatal> {
    match spec {
        "prop" => Ok(Target::Prop),
        "ltl" => Ok(Target::Ltl),
        other => match other.strip_prefix("model:") {
            Some(file) => Ok(Target::Model(load_model(Some(&PathBuf::from(file)))?)),
            None => Err(config_error(format!(
                "unknown target `{other}` (expected prop, ltl or model:FILE)"
            ))),
        },
    }
}

fn context(config: &Config) -> Result<Ctx, Fatal> {
    let lex = load_lexicon(&config.lexicons).map_err(config_error)?;
    let goal: Cat = config
        .goal
        .parse()
        .map_err(|e| config_error(format!("--goal: {e}")))?;
    if !goal.is_ground() {
        return Err(config_error(format!("--goal: `{goal}` must be ground")));
    }
    Ok(Ctx {
        lex,
        goal,
        limits: SearchLimits {
            max_lift_level: config.max_lift as usize,
            max_parses: config.max_parses as usize,
            ..SearchLimits::default()
        },
        format: config.format,
    })
}

fn read_sentences(arg: Option<String>, stdin: &mut dyn BufRead) -> Result<Vec<String>, Fatal> {
    match arg {
        Some(s) if s != "-" => Ok(vec![s]),
        _ => {
            let mut out = Vec::new();
            for line in stdin.lines() {
                let line = line.map_err(|e| config_error(format!("stdin: {e}")))?;
                if !line.trim().is_empty() {
                    out.push(line);
                }
            }
            Ok(out)
        }
    }
}

fn exit_for(e: &ParseError) -> i32 {
    match e {
        ParseError::UnknownWord { .. } => EXIT_UNKNOWN_WORD,
        ParseError::InvalidLimits(_) | ParseError::NonGroundGoal(_) => EXIT_CONFIG,
        _ => EXIT_FAIL,
    }
}

fn process_batch(ctx: &Ctx, sentences: &[String], target: &Target) -> Vec<SentenceReport> {
    sentences
        .par_iter()
        .map(|s| {
            let words = tokenize(s);
            let outcome = engine::parse(&words, &ctx.goal, &ctx.lex, &ctx.limits);
            SentenceReport::new(s, words, outcome, target)
        })
        .collect()
}

fn write_cert(path: Option<&PathBuf>, cert: &Certificate, out: &mut dyn Write) -> Result<(), Fatal> {
    match path {
        Some(p) => std::fs::write(p, cert.render()).map_err(|e| config_error(format!("{}: {e}", p.display()))),
        None => out
            .write_all(cert.render().as_bytes())
            .map_err(|e| config_error(e.to_string())),
    }
}

fn run_parse(
    ctx: &Ctx,
    sentences: Vec<String>,
    target: &Target,
    cert: Option<&PathBuf>,
    out: &mut dyn Write,
) -> Result<i32, Fatal> {
    if sentences.is_empty() {
        return Err(config_error("no sentences given"));
    }
    if cert.is_some() && sentences.len() != 1 {
        return Err(config_error("--cert needs exactly one sentence"));
    }
    let reports = process_batch(ctx, &sentences, target);
    let mut code = EXIT_OK;
    for r in &reports {
        r.write(ctx.format, out).map_err(|e| config_error(e.to_string()))?;
        code = code.max(match &r.outcome {
            Outcome::Parsed(_) if r.target_failed() => EXIT_FAIL,
            Outcome::Parsed(_) => EXIT_OK,
            Outcome::Failed(e) => exit_for(e),
        });
    }
    if let (Some(path), Outcome::Parsed(parses)) = (cert, &reports[0].outcome) {
        let c = certificates::emit(&reports[0].sentence, &parses[0].derivation, &ctx.lex)
            .map_err(|e| Fatal(EXIT_FAIL, e.to_string()))?;
        write_cert(Some(path), &c, out)?;
    }
    Ok(code)
}

fn run_certify(ctx: &Ctx, sentence: &str, cert: Option<&PathBuf>, out: &mut dyn Write) -> Result<i32, Fatal> {
    let parses = engine::parse(&tokenize(sentence), &ctx.goal, &ctx.lex, &ctx.limits)
        .map_err(|e| Fatal(exit_for(&e), format!("{sentence:?}: {e}")))?;
    let c = certificates::emit(sentence, &parses[0].derivation, &ctx.lex).map_err(|e| Fatal(EXIT_FAIL, e.to_string()))?;
    write_cert(cert, &c, out)?;
    Ok(EXIT_OK)
}

fn run_check(ctx: &Ctx, path: &PathBuf, out: &mut dyn Write) -> Result<i32, Fatal> {
    let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    let cert = Certificate::parse(&text).map_err(|e| config_error(format!("{}:{}: {}", path.display(), e.line, e.message)))?;
    let violations = certificates::violations(&cert, &ctx.lex);
    report::write_check(ctx.format, &violations, out).map_err(|e| config_error(e.to_string()))?;
    Ok(if violations.is_empty() { EXIT_OK } else { EXIT_FAIL })
}

fn run_lint(ctx: &Ctx, strict: bool, out: &mut dyn Write) -> Result<i32, Fatal> {
    let warnings = lint_ambiguity(&ctx.lex);
    report::write_lint(ctx.format, &warnings, out).map_err(|e| config_error(e.to_string()))?;
    Ok(if strict && !warnings.is_empty() { EXIT_FAIL } else { EXIT_OK })
}

fn run_lexicon_show(ctx: &Ctx, word: Option<&str>, out: &mut dyn Write) -> Result<i32, Fatal> {
    report::write_lexicon(ctx.format, &ctx.lex, word, out).map_err(|e| config_error(e.to_string()))?;
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32, Fatal> {
    let ctx = context(&cli.config)?;
    match cli.command {
        Command::Parse { sentence, cert } => {
            let target = parse_target(&cli.config.target)?;
            let sentences = read_sentences(sentence, stdin)?;
            run_parse(&ctx, sentences, &target, cert.as_ref(), out)
        }
        Command::Certify { sentence, cert } => run_certify(&ctx, &sentence, cert.as_ref(), out),
        Command::Check { cert } => run_check(&ctx, &cert, out),
        Command::Lint => run_lint(&ctx, cli.config.strict, out),
        Command::Eval { sentence, model } => {
            let target = Target::Model(load_model(model.as_ref())?);
            let sentences = read_sentences(sentence, stdin)?;
            run_parse(&ctx, sentences, &target, None, out)
        }
        Command::LexiconShow { word } => run_lexicon_show(&ctx, word.as_deref(), out),
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli, stdin, out) {
        Ok(code) => code,
        Err(Fatal(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdin = std::io::stdin();
    let mut input = stdin.lock();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut err = std::io::stderr();
    let code = run(std::env::args_os(), &mut input, &mut out, &mut err);
    let _ = out.flush();
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], input: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("catgram").chain(args.iter().copied());
        let code = run(argv, &mut input.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parse_prints_denotation() {
        let (code, out, _) = run_str(&["parse", "addone is monotone"], "");
        assert_eq!(code, 0);
        assert!(out.contains("forall x:nat, forall y:nat, x <= y -> addone x <= addone y"), "{out}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["parse", "even four is"], "").0, EXIT_FAIL);
        let (code, _, _) = run_str(&["parse", "colorless green ideas"], "");
        assert_eq!(code, EXIT_UNKNOWN_WORD);
        assert_eq!(run_str(&["parse", "--goal", "NP[?0]", "four"], "").0, EXIT_CONFIG);
        assert_eq!(run_str(&["parse", "--target", "smt", "four is even"], "").0, EXIT_CONFIG);
        assert_eq!(run_str(&["parse", "--max-parses", "0", "four is even"], "").0, EXIT_CONFIG);
        assert_eq!(run_str(&["--lexicon", "/nonexistent.lex", "lint"], "").0, EXIT_CONFIG);
    }

    #[test]
    fn batch_preserves_order() {
        let input = "four is even\nevery natural is even\n\nfour is odd\naddone given 3 is 4\n";
        let (code, out, _) = run_str(&["--format", "structured", "parse"], input);
        assert_eq!(code, EXIT_UNKNOWN_WORD);
        let sentences: Vec<String> = out
            .lines()
            .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["sentence"].as_str().unwrap().to_string())
            .collect();
        assert_eq!(sentences, ["four is even", "every natural is even", "four is odd", "addone given 3 is 4"]);
    }

    #[test]
    fn eval_uses_the_arith_model() {
        let (code, out, _) = run_str(&["eval", "four is even"], "");
        assert_eq!(code, 0);
        assert!(out.contains("true"), "{out}");
    }

    #[test]
    fn ltl_target() {
        let (code, out, _) = run_str(&["--lexicon", "builtin:ltl", "--target", "ltl", "parse", "always ready"], "");
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("G ready"), "{out}");
    }
}
