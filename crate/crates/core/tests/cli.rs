use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_catgram");
const MANIFEST: &str = env!("CARGO_MANIFEST_DIR");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn model_path() -> String {
    Path::new(MANIFEST).join("models/arith.model").display().to_string()
}

#[test]
fn structured_parse_goldens() {
    let cases = [
        ("four is even", "even 4"),
        (
            "addone is monotone",
            "forall x:nat, forall y:nat, x <= y -> addone x <= addone y",
        ),
        ("addone given 3 is 4", "addone 3 = 4"),
        ("every natural is even", "forall n:nat, even n"),
        ("every natural is non-negative", "forall n:nat, n >= 0"),
        (
            "every natural is non-negative and some natural is even",
            "(forall n:nat, n >= 0) /\\ (exists n:nat, even n)",
        ),
        ("four is even and positive", "even 4 /\\ positive 4"),
    ];
    for (sentence, denotation) in cases {
        let o = run(&["--format", "structured", "parse", sentence]);
        assert_eq!(code(&o), 0, "{sentence}: {}", stderr(&o));
        let doc = &json_lines(&o)[0];
        assert_eq!(doc["status"], "ok");
        assert_eq!(doc["sentence"], sentence);
        assert_eq!(doc["parses"][0]["category"], "S");
        assert_eq!(doc["parses"][0]["denotation"], denotation, "{sentence}");
    }
}

#[test]
fn structured_document_shape() {
    let o = run(&["--format", "structured", "parse", "four is even"]);
    let expected = serde_json::json!({
        "sentence": "four is even",
        "tokens": ["four", "is", "even"],
        "status": "ok",
        "parses": [{
            "category": "S",
            "denotation": "even 4",
            "outline": "(RApp (LApp (Lex fourlex) (Lex noun_is_adj_sentence)) (Lex even_lex))",
            "derivation": "(RApp 0 3 \"S\"\n  (LApp 0 2 \"S / ADJ[nat]\"\n    (Lex 0 1 \"NP[nat]\" \"fourlex\" \"\")\n    (Lex 1 2 \"NP[nat] \\\\ (S / ADJ[nat])\" \"noun_is_adj_sentence\" \"?0=nat\"))\n  (Lex 2 3 \"ADJ[nat]\" \"even_lex\" \"\"))",
        }],
    });
    assert_eq!(json_lines(&o)[0], expected);
}

#[test]
fn text_parse() {
    let o = run(&["parse", "four is even and positive"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "four is even and positive\n  1. S : even 4 /\\ positive 4\n");
}

#[test]
fn exit_codes() {
    let unknown = run(&["--format", "structured", "parse", "four is purple"]);
    assert_eq!(code(&unknown), 2);
    let doc = &json_lines(&unknown)[0];
    assert_eq!(doc["error"]["kind"], "unknown-word");
    assert_eq!(doc["error"]["word"], "purple");
    assert_eq!(doc["error"]["position"], 2);

    assert_eq!(code(&run(&["parse", "four even"])), 1);
    assert_eq!(code(&run(&["--max-lift", "0", "parse", "four is even"])), 3);
    assert_eq!(code(&run(&["--goal", "NP[?0]", "parse", "four"])), 3);
    assert_eq!(code(&run(&["--lexicon", "/no/such.lex", "parse", "four"])), 3);
    assert_eq!(code(&run(&["--goal", "NP[nat]", "parse", "four"])), 0);
}

#[test]
fn batch_mode_keeps_order_and_reports_worst_code() {
    let input = "four is even\nfour is odd\n\nevery natural is even\n";
    let o = run_stdin(&["--format", "structured", "parse"], input);
    assert_eq!(code(&o), 2);
    let docs = json_lines(&o);
    let sentences: Vec<&str> = docs.iter().map(|d| d["sentence"].as_str().unwrap()).collect();
    assert_eq!(sentences, ["four is even", "four is odd", "every natural is even"]);
    assert_eq!(docs[1]["status"], "error");
}

#[test]
fn certify_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("even.cert");
    let cert_s = cert.to_str().unwrap();
    let o = run(&["certify", "four is even", "--cert", cert_s]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&cert).unwrap();
    assert!(text.starts_with("ccg-cert/1\n"));

    let o = run(&["check", cert_s]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "ok\n");

    // Same words, `even` redefined: the digest no longer matches.
    let lex = dir.path().join("evil.lex");
    let core = std::fs::read_to_string(Path::new(MANIFEST).join("lexicons/core.lex")).unwrap();
    std::fs::write(&lex, core.replace(":= even\n", ":= positive\n")).unwrap();
    let o = run(&["--lexicon", lex.to_str().unwrap(), "--format", "structured", "check", cert_s]);
    assert_eq!(code(&o), 1);
    let doc = &json_lines(&o)[0];
    assert_eq!(doc["ok"], false);
    let classes: Vec<&str> = doc["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["class"].as_str().unwrap())
        .collect();
    assert!(classes.contains(&"digest-mismatch"), "{classes:?}");
}

#[test]
fn certify_to_stdout_round_trips() {
    let o = run(&["certify", "every natural is even"]);
    assert_eq!(code(&o), 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.cert");
    std::fs::write(&path, &o.stdout).unwrap();
    assert_eq!(code(&run(&["check", path.to_str().unwrap()])), 0);
}

#[test]
fn malformed_certificate_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cert");
    let good = stdout(&run(&["certify", "four is even"]));
    std::fs::write(&path, good.replace("category: \"S\"", "category: S")).unwrap();
    let o = run(&["check", path.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("bad.cert:4"), "{}", stderr(&o));
}

#[test]
fn lint_strict() {
    assert_eq!(code(&run(&["--strict", "lint"])), 0);
    let dir = tempfile::tempdir().unwrap();
    let extra = dir.path().join("extra.lex");
    std::fs::write(&extra, "word \"even\" @even_again ADJ[nat] := even\n").unwrap();
    let extra = extra.to_str().unwrap();
    let args = ["--lexicon", "builtin:core", "--lexicon", extra];

    let lenient = run(&[&args[..], &["lint"]].concat());
    assert_eq!(code(&lenient), 0);
    assert_eq!(stdout(&lenient).lines().count(), 1);

    let strict = run(&[&args[..], &["--strict", "--format", "structured", "lint"]].concat());
    assert_eq!(code(&strict), 1);
    let doc = &json_lines(&strict)[0];
    assert_eq!(doc["warnings"].as_array().unwrap().len(), 1);
    assert_eq!(doc["warnings"][0]["word"], "even");
}

#[test]
fn eval_with_model() {
    let model = model_path();
    let o = run(&["eval", "four is even", "--model", &model]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "four is even\n  1. S : even 4  ==> true\n");

    let o = run(&["--format", "structured", "eval", "every natural is positive"]);
    assert_eq!(json_lines(&o)[0]["parses"][0]["target"]["value"], false);

    let o = run(&["--target", &format!("model:{model}"), "parse", "every natural is non-negative"]);
    assert!(stdout(&o).ends_with("==> true\n"));
}

#[test]
fn ltl_target() {
    let o = run(&["--lexicon", "builtin:ltl", "--target", "ltl", "parse", "ready until busy"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("==> ready U busy"));

    let o = run(&["--target", "ltl", "parse", "every natural is even"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("unsupported construct"));
}

#[test]
fn lexicon_show() {
    let o = run(&["--format", "structured", "lexicon-show", "--word", "is"]);
    assert_eq!(code(&o), 0);
    let doc = &json_lines(&o)[0];
    let ids: Vec<&str> = doc["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["noun_is_adj_sentence", "noun_is_noun_sentence"]);

    let o = run(&["lexicon-show"]);
    assert!(stdout(&o).contains("coord \"and\" and"));
}
