//! Ambiguity linting: homonyms are fine when their categories tell them
//! apart, and flagged when a parse could not.

use catgram::lexicon::{lint_ambiguity, Lexicon, CORE_LEXICON};

fn main() {
    let core = Lexicon::core();
    for e in core.entries_for("is") {
        println!("{e}");
    }
    println!("core warnings: {}", lint_ambiguity(&core).len());

    let extra = "word \"even\" @even_too ADJ[nat] := \\n:nat. even n\n";
    let lex = Lexicon::from_sources(&[("<core>", CORE_LEXICON), ("extra.lex", extra)]).unwrap();
    for w in lint_ambiguity(&lex) {
        println!("warning: {w}");
    }
}
