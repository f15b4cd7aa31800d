//! Parsing sentences of the core lexicon into logical forms.
//!
//! `cargo run --example parse_sentences -- "every natural is even"`

use catgram::{parse_sentence, Lexicon};

fn main() {
    let lex = Lexicon::core();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let sentences: Vec<&str> = if args.is_empty() {
        vec![
            "four is even",
            "addone is monotone",
            "addone given 3 is 4",
            "every natural is even",
            "every natural is non-negative",
            "some natural is positive",
            "four is 4",
        ]
    } else {
        args.iter().map(String::as_str).collect()
    };
    for s in sentences {
        match parse_sentence(s, &lex) {
            Ok(parses) => {
                println!("{s}");
                for p in parses {
                    println!("  {} : {}", p.cat(), p.term);
                    println!("    {}", p.derivation.outline());
                }
            }
            Err(e) => println!("{s}\n  error: {e}"),
        }
    }
}
