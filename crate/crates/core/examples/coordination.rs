//! `and` and `or` conjoin any two fragments of the same truth-valued
//! category, lifting the connective pointwise through arguments.

use catgram::engine::parse;
use catgram::{parse_sentence, tokenize, Cat, Lexicon, SearchLimits};

fn main() {
    let lex = Lexicon::core();
    for s in [
        "four is even and positive",
        "four is even or 3 is even",
        "every natural is non-negative and some natural is even",
    ] {
        println!("{s}");
        for p in parse_sentence(s, &lex).unwrap() {
            println!("  {}    {}", p.term, p.derivation.outline());
        }
    }

    // Lifting depth is bounded: at level 1 only sentences and one-argument
    // predicates coordinate.
    let shallow = SearchLimits {
        max_lift_level: 1,
        ..SearchLimits::default()
    };
    let words = tokenize("four is even and positive");
    match parse(&words, &Cat::S, &lex, &shallow) {
        Ok(ps) => println!("lift level 1: {}", ps[0].term),
        Err(e) => println!("lift level 1: {e}"),
    }
}
