//! Emitting, serializing and re-checking a derivation certificate.
//!
//! Two derivations of "four is even" exist: the chart's preferred one
//! applies `is` to `four` first, the other shifts `is` and applies it to
//! `even` first. Both certify.

use catgram::certificates::{check, emit, Certificate};
use catgram::engine::enumerate_parses_bruteforce;
use catgram::{parse_sentence, tokenize, Cat, Lexicon};

fn main() {
    let lex = Lexicon::core();
    let sentence = "four is even";

    let best = parse_sentence(sentence, &lex).unwrap().remove(0);
    let cert = emit(sentence, &best.derivation, &lex).unwrap();
    let text = cert.render();
    print!("{text}");

    let back = Certificate::parse(&text).unwrap();
    println!("check: {:?}\n", check(&back, &lex));

    let all = enumerate_parses_bruteforce(&tokenize(sentence), &Cat::S, &lex, 8).unwrap();
    for p in &all {
        println!("{}  =>  {}", p.derivation.outline(), p.term);
    }
    let shifted = all
        .iter()
        .find(|p| p.derivation.outline().contains("Shift"))
        .expect("a shifted derivation");
    let cert = emit(sentence, &shifted.derivation, &lex).unwrap();
    println!();
    print!("{cert}");
    println!("check: {:?}", check(&cert, &lex));
}
