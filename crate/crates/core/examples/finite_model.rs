//! Evaluating logical forms over a finite arithmetic model, and changing
//! the model to see the verdicts move.

use catgram::targets::{eval_prop, FiniteModel};
use catgram::{parse_sentence, Lexicon};

const MODEL: &str = include_str!("../models/arith.model");

fn main() {
    let lex = Lexicon::core();
    let model = FiniteModel::parse("arith.model", MODEL).unwrap();
    let strict = model.clone().with_fun("positive", &["n"], "n > 4").unwrap();

    for s in [
        "four is even",
        "every natural is non-negative",
        "every natural is positive",
        "some natural is positive and even",
        "four is positive and four is even",
        "addone is monotone",
        "addone given 3 is 4",
    ] {
        let t = parse_sentence(s, &lex).unwrap().remove(0).term;
        println!(
            "{s:<40} {:<6} (positive n > 4: {})",
            eval_prop(&t, &model).unwrap(),
            eval_prop(&t, &strict).unwrap()
        );
    }
}
