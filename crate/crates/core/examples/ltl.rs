//! Retargeting the same parser to linear temporal logic.

use catgram::targets::{retarget, LtlTarget, PropSymbolic};
use catgram::{parse_sentence, Lexicon};

fn main() {
    let lex = Lexicon::ltl_demo();
    for s in [
        "always ready",
        "eventually busy",
        "ready until busy",
        "always ready and eventually busy",
    ] {
        println!("{s}");
        for p in parse_sentence(s, &lex).unwrap() {
            let f = retarget(&p.term, &LtlTarget).unwrap();
            let prop = retarget(&p.term, &PropSymbolic).unwrap();
            println!("  {f}    ({prop})");
        }
    }

    let core = Lexicon::core();
    let q = parse_sentence("every natural is even", &core).unwrap().remove(0).term;
    println!("every natural is even: {}", retarget(&q, &LtlTarget).unwrap_err());
}
