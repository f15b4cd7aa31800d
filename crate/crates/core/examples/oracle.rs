//! Cross-checking the chart parser against exhaustive enumeration.

use catgram::engine::{enumerate_parses_bruteforce, parse_with_stats};
use catgram::{tokenize, Cat, Lexicon, SearchLimits};

fn main() {
    let lex = Lexicon::core();
    for s in ["four is even", "four is even and positive", "every natural is even and positive"] {
        let words = tokenize(s);
        let (chart, stats) = parse_with_stats(&words, &Cat::S, &lex, &SearchLimits::default()).unwrap();
        let all = enumerate_parses_bruteforce(&words, &Cat::S, &lex, 32).unwrap();
        println!(
            "{s}: chart {} parse(s) from {} items, oracle {} derivation(s)",
            chart.len(),
            stats.items,
            all.len()
        );
        for p in &all {
            println!("  {}  {}", p.term, p.derivation.outline());
        }
    }
}
