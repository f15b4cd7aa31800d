//! Building, normalizing and type-checking logical forms by hand.

use catgram::categories::interp;
use catgram::terms::{alpha_eq, beta_normalize, parse_term, type_check};
use catgram::{Cat, Lexicon};

fn main() {
    let lex = Lexicon::core();
    let env = lex.constants();

    let redex = parse_term(r"(\n:nat. \p:nat -> Prop. p n) 4 even").unwrap();
    let normal = beta_normalize(&redex);
    println!("{redex}\n  ~> {normal}");
    println!("  : {}", type_check(&normal, env).unwrap());

    let a = parse_term(r"forall x:nat, even x").unwrap();
    let b = parse_term(r"forall y:nat, even y").unwrap();
    println!("alpha-equivalent: {}", alpha_eq(&a, &b));

    for c in ["S", "ADJ[nat]", r"NP[?0] \ (S / ADJ[?0])", "Quant[nat]"] {
        let cat: Cat = c.parse().unwrap();
        println!("interp({cat}) = {}", interp(&cat));
    }

    let bad = parse_term("even addone").unwrap();
    println!("even addone: {}", type_check(&bad, env).unwrap_err());
}
