//! The three ways to subvert a natural-language reading, and how a
//! certificate check catches each.

use catgram::certificates::{check, emit, Certificate};
use catgram::lexicon::{Lexicon, CORE_LEXICON};
use catgram::parse_sentence;

fn certify(s: &str, lex: &Lexicon) -> Certificate {
    let p = parse_sentence(s, lex).unwrap().remove(0);
    emit(s, &p.derivation, lex).unwrap()
}

fn show(label: &str, cert: &Certificate, lex: &Lexicon) {
    println!("{label}");
    match check(cert, lex) {
        Ok(()) => println!("  ok"),
        Err(vs) => vs.iter().for_each(|v| println!("  [{}] {v}", v.class())),
    }
}

fn main() {
    let lex = Lexicon::core();

    // Tampering with the derivation: claim RApp where LApp was used.
    let cert = certify("four is even", &lex);
    let tampered = Certificate::parse(&cert.render().replacen("(LApp", "(RApp", 1)).unwrap();
    show("rule tampering", &tampered, &lex);

    // A second reading of `even` sneaks in with the same category.
    let extra = "word \"even\" @sneaky_even ADJ[nat] := positive\n";
    let ambiguous = Lexicon::from_sources(&[("<core>", CORE_LEXICON), ("extra.lex", extra)]).unwrap();
    show("ambiguity injection", &cert, &ambiguous);

    // `monotone` quietly redefined to mean antitone.
    let cert = certify("addone is monotone", &lex);
    let evil = CORE_LEXICON.replace("x <= y -> f x <= f y", "x <= y -> f y <= f x");
    let evil = Lexicon::from_sources(&[("evil.lex", &evil)]).unwrap();
    show("definition swap", &cert, &evil);
}
