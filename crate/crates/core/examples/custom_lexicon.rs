//! Extending the core lexicon with new words from a lexicon file.

use catgram::lexicon::{Lexicon, CORE_LEXICON};
use catgram::parse_sentence;
use catgram::targets::{eval_prop, FiniteModel};

const EXTRA: &str = r#"
const odd : nat -> Prop
word "odd"   @odd_lex   ADJ[nat]  := odd
word "small" @small_lex ADJ[nat]  := \n:nat. n <= 3
word "three" @three_lex NP[nat]   := 3
coord "or" or
"#;

fn main() {
    let lex = match Lexicon::from_sources(&[("<core>", CORE_LEXICON), ("extra.lex", EXTRA)]) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let model = FiniteModel::new()
        .with_domain("nat", 0..10)
        .with_fun("odd", &["n"], "n % 2 == 1")
        .unwrap()
        .with_fun("le", &["a", "b"], "a <= b")
        .unwrap();
    for s in ["three is odd and small", "every natural is odd or small", "some natural is odd and small"] {
        let t = parse_sentence(s, &lex).unwrap().remove(0).term;
        println!("{s:<32} {t:<45} {}", eval_prop(&t, &model).unwrap());
    }

    let broken = "word \"huge\" @huge ADJ[nat] := \\n:nat. n\n";
    match Lexicon::from_sources(&[("<core>", CORE_LEXICON), ("broken.lex", broken)]) {
        Ok(_) => println!("unexpectedly loaded"),
        Err(e) => println!("rejected: {e}"),
    }
}
