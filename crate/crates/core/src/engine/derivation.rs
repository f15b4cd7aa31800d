use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::categories::{Cat, Subst};

/// Combination rules. `Lex` and `Coord` label leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Lex,
    Coord,
    /// `A/B, B => A`
    RApp,
    /// `A, A\B => B`
    LApp,
    /// `A/B, B/C => A/C`
    RComp,
    /// `A\B, B\C => A\C`
    LComp,
    /// `A\(B/C) => (A\B)/C`
    Shift,
}

impl Rule {
    pub const BINARY: [Rule; 4] = [Rule::RApp, Rule::LApp, Rule::RComp, Rule::LComp];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Lex => "Lex",
            Rule::Coord => "Coord",
            Rule::RApp => "RApp",
            Rule::LApp => "LApp",
            Rule::RComp => "RComp",
            Rule::LComp => "LComp",
            Rule::Shift => "Shift",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        [
            Rule::Lex,
            Rule::Coord,
            Rule::RApp,
            Rule::LApp,
            Rule::RComp,
            Rule::LComp,
            Rule::Shift,
        ]
        .into_iter()
        .find(|r| r.name() == name)
    }

    pub fn is_binary(self) -> bool {
        Rule::BINARY.contains(&self)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Half-open token range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(self) -> bool {
        self.end <= self.start
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// A lexicon entry; `inst` grounds the entry's type variables.
    Lex { entry: String, inst: Subst },
    /// A coordinator instantiated at conjunct category `conj`.
    Coord { schema: String, conj: Cat },
    Binary {
        rule: Rule,
        left: Arc<Derivation>,
        right: Arc<Derivation>,
    },
    Shift(Arc<Derivation>),
}

/// A rule-labeled parse tree with the span and category of every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub step: Step,
    pub span: Span,
    pub cat: Cat,
}

impl Derivation {
    pub fn lex(entry: &str, position: usize, cat: Cat) -> Derivation {
        Derivation {
            step: Step::Lex {
                entry: entry.to_string(),
                inst: Subst::new(),
            },
            span: Span::new(position, position + 1),
            cat,
        }
    }

    pub fn coord(schema: &str, position: usize, conj: Cat) -> Derivation {
        let cat = Cat::over(Cat::under(conj.clone(), conj.clone()), conj.clone());
        Derivation {
            step: Step::Coord {
                schema: schema.to_string(),
                conj,
            },
            span: Span::new(position, position + 1),
            cat,
        }
    }

    /// A binary node; the span is taken from the children.
    pub fn binary(rule: Rule, left: Derivation, right: Derivation, cat: Cat) -> Derivation {
        Derivation::binary_arc(rule, Arc::new(left), Arc::new(right), cat)
    }

    pub fn binary_arc(rule: Rule, left: Arc<Derivation>, right: Arc<Derivation>, cat: Cat) -> Derivation {
        assert!(rule.is_binary(), "{rule} is not a binary rule");
        Derivation {
            span: Span::new(left.span.start, right.span.end),
            step: Step::Binary { rule, left, right },
            cat,
        }
    }

    pub fn shift(child: Derivation, cat: Cat) -> Derivation {
        Derivation::shift_arc(Arc::new(child), cat)
    }

    pub fn shift_arc(child: Arc<Derivation>, cat: Cat) -> Derivation {
        Derivation {
            span: child.span,
            step: Step::Shift(child),
            cat,
        }
    }

    pub fn rule(&self) -> Rule {
        match &self.step {
            Step::Lex { .. } => Rule::Lex,
            Step::Coord { .. } => Rule::Coord,
            Step::Binary { rule, .. } => *rule,
            Step::Shift(_) => Rule::Shift,
        }
    }

    pub fn children(&self) -> Vec<&Derivation> {
        match &self.step {
            Step::Lex { .. } | Step::Coord { .. } => vec![],
            Step::Binary { left, right, .. } => vec![left, right],
            Step::Shift(c) => vec![c],
        }
    }

    /// The entry id (or coordination schema id) of a leaf.
    pub fn leaf_id(&self) -> Option<&str> {
        match &self.step {
            Step::Lex { entry, .. } => Some(entry),
            Step::Coord { schema, .. } => Some(schema),
            _ => None,
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&Derivation> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Derivation>) {
        match &self.step {
            Step::Lex { .. } | Step::Coord { .. } => out.push(self),
            _ => {
                for c in self.children() {
                    c.collect_leaves(out);
                }
            }
        }
    }

    fn preorder<'a>(&'a self, out: &mut Vec<(&'static str, &'a str)>) {
        out.push((self.rule().name(), self.leaf_id().unwrap_or("")));
        for c in self.children() {
            c.preorder(out);
        }
    }

    /// Result ordering: fewer nodes first, then the preorder sequence of
    /// rule names (and leaf ids) compared lexicographically.
    pub fn order(&self, other: &Derivation) -> Ordering {
        self.node_count().cmp(&other.node_count()).then_with(|| {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            self.preorder(&mut a);
            other.preorder(&mut b);
            a.cmp(&b)
        })
    }

    /// Compact bracketing such as
    /// `(LApp (Lex fourlex) (RApp (Shift (Lex noun_is_adj_sentence)) (Lex even_lex)))`.
    pub fn outline(&self) -> String {
        match &self.step {
            Step::Lex { entry, .. } => format!("(Lex {entry})"),
            Step::Coord { schema, .. } => format!("(Coord {schema})"),
            _ => {
                let kids: Vec<String> = self.children().iter().map(|c| c.outline()).collect();
                format!("({} {})", self.rule(), kids.join(" "))
            }
        }
    }
}
