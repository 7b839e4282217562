//! Formulas of the intuitionistic predicate language: `⊥`, `∧`, `∨`, `→`,
//! `∀`, `∃` over predicate letters of any arity applied to variables.
//!
//! Negation and the biconditional are not constructors. They are expanded
//! when parsed (`~A` becomes `A -> bot`, `A <-> B` becomes
//! `(A -> B) & (B -> A)`) and never reintroduced by the printer.

mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use parse::{parse_formula, ParseError};
pub use print::print_formula;

/// Name of the letter that replaces `⊥` in [`to_positive`].
pub const POSITIVE_LETTER: &str = "Q'";
/// Bound variable used by [`to_positive`].
pub const POSITIVE_VAR: &str = "x";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Bottom,
    Atom { letter: String, args: Vec<String> },
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom<S: Into<String>>(letter: &str, args: impl IntoIterator<Item = S>) -> Self {
        Formula::Atom {
            letter: letter.to_string(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    /// A nullary letter (proposition letter).
    pub fn prop(letter: &str) -> Self {
        Formula::Atom {
            letter: letter.to_string(),
            args: Vec::new(),
        }
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// `¬a`, i.e. `a → ⊥`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::implies(a, Formula::Bottom)
    }

    /// `(a → b) ∧ (b → a)`.
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::Forall(var.to_string(), Box::new(body))
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Formula::Exists(var.to_string(), Box::new(body))
    }

    /// Right-nested conjunction. `None` for an empty list.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Option<Self> {
        let items: Vec<_> = items.into_iter().collect();
        items.into_iter().rev().reduce(|acc, f| Formula::and(f, acc))
    }

    /// Right-nested disjunction; the empty disjunction is `⊥`.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Self {
        let items: Vec<_> = items.into_iter().collect();
        items
            .into_iter()
            .rev()
            .reduce(|acc, f| Formula::or(f, acc))
            .unwrap_or(Formula::Bottom)
    }

    /// Number of `⊥` nodes.
    pub fn bottom_count(&self) -> usize {
        match self {
            Formula::Bottom => 1,
            Formula::Atom { .. } => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.bottom_count() + b.bottom_count()
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => f.bottom_count(),
        }
    }

    /// Nesting depth; atoms and `⊥` have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Atom { .. } => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.depth(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Bottom => {}
            Formula::Atom { args, .. } => {
                for a in args {
                    if !bound.contains(&a.as_str()) {
                        out.insert(a.clone());
                    }
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Connective skeleton with atoms and `⊥` erased; used to compare shapes.
    pub fn skeleton(&self) -> String {
        match self {
            Formula::Bottom | Formula::Atom { .. } => "_".into(),
            Formula::And(a, b) => format!("({} & {})", a.skeleton(), b.skeleton()),
            Formula::Or(a, b) => format!("({} | {})", a.skeleton(), b.skeleton()),
            Formula::Implies(a, b) => format!("({} -> {})", a.skeleton(), b.skeleton()),
            Formula::Forall(v, f) => format!("A{v}.{}", f.skeleton()),
            Formula::Exists(v, f) => format!("E{v}.{}", f.skeleton()),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredicateLetter {
    pub name: String,
    pub arity: usize,
}

impl fmt::Display for PredicateLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// Letters and variable names occurring in a formula, free or bound.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub letters: BTreeSet<PredicateLetter>,
    pub variables: BTreeSet<String>,
}

impl Signature {
    pub fn letters_of_arity(&self, arity: usize) -> impl Iterator<Item = &PredicateLetter> {
        self.letters.iter().filter(move |l| l.arity == arity)
    }

    pub fn binary_count(&self) -> usize {
        self.letters_of_arity(2).count()
    }

    pub fn unary_count(&self) -> usize {
        self.letters_of_arity(1).count()
    }

    pub fn is_two_variable(&self) -> bool {
        self.variables.len() <= 2
    }

    pub fn letter_names(&self) -> BTreeSet<&str> {
        self.letters.iter().map(|l| l.name.as_str()).collect()
    }

    /// Arity per letter name. Letters used with two arities (possible only for
    /// hand-built ASTs) keep the larger one.
    pub fn arities(&self) -> BTreeMap<&str, usize> {
        let mut out = BTreeMap::new();
        for l in &self.letters {
            let e = out.entry(l.name.as_str()).or_insert(l.arity);
            *e = (*e).max(l.arity);
        }
        out
    }
}

pub fn signature_of(f: &Formula) -> Signature {
    fn walk(f: &Formula, sig: &mut Signature) {
        match f {
            Formula::Bottom => {}
            Formula::Atom { letter, args } => {
                sig.letters.insert(PredicateLetter {
                    name: letter.clone(),
                    arity: args.len(),
                });
                sig.variables.extend(args.iter().cloned());
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                walk(a, sig);
                walk(b, sig);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                sig.variables.insert(v.clone());
                walk(body, sig);
            }
        }
    }
    let mut sig = Signature::default();
    walk(f, &mut sig);
    sig
}

/// Replaces every `⊥` with `∀x Q'(x)`. The replacement is closed, so no
/// capture can occur.
pub fn to_positive(f: &Formula) -> Formula {
    match f {
        Formula::Bottom => Formula::forall(
            POSITIVE_VAR,
            Formula::atom(POSITIVE_LETTER, [POSITIVE_VAR]),
        ),
        Formula::Atom { .. } => f.clone(),
        Formula::And(a, b) => Formula::and(to_positive(a), to_positive(b)),
        Formula::Or(a, b) => Formula::or(to_positive(a), to_positive(b)),
        Formula::Implies(a, b) => Formula::implies(to_positive(a), to_positive(b)),
        Formula::Forall(v, body) => Formula::forall(v, to_positive(body)),
        Formula::Exists(v, body) => Formula::exists(v, to_positive(body)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn signature_of_bottom_is_empty() {
        assert_eq!(signature_of(&Formula::Bottom), Signature::default());
    }

    #[test]
    fn signature_of_serial() {
        let sig = signature_of(&p("forall x. exists y. lhd(x,y)"));
        assert_eq!(sig.letters.len(), 1);
        assert_eq!(sig.binary_count(), 1);
        assert_eq!(
            sig.variables.iter().map(String::as_str).collect::<Vec<_>>(),
            ["x", "y"]
        );
    }

    #[test]
    fn signature_counts_bound_and_free_variables() {
        let sig = signature_of(&p("P(z) & forall w. R(w, w)"));
        assert_eq!(sig.variables.len(), 2);
        assert!(sig.is_two_variable());
        assert_eq!(sig.unary_count(), 1);
    }

    #[test]
    fn positive_bottom() {
        assert_eq!(print_formula(&to_positive(&Formula::Bottom)), "forall x. Q'(x)");
    }

    #[test]
    fn positive_leaves_atoms_alone() {
        let a = Formula::atom("P", ["y"]);
        assert_eq!(to_positive(&a), a);
    }

    #[test]
    fn positive_of_negation() {
        let f = to_positive(&p("~P(y)"));
        assert_eq!(print_formula(&f), "(P(y) -> forall x. Q'(x))");
        assert_eq!(f.bottom_count(), 0);
        // structural check, independent of the printer
        match &f {
            Formula::Implies(a, b) => {
                assert_eq!(**a, Formula::atom("P", ["y"]));
                assert_eq!(
                    **b,
                    Formula::forall("x", Formula::atom("Q'", ["x"]))
                );
            }
            other => panic!("unexpected shape {other:?}"),
        }
    }

    #[test]
    fn empty_disjunction_is_bottom() {
        assert_eq!(Formula::disj(Vec::new()), Formula::Bottom);
        assert!(Formula::conj(Vec::new()).is_none());
    }

    #[test]
    fn conj_is_right_nested() {
        let f = Formula::conj([Formula::prop("a"), Formula::prop("b"), Formula::prop("c")]).unwrap();
        assert_eq!(print_formula(&f), "(a & (b & c))");
    }

    #[test]
    fn free_vars_respect_binding() {
        let f = p("forall x. (P(x) -> R(x, y))");
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), ["y"]);
        assert!(p("forall x. exists y. lhd(x,y)").is_closed());
    }
}
