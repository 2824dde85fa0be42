//! Shared fixtures for the criterion benchmarks.

use mqlogic_core::calculus::{prop1_derivation, prop1_signature, Derivation, Language};
use mqlogic_core::semantics::{QuantifierMode, Valuation};
use mqlogic_core::syntax::parse_formula;
use mqlogic_core::Formula;

/// Two constants, a unary function and predicates with mixed defaults.
pub const VALUATION: &str = "\
const a, b
fun f/1
pred P/1, Q/2
default P = 1/3
default Q = 0
atom P(a) = 1
atom P(f(b)) = 1/7
atom Q(a, f(a)) = 2/5
";

pub const SENTENCES: [&str; 3] = [
    "Ex x (P(x) -> ~P(f(x)))",
    "~Ex x Ex y (Q(x, y) -> P(f(y)))",
    "Ex x ~Ex y ~(P(x) -> Q(f(x), y))",
];

pub fn valuation(mode: QuantifierMode) -> Valuation {
    Valuation::parse(VALUATION).expect("fixture parses").with_mode(mode)
}

pub fn sentences(v: &Valuation) -> Vec<Formula> {
    SENTENCES
        .iter()
        .map(|s| parse_formula(s, v.signature()).expect("fixture parses"))
        .collect()
}

pub fn prop1(depth: u64) -> (Language, Derivation) {
    let lang = Language::new(prop1_signature()).expect("built-in signature");
    let d = prop1_derivation(&lang, depth).expect("built-in derivation").derivation;
    (lang, d)
}
