//! Random signatures, valuations and sentences shared by the integration
//! suites. Everything is built from constructors, never from the parser.
#![allow(dead_code)]

use mqlogic_core::semantics::{QuantifierMode, UnitValue, Valuation};
use mqlogic_core::{Formula, Signature, Symbol, Term};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const SIGNATURE: &str = "const a, b\nfun f/1\npred P/1, Q/2, R/0\n";
pub const VARS: [&str; 2] = ["x", "y"];

pub fn signature() -> Signature {
    Signature::parse(SIGNATURE).expect("test signature")
}

/// Deterministic runner with `cases` cases and no persistence files.
pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        max_shrink_iters: 256,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub fn f(t: Term) -> Term {
    Term::app(Symbol::new("f"), vec![t])
}

/// `f^k(c)`.
pub fn iterate_f(c: &str, k: usize) -> Term {
    (0..k).fold(Term::constant(c), |t, _| f(t))
}

/// Values on a grid with denominators up to 12, boundary values weighted up.
pub fn unit_value() -> impl Strategy<Value = UnitValue> {
    prop_oneof![
        1 => Just(UnitValue::zero()),
        1 => Just(UnitValue::one()),
        4 => (1i64..=12).prop_flat_map(|d| (0..=d).prop_map(move |n| UnitValue::ratio(n, d))),
    ]
}

pub fn closed_term() -> BoxedStrategy<Term> {
    prop_oneof![
        Just(Term::constant("a")),
        Just(Term::constant("b")),
        Just(f(Term::constant("a"))),
        Just(f(Term::constant("b"))),
        Just(iterate_f("a", 2)),
    ]
    .boxed()
}

pub fn term() -> BoxedStrategy<Term> {
    prop_oneof![
        3 => closed_term(),
        2 => prop::sample::select(VARS.to_vec()).prop_map(Term::var),
        1 => prop::sample::select(VARS.to_vec()).prop_map(|x| f(Term::var(x))),
    ]
    .boxed()
}

fn atom_over(t: BoxedStrategy<Term>) -> BoxedStrategy<Formula> {
    prop_oneof![
        3 => t.clone().prop_map(|t| Formula::atom("P", vec![t])),
        2 => (t.clone(), t).prop_map(|(s, t)| Formula::atom("Q", vec![s, t])),
        1 => Just(Formula::atom("R", vec![])),
    ]
    .boxed()
}

pub fn closed_atom() -> impl Strategy<Value = Formula> {
    atom_over(closed_term())
}

/// Formulas whose free variables lie in `VARS`.
pub fn open_formula() -> impl Strategy<Value = Formula> {
    atom_over(term()).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            2 => inner.clone().prop_map(Formula::neg),
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::cond(a, b)),
            2 => (prop::sample::select(VARS.to_vec()), inner).prop_map(|(x, a)| Formula::exists(x, a)),
        ]
    })
}

/// Existentially closes every free variable.
pub fn close(a: Formula) -> Formula {
    a.free_vars().into_iter().rev().fold(a, |acc, x| Formula::exists(x.as_str(), acc))
}

pub fn sentence() -> impl Strategy<Value = Formula> {
    open_formula().prop_map(close)
}

/// A formula whose only possible free variable is `x`.
pub fn body() -> impl Strategy<Value = Formula> {
    open_formula().prop_map(|a| {
        let y = Symbol::new("y");
        if a.has_free(&y) {
            Formula::exists("y", a)
        } else {
            a
        }
    })
}

/// Quantifier-free formulas in `x`: their instance families do not depend
/// on the quantifier mode.
pub fn quantifier_free_body() -> impl Strategy<Value = Formula> {
    let t = prop_oneof![
        3 => closed_term(),
        2 => Just(Term::var("x")),
        1 => Just(f(Term::var("x"))),
    ]
    .boxed();
    atom_over(t).prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::cond(a, b)),
        ]
    })
}

pub fn mode() -> impl Strategy<Value = QuantifierMode> {
    prop_oneof![Just(QuantifierMode::Sup), Just(QuantifierMode::Sum)]
}

/// Mode, predicate defaults and up to six explicit atom values.
#[derive(Debug, Clone)]
pub struct ValuationData {
    pub mode: QuantifierMode,
    pub defaults: [UnitValue; 3],
    pub atoms: Vec<(Formula, UnitValue)>,
}

impl ValuationData {
    pub fn build(&self) -> Valuation {
        let mut v = Valuation::new(signature(), self.mode).expect("test universe");
        for (p, d) in ["P", "Q", "R"].into_iter().zip(&self.defaults) {
            v.set_default(p, d.clone()).expect("declared predicate");
        }
        for (atom, value) in &self.atoms {
            v.set_atom(atom, value.clone()).expect("closed atom");
        }
        v
    }
}

pub fn valuation_data() -> impl Strategy<Value = ValuationData> {
    let default = prop_oneof![2 => Just(UnitValue::zero()), 3 => unit_value()];
    (
        mode(),
        [default.clone(), default.clone(), default],
        prop::collection::vec((closed_atom(), unit_value()), 0..=6),
    )
        .prop_map(|(mode, defaults, atoms)| ValuationData { mode, defaults, atoms })
}
