//! Exact continuum-valued semantics.
//!
//! Values are exact rationals. Quantifiers range over the term universe of
//! the signature; each instance family is evaluated as finitely many
//! explicit instances (the candidate terms mentioned by the formula or the
//! atom table) plus one tail value shared by every other closed term.

mod eval;
mod lemma1;
mod piecewise;
mod valuation;
mod value;

use thiserror::Error;

use crate::syntax::SyntaxError;

pub use eval::{
    eval_antecedent, eval_formula, eval_succedent, instance_values, sequent_sound, InstanceValues, ValueDomain,
};
pub use lemma1::{check_lemma1_instance, Lemma1Report, TailSeq};
pub use piecewise::{eval_parametric, fixed_points, Interval, Piece, PiecewiseLinear};
pub use valuation::{QuantifierMode, Valuation, DEFAULT_UNFOLD_BUDGET};
pub use value::{parse_rational, rat, ExtendedSum, Rational, UnitValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("`{0}` is not a sentence")]
    OpenFormula(String),
    #[error("`{0}` is not an atomic formula")]
    NotAnAtom(String),
    #[error("ungrounded: unfolding `{atom}` exceeded the budget of {budget} steps")]
    Ungrounded { atom: String, budget: usize },
    #[error("cannot quantify into the truth predicate under transparency: `{0}`")]
    UnsupportedQuantification(String),
    #[error("`{0}` is symbolic; use parametric evaluation")]
    SymbolicAtom(String),
    #[error("the valuation has no unknown atom")]
    NoUnknown,
    #[error("only one unknown is supported, found `{0}` and `{1}`")]
    MultipleUnknowns(String, String),
    #[error("`{0}` is not a rational in [0,1]")]
    BadValue(String),
    #[error("unrecognized valuation line `{0}`")]
    BadLine(String),
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<EvalError>,
    },
}

/// `min{a, b}`. There is no connective for it in the object language.
pub fn weak_conjunction(a: &UnitValue, b: &UnitValue) -> UnitValue {
    a.clone().min(b.clone())
}

/// `max{a, b}`.
pub fn weak_disjunction(a: &UnitValue, b: &UnitValue) -> UnitValue {
    a.clone().max(b.clone())
}

/// `max{0, a + b - 1}`.
pub fn strong_conjunction(a: &UnitValue, b: &UnitValue) -> UnitValue {
    strong_disjunction(&a.complement(), &b.complement()).complement()
}

/// `min{1, a + b}`.
pub fn strong_disjunction(a: &UnitValue, b: &UnitValue) -> UnitValue {
    ExtendedSum::Finite(a.rational() + b.rational()).clamp()
}

/// `{"value": "p/q"}`.
pub fn value_json(v: &UnitValue) -> serde_json::Value {
    serde_json::json!({ "value": v.to_string() })
}
