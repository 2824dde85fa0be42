//! Infinitary affine sequent calculus with continuum-valued Lukasiewicz
//! semantics.
//!
//! * [`syntax`]: terms, formulas, signatures with canonical names, coding
//!   equations and the closed-term enumeration.
//! * [`multiset`]: multisets with multiplicities in omega+1 and sequents.
//! * [`semantics`]: exact evaluation under sup- and sum-quantifier
//!   valuations, piecewise-linear analysis of self-referential sentences.
//! * [`calculus`]: rule instances and derivation checking, with omega-indexed
//!   premise families and both vacuous-quantification policies.
//! * [`experiments`]: seeded soundness fuzzing and the canned reproductions.

pub mod calculus;
pub mod experiments;
pub mod multiset;
pub mod semantics;
pub mod syntax;

pub use multiset::{Multiplicity, OmegaMultiset, Sequent};
pub use syntax::{Formula, Signature, Symbol, SyntaxError, Term};
