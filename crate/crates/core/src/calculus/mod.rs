//! Sequent calculus with omega-rules for the existential quantifier and
//! transparent truth rules, plus a derivation checker.
//!
//! Omega-premise families are represented finitely: explicit derivations
//! for an initial segment of the term enumeration and a template derivation
//! with a free index variable for the rest. Template checking is structural
//! at the level of the rule instance and bounded at the level of the
//! subderivations, which are instantiated at a configurable number of
//! indices.

mod builtin;
mod cedent;
mod check;
mod derivation;
mod json;
mod semantic;

pub use builtin::{
    prop1_derivation, prop1_signature, prop3_derivation, prop3_signature, prop3_vacuous_family_instance,
    prop3_vacuous_instance, Prop1Derivation, PROP1_SIGNATURE, PROP3_SIGNATURE,
};
pub use cedent::{Cedent, FormulaFamily, Language, SchematicJson, SchematicSequent, INDEX_VAR, PRINCIPAL_WINDOW};
pub use check::{
    check_derivation, check_instance, substitute_derivation, CheckError, CheckReport, FamilyPremises, NodeReport,
    RuleInstance, SpotCheck, DEFAULT_DEPTH,
};
pub use derivation::{Derivation, RuleId, UniformFamily, VacuousPolicy};
pub use json::{derivation_from_json, derivation_to_json, DerivationFile, DerivationJson};
pub use semantic::{schematic_sound, SchematicEval};
