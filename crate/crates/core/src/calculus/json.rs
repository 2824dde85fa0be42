use serde::{Deserialize, Serialize};

use super::cedent::{Language, SchematicJson, SchematicSequent};
use super::check::CheckError;
use super::derivation::{Derivation, RuleId, UniformFamily};
use crate::syntax::{parse_formula, Signature, Symbol};

/// Wire form of one derivation node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationJson {
    /// Omitted for `Recall` leaves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seq: Option<SchematicJson>,
    pub rule: RuleId,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<DerivationJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub back: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub var: String,
    #[serde(default)]
    pub start: u64,
    pub template: Box<DerivationJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub explicit: Vec<DerivationJson>,
}

/// A derivation file: the signature text and the root node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationFile {
    pub signature: String,
    pub derivation: DerivationJson,
}

impl DerivationFile {
    pub fn parse(text: &str) -> Result<Self, CheckError> {
        serde_json::from_str(text).map_err(|e| CheckError::Json(e.to_string()))
    }

    pub fn load(&self) -> Result<(Language, Derivation), CheckError> {
        let lang = Language::new(Signature::parse(&self.signature)?)?;
        let d = derivation_from_json(&lang, &self.derivation)?;
        Ok((lang, d))
    }

    pub fn new(signature: &str, d: &Derivation) -> Self {
        DerivationFile {
            signature: signature.to_string(),
            derivation: derivation_to_json(d),
        }
    }
}

pub fn derivation_from_json(lang: &Language, j: &DerivationJson) -> Result<Derivation, CheckError> {
    let conclusion = match &j.seq {
        Some(s) => SchematicSequent::from_json(lang, s)?,
        None if j.rule == RuleId::Recall => SchematicSequent::default(),
        None => return Err(CheckError::Json(format!("{} node without a sequent", j.rule))),
    };
    if j.rule == RuleId::Recall && j.back.is_none() {
        return Err(CheckError::Json("Recall node without `back`".into()));
    }
    let family = match &j.family {
        None => None,
        Some(f) => Some(UniformFamily {
            var: Symbol::new(&f.var),
            start: f.start,
            template: Box::new(derivation_from_json(lang, &f.template)?),
            explicit: f
                .explicit
                .iter()
                .map(|e| derivation_from_json(lang, e))
                .collect::<Result<_, _>>()?,
        }),
    };
    Ok(Derivation {
        conclusion,
        rule: j.rule,
        premises: j
            .premises
            .iter()
            .map(|p| derivation_from_json(lang, p))
            .collect::<Result<_, _>>()?,
        family,
        principal: j
            .principal
            .as_deref()
            .map(|p| parse_formula(p, lang.signature()))
            .transpose()?,
        back: j.back,
    })
}

pub fn derivation_to_json(d: &Derivation) -> DerivationJson {
    let seq = (d.rule != RuleId::Recall || d.conclusion != SchematicSequent::default()).then(|| {
        serde_json::from_value(d.conclusion.to_json()).expect("cedent JSON round-trips")
    });
    DerivationJson {
        seq,
        rule: d.rule,
        premises: d.premises.iter().map(derivation_to_json).collect(),
        family: d.family.as_ref().map(|f| FamilyJson {
            var: f.var.as_str().to_string(),
            start: f.start,
            template: Box::new(derivation_to_json(&f.template)),
            explicit: f.explicit.iter().map(derivation_to_json).collect(),
        }),
        principal: d.principal.as_ref().map(ToString::to_string),
        back: d.back,
    }
}
