use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::cedent::SchematicSequent;
use crate::syntax::{Formula, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleId {
    Init,
    NegL,
    NegR,
    CondL,
    CondR,
    #[serde(rename = "ExistsLw")]
    ExistsLOmega,
    #[serde(rename = "ExistsRw")]
    ExistsROmega,
    TL,
    TR,
    /// Leaf standing for the conclusion of an earlier member of the
    /// innermost enclosing premise family.
    Recall,
}

impl RuleId {
    pub const ALL: [RuleId; 10] = [
        RuleId::Init,
        RuleId::NegL,
        RuleId::NegR,
        RuleId::CondL,
        RuleId::CondR,
        RuleId::ExistsLOmega,
        RuleId::ExistsROmega,
        RuleId::TL,
        RuleId::TR,
        RuleId::Recall,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Init => "Init",
            RuleId::NegL => "NegL",
            RuleId::NegR => "NegR",
            RuleId::CondL => "CondL",
            RuleId::CondR => "CondR",
            RuleId::ExistsLOmega => "ExistsLw",
            RuleId::ExistsROmega => "ExistsRw",
            RuleId::TL => "TL",
            RuleId::TR => "TR",
            RuleId::Recall => "Recall",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let key = s.to_ascii_lowercase().replace(['_', '-'], "");
        let r = match key.as_str() {
            "init" => RuleId::Init,
            "negl" => RuleId::NegL,
            "negr" => RuleId::NegR,
            "condl" => RuleId::CondL,
            "condr" => RuleId::CondR,
            "existslw" | "existslomega" | "el" => RuleId::ExistsLOmega,
            "existsrw" | "existsromega" | "er" => RuleId::ExistsROmega,
            "tl" => RuleId::TL,
            "tr" => RuleId::TR,
            "recall" => RuleId::Recall,
            _ => return Err(format!("unknown rule `{s}`")),
        };
        Ok(r)
    }
}

/// How quantification over a variable that does not occur is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VacuousPolicy {
    /// `Ex x A` with `x` not free in `A` behaves like omega copies of `A`.
    #[default]
    Multiplicative,
    /// `Ex x A` with `x` not free in `A` behaves like one copy of `A`.
    Additive,
}

impl FromStr for VacuousPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "mult" | "multiplicative" => Ok(VacuousPolicy::Multiplicative),
            "add" | "additive" => Ok(VacuousPolicy::Additive),
            _ => Err(format!("unknown policy `{s}` (expected mult or add)")),
        }
    }
}

impl fmt::Display for VacuousPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VacuousPolicy::Multiplicative => "multiplicative",
            VacuousPolicy::Additive => "additive",
        })
    }
}

/// Premises indexed by the term enumeration: explicit derivations for the
/// indices below `start`, then one template derivation in which `var`
/// stands for the index (as a term) at every later position.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformFamily {
    pub var: Symbol,
    pub start: u64,
    pub template: Box<Derivation>,
    pub explicit: Vec<Derivation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub conclusion: SchematicSequent,
    pub rule: RuleId,
    pub premises: Vec<Derivation>,
    pub family: Option<UniformFamily>,
    /// Optional hint naming the principal formula of the conclusion.
    pub principal: Option<Formula>,
    /// For `Recall`: how many members back the referenced member sits.
    pub back: Option<u64>,
}

impl Derivation {
    pub fn leaf(rule: RuleId, conclusion: SchematicSequent) -> Self {
        Derivation {
            conclusion,
            rule,
            premises: Vec::new(),
            family: None,
            principal: None,
            back: None,
        }
    }

    pub fn init(conclusion: SchematicSequent) -> Self {
        Self::leaf(RuleId::Init, conclusion)
    }

    pub fn unary(rule: RuleId, conclusion: SchematicSequent, premise: Derivation) -> Self {
        Derivation {
            premises: vec![premise],
            ..Self::leaf(rule, conclusion)
        }
    }

    pub fn binary(rule: RuleId, conclusion: SchematicSequent, left: Derivation, right: Derivation) -> Self {
        Derivation {
            premises: vec![left, right],
            ..Self::leaf(rule, conclusion)
        }
    }

    pub fn exists_left(conclusion: SchematicSequent, family: UniformFamily) -> Self {
        Derivation {
            family: Some(family),
            ..Self::leaf(RuleId::ExistsLOmega, conclusion)
        }
    }

    /// A reference to member `j - back` of the enclosing family. Its
    /// conclusion is supplied when the member is resolved.
    pub fn recall(back: u64) -> Self {
        Derivation {
            back: Some(back),
            ..Self::leaf(RuleId::Recall, SchematicSequent::default())
        }
    }

    pub fn with_principal(mut self, f: Formula) -> Self {
        self.principal = Some(f);
        self
    }

    /// Number of nodes, counting each family template and explicit member once.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
            + self
                .family
                .as_ref()
                .map_or(0, |f| f.template.size() + f.explicit.iter().map(Derivation::size).sum::<usize>())
    }

    pub fn height(&self) -> usize {
        let below = self
            .premises
            .iter()
            .chain(self.family.iter().flat_map(|f| std::iter::once(&*f.template).chain(f.explicit.iter())))
            .map(Derivation::height)
            .max();
        1 + below.unwrap_or(0)
    }

    /// Pre-order visit of the node and its ordinary premises (family
    /// members included).
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Derivation)) {
        f(self);
        for p in &self.premises {
            p.visit(f);
        }
        if let Some(fam) = &self.family {
            for e in &fam.explicit {
                e.visit(f);
            }
            fam.template.visit(f);
        }
    }
}
