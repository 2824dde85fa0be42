use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::cedent::{Cedent, FormulaFamily, Language, SchematicSequent, INDEX_VAR};
use super::derivation::{Derivation, RuleId, UniformFamily, VacuousPolicy};
use crate::multiset::Multiplicity;
use crate::syntax::{parse_formula, Formula, Symbol, SyntaxError, Term, TRUTH};

pub const DEFAULT_DEPTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{rule}: expected {expected} premise(s), found {found}")]
    PremiseCount { rule: RuleId, expected: usize, found: usize },
    #[error("{rule}: {message}")]
    Shape { rule: RuleId, message: String },
    #[error("{rule}: multiplicity mismatch for `{formula}` in the {side}: expected {expected}, found {found}")]
    Multiplicity {
        rule: RuleId,
        side: String,
        formula: String,
        expected: String,
        found: String,
    },
    #[error("{rule}: family indexing mismatch: {message}")]
    Family { rule: RuleId, message: String },
    #[error("{rule}: naming violation: {message}")]
    Naming { rule: RuleId, message: String },
    #[error("Recall: {0}")]
    Recall(String),
    #[error("signature lacks {0}")]
    Signature(String),
    #[error("malformed derivation: {0}")]
    Json(String),
}

fn shape(rule: RuleId, message: impl Into<String>) -> CheckError {
    CheckError::Shape {
        rule,
        message: message.into(),
    }
}

/// Premises of an omega-rule given by explicit members below `start` and a
/// template conclusion in which `var` stands for the index.
#[derive(Debug, Clone)]
pub struct FamilyPremises {
    pub var: Symbol,
    pub start: u64,
    pub explicit: Vec<SchematicSequent>,
    pub template: SchematicSequent,
}

#[derive(Debug, Clone)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub conclusion: SchematicSequent,
    pub premises: Vec<SchematicSequent>,
    pub family: Option<FamilyPremises>,
    pub principal: Option<Formula>,
}

impl RuleInstance {
    pub fn new(rule: RuleId, premises: Vec<SchematicSequent>, conclusion: SchematicSequent) -> Self {
        RuleInstance {
            rule,
            conclusion,
            premises,
            family: None,
            principal: None,
        }
    }

    pub fn with_family(conclusion: SchematicSequent, family: FamilyPremises) -> Self {
        RuleInstance {
            rule: RuleId::ExistsLOmega,
            conclusion,
            premises: Vec::new(),
            family: Some(family),
            principal: None,
        }
    }
}

/// The sentence `c` names, if `c` is a canonical name.
fn named(lang: &Language, c: &Symbol) -> Result<Option<Formula>, CheckError> {
    if let Some(f) = lang.signature().named_formula(c) {
        return Ok(Some(f));
    }
    if let Some(inner) = c.as_str().strip_prefix("quote(").and_then(|s| s.strip_suffix(')')) {
        let f = parse_formula(inner, lang.signature())?;
        if lang.signature().name_of(&f)? == *c {
            return Ok(Some(lang.normalize(&f)?));
        }
    }
    Ok(None)
}

fn compare(rule: RuleId, side: &str, expected: &Cedent, found: &Cedent) -> Result<(), CheckError> {
    if expected == found {
        return Ok(());
    }
    if expected.families() == found.families() {
        let e: Vec<_> = expected.finite().formulas().collect();
        let f: Vec<_> = found.finite().formulas().collect();
        if e == f {
            for (a, m) in expected.finite().iter() {
                let n = found.finite().get(a).expect("same support");
                if m != n {
                    return Err(CheckError::Multiplicity {
                        rule,
                        side: side.to_string(),
                        formula: a.to_string(),
                        expected: m.to_string(),
                        found: n.to_string(),
                    });
                }
            }
        }
    }
    Err(shape(rule, format!("{side}: expected `{expected}`, found `{found}`")))
}

fn compare_sequent(rule: RuleId, what: &str, expected: &SchematicSequent, found: &SchematicSequent) -> Result<(), CheckError> {
    compare(rule, &format!("{what} antecedent"), &expected.ant, &found.ant)?;
    compare(rule, &format!("{what} succedent"), &expected.suc, &found.suc)
}

fn premise_count(inst: &RuleInstance, n: usize) -> Result<(), CheckError> {
    if inst.family.is_some() {
        return Err(shape(inst.rule, "unexpected premise family"));
    }
    if inst.premises.len() != n {
        return Err(CheckError::PremiseCount {
            rule: inst.rule,
            expected: n,
            found: inst.premises.len(),
        });
    }
    Ok(())
}

/// Candidate principal formulas of the conclusion on one side, filtered by shape.
fn candidates(
    lang: &Language,
    inst: &RuleInstance,
    side: &Cedent,
    fits: impl Fn(&Formula) -> bool,
) -> Result<Vec<Formula>, CheckError> {
    let all = match &inst.principal {
        Some(p) => vec![lang.normalize(p)?],
        None => side.principal_candidates(lang)?,
    };
    Ok(all.into_iter().filter(|f| fits(f)).collect())
}

/// Either side may have absorbed the shared formula into a family, so both
/// sides contribute candidates, as does the first common instance of two
/// families with the same template.
fn init_candidates(lang: &Language, concl: &SchematicSequent) -> Result<Vec<Formula>, CheckError> {
    let mut out = concl.ant.principal_candidates(lang)?;
    out.extend(concl.suc.principal_candidates(lang)?);
    for f in concl.ant.families() {
        for g in concl.suc.families().iter().filter(|g| g.template == f.template) {
            out.push(f.instance(lang, f.start.max(g.start))?);
        }
    }
    Ok(out)
}

/// Runs `attempt` on each candidate; succeeds on the first success.
fn first_success(
    rule: RuleId,
    what: &str,
    cands: Vec<Formula>,
    mut attempt: impl FnMut(&Formula) -> Result<(), CheckError>,
) -> Result<(), CheckError> {
    let mut last = None;
    for c in &cands {
        match attempt(c) {
            Ok(()) => return Ok(()),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| shape(rule, format!("no principal formula of the form {what}"))))
}

fn removed(lang: &Language, rule: RuleId, c: &Cedent, f: &Formula) -> Result<Cedent, CheckError> {
    c.remove_one(lang, f)?
        .ok_or_else(|| shape(rule, format!("`{f}` does not occur in `{c}`")))
}

/// Confirms that `inst.conclusion` follows from its premises by `inst.rule`.
pub fn check_instance(lang: &Language, inst: &RuleInstance, policy: VacuousPolicy) -> Result<(), CheckError> {
    let rule = inst.rule;
    let concl = &inst.conclusion;
    match rule {
        RuleId::Init => {
            premise_count(inst, 0)?;
            let cands = match &inst.principal {
                Some(p) => vec![lang.normalize(p)?],
                None => init_candidates(lang, concl)?,
            };
            first_success(rule, "A on both sides", cands, |a| {
                let both = concl.ant.remove_one(lang, a)?.is_some() && concl.suc.remove_one(lang, a)?.is_some();
                if both {
                    Ok(())
                } else {
                    Err(shape(rule, format!("`{a}` does not occur on both sides")))
                }
            })
        }
        RuleId::NegL => {
            premise_count(inst, 1)?;
            let cands = candidates(lang, inst, &concl.ant, |f| matches!(f, Formula::Neg(_)))?;
            first_success(rule, "~A in the antecedent", cands, |f| {
                let Formula::Neg(a) = f else { unreachable!() };
                let expected = SchematicSequent::new(removed(lang, rule, &concl.ant, f)?, concl.suc.add(lang, a, Multiplicity::ONE)?);
                compare_sequent(rule, "premise", &expected, &inst.premises[0])
            })
        }
        RuleId::NegR => {
            premise_count(inst, 1)?;
            let cands = candidates(lang, inst, &concl.suc, |f| matches!(f, Formula::Neg(_)))?;
            first_success(rule, "~A in the succedent", cands, |f| {
                let Formula::Neg(a) = f else { unreachable!() };
                let expected = SchematicSequent::new(concl.ant.add(lang, a, Multiplicity::ONE)?, removed(lang, rule, &concl.suc, f)?);
                compare_sequent(rule, "premise", &expected, &inst.premises[0])
            })
        }
        RuleId::CondR => {
            premise_count(inst, 1)?;
            let cands = candidates(lang, inst, &concl.suc, |f| matches!(f, Formula::Cond(..)))?;
            first_success(rule, "A -> B in the succedent", cands, |f| {
                let Formula::Cond(a, b) = f else { unreachable!() };
                let expected = SchematicSequent::new(
                    concl.ant.add(lang, a, Multiplicity::ONE)?,
                    removed(lang, rule, &concl.suc, f)?.add(lang, b, Multiplicity::ONE)?,
                );
                compare_sequent(rule, "premise", &expected, &inst.premises[0])
            })
        }
        RuleId::CondL => {
            premise_count(inst, 2)?;
            let (left, right) = (&inst.premises[0], &inst.premises[1]);
            let cands = candidates(lang, inst, &concl.ant, |f| matches!(f, Formula::Cond(..)))?;
            first_success(rule, "A -> B in the antecedent", cands, |f| {
                let Formula::Cond(a, b) = f else { unreachable!() };
                let delta = removed(lang, rule, &left.suc, a)?;
                let gamma2 = removed(lang, rule, &right.ant, b)?;
                let expected = SchematicSequent::new(
                    left.ant.union(lang, &gamma2)?.add(lang, f, Multiplicity::ONE)?,
                    delta.union(lang, &right.suc)?,
                );
                compare_sequent(rule, "conclusion", &expected, concl)
            })
        }
        RuleId::TL | RuleId::TR => {
            premise_count(inst, 1)?;
            let side = if rule == RuleId::TL { &concl.ant } else { &concl.suc };
            let is_truth = |f: &Formula| matches!(f, Formula::Atom(p, args) if p.as_str() == TRUTH && args.len() == 1);
            let cands = candidates(lang, inst, side, is_truth)?;
            first_success(rule, "T(t)", cands, |f| {
                let Formula::Atom(_, args) = f else { unreachable!() };
                let a = match &args[0] {
                    Term::Const(c) => named(lang, c)?,
                    _ => None,
                }
                .ok_or_else(|| CheckError::Naming {
                    rule,
                    message: format!("`{}` does not normalize to the canonical name of a sentence", args[0]),
                })?;
                let expected = if rule == RuleId::TL {
                    SchematicSequent::new(removed(lang, rule, &concl.ant, f)?.add(lang, &a, Multiplicity::ONE)?, concl.suc.clone())
                } else {
                    SchematicSequent::new(concl.ant.clone(), removed(lang, rule, &concl.suc, f)?.add(lang, &a, Multiplicity::ONE)?)
                };
                compare_sequent(rule, "premise", &expected, &inst.premises[0])
            })
        }
        RuleId::ExistsROmega => {
            premise_count(inst, 1)?;
            let cands = candidates(lang, inst, &concl.suc, |f| matches!(f, Formula::Exists(..)))?;
            first_success(rule, "Ex x A in the succedent", cands, |f| {
                let Formula::Exists(x, a) = f else { unreachable!() };
                let rest = removed(lang, rule, &concl.suc, f)?;
                let suc = if policy == VacuousPolicy::Additive && !a.has_free(x) {
                    rest.add(lang, a, Multiplicity::ONE)?
                } else {
                    rest.add_family(lang, instance_family(a, x, 0))?
                };
                compare_sequent(rule, "premise", &SchematicSequent::new(concl.ant.clone(), suc), &inst.premises[0])
            })
        }
        RuleId::ExistsLOmega => {
            let cands = candidates(lang, inst, &concl.ant, |f| matches!(f, Formula::Exists(..)))?;
            first_success(rule, "Ex x A in the antecedent", cands, |f| {
                let Formula::Exists(x, a) = f else { unreachable!() };
                let rest = removed(lang, rule, &concl.ant, f)?;
                match &inst.family {
                    Some(fam) => check_exists_left_family(lang, inst, fam, x, a, &rest),
                    None => {
                        if !(policy == VacuousPolicy::Additive && !a.has_free(x)) {
                            return Err(CheckError::Family {
                                rule,
                                message: "a premise family is required (a single premise is only allowed for vacuous quantification under the additive policy)".into(),
                            });
                        }
                        premise_count(inst, 1)?;
                        let expected = SchematicSequent::new(rest.add(lang, a, Multiplicity::ONE)?, concl.suc.clone());
                        compare_sequent(rule, "premise", &expected, &inst.premises[0])
                    }
                }
            })
        }
        RuleId::Recall => Err(CheckError::Recall("a recall leaf is only meaningful inside a premise family".into())),
    }
}

/// `{A[t_i/x] : i >= start}` as a family over the canonical index.
fn instance_family(a: &Formula, x: &Symbol, start: u64) -> FormulaFamily {
    let template = a.substitute(x, &Term::var(INDEX_VAR));
    FormulaFamily::new(INDEX_VAR, start, template, Multiplicity::ONE)
}

/// Union over all indices `>= start` of a template cedent.
fn lift(lang: &Language, rule: RuleId, c: &Cedent, var: &Symbol, start: u64) -> Result<Cedent, CheckError> {
    let mut out = Cedent::empty();
    for (f, m) in c.finite().iter() {
        out = if f.has_free(var) {
            out.add_family(lang, FormulaFamily::new(var.as_str(), start, f.clone(), m))?
        } else {
            out.add(lang, f, Multiplicity::Omega)?
        };
    }
    for fam in c.families() {
        if fam.template.has_free(var) {
            return Err(CheckError::Family {
                rule,
                message: format!("family `{fam}` depends on the outer index `{var}`"),
            });
        }
        out = out.add_family(
            lang,
            FormulaFamily {
                multiplicity: Multiplicity::Omega,
                ..fam.clone()
            },
        )?;
    }
    Ok(out)
}

fn check_exists_left_family(
    lang: &Language,
    inst: &RuleInstance,
    fam: &FamilyPremises,
    x: &Symbol,
    a: &Formula,
    rest: &Cedent,
) -> Result<(), CheckError> {
    let rule = inst.rule;
    if !inst.premises.is_empty() {
        return Err(shape(rule, "both a premise list and a premise family were given"));
    }
    if fam.explicit.len() as u64 != fam.start {
        return Err(CheckError::Family {
            rule,
            message: format!("{} explicit members for start index {}", fam.explicit.len(), fam.start),
        });
    }
    if fam.var.as_str() == INDEX_VAR || fam.template.binds(&fam.var) || a.binds(&fam.var) {
        return Err(CheckError::Family {
            rule,
            message: format!("index variable `{}` must not be bound", fam.var),
        });
    }
    let mut gamma = Cedent::empty();
    let mut delta = Cedent::empty();
    for (i, s) in fam.explicit.iter().enumerate() {
        let principal = lang.normalize(&a.substitute(x, &lang.term(i as u64)))?;
        let g = s.ant.remove_one(lang, &principal)?.ok_or_else(|| CheckError::Family {
            rule,
            message: format!("member {i} lacks its principal formula `{principal}`"),
        })?;
        gamma = gamma.union(lang, &g)?;
        delta = delta.union(lang, &s.suc)?;
    }
    let principal = lang.normalize(&a.substitute(x, &Term::Var(fam.var.clone())))?;
    let g = fam.template.ant.remove_one(lang, &principal)?.ok_or_else(|| CheckError::Family {
        rule,
        message: format!("template lacks its principal formula `{principal}`"),
    })?;
    gamma = gamma.union(lang, &lift(lang, rule, &g, &fam.var, fam.start)?)?;
    delta = delta.union(lang, &lift(lang, rule, &fam.template.suc, &fam.var, fam.start)?)?;
    compare(rule, "conclusion antecedent (without Ex x A)", &gamma, rest)?;
    compare(rule, "conclusion succedent", &delta, &inst.conclusion.suc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeReport {
    pub path: String,
    pub rule: RuleId,
    pub ok: bool,
    pub sequent: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpotCheck {
    pub path: String,
    pub index: u64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub ok: bool,
    pub policy: VacuousPolicy,
    pub instantiation_depth: usize,
    /// Template members are only instantiated at finitely many indices.
    pub bounded_family_verification: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_at: Option<String>,
    pub nodes: Vec<NodeReport>,
    pub family_spot_checks: Vec<SpotCheck>,
}

impl CheckReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Conclusions of every node that passed, as rendered text.
    pub fn certified(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().filter(|n| n.ok).map(|n| n.sequent.as_str())
    }

    pub fn failure(&self) -> Option<&NodeReport> {
        self.nodes.iter().find(|n| !n.ok)
    }
}

#[derive(Default)]
struct Acc {
    nodes: Vec<NodeReport>,
    spots: Vec<SpotCheck>,
}

struct Walker<'a> {
    lang: &'a Language,
    policy: VacuousPolicy,
    depth: usize,
}

/// Replaces `x` by `t` in every sequent of a derivation.
pub fn substitute_derivation(lang: &Language, d: &Derivation, x: &Symbol, t: &Term) -> Result<Derivation, SyntaxError> {
    Ok(Derivation {
        conclusion: d.conclusion.substitute(lang, x, t)?,
        rule: d.rule,
        premises: d.premises.iter().map(|p| substitute_derivation(lang, p, x, t)).collect::<Result<_, _>>()?,
        family: match &d.family {
            None => None,
            Some(f) if f.var == *x => Some(f.clone()),
            Some(f) => Some(UniformFamily {
                var: f.var.clone(),
                start: f.start,
                template: Box::new(substitute_derivation(lang, &f.template, x, t)?),
                explicit: f.explicit.iter().map(|e| substitute_derivation(lang, e, x, t)).collect::<Result<_, _>>()?,
            }),
        },
        principal: d.principal.as_ref().map(|p| p.substitute(x, t)),
        back: d.back,
    })
}

fn member_conclusion(lang: &Language, fam: &UniformFamily, j: u64) -> Result<SchematicSequent, SyntaxError> {
    if j < fam.start {
        Ok(fam.explicit[j as usize].conclusion.clone())
    } else {
        fam.template.conclusion.substitute(lang, &fam.var, &lang.term(j))
    }
}

/// Fills in the conclusions of `Recall` leaves that refer to `fam` from member `j`.
fn resolve(lang: &Language, d: &Derivation, fam: &UniformFamily, j: u64) -> Result<Derivation, SyntaxError> {
    if d.rule == RuleId::Recall {
        let mut out = d.clone();
        if let Some(b) = d.back.filter(|b| (1..=j).contains(b)) {
            let target = member_conclusion(lang, fam, j - b)?;
            if d.conclusion.is_empty_sequent() {
                out.conclusion = target;
            } else if d.conclusion != target {
                out.back = None;
            }
        } else {
            out.back = None;
        }
        return Ok(out);
    }
    Ok(Derivation {
        premises: d.premises.iter().map(|p| resolve(lang, p, fam, j)).collect::<Result<_, _>>()?,
        ..d.clone()
    })
}

impl SchematicSequent {
    fn is_empty_sequent(&self) -> bool {
        self.ant.is_empty() && self.suc.is_empty()
    }
}

impl Walker<'_> {
    fn record(&self, acc: &mut Acc, path: &str, d: &Derivation, result: Result<(), CheckError>) -> bool {
        let ok = result.is_ok();
        acc.nodes.push(NodeReport {
            path: path.to_string(),
            rule: d.rule,
            ok,
            sequent: d.conclusion.to_string(),
            message: result.err().map(|e| e.to_string()),
        });
        ok
    }

    /// Pre-order walk; returns false at the first failure.
    fn walk(&self, d: &Derivation, path: &str, member: Option<u64>, acc: &mut Acc) -> bool {
        if d.rule == RuleId::Recall {
            let result = match (member, d.back) {
                (None, _) => Err(CheckError::Recall("not inside a premise family".into())),
                (Some(j), Some(b)) if (1..=j).contains(&b) => Ok(()),
                (Some(j), _) => Err(CheckError::Recall(format!(
                    "member {j} cannot refer back to the requested member (or the stated conclusion differs)"
                ))),
            };
            return self.record(acc, path, d, result);
        }
        let family = d.family.as_ref().map(|f| FamilyPremises {
            var: f.var.clone(),
            start: f.start,
            explicit: f.explicit.iter().map(|e| e.conclusion.clone()).collect(),
            template: f.template.conclusion.clone(),
        });
        let inst = RuleInstance {
            rule: d.rule,
            conclusion: d.conclusion.clone(),
            premises: d.premises.iter().map(|p| p.conclusion.clone()).collect(),
            family,
            principal: d.principal.clone(),
        };
        let mut result = check_instance(self.lang, &inst, self.policy);
        if result.is_ok() {
            if let Some(f) = &d.family {
                result = self.template_uniform(f);
            }
        }
        if !self.record(acc, path, d, result) {
            return false;
        }
        for (i, p) in d.premises.iter().enumerate() {
            if !self.walk(p, &format!("{path}.{i}"), member, acc) {
                return false;
            }
        }
        match &d.family {
            Some(f) => self.walk_family(f, path, acc),
            None => true,
        }
    }

    fn template_uniform(&self, f: &UniformFamily) -> Result<(), CheckError> {
        let mut bad = None;
        f.template.visit(&mut |n| {
            if bad.is_none() && n.conclusion.binds(&f.var) {
                bad = Some(n.conclusion.to_string());
            }
        });
        match bad {
            Some(s) => Err(CheckError::Family {
                rule: RuleId::ExistsLOmega,
                message: format!("index `{}` occurs bound in template sequent `{s}`", f.var),
            }),
            None => Ok(()),
        }
    }

    fn member(&self, f: &UniformFamily, j: u64, path: &str) -> Acc {
        let mut acc = Acc::default();
        let prepared = if j < f.start {
            resolve(self.lang, &f.explicit[j as usize], f, j)
        } else {
            substitute_derivation(self.lang, &f.template, &f.var, &self.lang.term(j)).and_then(|d| resolve(self.lang, &d, f, j))
        };
        let mpath = format!("{path}.family[{j}]");
        match prepared {
            Ok(d) => {
                self.walk(&d, &mpath, Some(j), &mut acc);
            }
            Err(e) => acc.nodes.push(NodeReport {
                path: mpath,
                rule: f.template.rule,
                ok: false,
                sequent: String::new(),
                message: Some(e.to_string()),
            }),
        }
        acc
    }

    fn walk_family(&self, f: &UniformFamily, path: &str, acc: &mut Acc) -> bool {
        for j in 0..f.start {
            let sub = self.member(f, j, path);
            let ok = sub.nodes.iter().all(|n| n.ok);
            acc.nodes.extend(sub.nodes);
            acc.spots.extend(sub.spots);
            if !ok {
                return false;
            }
        }
        let indices: Vec<u64> = (f.start..f.start + self.depth as u64).collect();
        let results: Vec<(u64, Acc)> = indices.par_iter().map(|&j| (j, self.member(f, j, path))).collect();
        for (j, sub) in results {
            let ok = sub.nodes.iter().all(|n| n.ok);
            acc.spots.push(SpotCheck {
                path: path.to_string(),
                index: j,
                ok,
            });
            acc.nodes.extend(sub.nodes);
            acc.spots.extend(sub.spots);
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Checks every node of `d`. Families are verified through their template
/// conclusion and by instantiating the template at `depth` indices.
pub fn check_derivation(lang: &Language, d: &Derivation, policy: VacuousPolicy, depth: usize) -> CheckReport {
    let walker = Walker {
        lang,
        policy,
        depth: depth.max(1),
    };
    let mut acc = Acc::default();
    let ok = walker.walk(d, "root", None, &mut acc);
    let mut bounded = false;
    d.visit(&mut |n| bounded |= n.family.is_some());
    CheckReport {
        ok,
        policy,
        instantiation_depth: depth.max(1),
        bounded_family_verification: bounded,
        failed_at: acc.nodes.iter().find(|n| !n.ok).map(|n| n.path.clone()),
        nodes: acc.nodes,
        family_spot_checks: acc.spots,
    }
}
