use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::random::{Bounds, Sampler, FUZZ_SIGNATURE, TEMPLATE_VAR};
use crate::calculus::{
    check_instance, Cedent, FamilyPremises, FormulaFamily, Language, RuleId, RuleInstance, SchematicSequent,
    VacuousPolicy,
};
use crate::multiset::Multiplicity;
use crate::calculus::schematic_sound;
use crate::semantics::{QuantifierMode, UnitValue, Valuation};
use crate::syntax::{Formula, Signature, Symbol, Term};

/// The rules covered by the soundness fuzzer.
pub const FUZZ_RULES: [RuleId; 7] = [
    RuleId::Init,
    RuleId::NegL,
    RuleId::NegR,
    RuleId::CondL,
    RuleId::CondR,
    RuleId::ExistsROmega,
    RuleId::ExistsLOmega,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzConfig {
    pub rule: RuleId,
    pub mode: QuantifierMode,
    pub samples: usize,
    pub seed: u64,
    pub bounds: Bounds,
}

impl FuzzConfig {
    pub fn new(rule: RuleId, mode: QuantifierMode, samples: usize, seed: u64) -> Self {
        FuzzConfig {
            rule,
            mode,
            samples,
            seed,
            bounds: Bounds::default(),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !FUZZ_RULES.contains(&self.rule) {
            return Err(format!("rule {} is not fuzzed (choose one of Init, NegL, NegR, CondL, CondR, ExistsRw, ExistsLw)", self.rule));
        }
        let b = &self.bounds;
        if self.samples == 0 || b.max_denominator == 0 || b.max_context_size == 0 || b.max_family_prefix == 0 {
            return Err("samples and all sampling bounds must be at least 1".into());
        }
        Ok(())
    }
}

/// A rule instance together with the premises that soundness is judged on.
/// For the left quantifier rule these are the members at every index up to
/// the first one past all explicit members and all constants of the
/// signature; later members are identical up to an unmentioned constant.
#[derive(Debug, Clone)]
pub struct FuzzInstance {
    pub instance: RuleInstance,
    pub premises: Vec<SchematicSequent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequentValue {
    pub sequent: String,
    pub antecedent: UnitValue,
    pub succedent: UnitValue,
    pub sound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Outcome {
    pub premises: Vec<SequentValue>,
    pub conclusion: SequentValue,
    pub premises_sound: bool,
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Counterexample {
    pub index: usize,
    pub valuation: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FuzzReport {
    pub rule: RuleId,
    pub mode: QuantifierMode,
    pub samples: usize,
    pub seed: u64,
    /// Samples whose premises were all sound.
    pub premises_sound: usize,
    pub violations: usize,
    /// Generated instances the checker rejected; always 0 unless the
    /// generator and the checker disagree about the rule.
    pub rejected: usize,
    pub errors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_rejection: Option<String>,
    pub runtime_ms: u64,
}

pub fn fuzz_language() -> Language {
    Language::new(Signature::parse(FUZZ_SIGNATURE).expect("fuzz signature parses")).expect("fuzz universe")
}

fn seq(ant: Cedent, suc: Cedent) -> SchematicSequent {
    SchematicSequent::new(ant, suc)
}

fn add(lang: &Language, c: &Cedent, f: &Formula) -> Cedent {
    c.add(lang, f, Multiplicity::ONE).expect("fuzz formulas normalize")
}

fn union(lang: &Language, a: &Cedent, b: &Cedent) -> Cedent {
    a.union(lang, b).expect("fuzz cedents normalize")
}

/// Union over every index `>= start` of a template cedent.
pub(crate) fn lift(lang: &Language, c: &Cedent, start: u64) -> Cedent {
    let var = Symbol::new(TEMPLATE_VAR);
    let mut out = Cedent::empty();
    for (f, m) in c.finite().iter() {
        out = if f.has_free(&var) {
            out.add_family(lang, FormulaFamily::new(TEMPLATE_VAR, start, f.clone(), m))
        } else {
            out.add(lang, f, Multiplicity::Omega)
        }
        .expect("fuzz cedents normalize");
    }
    for fam in c.families() {
        let omega = FormulaFamily {
            multiplicity: Multiplicity::Omega,
            ..fam.clone()
        };
        out = out.add_family(lang, omega).expect("fuzz cedents normalize");
    }
    out
}

/// Draws one instance of `rule` with random principal formulas and contexts.
pub fn sample_instance(s: &mut Sampler<'_>, rule: RuleId) -> FuzzInstance {
    let lang = s.lang;
    let plain = |rule, premises: Vec<SchematicSequent>, conclusion| FuzzInstance {
        instance: RuleInstance::new(rule, premises.clone(), conclusion),
        premises,
    };
    match rule {
        RuleId::Init => {
            let a = s.sentence();
            let (g, d) = (s.cedent(false, true), s.cedent(false, true));
            plain(rule, vec![], seq(add(lang, &g, &a), add(lang, &d, &a)))
        }
        RuleId::NegL => {
            let a = s.sentence();
            let (g, d) = (s.cedent(false, true), s.cedent(false, true));
            let p = seq(g.clone(), add(lang, &d, &a));
            plain(rule, vec![p], seq(add(lang, &g, &Formula::neg(a)), d))
        }
        RuleId::NegR => {
            let a = s.sentence();
            let (g, d) = (s.cedent(false, true), s.cedent(false, true));
            let p = seq(add(lang, &g, &a), d.clone());
            plain(rule, vec![p], seq(g, add(lang, &d, &Formula::neg(a))))
        }
        RuleId::CondL => {
            let (a, b) = (s.sentence(), s.sentence());
            let (g1, d1) = (s.cedent(false, true), s.cedent(false, true));
            let (g2, d2) = (s.cedent(false, true), s.cedent(false, true));
            let p1 = seq(g1.clone(), add(lang, &d1, &a));
            let p2 = seq(add(lang, &g2, &b), d2.clone());
            let c = seq(add(lang, &union(lang, &g1, &g2), &Formula::cond(a, b)), union(lang, &d1, &d2));
            plain(rule, vec![p1, p2], c)
        }
        RuleId::CondR => {
            let (a, b) = (s.sentence(), s.sentence());
            let (g, d) = (s.cedent(false, true), s.cedent(false, true));
            let p = seq(add(lang, &g, &a), add(lang, &d, &b));
            plain(rule, vec![p], seq(g, add(lang, &d, &Formula::cond(a, b))))
        }
        RuleId::ExistsROmega => {
            let a = s.body("x", false);
            let (g, d) = (s.cedent(false, true), s.cedent(false, true));
            let fam = FormulaFamily::new("x", 0, a.clone(), Multiplicity::ONE);
            let p = seq(g.clone(), d.add_family(lang, fam).expect("fuzz families normalize"));
            plain(rule, vec![p], seq(g, add(lang, &d, &Formula::exists("x", a))))
        }
        RuleId::ExistsLOmega => sample_exists_left(s),
        RuleId::TL | RuleId::TR | RuleId::Recall => panic!("rule {rule} is not fuzzed"),
    }
}

fn sample_exists_left(s: &mut Sampler<'_>) -> FuzzInstance {
    let lang = s.lang;
    let x = Symbol::new("x");
    let a = s.body("x", false);
    let k = rand::Rng::gen_range(&mut s.rng, 0..=s.bounds.max_family_prefix);
    let mut explicit = Vec::with_capacity(k);
    let (mut gamma, mut delta) = (Cedent::empty(), Cedent::empty());
    for i in 0..k {
        let (g, d) = (s.cedent(false, true), s.cedent(false, true));
        gamma = union(lang, &gamma, &g);
        delta = union(lang, &delta, &d);
        explicit.push(seq(add(lang, &g, &a.substitute(&x, &lang.term(i as u64))), d));
    }
    let (g, d) = (s.cedent(true, true), s.cedent(true, true));
    let template = seq(add(lang, &g, &a.substitute(&x, &Term::var(TEMPLATE_VAR))), d.clone());
    gamma = union(lang, &gamma, &lift(lang, &g, k as u64));
    delta = union(lang, &delta, &lift(lang, &d, k as u64));
    let conclusion = seq(add(lang, &gamma, &Formula::exists("x", a)), delta);

    // Indices past both the explicit prefix and the constants `a`, `b` only
    // differ by which unmentioned constant fills the index.
    let last = k.max(lang.signature().constants().len()) as u64;
    let var = Symbol::new(TEMPLATE_VAR);
    let mut premises = explicit.clone();
    for j in k as u64..=last {
        premises.push(template.substitute(lang, &var, &lang.term(j)).expect("fuzz templates instantiate"));
    }
    FuzzInstance {
        instance: RuleInstance::with_family(
            conclusion,
            FamilyPremises {
                var,
                start: k as u64,
                explicit,
                template,
            },
        ),
        premises,
    }
}

fn value_of(v: &Valuation, s: &SchematicSequent) -> Result<SequentValue, crate::semantics::EvalError> {
    let e = schematic_sound(v, s)?;
    Ok(SequentValue {
        sequent: s.to_string(),
        antecedent: e.antecedent,
        succedent: e.succedent,
        sound: e.sound,
    })
}

/// Judges one instance under `v`.
pub fn evaluate_instance(v: &Valuation, inst: &FuzzInstance) -> Result<Outcome, crate::semantics::EvalError> {
    let premises = inst.premises.iter().map(|p| value_of(v, p)).collect::<Result<Vec<_>, _>>()?;
    let conclusion = value_of(v, &inst.instance.conclusion)?;
    let premises_sound = premises.iter().all(|p| p.sound);
    Ok(Outcome {
        violation: premises_sound && !conclusion.sound,
        premises,
        conclusion,
        premises_sound,
    })
}

enum SampleResult {
    Judged { index: usize, valuation: String, outcome: Outcome },
    Rejected(String),
    Error,
}

fn run_sample(lang_sig: &Arc<Signature>, cfg: &FuzzConfig, index: usize) -> SampleResult {
    let lang = Language::from_arc(lang_sig.clone()).expect("fuzz universe");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let mut s = Sampler::new(rng, cfg.bounds, &lang);
    let v = s.valuation(cfg.mode);
    let inst = sample_instance(&mut s, cfg.rule);
    if let Err(e) = check_instance(&lang, &inst.instance, VacuousPolicy::Multiplicative) {
        return SampleResult::Rejected(format!("sample {index}: {} ({e})", inst.instance.conclusion));
    }
    match evaluate_instance(&v, &inst) {
        Ok(outcome) => SampleResult::Judged {
            index,
            valuation: v.render(),
            outcome,
        },
        Err(_) => SampleResult::Error,
    }
}

/// Samples `cfg.samples` instances and valuations. Samples are drawn from
/// independent streams of one seed, so the result does not depend on how
/// the work is scheduled.
pub fn fuzz_rule(cfg: &FuzzConfig) -> Result<FuzzReport, String> {
    cfg.validate()?;
    let started = Instant::now();
    let sig = Arc::new(Signature::parse(FUZZ_SIGNATURE).expect("fuzz signature parses"));
    let results: Vec<SampleResult> = (0..cfg.samples).into_par_iter().map(|i| run_sample(&sig, cfg, i)).collect();
    let mut report = FuzzReport {
        rule: cfg.rule,
        mode: cfg.mode,
        samples: cfg.samples,
        seed: cfg.seed,
        premises_sound: 0,
        violations: 0,
        rejected: 0,
        errors: 0,
        first_violation: None,
        first_rejection: None,
        runtime_ms: 0,
    };
    for r in results {
        match r {
            SampleResult::Judged { index, valuation, outcome } => {
                report.premises_sound += usize::from(outcome.premises_sound);
                if outcome.violation {
                    report.violations += 1;
                    if report.first_violation.is_none() {
                        report.first_violation = Some(Counterexample {
                            index,
                            valuation,
                            outcome,
                        });
                    }
                }
            }
            SampleResult::Rejected(msg) => {
                report.rejected += 1;
                report.first_rejection.get_or_insert(msg);
            }
            SampleResult::Error => report.errors += 1,
        }
    }
    report.runtime_ms = started.elapsed().as_millis() as u64;
    Ok(report)
}

/// `Q(a) |- Q(b), Ex x P(x)` from `Q(a) |- Q(b), {P(t_i)}` under the valuation
/// with `Q(a) = 1`, `Q(b) = 0` and every instance of `P` at `1/2`.
pub fn thm1_instance(mode: QuantifierMode) -> (Valuation, FuzzInstance) {
    let lang = fuzz_language();
    let mut v = Valuation::with_signature(lang.signature_arc().clone(), mode).expect("fuzz signature");
    let atom = |p: &str, c: &str| Formula::atom(p, vec![Term::constant(c)]);
    v.set_atom(&atom("Q", "a"), UnitValue::one()).expect("closed atom");
    v.set_atom(&atom("Q", "b"), UnitValue::zero()).expect("closed atom");
    v.set_default("P", UnitValue::ratio(1, 2)).expect("declared predicate");
    let body = Formula::atom("P", vec![Term::var("x")]);
    let g = Cedent::from_formulas(&lang, [(atom("Q", "a"), Multiplicity::ONE)]).expect("normalizes");
    let d = Cedent::from_formulas(&lang, [(atom("Q", "b"), Multiplicity::ONE)]).expect("normalizes");
    let fam = FormulaFamily::new("x", 0, body.clone(), Multiplicity::ONE);
    let premise = seq(g.clone(), d.add_family(&lang, fam).expect("normalizes"));
    let conclusion = seq(g, add(&lang, &d, &Formula::exists("x", body)));
    let inst = FuzzInstance {
        instance: RuleInstance::new(RuleId::ExistsROmega, vec![premise.clone()], conclusion),
        premises: vec![premise],
    };
    (v, inst)
}
