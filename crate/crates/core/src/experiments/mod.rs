//! Seeded soundness fuzzing, a sampler for the infinite-sum inequality
//! behind the left quantifier rule, a random derivation generator and the
//! canned reproductions bundled by the command line.

mod fuzz;
mod gen;
mod lemma1;
mod random;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::calculus::{
    check_derivation, check_instance, prop1_derivation, prop1_signature, prop3_derivation, prop3_signature,
    prop3_vacuous_instance, Language, RuleId, VacuousPolicy, DEFAULT_DEPTH,
};
use crate::semantics::{eval_parametric, fixed_points, QuantifierMode, Valuation};
use crate::syntax::parse_formula;

pub use fuzz::{
    evaluate_instance, fuzz_language, fuzz_rule, sample_instance, thm1_instance, Counterexample, FuzzConfig,
    FuzzInstance, FuzzReport, Outcome, SequentValue, FUZZ_RULES,
};
pub use gen::{closed_conclusions, random_derivation};
pub use lemma1::{lemma1_sample, run_lemma1, sample_lemma1_triple, tail_case, Lemma1Summary, LEMMA1_MAX_DEN, LEMMA1_MAX_LEN};
pub use random::{Bounds, Sampler, FUZZ_SIGNATURE, TEMPLATE_VAR};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    Thm1,
    Lemma1,
    Thm2Fuzz,
    Prop1,
    Prop2,
    Prop3,
    VacuousCompare,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 7] = [
        ExperimentId::Thm1,
        ExperimentId::Lemma1,
        ExperimentId::Thm2Fuzz,
        ExperimentId::Prop1,
        ExperimentId::Prop2,
        ExperimentId::Prop3,
        ExperimentId::VacuousCompare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::Thm1 => "thm1",
            ExperimentId::Lemma1 => "lemma1",
            ExperimentId::Thm2Fuzz => "thm2-fuzz",
            ExperimentId::Prop1 => "prop1",
            ExperimentId::Prop2 => "prop2",
            ExperimentId::Prop3 => "prop3",
            ExperimentId::VacuousCompare => "vacuous-compare",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ExperimentId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A rule instance with sound premises and an unsound conclusion was found.
    FailSoundness,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::FailSoundness => "fail-soundness",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentResult {
    pub id: String,
    pub status: Status,
    pub evidence: Value,
    pub seed: u64,
    pub runtime_ms: u64,
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Fuzzes one rule. The status reports what was found, not whether it was
/// expected: `fail-soundness` whenever some sample is a violation.
pub fn cmd_fuzz_rule(cfg: &FuzzConfig) -> Result<ExperimentResult, String> {
    let report = fuzz_rule(cfg)?;
    let status = if report.violations > 0 {
        Status::FailSoundness
    } else if report.rejected > 0 || report.errors > 0 {
        Status::Fail
    } else {
        Status::Pass
    };
    Ok(ExperimentResult {
        id: format!("fuzz-{}-{}", cfg.rule, mode_name(cfg.mode)),
        status,
        seed: cfg.seed,
        runtime_ms: report.runtime_ms,
        evidence: serde_json::to_value(&report).expect("report serializes"),
    })
}

fn mode_name(mode: QuantifierMode) -> &'static str {
    match mode {
        QuantifierMode::Sup => "sup",
        QuantifierMode::Sum => "sum",
    }
}

/// Runs one canned experiment and compares it with its expected outcome.
pub fn cmd_repro(id: ExperimentId, seed: u64) -> ExperimentResult {
    let started = Instant::now();
    let (status, evidence) = match id {
        ExperimentId::Thm1 => repro_thm1(),
        ExperimentId::Lemma1 => repro_lemma1(seed),
        ExperimentId::Thm2Fuzz => repro_thm2(seed),
        ExperimentId::Prop1 => repro_prop1(),
        ExperimentId::Prop2 => repro_prop2(),
        ExperimentId::Prop3 => repro_prop3(),
        ExperimentId::VacuousCompare => repro_vacuous(),
    };
    ExperimentResult {
        id: id.name().to_string(),
        status,
        evidence,
        seed,
        runtime_ms: started.elapsed().as_millis() as u64,
    }
}

fn repro_thm1() -> (Status, Value) {
    let mut modes = serde_json::Map::new();
    let mut ok = true;
    for mode in [QuantifierMode::Sup, QuantifierMode::Sum] {
        let (v, inst) = thm1_instance(mode);
        match evaluate_instance(&v, &inst) {
            Ok(out) => {
                // Sup quantifiers break the rule; sum quantifiers keep it sound.
                ok &= out.premises_sound && out.violation == (mode == QuantifierMode::Sup);
                modes.insert(
                    mode_name(mode).into(),
                    json!({ "valuation": v.render(), "outcome": out }),
                );
            }
            Err(e) => {
                ok = false;
                modes.insert(mode_name(mode).into(), json!({ "error": e.to_string() }));
            }
        }
    }
    (pass_if(ok), Value::Object(modes))
}

fn repro_lemma1(seed: u64) -> (Status, Value) {
    let s = run_lemma1(DEFAULT_SAMPLES, seed);
    let ok = s.hypothesis_failures == 0 && s.conclusion_failures == 0 && s.tail_cases.iter().all(|&n| n > 0);
    (pass_if(ok), serde_json::to_value(&s).expect("summary serializes"))
}

fn repro_thm2(seed: u64) -> (Status, Value) {
    let mut ok = true;
    let mut rules = Vec::new();
    for rule in FUZZ_RULES {
        let r = fuzz_rule(&FuzzConfig::new(rule, QuantifierMode::Sum, DEFAULT_SAMPLES, seed)).expect("valid config");
        ok &= r.violations == 0 && r.rejected == 0 && r.errors == 0;
        rules.push(json!({
            "rule": rule,
            "samples": r.samples,
            "premisesSound": r.premises_sound,
            "violations": r.violations,
            "rejected": r.rejected,
            "errors": r.errors,
            "runtimeMs": r.runtime_ms,
        }));
    }
    let status = if ok { Status::Pass } else { Status::FailSoundness };
    (status, json!({ "mode": "sum", "rules": rules }))
}

fn repro_prop1() -> (Status, Value) {
    let lang = Language::new(prop1_signature()).expect("built-in signature");
    let built = match prop1_derivation(&lang, DEFAULT_DEPTH as u64) {
        Ok(b) => b,
        Err(e) => return (Status::Fail, json!({ "error": e.to_string() })),
    };
    let report = check_derivation(&lang, &built.derivation, VacuousPolicy::Multiplicative, DEFAULT_DEPTH);
    let certified: Vec<&str> = report.certified().collect();
    let witnesses: Vec<String> = built.witnesses.iter().map(ToString::to_string).collect();
    let all_witnessed = witnesses.iter().all(|w| certified.contains(&w.as_str()));
    let root = built.derivation.conclusion.to_string();
    let ok = report.ok && all_witnessed && certified.first() == Some(&root.as_str());
    (
        pass_if(ok),
        json!({ "conclusion": root, "witnesses": witnesses, "report": report }),
    )
}

fn repro_prop2() -> (Status, Value) {
    let run = || -> Result<Value, crate::semantics::EvalError> {
        let mut v = Valuation::new(prop3_signature(), QuantifierMode::Sum)?;
        let tl = parse_formula("T(l)", v.signature())?;
        v.set_unknown(&tl)?;
        let f = parse_formula("~Ex x T(l)", v.signature())?;
        let pl = eval_parametric(&v, &f)?;
        let fixed = fixed_points(&pl);
        Ok(json!({ "formula": f.to_string(), "function": pl.to_json(), "fixedPoints": fixed }))
    };
    match run() {
        Ok(ev) => {
            let expected = json!([
                { "lo": "0", "hi": "0", "closedLo": true, "closedHi": true, "a": "0", "b": "1" },
                { "lo": "0", "hi": "1", "closedLo": false, "closedHi": true, "a": "0", "b": "0" },
            ]);
            let ok = ev["function"]["pieces"] == expected && ev["fixedPoints"] == json!([]);
            (pass_if(ok), ev)
        }
        Err(e) => (Status::Fail, json!({ "error": e.to_string() })),
    }
}

fn repro_prop3() -> (Status, Value) {
    let lang = Language::new(prop3_signature()).expect("built-in signature");
    let d = prop3_derivation(&lang).expect("built-in derivation");
    let report = check_derivation(&lang, &d, VacuousPolicy::Multiplicative, DEFAULT_DEPTH);
    let conclusion = d.conclusion.to_string();
    let ok = report.ok && conclusion == "|- ~Ex x T(l)";
    (pass_if(ok), json!({ "conclusion": conclusion, "report": report }))
}

fn repro_vacuous() -> (Status, Value) {
    let lang = Language::new(prop3_signature()).expect("built-in signature");
    let d = prop3_derivation(&lang).expect("built-in derivation");
    let single = prop3_vacuous_instance(&lang).expect("built-in instance");
    let mut rows = Vec::new();
    let mut ok = true;
    for policy in [VacuousPolicy::Multiplicative, VacuousPolicy::Additive] {
        let report = check_derivation(&lang, &d, policy, DEFAULT_DEPTH);
        let failure = report.failure().cloned();
        let instance = check_instance(&lang, &single, policy);
        let expected = match policy {
            VacuousPolicy::Multiplicative => report.ok && instance.is_err(),
            VacuousPolicy::Additive => {
                !report.ok && failure.as_ref().map(|f| f.rule) == Some(RuleId::ExistsROmega) && instance.is_ok()
            }
        };
        ok &= expected;
        rows.push(json!({
            "policy": policy,
            "prop3Derivation": { "ok": report.ok, "failure": failure },
            "singlePremiseInstance": {
                "sequent": single.conclusion.to_string(),
                "ok": instance.is_ok(),
                "message": instance.err().map(|e| e.to_string()),
            },
        }));
    }
    (pass_if(ok), json!({ "policies": rows }))
}

#[cfg(test)]
mod tests;
