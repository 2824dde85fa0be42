//! Acceptance suite. Runs every criterion in order, prints one line per
//! criterion and exits non-zero if any criterion fails or overruns its
//! time limit.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use mqlogic_core::calculus::{
    check_derivation, check_instance, prop1_derivation, prop1_signature, prop3_derivation, prop3_signature,
    prop3_vacuous_instance, Language, RuleId, VacuousPolicy,
};
use mqlogic_core::experiments::{
    evaluate_instance, fuzz_rule, lemma1_sample, run_lemma1, thm1_instance, FuzzConfig, FUZZ_RULES,
};
use mqlogic_core::semantics::{
    check_lemma1_instance, eval_formula, eval_parametric, fixed_points, instance_values, QuantifierMode, TailSeq,
    UnitValue, Valuation,
};
use mqlogic_core::{Formula, Symbol, Term};

use common::{body, iterate_f, quantifier_free_body, runner, sentence, valuation_data};

const SEED: u64 = 1;
const SAMPLES: usize = 10_000;
const PROPERTY_CASES: u32 = 10_000;
const FAMILY_DEPTH: u64 = 8;

type Outcome = Result<String, String>;

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn sup_counterexample() -> Outcome {
    let (v, inst) = thm1_instance(QuantifierMode::Sup);
    let atom = |p: &str, c: &str| Formula::atom(p, vec![Term::constant(c)]);
    let value = |a: &Formula| eval_formula(&v, a).map_err(|e| e.to_string());
    ensure(value(&atom("Q", "a"))? == UnitValue::one(), || "gamma part is not 1".into())?;
    ensure(value(&atom("Q", "b"))? == UnitValue::zero(), || "delta part is not 0".into())?;
    let fam = instance_values(&v, &Formula::atom("P", vec![Term::var("x")]), &Symbol::new("x")).map_err(|e| e.to_string())?;
    let half = UnitValue::ratio(1, 2);
    ensure(fam.tail == half && fam.explicit.iter().all(|(_, u)| *u == half), || {
        format!("instances are not all 1/2: {fam:?}")
    })?;

    let lang = Language::new(v.signature().clone()).map_err(|e| e.to_string())?;
    check_instance(&lang, &inst.instance, VacuousPolicy::Multiplicative).map_err(|e| e.to_string())?;
    let out = evaluate_instance(&v, &inst).map_err(|e| e.to_string())?;
    let [premise] = out.premises.as_slice() else {
        return Err(format!("expected one premise, found {}", out.premises.len()));
    };
    // Premise: min{1, 0 + 1/2 + 1/2 + ...} = 1. Conclusion: min{1, 0 + sup 1/2} = 1/2.
    ensure(premise.antecedent == UnitValue::one() && premise.succedent == UnitValue::one(), || {
        format!("premise values {} <= {}", premise.antecedent, premise.succedent)
    })?;
    ensure(out.conclusion.antecedent == UnitValue::one() && out.conclusion.succedent == half, || {
        format!("conclusion values {} <= {}", out.conclusion.antecedent, out.conclusion.succedent)
    })?;
    ensure(premise.sound && !out.conclusion.sound && out.violation, || "expected a soundness violation".into())?;
    Ok(format!("premise 1 <= 1 sound, conclusion 1 <= 1/2 unsound: {}", out.conclusion.sequent))
}

fn sum_soundness_fuzzing() -> Outcome {
    let per_rule = Duration::from_secs(60);
    let mut parts = Vec::new();
    for rule in FUZZ_RULES {
        let started = Instant::now();
        let r = fuzz_rule(&FuzzConfig::new(rule, QuantifierMode::Sum, SAMPLES, SEED))?;
        let elapsed = started.elapsed();
        ensure(r.samples == SAMPLES, || format!("{rule}: ran {} samples", r.samples))?;
        ensure(r.violations == 0, || format!("{rule}: {} violations, first {:?}", r.violations, r.first_violation))?;
        ensure(r.rejected == 0, || format!("{rule}: {} rejected, first {:?}", r.rejected, r.first_rejection))?;
        ensure(r.errors == 0, || format!("{rule}: {} evaluation errors", r.errors))?;
        ensure(r.premises_sound > 0, || format!("{rule}: no sample had sound premises"))?;
        ensure(elapsed < per_rule, || format!("{rule}: {} ms exceeds {} ms", elapsed.as_millis(), per_rule.as_millis()))?;
        parts.push(format!("{rule} {}/{} ({} ms)", r.premises_sound, r.samples, elapsed.as_millis()));
    }
    Ok(format!("0 violations; sound premises {}", parts.join(", ")))
}

/// `1 - min{1, sg + (1 - min{1, sx})}` and `min{1, sd}` by naive summation
/// over the explicit prefix, valid when every tail term is 0.
fn naive_inequality(g: &TailSeq, c: &TailSeq, d: &TailSeq) -> (BigRational, BigRational, bool) {
    let one = BigRational::one();
    let min1 = |x: BigRational| if x > one { one.clone() } else { x };
    let mut sg = BigRational::zero();
    let mut sx = BigRational::zero();
    let mut sd = BigRational::zero();
    for v in &g.explicit {
        sg += &one - v.rational();
    }
    for v in &c.explicit {
        sx += v.rational();
    }
    for v in &d.explicit {
        sd += v.rational();
    }
    let n = g.explicit.len().max(c.explicit.len()).max(d.explicit.len());
    let hypothesis = (0..n).all(|i| {
        let (gi, ci, di) = (g.at(i).rational(), c.at(i).rational(), d.at(i).rational());
        &one - min1((&one - gi) + (&one - ci)) <= *di
    });
    let lhs = &one - min1(sg + (&one - min1(sx)));
    (lhs, min1(sd), hypothesis)
}

fn infinite_sum_inequality() -> Outcome {
    let summary = run_lemma1(SAMPLES, SEED);
    ensure(summary.hypothesis_failures == 0, || format!("{} samples violate the hypothesis", summary.hypothesis_failures))?;
    ensure(summary.conclusion_failures == 0, || format!("first failure {:?}", summary.first_failure))?;
    ensure(summary.tail_cases.iter().all(|&n| n > 0), || format!("tail cases {:?}", summary.tail_cases))?;

    let (mut convergent, mut divergent) = (0usize, 0usize);
    for i in 0..SAMPLES {
        let (g, c, d) = lemma1_sample(SEED, i);
        let report = check_lemma1_instance(&g, &c, &d);
        let gamma_diverges = !g.tail.is_one();
        let delta_diverges = d.tail.is_positive();
        if gamma_diverges || delta_diverges {
            divergent += 1;
            // A divergent side clamps: the left side drops to 0 or the right side rises to 1.
            ensure(!gamma_diverges || report.lhs.is_zero(), || format!("sample {i}: lhs {} with divergent 1-gamma", report.lhs))?;
            ensure(!delta_diverges || report.rhs.is_one(), || format!("sample {i}: rhs {} with divergent delta", report.rhs))?;
            continue;
        }
        if c.tail.is_positive() {
            continue;
        }
        convergent += 1;
        let (lhs, rhs, hypothesis) = naive_inequality(&g, &c, &d);
        ensure(hypothesis, || format!("sample {i}: hypothesis fails under the oracle"))?;
        ensure(*report.lhs.rational() == lhs && *report.rhs.rational() == rhs, || {
            format!("sample {i}: oracle {lhs} <= {rhs}, checker {} <= {}", report.lhs, report.rhs)
        })?;
        ensure(report.conclusion_holds && lhs <= rhs, || format!("sample {i}: conclusion fails"))?;
    }
    ensure(convergent == summary.convergent, || format!("oracle saw {convergent} convergent samples, summary {}", summary.convergent))?;
    ensure(convergent > 0, || "no convergent samples".into())?;
    Ok(format!(
        "{SAMPLES} samples hold, tail cases {:?}, oracle agrees on {convergent} convergent, clamps checked on {divergent} divergent",
        summary.tail_cases
    ))
}

fn omega_inconsistency() -> Outcome {
    let lang = Language::new(prop1_signature()).map_err(|e| e.to_string())?;
    let built = prop1_derivation(&lang, FAMILY_DEPTH).map_err(|e| e.to_string())?;
    let report = check_derivation(&lang, &built.derivation, VacuousPolicy::Multiplicative, FAMILY_DEPTH as usize);
    ensure(report.ok, || format!("check failed at {:?}: {:?}", report.failed_at, report.failure()))?;
    let certified: Vec<&str> = report.certified().collect();

    // T fm(i, m) unfolds to T applied to i layers of quote(T(..)) around m.
    let mut term = "m".to_string();
    for i in 0..=FAMILY_DEPTH {
        let expected = format!("T({term}) |-");
        ensure(certified.contains(&expected.as_str()), || format!("index {i}: `{expected}` not certified"))?;
        term = format!("quote(T({term}))");
    }
    let root = "|- ~Ex x T(fm(x, m))";
    ensure(certified.contains(&root), || format!("`{root}` not certified"))?;
    ensure(built.derivation.conclusion.to_string() == root, || format!("root is {}", built.derivation.conclusion))?;
    Ok(format!("{} nodes certified, including T fm(i, m) |- for i = 0..={FAMILY_DEPTH} and {root}", certified.len()))
}

fn liar_no_fixed_point() -> Outcome {
    let mut v = Valuation::new(prop3_signature(), QuantifierMode::Sum).map_err(|e| e.to_string())?;
    let tl = Formula::atom("T", vec![Term::constant("l")]);
    v.set_unknown(&tl).map_err(|e| e.to_string())?;
    let liar = Formula::neg(Formula::exists("x", tl));
    let f = eval_parametric(&v, &liar).map_err(|e| e.to_string())?;
    let pieces = f.pieces();
    let shape: Vec<_> = pieces
        .iter()
        .map(|p| (p.lo.clone(), p.hi.clone(), p.closed_lo, p.closed_hi, p.a.clone(), p.b.clone()))
        .collect();
    let expected = vec![
        (q(0, 1), q(0, 1), true, true, q(0, 1), q(1, 1)),
        (q(0, 1), q(1, 1), false, true, q(0, 1), q(0, 1)),
    ];
    ensure(shape == expected, || format!("pieces {shape:?}"))?;
    let fixed = fixed_points(&f);
    ensure(fixed.is_empty(), || format!("fixed points {fixed:?}"))?;
    // Pointwise agreement with direct evaluation on a grid.
    for d in 1..=12 {
        for n in 0..=d {
            let x = UnitValue::ratio(n, d);
            let direct = eval_formula(&v.instantiate_unknown(x.clone()), &liar).map_err(|e| e.to_string())?;
            ensure(f.eval(x.rational()) == *direct.rational(), || format!("disagreement at {x}"))?;
        }
    }
    Ok("pieces {0} -> 1 and (0,1] -> 0, no fixed points".into())
}

fn vacuous_policy_dependence() -> Outcome {
    let lang = Language::new(prop3_signature()).map_err(|e| e.to_string())?;
    let d = prop3_derivation(&lang).map_err(|e| e.to_string())?;
    ensure(d.conclusion.to_string() == "|- ~Ex x T(l)", || format!("root is {}", d.conclusion))?;
    let mult = check_derivation(&lang, &d, VacuousPolicy::Multiplicative, 8);
    ensure(mult.ok, || format!("multiplicative check failed: {:?}", mult.failure()))?;
    let add = check_derivation(&lang, &d, VacuousPolicy::Additive, 8);
    let failure = add.failure().ok_or("additive check passed")?;
    ensure(!add.ok && failure.rule == RuleId::ExistsROmega, || format!("additive failure {failure:?}"))?;

    let single = prop3_vacuous_instance(&lang).map_err(|e| e.to_string())?;
    ensure(single.conclusion.to_string() == "Ex x T(l) |- T(l)", || format!("instance is {}", single.conclusion))?;
    check_instance(&lang, &single, VacuousPolicy::Additive).map_err(|e| format!("additive instance rejected: {e}"))?;
    ensure(check_instance(&lang, &single, VacuousPolicy::Multiplicative).is_err(), || {
        "single-premise instance accepted under the multiplicative policy".into()
    })?;
    Ok(format!(
        "mult certifies |- ~Ex x T(l); add fails at {} ({}); Ex x T(l) |- T(l) accepted under add",
        failure.path, failure.rule
    ))
}

fn eval_ok(v: &Valuation, a: &Formula) -> Result<UnitValue, TestCaseError> {
    eval_formula(v, a).map_err(|e| TestCaseError::fail(format!("{a}: {e}")))
}

fn semantic_properties() -> Outcome {
    let one = BigRational::one();
    let mut lines = Vec::new();
    let mut suite = |name: &str, result: Result<(), String>| -> Result<(), String> {
        result.map_err(|e| format!("{name}: {e}"))?;
        lines.push(name.to_string());
        Ok(())
    };

    suite(
        "range",
        runner(PROPERTY_CASES)
            .run(&(valuation_data(), sentence()), |(data, a)| {
                let v = data.build();
                let x = eval_ok(&v, &a)?;
                prop_assert!(*x.rational() >= BigRational::zero() && *x.rational() <= one);
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;

    suite(
        "involution",
        runner(PROPERTY_CASES)
            .run(&(valuation_data(), sentence()), |(data, a)| {
                let v = data.build();
                let x = eval_ok(&v, &a)?;
                let neg = eval_ok(&v, &Formula::neg(a.clone()))?;
                prop_assert_eq!(neg.rational(), &(&one - x.rational()));
                prop_assert_eq!(eval_ok(&v, &Formula::neg(Formula::neg(a)))?, x);
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;

    suite(
        "residuation",
        runner(PROPERTY_CASES)
            .run(&(valuation_data(), sentence(), sentence()), |(data, a, b)| {
                let v = data.build();
                let (x, y) = (eval_ok(&v, &a)?, eval_ok(&v, &b)?);
                let imp = eval_ok(&v, &Formula::cond(a, b))?;
                prop_assert_eq!(imp.is_one(), x <= y);
                let expected = (&one - x.rational() + y.rational()).min(one.clone());
                prop_assert_eq!(imp.rational(), &expected);
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;

    let x = Symbol::new("x");
    suite(
        "sum >= sup",
        runner(PROPERTY_CASES)
            .run(&(valuation_data(), quantifier_free_body()), |(data, a)| {
                let base = data.build();
                let sup = base.with_mode(QuantifierMode::Sup);
                let sum = base.with_mode(QuantifierMode::Sum);
                let ex = Formula::exists("x", a.clone());
                let (vs, vm) = (eval_ok(&sup, &ex)?, eval_ok(&sum, &ex)?);
                prop_assert!(vm >= vs, "sum {} < sup {} for {}", vm, vs, ex);

                let fam_sup = instance_values(&sup, &a, &x).map_err(|e| TestCaseError::fail(e.to_string()))?;
                let max = fam_sup.explicit.iter().map(|(_, u)| u).chain([&fam_sup.tail]).max().cloned();
                prop_assert_eq!(Some(vs.clone()), max);
                let fam_sum = instance_values(&sum, &a, &x).map_err(|e| TestCaseError::fail(e.to_string()))?;
                let total: BigRational = fam_sum.explicit.iter().map(|(_, u)| u.rational().clone()).sum();
                let expected = if fam_sum.tail.is_positive() { one.clone() } else { total.min(one.clone()) };
                prop_assert_eq!(vm.rational(), &expected);

                prop_assert_eq!(&fam_sum, &fam_sup);
                // With at most one positive instance and a zero tail the clauses agree.
                let positive = fam_sum.explicit.iter().filter(|(_, u)| u.is_positive()).count();
                if fam_sum.tail.is_zero() && positive <= 1 {
                    prop_assert_eq!(vm, vs);
                }
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;

    suite(
        "tail correctness",
        runner(PROPERTY_CASES)
            .run(
                &(valuation_data(), body(), prop::collection::vec((0usize..2, 0usize..12), 20)),
                |(data, a, picks)| {
                    let v = data.build();
                    let fam = instance_values(&v, &a, &x).map_err(|e| TestCaseError::fail(e.to_string()))?;
                    for (c, k) in picks {
                        let t = iterate_f(["a", "b"][c], k);
                        if fam.terms.contains(&t) {
                            continue;
                        }
                        let inst = eval_ok(&v, &a.substitute(&x, &t))?;
                        prop_assert_eq!(&inst, &fam.tail, "instance at {} of {}", t, a);
                    }
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    )?;

    Ok(format!("{} x {PROPERTY_CASES} cases: {}", lines.len(), lines.join(", ")))
}

const CRITERIA: [Criterion; 7] = [
    Criterion { name: "sup-counterexample", limit: Duration::from_secs(1), run: sup_counterexample },
    Criterion { name: "sum-soundness-fuzzing", limit: Duration::from_secs(7 * 60), run: sum_soundness_fuzzing },
    Criterion { name: "infinite-sum-inequality", limit: Duration::from_secs(30), run: infinite_sum_inequality },
    Criterion { name: "omega-inconsistency", limit: Duration::from_secs(10), run: omega_inconsistency },
    Criterion { name: "liar-no-fixed-point", limit: Duration::from_secs(1), run: liar_no_fixed_point },
    Criterion { name: "vacuous-policy-dependence", limit: Duration::from_secs(1), run: vacuous_policy_dependence },
    Criterion { name: "semantic-properties", limit: Duration::from_secs(120), run: semantic_properties },
];

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        for c in &CRITERIA {
            println!("{}: test", c.name);
        }
        return ExitCode::SUCCESS;
    }
    let filters: Vec<&String> = args.iter().filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (i, c) in CRITERIA.iter().enumerate() {
        if !filters.is_empty() && !filters.iter().any(|f| c.name.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        let started = Instant::now();
        let outcome = (c.run)();
        let elapsed = started.elapsed();
        let within = elapsed < c.limit;
        let (status, detail) = match (&outcome, within) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over time limit; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        failed += usize::from(status == "FAIL");
        println!(
            "{status} [{}] {} ({} ms, limit {} ms): {detail}",
            i + 1,
            c.name,
            elapsed.as_millis(),
            c.limit.as_millis()
        );
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
