use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::calculus::{check_derivation, schematic_sound};

fn sampler(lang: &Language, seed: u64, stream: u64) -> Sampler<'_> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    Sampler::new(rng, Bounds::default(), lang)
}

#[test]
fn generated_derivations_are_accepted() {
    let lang = fuzz_language();
    let mut s = sampler(&lang, 7, 0);
    let mut with_family = 0;
    for _ in 0..200 {
        let d = random_derivation(&mut s, 4);
        with_family += usize::from(d.family.is_some() || d.size() > 1 && d.height() > 1);
        let r = check_derivation(&lang, &d, VacuousPolicy::Multiplicative, 3);
        assert!(r.ok, "{:?}", r.failure());
    }
    assert!(with_family > 0);
}

#[test]
fn accepted_derivations_are_sound_under_sum_valuations() {
    let lang = fuzz_language();
    let mut s = sampler(&lang, 11, 0);
    let derivations: Vec<_> = (0..20).map(|_| random_derivation(&mut s, 4)).collect();
    let mut sequents = Vec::new();
    for d in &derivations {
        assert!(check_derivation(&lang, d, VacuousPolicy::Multiplicative, 3).ok);
        sequents.extend(closed_conclusions(&lang, d, 3).unwrap());
    }
    for i in 0..1000 {
        let mut vs = sampler(&lang, 12, i);
        let v = vs.valuation(QuantifierMode::Sum);
        for q in &sequents {
            let e = schematic_sound(&v, q).unwrap();
            assert!(e.sound, "`{q}` unsound under\n{}", v.render());
        }
    }
}

#[test]
fn sup_mode_breaks_the_right_quantifier_rule() {
    let (v, inst) = thm1_instance(QuantifierMode::Sup);
    let out = evaluate_instance(&v, &inst).unwrap();
    assert!(out.premises_sound && out.violation);
    let r = fuzz_rule(&FuzzConfig::new(RuleId::ExistsROmega, QuantifierMode::Sup, 2000, 3)).unwrap();
    assert!(r.violations > 0);
    assert_eq!(r.rejected, 0);
    let first = r.first_violation.unwrap();
    assert!(first.outcome.premises_sound && !first.outcome.conclusion.sound);
}

#[test]
fn init_is_sound_in_both_modes() {
    for mode in [QuantifierMode::Sup, QuantifierMode::Sum] {
        let r = fuzz_rule(&FuzzConfig::new(RuleId::Init, mode, 500, 5)).unwrap();
        assert_eq!((r.violations, r.rejected, r.errors), (0, 0, 0));
    }
}

#[test]
fn fuzzing_is_reproducible() {
    let cfg = FuzzConfig::new(RuleId::CondL, QuantifierMode::Sum, 300, 42);
    let mut a = fuzz_rule(&cfg).unwrap();
    let mut b = fuzz_rule(&cfg).unwrap();
    a.runtime_ms = 0;
    b.runtime_ms = 0;
    assert_eq!(a, b);
    let c = fuzz_rule(&FuzzConfig { seed: 43, ..cfg }).unwrap();
    assert_eq!(c.samples, 300);
}

#[test]
fn fuzz_config_validation() {
    assert!(FuzzConfig::new(RuleId::TL, QuantifierMode::Sum, 10, 1).validate().is_err());
    assert!(FuzzConfig::new(RuleId::Init, QuantifierMode::Sum, 0, 1).validate().is_err());
    let mut cfg = FuzzConfig::new(RuleId::Init, QuantifierMode::Sum, 10, 1);
    cfg.bounds.max_denominator = 0;
    assert!(cfg.validate().is_err());
}

#[test]
fn inequality_samples_meet_the_hypothesis() {
    let s = run_lemma1(400, 9);
    assert_eq!(s.hypothesis_failures, 0);
    assert_eq!(s.conclusion_failures, 0);
    assert_eq!(s.tail_cases, [100; 4]);
}

#[test]
fn experiment_ids_round_trip() {
    for id in ExperimentId::ALL {
        assert_eq!(id.name().parse::<ExperimentId>().unwrap(), id);
    }
    assert!("thm3".parse::<ExperimentId>().is_err());
}

#[test]
fn quick_repros_pass() {
    for id in [ExperimentId::Thm1, ExperimentId::Prop1, ExperimentId::Prop2, ExperimentId::Prop3, ExperimentId::VacuousCompare] {
        let r = cmd_repro(id, DEFAULT_SEED);
        assert_eq!(r.status, Status::Pass, "{id}: {}", r.evidence);
    }
}
