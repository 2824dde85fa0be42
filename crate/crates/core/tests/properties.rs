//! Property tests for the evaluator, the multiset algebra and the surface
//! syntax.

mod common;

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use mqlogic_core::multiset::{omega_union, IndexedFamily};
use mqlogic_core::semantics::{
    check_lemma1_instance, eval_antecedent, eval_formula, eval_parametric, eval_succedent, TailSeq, UnitValue,
};
use mqlogic_core::syntax::parse_formula;
use mqlogic_core::{Formula, Multiplicity, OmegaMultiset};

use common::{closed_atom, sentence, signature, unit_value, valuation_data};

fn multiplicity() -> impl Strategy<Value = Multiplicity> {
    prop_oneof![4 => (1u64..4).prop_map(Multiplicity::Fin), 1 => Just(Multiplicity::Omega)]
}

fn multiset() -> impl Strategy<Value = OmegaMultiset> {
    prop::collection::vec((closed_atom(), multiplicity()), 0..5).prop_map(OmegaMultiset::from_entries)
}

/// Grid value `c` with `g + c - 1 <= d`.
fn admissible(g: UnitValue, d: UnitValue) -> impl Strategy<Value = (UnitValue, UnitValue, UnitValue)> {
    let one = BigRational::one();
    let bound = (&one + d.rational() - g.rational()).min(one);
    (1i64..=60).prop_flat_map(move |den| {
        let top = (bound.clone() * BigRational::from_integer(den.into())).floor().to_integer();
        let top: i64 = top.try_into().expect("small numerator");
        let (g, d) = (g.clone(), d.clone());
        (0..=top).prop_map(move |n| (g.clone(), UnitValue::ratio(n, den), d.clone()))
    })
}

fn lemma1_rows() -> impl Strategy<Value = Vec<(UnitValue, UnitValue, UnitValue)>> {
    prop::collection::vec((unit_value(), unit_value()).prop_flat_map(|(g, d)| admissible(g, d)), 0..=50)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn parametric_agrees_with_pointwise(
        data in valuation_data(),
        unknown in closed_atom(),
        a in sentence(),
        points in prop::collection::vec(unit_value(), 50),
    ) {
        let mut v = data.build();
        v.set_unknown(&unknown).unwrap();
        let f = eval_parametric(&v, &a).unwrap();
        for x in points {
            let direct = eval_formula(&v.instantiate_unknown(x.clone()), &a).unwrap();
            prop_assert_eq!(&f.eval(x.rational()), direct.rational(), "at {} for {}", x, a);
        }
    }

    #[test]
    fn cedent_values_are_monotone(data in valuation_data(), m in multiset(), extra in closed_atom(), k in multiplicity()) {
        let v = data.build();
        let mut bigger = m.clone();
        bigger.insert(extra, k);
        prop_assert!(eval_succedent(&v, &bigger).unwrap() >= eval_succedent(&v, &m).unwrap());
        prop_assert!(eval_antecedent(&v, &bigger).unwrap() <= eval_antecedent(&v, &m).unwrap());
    }

    #[test]
    fn omega_copies_saturate(data in valuation_data(), a in closed_atom()) {
        let v = data.build();
        let x = eval_formula(&v, &a).unwrap();
        let omega = OmegaMultiset::from_entries([(a, Multiplicity::Omega)]);
        let suc = if x.is_zero() { UnitValue::zero() } else { UnitValue::one() };
        let ant = if x.is_one() { UnitValue::one() } else { UnitValue::zero() };
        prop_assert_eq!(eval_succedent(&v, &omega).unwrap(), suc);
        prop_assert_eq!(eval_antecedent(&v, &omega).unwrap(), ant);
    }

    #[test]
    fn infinite_sum_inequality_finite_oracle(rows in lemma1_rows()) {
        let one = BigRational::one();
        let g = TailSeq::new(rows.iter().map(|r| r.0.clone()).collect(), UnitValue::one());
        let c = TailSeq::new(rows.iter().map(|r| r.1.clone()).collect(), UnitValue::zero());
        let d = TailSeq::new(rows.iter().map(|r| r.2.clone()).collect(), UnitValue::zero());
        let report = check_lemma1_instance(&g, &c, &d);
        prop_assert!(report.hypothesis_holds);
        prop_assert!(report.conclusion_holds);

        let mut sg = BigRational::zero();
        let mut sx = BigRational::zero();
        let mut sd = BigRational::zero();
        for (gi, ci, di) in &rows {
            sg += &one - gi.rational();
            sx += ci.rational();
            sd += di.rational();
        }
        let lhs = &one - (sg + (&one - sx.min(one.clone()))).min(one.clone());
        prop_assert_eq!(report.lhs.rational(), &lhs);
        prop_assert_eq!(report.rhs.rational(), &sd.min(one.clone()));
    }

    #[test]
    fn rendering_round_trips(a in sentence()) {
        let sig = signature();
        prop_assert_eq!(parse_formula(&a.to_string(), &sig).unwrap(), a);
    }

    #[test]
    fn union_is_commutative_and_adds(m in multiset(), n in multiset()) {
        let u = m.union(&n);
        prop_assert_eq!(&u, &n.union(&m));
        for (f, k) in u.iter() {
            let expected = match (m.get(f), n.get(f)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => unreachable!(),
            };
            prop_assert_eq!(k, expected);
        }
    }

    #[test]
    fn remove_one_inverts_insert(m in multiset(), f in closed_atom()) {
        let mut plus = m.clone();
        plus.insert(f.clone(), Multiplicity::ONE);
        let back = plus.remove_one(&f).unwrap();
        match m.get(&f) {
            Some(Multiplicity::Omega) => prop_assert_eq!(back.get(&f), Some(Multiplicity::Omega)),
            _ => prop_assert_eq!(back, m),
        }
    }

    #[test]
    fn omega_union_of_uniform_family(explicit in prop::collection::vec(multiset(), 0..4), tail in multiset()) {
        let u = omega_union(&IndexedFamily { explicit: explicit.clone(), tail: tail.clone() });
        for f in tail.formulas() {
            prop_assert_eq!(u.get(f), Some(Multiplicity::Omega));
        }
        for m in &explicit {
            for (f, _) in m.iter() {
                prop_assert!(u.get(f).is_some());
            }
        }
        let support: usize = explicit.iter().chain([&tail]).flat_map(|m| m.formulas()).collect::<std::collections::BTreeSet<&Formula>>().len();
        prop_assert_eq!(u.len(), support);
    }
}
