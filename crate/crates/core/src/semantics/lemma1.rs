use serde::{Deserialize, Serialize};

use super::{ExtendedSum, UnitValue};
use num_traits::One;

use super::value::Rational;

/// An omega-sequence in `[0,1]`: explicit values for the first indices, then
/// one value repeated at every later index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailSeq {
    pub explicit: Vec<UnitValue>,
    pub tail: UnitValue,
}

impl TailSeq {
    pub fn new(explicit: Vec<UnitValue>, tail: UnitValue) -> Self {
        TailSeq { explicit, tail }
    }

    pub fn at(&self, i: usize) -> &UnitValue {
        self.explicit.get(i).unwrap_or(&self.tail)
    }

    fn sum_of(&self, f: impl Fn(&UnitValue) -> UnitValue) -> ExtendedSum {
        let terms: Vec<Rational> = self.explicit.iter().map(|v| f(v).into_rational()).collect();
        ExtendedSum::series(terms.iter(), f(&self.tail).rational())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    /// Per-index hypothesis over the longest explicit prefix.
    pub hypothesis: Vec<bool>,
    /// Hypothesis at the indices where all three sequences are in their tails.
    pub hypothesis_tail: bool,
    pub hypothesis_holds: bool,
    pub sum_one_minus_gamma: String,
    pub sum_chi: String,
    pub sum_delta: String,
    pub lhs: UnitValue,
    pub rhs: UnitValue,
    pub conclusion_holds: bool,
}

/// `1 - min{1, (1-g) + (1-c)} <= d`.
fn hypothesis_at(g: &UnitValue, c: &UnitValue, d: &UnitValue) -> bool {
    let s = ExtendedSum::Finite(g.complement().into_rational() + c.complement().rational());
    s.clamp().complement() <= *d
}

pub fn check_lemma1_instance(gamma: &TailSeq, chi: &TailSeq, delta: &TailSeq) -> Lemma1Report {
    let n = gamma.explicit.len().max(chi.explicit.len()).max(delta.explicit.len());
    let hypothesis: Vec<bool> = (0..n).map(|i| hypothesis_at(gamma.at(i), chi.at(i), delta.at(i))).collect();
    let hypothesis_tail = hypothesis_at(&gamma.tail, &chi.tail, &delta.tail);

    let g = gamma.sum_of(UnitValue::complement);
    let x = chi.sum_of(Clone::clone);
    let d = delta.sum_of(Clone::clone);
    let inner = g.clone() + ExtendedSum::Finite(Rational::one() - x.clamp().rational());
    let lhs = inner.clamp().complement();
    let rhs = d.clamp();
    Lemma1Report {
        hypothesis_holds: hypothesis.iter().all(|&h| h) && hypothesis_tail,
        hypothesis,
        hypothesis_tail,
        sum_one_minus_gamma: g.to_string(),
        sum_chi: x.to_string(),
        sum_delta: d.to_string(),
        conclusion_holds: lhs <= rhs,
        lhs,
        rhs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(explicit: &[(i64, i64)], tail: (i64, i64)) -> TailSeq {
        TailSeq::new(
            explicit.iter().map(|&(n, d)| UnitValue::ratio(n, d)).collect(),
            UnitValue::ratio(tail.0, tail.1),
        )
    }

    #[test]
    fn all_ones() {
        let s = seq(&[(1, 1)], (1, 1));
        let r = check_lemma1_instance(&s, &s, &s);
        assert!(r.hypothesis_holds && r.conclusion_holds);
        assert_eq!(r.lhs, UnitValue::one());
        assert_eq!(r.rhs, UnitValue::one());
    }

    #[test]
    fn halves_with_zero_tails() {
        let r = check_lemma1_instance(&seq(&[(1, 2)], (1, 1)), &seq(&[(1, 2)], (0, 1)), &seq(&[(0, 1)], (0, 1)));
        assert_eq!(r.hypothesis, vec![true]);
        assert!(r.hypothesis_tail);
        assert_eq!(r.lhs, UnitValue::zero());
        assert_eq!(r.rhs, UnitValue::zero());
        assert!(r.conclusion_holds);
    }

    #[test]
    fn violated_hypothesis_is_reported() {
        // 1 - min{1, 0 + 0} = 1 > 0 at index 0.
        let r = check_lemma1_instance(&seq(&[(1, 1)], (1, 1)), &seq(&[(1, 1)], (0, 1)), &seq(&[(0, 1)], (0, 1)));
        assert_eq!(r.hypothesis, vec![false]);
        assert!(!r.hypothesis_holds);
        assert!(!r.conclusion_holds);
    }
}
