use std::collections::BTreeSet;

use serde::Serialize;

use super::{EvalError, ExtendedSum, QuantifierMode, UnitValue, Valuation};
use crate::multiset::{Multiplicity, OmegaMultiset, Sequent};
use crate::syntax::{Formula, Symbol, Term, TRUTH};

/// Carrier of formula values. `UnitValue` gives concrete evaluation, the
/// piecewise-linear domain gives evaluation as a function of one unknown.
pub trait ValueDomain: Clone + Sized {
    fn constant(v: &UnitValue) -> Self;
    /// The symbolic unknown, if the domain has one.
    fn unknown() -> Option<Self>;
    fn neg(&self) -> Self;
    fn cond(&self, b: &Self) -> Self;
    fn exists_sup(explicit: &[Self], tail: &Self) -> Self;
    fn exists_sum(explicit: &[Self], tail: &Self) -> Self;
}

impl ValueDomain for UnitValue {
    fn constant(v: &UnitValue) -> Self {
        v.clone()
    }

    fn unknown() -> Option<Self> {
        None
    }

    fn neg(&self) -> Self {
        self.complement()
    }

    fn cond(&self, b: &Self) -> Self {
        self.residuum(b)
    }

    fn exists_sup(explicit: &[Self], tail: &Self) -> Self {
        explicit.iter().fold(tail.clone(), |m, v| m.max(v.clone()))
    }

    fn exists_sum(explicit: &[Self], tail: &Self) -> Self {
        ExtendedSum::series(explicit.iter().map(UnitValue::rational), tail.rational()).clamp()
    }
}

/// Stand-in for "any closed term outside the explicit candidates". It is
/// never in the term universe and never a key of the atom table.
fn generic_term() -> Term {
    Term::constant("#generic")
}

pub(crate) struct Evaluator<'v> {
    pub(crate) v: &'v Valuation,
}

impl<'v> Evaluator<'v> {
    pub(crate) fn new(v: &'v Valuation) -> Self {
        Evaluator { v }
    }

    pub(crate) fn sentence<D: ValueDomain>(&self, a: &Formula) -> Result<D, EvalError> {
        if !a.is_sentence() {
            return Err(EvalError::OpenFormula(a.to_string()));
        }
        self.formula(a, self.v.unfold_budget)
    }

    fn formula<D: ValueDomain>(&self, a: &Formula, budget: usize) -> Result<D, EvalError> {
        match a {
            Formula::Atom(..) => self.atom(a, budget),
            Formula::Neg(b) => Ok(self.formula::<D>(b, budget)?.neg()),
            Formula::Cond(b, c) => {
                let vb = self.formula::<D>(b, budget)?;
                let vc = self.formula::<D>(c, budget)?;
                Ok(vb.cond(&vc))
            }
            Formula::Exists(x, body) => {
                let (explicit, tail) = self.family::<D>(x, body, budget)?;
                let values: Vec<D> = explicit.into_iter().map(|(_, d)| d).collect();
                Ok(match self.v.mode {
                    QuantifierMode::Sup => D::exists_sup(&values, &tail),
                    QuantifierMode::Sum => D::exists_sum(&values, &tail),
                })
            }
        }
    }

    fn atom<D: ValueDomain>(&self, a: &Formula, budget: usize) -> Result<D, EvalError> {
        let sig = self.v.signature();
        let key = sig.normalize_formula(a)?;
        if self.v.unknown() == Some(&key) {
            return D::unknown().ok_or_else(|| EvalError::SymbolicAtom(key.to_string()));
        }
        if let Some(q) = self.v.atom_entry(&key) {
            return Ok(D::constant(q));
        }
        let Formula::Atom(p, args) = &key else {
            unreachable!("normalization preserves atoms")
        };
        if self.v.transparent && p.as_str() == TRUTH {
            if let [Term::Const(c)] = args.as_slice() {
                if let Some(named) = sig.named_formula(c) {
                    if budget == 0 {
                        return Err(EvalError::Ungrounded {
                            atom: key.to_string(),
                            budget: self.v.unfold_budget,
                        });
                    }
                    return self.formula(&named, budget - 1);
                }
            }
        }
        Ok(D::constant(&self.v.default_of(p)))
    }

    /// Closed terms of the universe whose instances may differ from the tail.
    pub(crate) fn candidates(&self, body: &Formula) -> Vec<Term> {
        let mut found = Vec::new();
        body.closed_subterms(&mut found);
        for (a, _) in self.v.atoms() {
            a.closed_subterms(&mut found);
        }
        if let Some(u) = self.v.unknown() {
            u.closed_subterms(&mut found);
        }
        let universe = self.v.universe();
        let mut set: BTreeSet<Term> = found.into_iter().collect();
        if universe.uses_numerals() {
            let max = set
                .iter()
                .filter_map(|t| match t {
                    Term::Numeral(n) => Some(*n),
                    _ => None,
                })
                .max();
            if let Some(max) = max {
                set.extend((0..=max).map(Term::Numeral));
            }
        }
        let mut indexed: Vec<(usize, Term)> = set
            .into_iter()
            .filter_map(|t| universe.index_of(&t).map(|i| (i, t)))
            .collect();
        indexed.sort();
        indexed.into_iter().map(|(_, t)| t).collect()
    }

    pub(crate) fn family<D: ValueDomain>(
        &self,
        x: &Symbol,
        body: &Formula,
        budget: usize,
    ) -> Result<(Vec<(Term, D)>, D), EvalError> {
        if self.v.transparent && quantifies_into_truth(body, x) {
            return Err(EvalError::UnsupportedQuantification(format!("Ex {x} {body}")));
        }
        let mut explicit = Vec::new();
        for t in self.candidates(body) {
            let d = self.formula::<D>(&body.substitute(x, &t), budget)?;
            explicit.push((t, d));
        }
        let tail = self.formula::<D>(&body.substitute(x, &generic_term()), budget)?;
        Ok((explicit, tail))
    }
}

fn quantifies_into_truth(body: &Formula, x: &Symbol) -> bool {
    let mut hit = false;
    body.for_each_atom(&mut |p, args| {
        if p.as_str() == TRUTH && args.iter().any(|t| t.contains_var(x)) {
            hit = true;
        }
    });
    hit
}

pub fn eval_formula(v: &Valuation, a: &Formula) -> Result<UnitValue, EvalError> {
    Evaluator::new(v).sentence(a)
}

/// Instance values of `A[t/x]`: one entry per candidate term, plus the value
/// shared by every other closed term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceValues {
    pub explicit: Vec<(String, UnitValue)>,
    #[serde(skip)]
    pub terms: Vec<Term>,
    pub tail: UnitValue,
}

pub fn instance_values(v: &Valuation, a: &Formula, x: &Symbol) -> Result<InstanceValues, EvalError> {
    if a.free_vars().iter().any(|y| y != x) {
        return Err(EvalError::OpenFormula(format!("Ex {x} {a}")));
    }
    let ev = Evaluator::new(v);
    let (explicit, tail) = ev.family::<UnitValue>(x, a, v.unfold_budget)?;
    Ok(InstanceValues {
        terms: explicit.iter().map(|(t, _)| t.clone()).collect(),
        explicit: explicit.into_iter().map(|(t, d)| (t.to_string(), d)).collect(),
        tail,
    })
}

fn copies(m: Multiplicity) -> Option<u64> {
    match m {
        Multiplicity::Fin(n) => Some(n),
        Multiplicity::Omega => None,
    }
}

/// `1 - min{1, sum over Gamma of (1 - V(A))}`.
pub fn eval_antecedent(v: &Valuation, gamma: &OmegaMultiset) -> Result<UnitValue, EvalError> {
    let mut sum = ExtendedSum::zero();
    for (a, m) in gamma.iter() {
        sum = sum + ExtendedSum::copies(eval_formula(v, a)?.complement().rational(), copies(m));
    }
    Ok(sum.clamp().complement())
}

/// `min{1, sum over Delta of V(B)}`.
pub fn eval_succedent(v: &Valuation, delta: &OmegaMultiset) -> Result<UnitValue, EvalError> {
    let mut sum = ExtendedSum::zero();
    for (b, m) in delta.iter() {
        sum = sum + ExtendedSum::copies(eval_formula(v, b)?.rational(), copies(m));
    }
    Ok(sum.clamp())
}

pub fn sequent_sound(v: &Valuation, s: &Sequent) -> Result<bool, EvalError> {
    Ok(eval_antecedent(v, &s.antecedent)? <= eval_succedent(v, &s.succedent)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    fn val(text: &str) -> Valuation {
        Valuation::parse(text).unwrap()
    }

    fn f(v: &Valuation, s: &str) -> Formula {
        parse_formula(s, v.signature()).unwrap()
    }

    #[test]
    fn constant_half_family_sup_vs_sum() {
        let mut v = val("const a\npred P/1\ndefault P = 1/2\nmode sup");
        let ex = f(&v, "Ex x P(x)");
        assert_eq!(eval_formula(&v, &ex).unwrap(), UnitValue::ratio(1, 2));
        v.mode = QuantifierMode::Sum;
        assert_eq!(eval_formula(&v, &ex).unwrap(), UnitValue::one());
    }

    #[test]
    fn connective_examples() {
        let v = val("const a\npred P/1, Q/1\natom P(a) = 3/10\natom Q(a) = 1");
        assert_eq!(eval_formula(&v, &f(&v, "~P(a)")).unwrap(), UnitValue::ratio(7, 10));
        assert_eq!(eval_formula(&v, &f(&v, "Q(a) -> P(a)")).unwrap(), UnitValue::ratio(3, 10));
        let v0 = val("const a\npred A/0, B/0\natom A = 1");
        assert_eq!(eval_formula(&v0, &f(&v0, "A -> B")).unwrap(), UnitValue::zero());
    }

    #[test]
    fn instance_values_examples() {
        let v = val("const a, b\npred P/1\natom P(a) = 1");
        let iv = instance_values(&v, &f(&v, "P(x)"), &"x".into()).unwrap();
        assert_eq!(iv.explicit, vec![("a".to_string(), UnitValue::one())]);
        assert_eq!(iv.tail, UnitValue::zero());

        let v = val("const l\natom T(l) = 2/5");
        let iv = instance_values(&v, &f(&v, "T(l)"), &"x".into()).unwrap();
        assert!(iv.explicit.iter().all(|(_, d)| *d == UnitValue::ratio(2, 5)));
        assert_eq!(iv.tail, UnitValue::ratio(2, 5));
    }

    #[test]
    fn sequent_side_examples() {
        let v = val("const a, b\npred A/0, B/0, C/0\natom A = 3/4\natom B = 3/5\natom C = 7/10");
        let s = |t: &str| Sequent::parse(t, v.signature()).unwrap();
        assert_eq!(eval_antecedent(&v, &s("A, A |-").antecedent).unwrap(), UnitValue::ratio(1, 2));
        assert_eq!(eval_antecedent(&v, &OmegaMultiset::new()).unwrap(), UnitValue::one());
        assert_eq!(eval_succedent(&v, &OmegaMultiset::new()).unwrap(), UnitValue::zero());
        assert_eq!(eval_succedent(&v, &s("|- B, C").succedent).unwrap(), UnitValue::one());
        assert!(!sequent_sound(&v, &s("|-")).unwrap());
        assert!(sequent_sound(&v, &s("A |- A")).unwrap());

        let v = val("const a\npred A/0\natom A = 9/10");
        assert_eq!(eval_antecedent(&v, &s("A^w |-").antecedent).unwrap(), UnitValue::zero());
        let v = val("const a\npred A/0\natom A = 1");
        assert_eq!(eval_antecedent(&v, &s("A^w |-").antecedent).unwrap(), UnitValue::one());
        assert_eq!(eval_succedent(&v, &s("|- T(a)^w").succedent).unwrap(), UnitValue::zero());
    }

    #[test]
    fn liar_is_ungrounded_under_transparency() {
        let v = val("const l\nname l = ~Ex x T(l)\ntransparent on\nbudget 10");
        match eval_formula(&v, &f(&v, "T(l)")) {
            Err(EvalError::Ungrounded { budget, .. }) => assert_eq!(budget, 10),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn transparency_unfolds_grounded_names() {
        let v = val("const a, k\npred P/1\nname k = ~P(a)\natom P(a) = 1/4\ntransparent on");
        assert_eq!(eval_formula(&v, &f(&v, "T(k)")).unwrap(), UnitValue::ratio(3, 4));
        assert!(matches!(
            eval_formula(&v, &f(&v, "Ex x T(x)")),
            Err(EvalError::UnsupportedQuantification(_))
        ));
    }

    #[test]
    fn open_formulas_are_rejected() {
        let v = Valuation::new(Signature::parse("const a\npred P/1").unwrap(), QuantifierMode::Sum).unwrap();
        assert!(matches!(eval_formula(&v, &f(&v, "P(y)")), Err(EvalError::OpenFormula(_))));
    }
}
