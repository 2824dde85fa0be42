use serde::Serialize;

use super::cedent::{Cedent, SchematicSequent};
use crate::multiset::Multiplicity;
use crate::semantics::{instance_values, ExtendedSum, EvalError, UnitValue, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchematicEval {
    pub antecedent: UnitValue,
    pub succedent: UnitValue,
    pub sound: bool,
}

fn mult(m: Multiplicity) -> Option<u64> {
    match m {
        Multiplicity::Fin(n) => Some(n),
        Multiplicity::Omega => None,
    }
}

/// `sum over entries of f(V(A)) * multiplicity`, families included.
fn side_sum(v: &Valuation, c: &Cedent, f: impl Fn(&UnitValue) -> UnitValue) -> Result<ExtendedSum, EvalError> {
    let mut total = ExtendedSum::zero();
    for (a, m) in c.finite().iter() {
        let val = f(&crate::semantics::eval_formula(v, a)?);
        total = total + ExtendedSum::copies(val.rational(), mult(m));
    }
    for fam in c.families() {
        let inst = instance_values(v, &fam.template, &fam.var)?;
        // Every index at or past `start` outside the candidate list takes the tail value.
        if f(&inst.tail).is_positive() {
            return Ok(ExtendedSum::Infinite);
        }
        for (t, (_, val)) in inst.terms.iter().zip(&inst.explicit) {
            let index = v.universe().index_of(t).expect("candidate terms are indexed") as u64;
            if index >= fam.start {
                total = total + ExtendedSum::copies(f(val).rational(), mult(fam.multiplicity));
            }
        }
    }
    Ok(total)
}

/// Evaluates a sequent whose cedents may contain families.
pub fn schematic_sound(v: &Valuation, s: &SchematicSequent) -> Result<SchematicEval, EvalError> {
    if !s.is_closed() {
        return Err(EvalError::OpenFormula(s.to_string()));
    }
    let antecedent = side_sum(v, &s.ant, UnitValue::complement)?.clamp().complement();
    let succedent = side_sum(v, &s.suc, Clone::clone)?.clamp();
    Ok(SchematicEval {
        sound: antecedent <= succedent,
        antecedent,
        succedent,
    })
}

