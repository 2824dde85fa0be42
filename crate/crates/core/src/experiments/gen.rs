use rand::Rng;

use super::fuzz::lift;
use super::random::{Sampler, TEMPLATE_VAR};
use crate::calculus::{substitute_derivation, Cedent, Derivation, Language, RuleId, SchematicSequent, UniformFamily};
use crate::multiset::{Multiplicity, OmegaMultiset};
use crate::syntax::{Formula, Symbol, SyntaxError, Term};

/// Bound variable of generated left quantifier steps; generated formulas
/// only bind `x`, `y` and `z`.
const LEFT_VAR: &str = "w";

fn pick(s: &mut Sampler<'_>, c: &Cedent) -> Option<Formula> {
    let cands = c.principal_candidates(s.lang).expect("generated cedents normalize");
    (!cands.is_empty()).then(|| cands[s.rng.gen_range(0..cands.len())].clone())
}

fn minus(lang: &Language, c: &Cedent, f: &Formula) -> Cedent {
    c.remove_one(lang, f).expect("generated cedents normalize").expect("picked from this cedent")
}

fn plus(lang: &Language, c: &Cedent, f: &Formula) -> Cedent {
    c.add(lang, f, Multiplicity::ONE).expect("generated cedents normalize")
}

fn leaf(s: &mut Sampler<'_>, template: bool) -> Derivation {
    let a = s.formula(2, &[], template);
    let (g, d) = (s.cedent(template, true), s.cedent(template, true));
    Derivation::init(SchematicSequent::new(plus(s.lang, &g, &a), plus(s.lang, &d, &a)))
}

/// A random derivation of height at most `depth + 1` built from the rules
/// without truth steps. Left quantifier steps use a premise family whose
/// template is itself generated with a free index variable.
pub fn random_derivation(s: &mut Sampler<'_>, depth: usize) -> Derivation {
    generate(s, depth, false)
}

fn generate(s: &mut Sampler<'_>, depth: usize, template: bool) -> Derivation {
    if depth == 0 || s.chance(0.2) {
        return leaf(s, template);
    }
    let lang = s.lang;
    let rules = if template { 5 } else { 6 };
    let built = match s.rng.gen_range(0..rules) {
        0 => {
            let p = generate(s, depth - 1, template);
            pick(s, &p.conclusion.suc).map(|a| {
                let c = SchematicSequent::new(plus(lang, &p.conclusion.ant, &Formula::neg(a.clone())), minus(lang, &p.conclusion.suc, &a));
                Derivation::unary(RuleId::NegL, c, p)
            })
        }
        1 => {
            let p = generate(s, depth - 1, template);
            pick(s, &p.conclusion.ant).map(|a| {
                let c = SchematicSequent::new(minus(lang, &p.conclusion.ant, &a), plus(lang, &p.conclusion.suc, &Formula::neg(a.clone())));
                Derivation::unary(RuleId::NegR, c, p)
            })
        }
        2 => {
            let p = generate(s, depth - 1, template);
            match (pick(s, &p.conclusion.ant), pick(s, &p.conclusion.suc)) {
                (Some(a), Some(b)) => {
                    let suc = plus(lang, &minus(lang, &p.conclusion.suc, &b), &Formula::cond(a.clone(), b));
                    let c = SchematicSequent::new(minus(lang, &p.conclusion.ant, &a), suc);
                    Some(Derivation::unary(RuleId::CondR, c, p))
                }
                _ => None,
            }
        }
        3 => {
            let p1 = generate(s, depth - 1, template);
            let p2 = generate(s, depth - 1, template);
            match (pick(s, &p1.conclusion.suc), pick(s, &p2.conclusion.ant)) {
                (Some(a), Some(b)) => {
                    let g2 = minus(lang, &p2.conclusion.ant, &b);
                    let ant = plus(lang, &p1.conclusion.ant.union(lang, &g2).expect("normalizes"), &Formula::cond(a.clone(), b));
                    let suc = minus(lang, &p1.conclusion.suc, &a).union(lang, &p2.conclusion.suc).expect("normalizes");
                    Some(Derivation::binary(RuleId::CondL, SchematicSequent::new(ant, suc), p1, p2))
                }
                _ => None,
            }
        }
        4 => {
            let p = generate(s, depth - 1, template);
            exists_right(lang, p)
        }
        _ => {
            let t = generate(s, depth - 1, true);
            exists_left(s, t)
        }
    };
    built.unwrap_or_else(|| leaf(s, template))
}

/// Closes a family `{A[t_i/#i] : i >= 0}` (or an omega entry) in the succedent.
fn exists_right(lang: &Language, p: Derivation) -> Option<Derivation> {
    let suc = &p.conclusion.suc;
    let body_var = Symbol::new("x");
    if let Some(fam) = suc.families().iter().find(|f| f.start == 0 && f.multiplicity == Multiplicity::ONE) {
        if fam.template.binds(&body_var) {
            return None;
        }
        let body = fam.template.substitute(&fam.var, &Term::var("x"));
        let rest: Vec<_> = suc.families().iter().filter(|f| *f != fam).cloned().collect();
        let rest = Cedent::new(lang, suc.finite().clone(), rest).expect("normalizes");
        let c = SchematicSequent::new(p.conclusion.ant.clone(), plus(lang, &rest, &Formula::exists("x", body)));
        return Some(Derivation::unary(RuleId::ExistsROmega, c, p));
    }
    let (f, _) = suc.finite().iter().find(|(f, m)| m.is_omega() && !f.binds(&body_var))?;
    let f = f.clone();
    let finite = OmegaMultiset::from_entries(suc.finite().iter().filter(|(g, _)| **g != f).map(|(g, m)| (g.clone(), m)));
    let rest = Cedent::new(lang, finite, suc.families().to_vec()).expect("normalizes");
    let c = SchematicSequent::new(p.conclusion.ant.clone(), plus(lang, &rest, &Formula::exists("x", f)));
    Some(Derivation::unary(RuleId::ExistsROmega, c, p))
}

fn exists_left(s: &mut Sampler<'_>, t: Derivation) -> Option<Derivation> {
    let lang = s.lang;
    let var = Symbol::new(TEMPLATE_VAR);
    let b = pick(s, &t.conclusion.ant)?;
    if t.conclusion.suc.families().iter().chain(t.conclusion.ant.families()).any(|f| f.template.has_free(&var)) {
        return None;
    }
    let a = b.substitute(&var, &Term::var(LEFT_VAR));
    let ant = plus(lang, &lift(lang, &minus(lang, &t.conclusion.ant, &b), 0), &Formula::exists(LEFT_VAR, a));
    let suc = lift(lang, &t.conclusion.suc, 0);
    Some(Derivation::exists_left(
        SchematicSequent::new(ant, suc),
        UniformFamily {
            var,
            start: 0,
            template: Box::new(t),
            explicit: vec![],
        },
    ))
}

/// Every node conclusion of `d` with family templates instantiated at their
/// first `k` indices.
pub fn closed_conclusions(lang: &Language, d: &Derivation, k: u64) -> Result<Vec<SchematicSequent>, SyntaxError> {
    let mut out = Vec::new();
    collect(lang, d, k, &mut out)?;
    Ok(out)
}

fn collect(lang: &Language, d: &Derivation, k: u64, out: &mut Vec<SchematicSequent>) -> Result<(), SyntaxError> {
    out.push(d.conclusion.clone());
    for p in &d.premises {
        collect(lang, p, k, out)?;
    }
    if let Some(f) = &d.family {
        for e in &f.explicit {
            collect(lang, e, k, out)?;
        }
        for j in f.start..f.start + k {
            let inst = substitute_derivation(lang, &f.template, &f.var, &lang.term(j))?;
            collect(lang, &inst, k, out)?;
        }
    }
    Ok(())
}
