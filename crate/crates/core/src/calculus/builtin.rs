//! Ready-made derivations of the two self-referential examples.

use super::cedent::{Cedent, FormulaFamily, Language, SchematicSequent};
use super::check::{CheckError, FamilyPremises, RuleInstance};
use super::derivation::{Derivation, RuleId, UniformFamily};
use crate::multiset::Multiplicity;
use crate::syntax::{Formula, Signature, Symbol, Term, SUCC, TRUTH};

/// `mu = ~Ex x T(fm(x, m))` where `fm(i, m)` codes `T^i(m)` through `Tdot`.
pub const PROP1_SIGNATURE: &str = "\
arith
const m
fun Tdot/1, fm/2
rewrite Tdot(t) => quote(T(t))
rewrite fm(0, y) => y
rewrite fm(succ(n), y) => Tdot(fm(n, y))
name m = ~Ex x T(fm(x, m))
";

/// `l` names `~Ex x T(l)`, a vacuous quantification.
pub const PROP3_SIGNATURE: &str = "\
const l
name l = ~Ex x T(l)
";

pub fn prop1_signature() -> Signature {
    Signature::parse(PROP1_SIGNATURE).expect("built-in signature parses")
}

pub fn prop3_signature() -> Signature {
    Signature::parse(PROP3_SIGNATURE).expect("built-in signature parses")
}

#[derive(Debug, Clone)]
pub struct Prop1Derivation {
    /// Derivation of `|- mu`.
    pub derivation: Derivation,
    /// `T(fm(i, m)) |-` for `i = 0..=k`, the explicit members of the final family.
    pub witnesses: Vec<SchematicSequent>,
}

fn truth(t: Term) -> Formula {
    Formula::Atom(Symbol::new(TRUTH), vec![t])
}

fn ced(lang: &Language, fs: &[(&Formula, Multiplicity)]) -> Result<Cedent, CheckError> {
    Ok(Cedent::from_formulas(lang, fs.iter().map(|(f, m)| ((*f).clone(), *m)))?)
}

fn one(lang: &Language, f: &Formula) -> Result<Cedent, CheckError> {
    ced(lang, &[(f, Multiplicity::ONE)])
}

fn family(lang: &Language, var: &str, start: u64, template: &Formula) -> Result<Cedent, CheckError> {
    Ok(Cedent::empty().add_family(lang, FormulaFamily::new(var, start, template.clone(), Multiplicity::ONE))?)
}

fn seq(ant: Cedent, suc: Cedent) -> SchematicSequent {
    SchematicSequent::new(ant, suc)
}

fn require(cond: bool, what: &str) -> Result<(), CheckError> {
    if cond {
        Ok(())
    } else {
        Err(CheckError::Signature(what.to_string()))
    }
}

/// Derivation of `|- mu` for the signature of [`PROP1_SIGNATURE`], with the
/// final premise family listing `k + 1` explicit members.
pub fn prop1_derivation(lang: &Language, k: u64) -> Result<Prop1Derivation, CheckError> {
    let sig = lang.signature();
    require(sig.is_arithmetic(), "arithmetic (numerals and succ)")?;
    for (name, kind) in [("m", "constant"), ("fm", "function"), ("Tdot", "function")] {
        require(sig.kind_of(name).is_some(), &format!("the {kind} `{name}`"))?;
    }
    let m = Term::constant("m");
    let fm = |t: Term| Term::app(Symbol::new("fm"), vec![t, m.clone()]);
    let big_f = |t: Term| truth(fm(t));
    let x = Term::var("x");
    let exists_f = Formula::exists("x", big_f(x));
    let mu = Formula::neg(exists_f.clone());

    require(
        sig.named_formula(&Symbol::new("m")) == Some(lang.normalize(&mu)?),
        "the naming equation `name m = ~Ex x T(fm(x, m))`",
    )?;
    let name_tm = Term::Const(sig.name_of(&truth(m.clone()))?);
    require(sig.normalize_term(&fm(lang.term(0)))? == m, "the equation `fm(0, y) => y`")?;
    require(
        sig.normalize_term(&Term::app(Symbol::new("Tdot"), vec![m.clone()]))? == name_tm,
        "the equation `Tdot(t) => quote(T(t))`",
    )?;
    require(
        sig.normalize_term(&fm(lang.term(1)))? == name_tm,
        "the equation `fm(succ(n), y) => Tdot(fm(n, y))`",
    )?;

    let n = Term::var("n");
    let succ_n = Term::app(Symbol::new(SUCC), vec![n.clone()]);
    let empty = Cedent::empty;

    // F(n) |- F(n+1), uniformly in n.
    let step = Derivation::unary(
        RuleId::TR,
        seq(one(lang, &big_f(n.clone()))?, one(lang, &big_f(succ_n.clone()))?),
        Derivation::init(seq(one(lang, &big_f(n.clone()))?, one(lang, &big_f(n.clone()))?)),
    );
    let shifted = Derivation::exists_left(
        seq(one(lang, &exists_f)?, family(lang, "n", 0, &big_f(succ_n))?),
        UniformFamily {
            var: Symbol::new("n"),
            start: 0,
            template: Box::new(step),
            explicit: vec![],
        },
    );
    let d3 = Derivation::unary(
        RuleId::NegR,
        seq(empty(), one(lang, &mu)?.union(lang, &family(lang, "n", 1, &big_f(n.clone()))?)?),
        shifted,
    );
    let d4 = Derivation::unary(RuleId::TR, seq(empty(), family(lang, "n", 0, &big_f(n.clone()))?), d3);
    let d5 = Derivation::unary(RuleId::ExistsROmega, seq(empty(), one(lang, &exists_f)?), d4);
    let d6 = Derivation::unary(RuleId::NegL, seq(one(lang, &mu)?, empty()), d5);
    let d7 = Derivation::unary(RuleId::TL, seq(one(lang, &big_f(lang.term(0)))?, empty()), d6);

    // T(fm(j, m)) |- from T(fm(j-1, m)) |-.
    let back_step = |t: Term| -> Result<Derivation, CheckError> {
        Ok(Derivation::unary(RuleId::TL, seq(one(lang, &big_f(t))?, empty()), Derivation::recall(1)))
    };
    let mut explicit = vec![d7];
    for j in 1..=k {
        explicit.push(back_step(lang.term(j))?);
    }
    let witnesses = explicit.iter().map(|d| d.conclusion.clone()).collect();
    let all = Derivation::exists_left(
        seq(one(lang, &exists_f)?, empty()),
        UniformFamily {
            var: Symbol::new("k"),
            start: k + 1,
            template: Box::new(back_step(Term::var("k"))?),
            explicit,
        },
    );
    let derivation = Derivation::unary(RuleId::NegR, seq(empty(), one(lang, &mu)?), all);
    Ok(Prop1Derivation { derivation, witnesses })
}

fn prop3_parts(lang: &Language) -> Result<(Formula, Formula, Formula), CheckError> {
    let sig = lang.signature();
    let l = Term::constant("l");
    let tl = truth(l.clone());
    let exists_tl = Formula::exists("x", tl.clone());
    let mu = Formula::neg(exists_tl.clone());
    require(
        sig.kind_of("l").is_some() && sig.named_formula(&Symbol::new("l")) == Some(lang.normalize(&mu)?),
        "the naming equation `name l = ~Ex x T(l)`",
    )?;
    Ok((tl, exists_tl, mu))
}

/// Derivation of `|- ~Ex x T(l)` that relies on vacuous quantification
/// producing omega copies.
pub fn prop3_derivation(lang: &Language) -> Result<Derivation, CheckError> {
    let (tl, exists_tl, mu) = prop3_parts(lang)?;
    let empty = Cedent::empty;
    let omega = ced(lang, &[(&tl, Multiplicity::Omega)])?;
    let family_of = |template: Derivation| UniformFamily {
        var: Symbol::new("n"),
        start: 0,
        template: Box::new(template),
        explicit: vec![],
    };

    let init = Derivation::init(seq(one(lang, &tl)?, one(lang, &tl)?));
    let e2 = Derivation::exists_left(seq(one(lang, &exists_tl)?, omega.clone()), family_of(init));
    let e3 = Derivation::unary(RuleId::NegR, seq(empty(), omega.add(lang, &mu, Multiplicity::ONE)?), e2);
    let e4 = Derivation::unary(RuleId::TR, seq(empty(), omega), e3);
    let e5 = Derivation::unary(RuleId::ExistsROmega, seq(empty(), one(lang, &exists_tl)?), e4);
    let e6 = Derivation::unary(RuleId::NegL, seq(one(lang, &mu)?, empty()), e5);
    let e7 = Derivation::unary(RuleId::TL, seq(one(lang, &tl)?, empty()), e6);
    let e8 = Derivation::exists_left(seq(one(lang, &exists_tl)?, empty()), family_of(e7));
    Ok(Derivation::unary(RuleId::NegR, seq(empty(), one(lang, &mu)?), e8))
}

/// `Ex x T(l) |- T(l)` from the single premise `T(l) |- T(l)`, the shape of
/// the left quantifier rule for vacuous quantification under the additive policy.
pub fn prop3_vacuous_instance(lang: &Language) -> Result<RuleInstance, CheckError> {
    let (tl, exists_tl, _) = prop3_parts(lang)?;
    Ok(RuleInstance::new(
        RuleId::ExistsLOmega,
        vec![seq(one(lang, &tl)?, one(lang, &tl)?)],
        seq(one(lang, &exists_tl)?, one(lang, &tl)?),
    ))
}

/// The same conclusion from a premise family whose template is `T(l) |- T(l)`.
pub fn prop3_vacuous_family_instance(lang: &Language) -> Result<RuleInstance, CheckError> {
    let (tl, exists_tl, _) = prop3_parts(lang)?;
    let omega = ced(lang, &[(&tl, Multiplicity::Omega)])?;
    Ok(RuleInstance::with_family(
        seq(one(lang, &exists_tl)?, omega),
        FamilyPremises {
            var: Symbol::new("n"),
            start: 0,
            explicit: vec![],
            template: seq(one(lang, &tl)?, one(lang, &tl)?),
        },
    ))
}
