//! Cedents: finite omega-multisets plus indexed formula families.
//!
//! A family `{F[t_i/#i] : i >= start}` stands for the multiset union of its
//! instances, each with the family's multiplicity. Cedents are kept in a
//! canonical form so that derived equality is multiset equality for every
//! case the checker needs:
//!
//! * the index variable is renamed to [`INDEX_VAR`];
//! * in arithmetic signatures a template mentioning the index only as
//!   `succ(#i)` is shifted to `#i` with `start + 1`;
//! * a template without the index becomes a finite entry of multiplicity omega;
//! * families with the same template are merged;
//! * finite entries equal to the instance just below `start` are absorbed;
//! * finite entries already covered by an omega family are dropped.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::multiset::{Multiplicity, OmegaMultiset, Sequent};
use crate::syntax::{Formula, Signature, Symbol, SyntaxError, Term, TermUniverse, SUCC};

/// Bound index variable of canonical families.
pub const INDEX_VAR: &str = "#i";

/// How many instances of each family are offered as principal formulas.
pub const PRINCIPAL_WINDOW: u64 = 8;

/// How far past `start` instance lookup searches a family.
const INSTANCE_SEARCH: u64 = 64;

/// Signature plus the index universe used by the quantifier rules.
#[derive(Debug, Clone)]
pub struct Language {
    sig: Arc<Signature>,
    universe: Arc<TermUniverse>,
}

impl Language {
    pub fn new(sig: Signature) -> Result<Self, SyntaxError> {
        Self::from_arc(Arc::new(sig))
    }

    pub fn from_arc(sig: Arc<Signature>) -> Result<Self, SyntaxError> {
        let universe = Arc::new(TermUniverse::for_signature(&sig)?);
        Ok(Language { sig, universe })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn universe(&self) -> &TermUniverse {
        &self.universe
    }

    /// `t_i`.
    pub fn term(&self, i: u64) -> Term {
        self.universe.term(i as usize)
    }

    pub fn normalize(&self, f: &Formula) -> Result<Formula, SyntaxError> {
        self.sig.normalize_formula(f)
    }
}

fn index_var() -> Symbol {
    Symbol::new(INDEX_VAR)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormulaFamily {
    pub template: Formula,
    pub start: u64,
    pub var: Symbol,
    pub multiplicity: Multiplicity,
}

impl FormulaFamily {
    pub fn new(var: &str, start: u64, template: Formula, multiplicity: Multiplicity) -> Self {
        FormulaFamily {
            template,
            start,
            var: Symbol::new(var),
            multiplicity,
        }
    }

    /// Normalized `F[t_i/var]`.
    pub fn instance(&self, lang: &Language, i: u64) -> Result<Formula, SyntaxError> {
        lang.normalize(&self.template.substitute(&self.var, &lang.term(i)))
    }
}

/// `Some(t')` when every occurrence of `x` in `t` is `succ(x)`; `t'` has them unwrapped.
fn strip_succ(t: &Term, x: &Symbol) -> Option<Term> {
    match t {
        Term::Var(v) if v == x => None,
        Term::App(f, args) if f.as_str() == SUCC && matches!(args.as_slice(), [Term::Var(v)] if v == x) => {
            Some(Term::Var(x.clone()))
        }
        Term::App(f, args) => Some(Term::App(
            f.clone(),
            args.iter().map(|a| strip_succ(a, x)).collect::<Option<_>>()?,
        )),
        _ => Some(t.clone()),
    }
}

fn strip_succ_formula(f: &Formula, x: &Symbol) -> Option<Formula> {
    f.try_map_terms(&mut |t| strip_succ(t, x).ok_or(())).ok()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cedent {
    finite: OmegaMultiset,
    families: Vec<FormulaFamily>,
}

impl Cedent {
    pub fn empty() -> Self {
        Cedent::default()
    }

    pub fn new(lang: &Language, finite: OmegaMultiset, families: Vec<FormulaFamily>) -> Result<Self, SyntaxError> {
        let mut normalized = OmegaMultiset::new();
        for (f, m) in finite.iter() {
            normalized.insert(lang.normalize(f)?, m);
        }
        canonicalize(lang, normalized, families)
    }

    pub fn from_formulas(
        lang: &Language,
        entries: impl IntoIterator<Item = (Formula, Multiplicity)>,
    ) -> Result<Self, SyntaxError> {
        Cedent::new(lang, OmegaMultiset::from_entries(entries), Vec::new())
    }

    pub fn finite(&self) -> &OmegaMultiset {
        &self.finite
    }

    pub fn families(&self) -> &[FormulaFamily] {
        &self.families
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.families.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.families.is_empty()
    }

    pub fn add(&self, lang: &Language, f: &Formula, m: Multiplicity) -> Result<Self, SyntaxError> {
        let mut finite = self.finite.clone();
        finite.insert(lang.normalize(f)?, m);
        canonicalize(lang, finite, self.families.clone())
    }

    pub fn add_family(&self, lang: &Language, fam: FormulaFamily) -> Result<Self, SyntaxError> {
        let mut families = self.families.clone();
        families.push(fam);
        canonicalize(lang, self.finite.clone(), families)
    }

    pub fn union(&self, lang: &Language, other: &Cedent) -> Result<Self, SyntaxError> {
        let mut families = self.families.clone();
        families.extend(other.families.iter().cloned());
        canonicalize(lang, self.finite.union(&other.finite), families)
    }

    /// Removes one occurrence of `f`, looking in the finite part first and
    /// then at the first instances of each family.
    pub fn remove_one(&self, lang: &Language, f: &Formula) -> Result<Option<Self>, SyntaxError> {
        let f = lang.normalize(f)?;
        if let Some(rest) = self.finite.remove_one(&f) {
            return canonicalize(lang, rest, self.families.clone()).map(Some);
        }
        for (k, fam) in self.families.iter().enumerate() {
            for j in fam.start..fam.start + INSTANCE_SEARCH {
                if fam.instance(lang, j)? != f {
                    continue;
                }
                let mut finite = self.finite.clone();
                for i in fam.start..j {
                    finite.insert(fam.instance(lang, i)?, fam.multiplicity);
                }
                if let Some(m) = fam.multiplicity.pred() {
                    finite.insert(f.clone(), m);
                }
                let mut families = self.families.clone();
                families[k].start = j + 1;
                return canonicalize(lang, finite, families).map(Some);
            }
        }
        Ok(None)
    }

    /// Formulas that may serve as a principal formula: the finite members
    /// and the first [`PRINCIPAL_WINDOW`] instances of each family.
    pub fn principal_candidates(&self, lang: &Language) -> Result<Vec<Formula>, SyntaxError> {
        let mut out: Vec<Formula> = self.finite.formulas().cloned().collect();
        for fam in &self.families {
            for i in fam.start..fam.start + PRINCIPAL_WINDOW {
                let f = fam.instance(lang, i)?;
                if !out.contains(&f) {
                    out.push(f);
                }
            }
        }
        Ok(out)
    }

    pub fn mentions(&self, x: &Symbol) -> bool {
        self.finite.formulas().any(|f| f.has_free(x)) || self.families.iter().any(|fam| fam.template.has_free(x))
    }

    pub fn binds(&self, x: &Symbol) -> bool {
        self.finite.formulas().any(|f| f.binds(x)) || self.families.iter().any(|fam| fam.template.binds(x))
    }

    /// Replaces the free variable `x` by `t` everywhere.
    pub fn substitute(&self, lang: &Language, x: &Symbol, t: &Term) -> Result<Self, SyntaxError> {
        let mut finite = OmegaMultiset::new();
        for (f, m) in self.finite.iter() {
            finite.insert(lang.normalize(&f.substitute(x, t))?, m);
        }
        let families = self
            .families
            .iter()
            .map(|fam| FormulaFamily {
                template: fam.template.substitute(x, t),
                ..fam.clone()
            })
            .collect();
        canonicalize(lang, finite, families)
    }

    /// Every member is a sentence (family templates up to their index).
    pub fn is_closed(&self) -> bool {
        self.finite.all_sentences()
            && self
                .families
                .iter()
                .all(|fam| fam.template.free_vars().iter().all(|v| *v == fam.var))
    }

    pub fn to_json(&self) -> Vec<serde_json::Value> {
        let mut out: Vec<serde_json::Value> = self
            .finite
            .iter()
            .map(|(f, m)| serde_json::json!([f.to_string(), m]))
            .collect();
        for fam in &self.families {
            out.push(serde_json::json!([
                fam.template.to_string(),
                fam.multiplicity,
                { "var": fam.var.as_str(), "start": fam.start }
            ]));
        }
        out
    }
}

fn canonicalize(lang: &Language, mut finite: OmegaMultiset, families: Vec<FormulaFamily>) -> Result<Cedent, SyntaxError> {
    let x = index_var();
    let mut pending: Vec<FormulaFamily> = Vec::new();
    for fam in families {
        if fam.template.binds(&fam.var) {
            return Err(SyntaxError::InvalidRule(format!(
                "family index `{}` is bound inside `{}`",
                fam.var, fam.template
            )));
        }
        let mut template = lang.normalize(&fam.template.substitute(&fam.var, &Term::Var(x.clone())))?;
        let mut start = fam.start;
        if !template.has_free(&x) {
            finite.insert(template, Multiplicity::Omega);
            continue;
        }
        if lang.signature().is_arithmetic() {
            while let Some(shifted) = strip_succ_formula(&template, &x) {
                template = shifted;
                start += 1;
            }
        }
        pending.push(FormulaFamily {
            template,
            start,
            var: x.clone(),
            multiplicity: fam.multiplicity,
        });
    }
    pending.sort();

    let mut merged: Vec<FormulaFamily> = Vec::new();
    let mut i = 0;
    while i < pending.len() {
        let mut j = i;
        while j < pending.len() && pending[j].template == pending[i].template {
            j += 1;
        }
        let group = &pending[i..j];
        let top = group.iter().map(|f| f.start).max().expect("nonempty group");
        let mut mult: Option<Multiplicity> = None;
        for fam in group {
            for k in fam.start..top {
                finite.insert(fam.instance(lang, k)?, fam.multiplicity);
            }
            mult = Some(mult.map_or(fam.multiplicity, |m| m + fam.multiplicity));
        }
        merged.push(FormulaFamily {
            template: group[0].template.clone(),
            start: top,
            var: x.clone(),
            multiplicity: mult.expect("nonempty group"),
        });
        i = j;
    }

    for fam in &mut merged {
        while fam.start > 0 {
            let below = fam.instance(lang, fam.start - 1)?;
            let absorbed = match (finite.get(&below), fam.multiplicity) {
                (Some(Multiplicity::Omega), _) => true,
                (Some(Multiplicity::Fin(have)), Multiplicity::Fin(need)) if have >= need => {
                    let mut rest = finite.clone();
                    for _ in 0..need {
                        rest = rest.remove_one(&below).expect("enough copies");
                    }
                    finite = rest;
                    true
                }
                _ => false,
            };
            if !absorbed {
                break;
            }
            fam.start -= 1;
        }
    }
    // omega + m = omega: instances already covered by an omega family are redundant.
    for fam in merged.iter().filter(|f| f.multiplicity.is_omega()) {
        let covered: Vec<Formula> = finite
            .formulas()
            .filter(|f| instance_index(lang, fam, f).is_some_and(|i| i >= fam.start))
            .cloned()
            .collect();
        if !covered.is_empty() {
            finite = OmegaMultiset::from_entries(finite.iter().filter(|(f, _)| !covered.contains(f)).map(|(f, m)| (f.clone(), m)));
        }
    }
    Ok(Cedent {
        finite,
        families: merged,
    })
}

/// The index `i` with `fam.instance(i) == f`, found by matching `f` against
/// the template and confirmed by instantiating.
fn instance_index(lang: &Language, fam: &FormulaFamily, f: &Formula) -> Option<u64> {
    let mut bound = None;
    if !match_formula(&fam.template, &fam.var, f, &mut bound) {
        return None;
    }
    let i = lang.universe().index_of(bound.as_ref()?)? as u64;
    (fam.instance(lang, i).ok()? == *f).then_some(i)
}

fn match_formula(t: &Formula, x: &Symbol, f: &Formula, bound: &mut Option<Term>) -> bool {
    match (t, f) {
        (Formula::Atom(p, ts), Formula::Atom(q, fs)) => {
            p == q && ts.len() == fs.len() && ts.iter().zip(fs).all(|(a, b)| match_term(a, x, b, bound))
        }
        (Formula::Neg(a), Formula::Neg(b)) => match_formula(a, x, b, bound),
        (Formula::Cond(a1, a2), Formula::Cond(b1, b2)) => {
            match_formula(a1, x, b1, bound) && match_formula(a2, x, b2, bound)
        }
        (Formula::Exists(v, a), Formula::Exists(w, b)) => v == w && v != x && match_formula(a, x, b, bound),
        _ => false,
    }
}

fn match_term(t: &Term, x: &Symbol, f: &Term, bound: &mut Option<Term>) -> bool {
    match t {
        Term::Var(v) if v == x => {
            if !f.is_closed() {
                return false;
            }
            match bound {
                Some(b) => b == f,
                None => {
                    *bound = Some(f.clone());
                    true
                }
            }
        }
        Term::App(g, ts) => match f {
            Term::App(h, fs) => g == h && ts.len() == fs.len() && ts.iter().zip(fs).all(|(a, b)| match_term(a, x, b, bound)),
            _ => false,
        },
        _ => t == f,
    }
}

impl fmt::Display for FormulaFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{} : {} >= {}}}", self.template, self.var, self.start)?;
        if self.multiplicity != Multiplicity::ONE {
            write!(f, "^{}", self.multiplicity)?;
        }
        Ok(())
    }
}

impl fmt::Display for Cedent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.finite)?;
        for (i, fam) in self.families.iter().enumerate() {
            if i > 0 || !self.finite.is_empty() {
                f.write_str(", ")?;
            }
            write!(f, "{fam}")?;
        }
        Ok(())
    }
}

/// A sequent whose cedents may contain families.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchematicSequent {
    pub ant: Cedent,
    pub suc: Cedent,
}

/// One cedent entry of the JSON form: `["F", n | "w"]`, optionally with a
/// third element `{"var": "n", "start": k}` marking a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Plain(String, Multiplicity),
    Family(String, Multiplicity, FamilyTag),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyTag {
    pub var: String,
    #[serde(default)]
    pub start: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SchematicJson {
    #[serde(default)]
    pub ant: Vec<EntryJson>,
    #[serde(default)]
    pub suc: Vec<EntryJson>,
}

impl SchematicSequent {
    pub fn new(ant: Cedent, suc: Cedent) -> Self {
        SchematicSequent { ant, suc }
    }

    pub fn from_sequent(lang: &Language, s: &Sequent) -> Result<Self, SyntaxError> {
        Ok(SchematicSequent {
            ant: Cedent::new(lang, s.antecedent.clone(), vec![])?,
            suc: Cedent::new(lang, s.succedent.clone(), vec![])?,
        })
    }

    /// The plain sequent, when both cedents are finite.
    pub fn to_sequent(&self) -> Option<Sequent> {
        (self.ant.is_finite() && self.suc.is_finite())
            .then(|| Sequent::new(self.ant.finite().clone(), self.suc.finite().clone()))
    }

    /// Parses `A, B^w |- C`; families are only available in the JSON form.
    pub fn parse(lang: &Language, text: &str) -> Result<Self, SyntaxError> {
        Self::from_sequent(lang, &Sequent::parse(text, lang.signature())?)
    }

    pub fn substitute(&self, lang: &Language, x: &Symbol, t: &Term) -> Result<Self, SyntaxError> {
        Ok(SchematicSequent {
            ant: self.ant.substitute(lang, x, t)?,
            suc: self.suc.substitute(lang, x, t)?,
        })
    }

    pub fn mentions(&self, x: &Symbol) -> bool {
        self.ant.mentions(x) || self.suc.mentions(x)
    }

    pub fn binds(&self, x: &Symbol) -> bool {
        self.ant.binds(x) || self.suc.binds(x)
    }

    pub fn is_closed(&self) -> bool {
        self.ant.is_closed() && self.suc.is_closed()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "ant": self.ant.to_json(), "suc": self.suc.to_json() })
    }

    pub fn from_json(lang: &Language, json: &SchematicJson) -> Result<Self, SyntaxError> {
        let side = |entries: &[EntryJson]| -> Result<Cedent, SyntaxError> {
            let mut finite = OmegaMultiset::new();
            let mut families = Vec::new();
            for e in entries {
                match e {
                    EntryJson::Plain(text, m) => {
                        finite.insert(crate::syntax::parse_formula(text, lang.signature())?, *m);
                    }
                    EntryJson::Family(text, m, tag) => {
                        let f = crate::syntax::parse_formula(text, lang.signature())?;
                        families.push(FormulaFamily::new(&tag.var, tag.start, f, *m));
                    }
                }
            }
            Cedent::new(lang, finite, families)
        };
        Ok(SchematicSequent {
            ant: side(&json.ant)?,
            suc: side(&json.suc)?,
        })
    }
}

impl fmt::Display for SchematicSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ant)?;
        if !self.ant.is_empty() {
            f.write_str(" ")?;
        }
        f.write_str("|-")?;
        if !self.suc.is_empty() {
            write!(f, " {}", self.suc)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn prop1() -> Language {
        Language::new(
            Signature::parse(
                "arith\nconst m\nfun Tdot/1, fm/2\nname m = ~Ex x T(fm(x, m))\nrewrite Tdot(t) => quote(T(t))\nrewrite fm(0, y) => y\nrewrite fm(succ(n), y) => Tdot(fm(n, y))",
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn f(lang: &Language, s: &str) -> Formula {
        parse_formula(s, lang.signature()).unwrap()
    }

    #[test]
    fn shifted_and_peeled_families_coincide() {
        let l = prop1();
        let a = Cedent::new(&l, OmegaMultiset::new(), vec![FormulaFamily::new("n", 0, f(&l, "T(fm(succ(n), m))"), Multiplicity::ONE)]).unwrap();
        let b = Cedent::new(&l, OmegaMultiset::new(), vec![FormulaFamily::new("k", 1, f(&l, "T(fm(k, m))"), Multiplicity::ONE)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.families()[0].start, 1);
        // Adding T(m) = T(fm(0, m)) extends the family down to 0.
        let c = a.add(&l, &f(&l, "T(m)"), Multiplicity::ONE).unwrap();
        let d = Cedent::new(&l, OmegaMultiset::new(), vec![FormulaFamily::new("n", 0, f(&l, "T(fm(n, m))"), Multiplicity::ONE)]).unwrap();
        assert_eq!(c, d);
        assert!(c.finite().is_empty());
    }

    #[test]
    fn vacuous_family_is_omega_copies() {
        let l = Language::new(Signature::parse("const l\nname l = ~Ex x T(l)").unwrap()).unwrap();
        let fam = Cedent::new(&l, OmegaMultiset::new(), vec![FormulaFamily::new("n", 3, f(&l, "T(l)"), Multiplicity::ONE)]).unwrap();
        let w = Cedent::from_formulas(&l, [(f(&l, "T(l)"), Multiplicity::Omega)]).unwrap();
        assert_eq!(fam, w);
        assert_eq!(w.remove_one(&l, &f(&l, "T(l)")).unwrap(), Some(w.clone()));
    }

    #[test]
    fn remove_instance_from_family() {
        let l = prop1();
        let d = Cedent::new(&l, OmegaMultiset::new(), vec![FormulaFamily::new("n", 0, f(&l, "T(fm(n, m))"), Multiplicity::ONE)]).unwrap();
        let rest = d.remove_one(&l, &f(&l, "T(fm(2, m))")).unwrap().unwrap();
        assert_eq!(rest.finite().len(), 2);
        assert_eq!(rest.families()[0].start, 3);
        assert_eq!(rest.add(&l, &f(&l, "T(fm(2, m))"), Multiplicity::ONE).unwrap(), d);
    }

    #[test]
    fn json_roundtrip() {
        let l = prop1();
        let json: SchematicJson = serde_json::from_str(r#"{"ant":[["T(m)",1]],"suc":[["T(fm(n, m))",1,{"var":"n","start":1}]]}"#).unwrap();
        let s = SchematicSequent::from_json(&l, &json).unwrap();
        let back: SchematicJson = serde_json::from_value(s.to_json()).unwrap();
        assert_eq!(SchematicSequent::from_json(&l, &back).unwrap(), s);
        assert_eq!(s.to_string(), "T(m) |- {T(fm(#i, m)) : #i >= 1}");
    }
}
