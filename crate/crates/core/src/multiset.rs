//! Multisets of formulas with multiplicities in omega+1, and sequents.
//!
//! Keys are stored in normal form (closed subterms normalized under the
//! coding equations), so lookups coincide with `formulas_equal`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::syntax::{parse_formula, Formula, Signature, SyntaxError};

/// A nonzero multiplicity: a positive natural or omega.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    Fin(u64),
    Omega,
}

impl Multiplicity {
    pub const ONE: Multiplicity = Multiplicity::Fin(1);

    /// `None` for zero.
    pub fn finite(n: u64) -> Option<Self> {
        (n > 0).then_some(Multiplicity::Fin(n))
    }

    pub fn is_omega(self) -> bool {
        self == Multiplicity::Omega
    }

    /// Removes one copy; omega minus one is omega.
    pub fn pred(self) -> Option<Self> {
        match self {
            Multiplicity::Fin(n) => Multiplicity::finite(n - 1),
            Multiplicity::Omega => Some(Multiplicity::Omega),
        }
    }
}

impl Add for Multiplicity {
    type Output = Multiplicity;

    fn add(self, rhs: Multiplicity) -> Multiplicity {
        match (self, rhs) {
            (Multiplicity::Fin(a), Multiplicity::Fin(b)) => a.checked_add(b).map_or(Multiplicity::Omega, Multiplicity::Fin),
            _ => Multiplicity::Omega,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Fin(n) => write!(f, "{n}"),
            Multiplicity::Omega => f.write_str("w"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Fin(n) => s.serialize_u64(*n),
            Multiplicity::Omega => s.serialize_str("w"),
        }
    }
}

impl<'de> Deserialize<'de> for Multiplicity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Multiplicity::finite(n).ok_or_else(|| serde::de::Error::custom("multiplicity must be positive")),
            Raw::S(s) if s == "w" || s == "omega" => Ok(Multiplicity::Omega),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad multiplicity `{s}`"))),
        }
    }
}

/// Finite-support multiset; absent formulas have multiplicity zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OmegaMultiset {
    entries: BTreeMap<Formula, Multiplicity>,
}

impl OmegaMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from already normalized formulas.
    pub fn from_entries(entries: impl IntoIterator<Item = (Formula, Multiplicity)>) -> Self {
        let mut m = OmegaMultiset::new();
        for (f, k) in entries {
            m.insert(f, k);
        }
        m
    }

    /// Normalizes each formula before inserting.
    pub fn from_formulas(
        sig: &Signature,
        entries: impl IntoIterator<Item = (Formula, Multiplicity)>,
    ) -> Result<Self, SyntaxError> {
        let mut m = OmegaMultiset::new();
        for (f, k) in entries {
            m.insert(sig.normalize_formula(&f)?, k);
        }
        Ok(m)
    }

    pub fn singleton(f: Formula) -> Self {
        Self::from_entries([(f, Multiplicity::ONE)])
    }

    /// Inserts a formula assumed to be in normal form.
    pub fn insert(&mut self, f: Formula, k: Multiplicity) {
        self.entries
            .entry(f)
            .and_modify(|m| *m = *m + k)
            .or_insert(k);
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, Multiplicity)> {
        self.entries.iter().map(|(f, m)| (f, *m))
    }

    pub fn get(&self, f: &Formula) -> Option<Multiplicity> {
        self.entries.get(f).copied()
    }

    /// Multiplicity of `f` up to the coding equations; `None` means zero.
    pub fn multiplicity_of(&self, sig: &Signature, f: &Formula) -> Result<Option<Multiplicity>, SyntaxError> {
        Ok(self.get(&sig.normalize_formula(f)?))
    }

    /// Removes one copy of `f`, or `None` when `f` is absent.
    pub fn remove_one(&self, f: &Formula) -> Option<Self> {
        let k = self.get(f)?;
        let mut out = self.clone();
        match k.pred() {
            Some(rest) => {
                out.entries.insert(f.clone(), rest);
            }
            None => {
                out.entries.remove(f);
            }
        }
        Some(out)
    }

    pub fn union(&self, other: &OmegaMultiset) -> OmegaMultiset {
        let mut out = self.clone();
        for (f, k) in other.iter() {
            out.insert(f.clone(), k);
        }
        out
    }

    /// Every member raised to multiplicity omega.
    pub fn omega_support(&self) -> OmegaMultiset {
        Self::from_entries(self.entries.keys().map(|f| (f.clone(), Multiplicity::Omega)))
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.entries.keys()
    }

    pub fn all_sentences(&self) -> bool {
        self.entries.keys().all(Formula::is_sentence)
    }
}

/// `a ∪ b` with pointwise multiplicity addition.
pub fn union(a: &OmegaMultiset, b: &OmegaMultiset) -> OmegaMultiset {
    a.union(b)
}

/// Eventually uniform family: explicit members for the first indices and one
/// tail multiset repeated at every later index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IndexedFamily {
    pub explicit: Vec<OmegaMultiset>,
    pub tail: OmegaMultiset,
}

/// Union over all omega indices of an eventually uniform family.
pub fn omega_union(family: &IndexedFamily) -> OmegaMultiset {
    family
        .explicit
        .iter()
        .fold(family.tail.omega_support(), |acc, m| acc.union(m))
}

impl fmt::Display for OmegaMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, k)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write_entry(f, a, k)?;
        }
        Ok(())
    }
}

fn write_entry(f: &mut fmt::Formatter<'_>, a: &Formula, k: Multiplicity) -> fmt::Result {
    match k {
        Multiplicity::Fin(1) => write!(f, "{a}"),
        k => write!(f, "{a}^{k}"),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub antecedent: OmegaMultiset,
    pub succedent: OmegaMultiset,
}

/// JSON form `{"ant": [["<formula>", n | "w"]], "suc": [...]}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SequentJson {
    pub ant: Vec<(String, Multiplicity)>,
    pub suc: Vec<(String, Multiplicity)>,
}

impl Sequent {
    pub fn new(antecedent: OmegaMultiset, succedent: OmegaMultiset) -> Self {
        Sequent { antecedent, succedent }
    }

    /// Parses `A, B^2 |- C^w`.
    pub fn parse(text: &str, sig: &Signature) -> Result<Self, SyntaxError> {
        let (ant, suc) = split_turnstile(text)?;
        Ok(Sequent {
            antecedent: parse_side(ant, sig)?,
            succedent: parse_side(suc, sig)?,
        })
    }

    pub fn to_json(&self) -> SequentJson {
        let side = |m: &OmegaMultiset| m.iter().map(|(f, k)| (f.to_string(), k)).collect();
        SequentJson {
            ant: side(&self.antecedent),
            suc: side(&self.succedent),
        }
    }

    pub fn from_json(json: &SequentJson, sig: &Signature) -> Result<Self, SyntaxError> {
        let side = |entries: &[(String, Multiplicity)]| -> Result<OmegaMultiset, SyntaxError> {
            let mut m = OmegaMultiset::new();
            for (text, k) in entries {
                let f = parse_formula(text, sig)?;
                require_sentence(&f)?;
                m.insert(sig.normalize_formula(&f)?, *k);
            }
            Ok(m)
        };
        Ok(Sequent {
            antecedent: side(&json.ant)?,
            succedent: side(&json.suc)?,
        })
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.antecedent)?;
        if !self.antecedent.is_empty() {
            f.write_str(" ")?;
        }
        f.write_str("|-")?;
        if !self.succedent.is_empty() {
            write!(f, " {}", self.succedent)?;
        }
        Ok(())
    }
}

fn require_sentence(f: &Formula) -> Result<(), SyntaxError> {
    if !f.is_sentence() {
        return Err(SyntaxError::NotASentence(f.to_string()));
    }
    Ok(())
}

pub(crate) fn split_turnstile(text: &str) -> Result<(&str, &str), SyntaxError> {
    let (ant, suc) = text.split_once("|-").ok_or_else(|| SyntaxError::Parse {
        pos: 0,
        message: "expected `|-` in sequent".into(),
    })?;
    if suc.contains("|-") {
        return Err(SyntaxError::Parse {
            pos: ant.len() + 2 + suc.find("|-").unwrap_or(0),
            message: "more than one `|-`".into(),
        });
    }
    Ok((ant, suc))
}

/// Splits on commas outside parentheses.
pub(crate) fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out.into_iter().map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// Splits an optional `^w` / `^n` suffix.
pub(crate) fn split_multiplicity(item: &str) -> Result<(&str, Multiplicity), SyntaxError> {
    match item.rsplit_once('^') {
        None => Ok((item, Multiplicity::ONE)),
        Some((f, k)) => {
            let k = k.trim();
            let m = if k == "w" || k == "omega" {
                Multiplicity::Omega
            } else {
                k.parse::<u64>()
                    .ok()
                    .and_then(Multiplicity::finite)
                    .ok_or_else(|| SyntaxError::Parse {
                        pos: 0,
                        message: format!("bad multiplicity `^{k}`"),
                    })?
            };
            Ok((f.trim(), m))
        }
    }
}

fn parse_side(text: &str, sig: &Signature) -> Result<OmegaMultiset, SyntaxError> {
    let mut m = OmegaMultiset::new();
    for item in split_top_level(text) {
        let (f, k) = split_multiplicity(item)?;
        let f = parse_formula(f, sig)?;
        require_sentence(&f)?;
        m.insert(sig.normalize_formula(&f)?, k);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Term;

    fn tl() -> Formula {
        Formula::atom("T", vec![Term::constant("l")])
    }

    fn a() -> Formula {
        Formula::atom("P", vec![Term::constant("a")])
    }

    fn b() -> Formula {
        Formula::atom("P", vec![Term::constant("b")])
    }

    #[test]
    fn union_absorbs_into_omega() {
        let one = OmegaMultiset::singleton(tl());
        let w = OmegaMultiset::from_entries([(tl(), Multiplicity::Omega)]);
        assert_eq!(union(&one, &w), w);
    }

    #[test]
    fn union_identity_and_addition() {
        let two = OmegaMultiset::from_entries([(a(), Multiplicity::Fin(2))]);
        assert_eq!(union(&OmegaMultiset::new(), &two), two);
        let ab = OmegaMultiset::from_entries([(a(), Multiplicity::ONE), (b(), Multiplicity::ONE)]);
        let expected = OmegaMultiset::from_entries([(a(), Multiplicity::Fin(2)), (b(), Multiplicity::ONE)]);
        assert_eq!(union(&ab, &OmegaMultiset::singleton(a())), expected);
    }

    #[test]
    fn omega_union_cases() {
        let tail_only = IndexedFamily {
            explicit: vec![],
            tail: OmegaMultiset::singleton(tl()),
        };
        assert_eq!(omega_union(&tail_only), OmegaMultiset::from_entries([(tl(), Multiplicity::Omega)]));

        let single = IndexedFamily {
            explicit: vec![OmegaMultiset::singleton(a())],
            tail: OmegaMultiset::new(),
        };
        assert_eq!(omega_union(&single), OmegaMultiset::singleton(a()));

        // 1 + 2 by direct addition.
        let summed = IndexedFamily {
            explicit: vec![
                OmegaMultiset::singleton(a()),
                OmegaMultiset::from_entries([(a(), Multiplicity::Fin(2))]),
            ],
            tail: OmegaMultiset::new(),
        };
        assert_eq!(omega_union(&summed), OmegaMultiset::from_entries([(a(), Multiplicity::Fin(3))]));
    }

    #[test]
    fn multiplicity_lookup_is_modulo_coding() {
        let s = Signature::parse(
            "arith\nconst m\nfun Tdot/1\nfun fm/2\nname m = ~Ex x T(fm(x, m))\nrewrite fm(0, y) => y",
        )
        .unwrap();
        let with_fm = parse_formula("T(fm(0, m))", &s).unwrap();
        let plain = parse_formula("T(m)", &s).unwrap();
        let ms = OmegaMultiset::from_formulas(&s, [(with_fm, Multiplicity::ONE)]).unwrap();
        assert_eq!(ms.multiplicity_of(&s, &plain).unwrap(), Some(Multiplicity::ONE));
        assert_eq!(OmegaMultiset::new().multiplicity_of(&s, &plain).unwrap(), None);
        let w = OmegaMultiset::from_entries([(plain.clone(), Multiplicity::Omega)]);
        assert_eq!(w.get(&plain), Some(Multiplicity::Omega));
    }

    #[test]
    fn omega_minus_one_is_omega() {
        let w = OmegaMultiset::from_entries([(tl(), Multiplicity::Omega)]);
        assert_eq!(w.remove_one(&tl()), Some(w.clone()));
        assert_eq!(OmegaMultiset::singleton(tl()).remove_one(&tl()), Some(OmegaMultiset::new()));
        assert_eq!(OmegaMultiset::new().remove_one(&tl()), None);
    }

    #[test]
    fn sequent_text_and_json() {
        let s = Signature::parse("const l, a\npred P/1").unwrap();
        let seq = Sequent::parse("P(a), P(a) |- T(l)^w", &s).unwrap();
        assert_eq!(seq.antecedent.get(&a()), Some(Multiplicity::Fin(2)));
        assert_eq!(seq.succedent.get(&tl()), Some(Multiplicity::Omega));
        assert_eq!(seq.to_string(), "P(a)^2 |- T(l)^w");
        let json = serde_json::to_string(&seq.to_json()).unwrap();
        assert_eq!(json, r#"{"ant":[["P(a)",2]],"suc":[["T(l)","w"]]}"#);
        let back: SequentJson = serde_json::from_str(&json).unwrap();
        assert_eq!(Sequent::from_json(&back, &s).unwrap(), seq);
        assert_eq!(Sequent::parse("|-", &s).unwrap(), Sequent::default());
        assert!(Sequent::parse("P(x) |-", &s).is_err());
    }
}
