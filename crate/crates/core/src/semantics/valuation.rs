use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{EvalError, UnitValue};
use crate::syntax::{is_blank, parse_formula, Formula, Signature, Symbol, SyntaxError, TermUniverse};

pub const DEFAULT_UNFOLD_BUDGET: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantifierMode {
    /// `V(Ex x A)` is the supremum of the instance values.
    Sup,
    /// `V(Ex x A)` is `min{1, sum of the instance values}`.
    Sum,
}

/// Finitely presented valuation: explicit atom values over predicate
/// defaults, optionally transparent for the truth predicate, optionally
/// with one atom left symbolic for parametric evaluation.
#[derive(Debug, Clone)]
pub struct Valuation {
    sig: Arc<Signature>,
    universe: Arc<TermUniverse>,
    pub mode: QuantifierMode,
    atoms: BTreeMap<Formula, UnitValue>,
    defaults: BTreeMap<Symbol, UnitValue>,
    pub transparent: bool,
    pub unfold_budget: usize,
    unknown: Option<Formula>,
}

impl Valuation {
    pub fn new(sig: Signature, mode: QuantifierMode) -> Result<Self, EvalError> {
        Self::with_signature(Arc::new(sig), mode)
    }

    pub fn with_signature(sig: Arc<Signature>, mode: QuantifierMode) -> Result<Self, EvalError> {
        let universe = Arc::new(TermUniverse::for_signature(&sig)?);
        Ok(Valuation {
            sig,
            universe,
            mode,
            atoms: BTreeMap::new(),
            defaults: BTreeMap::new(),
            transparent: false,
            unfold_budget: DEFAULT_UNFOLD_BUDGET,
            unknown: None,
        })
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

    pub fn with_mode(&self, mode: QuantifierMode) -> Self {
        Valuation { mode, ..self.clone() }
    }

    fn closed_atom(&self, atom: &Formula) -> Result<Formula, EvalError> {
        if !matches!(atom, Formula::Atom(..)) {
            return Err(EvalError::NotAnAtom(atom.to_string()));
        }
        if !atom.is_sentence() {
            return Err(EvalError::OpenFormula(atom.to_string()));
        }
        Ok(self.sig.normalize_formula(atom)?)
    }

    pub fn set_atom(&mut self, atom: &Formula, v: UnitValue) -> Result<(), EvalError> {
        let key = self.closed_atom(atom)?;
        self.atoms.insert(key, v);
        Ok(())
    }

    pub fn set_default(&mut self, pred: &str, v: UnitValue) -> Result<(), EvalError> {
        if !matches!(self.sig.kind_of(pred), Some(crate::syntax::SymbolKind::Predicate(_))) {
            return Err(SyntaxError::UnknownSymbol(pred.to_string()).into());
        }
        self.defaults.insert(Symbol::new(pred), v);
        Ok(())
    }

    /// Leaves `atom` symbolic; only parametric evaluation accepts it.
    pub fn set_unknown(&mut self, atom: &Formula) -> Result<(), EvalError> {
        let key = self.closed_atom(atom)?;
        if let Some(u) = &self.unknown {
            if *u != key {
                return Err(EvalError::MultipleUnknowns(u.to_string(), key.to_string()));
            }
        }
        self.unknown = Some(key);
        Ok(())
    }

    pub fn unknown(&self) -> Option<&Formula> {
        self.unknown.as_ref()
    }

    /// The valuation with the unknown atom fixed to `v`.
    pub fn instantiate_unknown(&self, v: UnitValue) -> Self {
        let mut out = self.clone();
        if let Some(u) = out.unknown.take() {
            out.atoms.insert(u, v);
        }
        out
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Formula, &UnitValue)> {
        self.atoms.iter()
    }

    pub fn defaults(&self) -> impl Iterator<Item = (&Symbol, &UnitValue)> {
        self.defaults.iter()
    }

    /// Value of a normalized atom from the explicit table.
    pub fn atom_entry(&self, atom: &Formula) -> Option<&UnitValue> {
        self.atoms.get(atom)
    }

    pub fn default_of(&self, pred: &Symbol) -> UnitValue {
        self.defaults.get(pred).cloned().unwrap_or_else(UnitValue::zero)
    }

    /// Loads the text form. Signature declarations may be mixed in; they are
    /// applied before any valuation line is read.
    pub fn parse(text: &str) -> Result<Self, EvalError> {
        let mut sig = Signature::new();
        let mut rest = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let applied = sig.apply_declaration(line).map_err(|e| at_line(i, e.into()))?;
            if !applied && !is_blank(line) {
                rest.push((i, line.trim()));
            }
        }
        let mut v = Valuation::new(sig, QuantifierMode::Sum)?;
        for (i, line) in rest {
            v.apply_line(line).map_err(|e| at_line(i, e))?;
        }
        Ok(v)
    }

    fn apply_line(&mut self, line: &str) -> Result<(), EvalError> {
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let value = |s: &str| UnitValue::parse(s).ok_or_else(|| EvalError::BadValue(s.trim().to_string()));
        match kw {
            "mode" => {
                self.mode = match rest {
                    "sum" => QuantifierMode::Sum,
                    "sup" => QuantifierMode::Sup,
                    _ => return Err(EvalError::BadLine(format!("unknown mode `{rest}`"))),
                }
            }
            "default" => {
                let (p, q) = rest.split_once('=').ok_or_else(|| EvalError::BadLine(line.to_string()))?;
                self.set_default(p.trim(), value(q)?)?;
            }
            "atom" => {
                let (a, q) = rest.rsplit_once('=').ok_or_else(|| EvalError::BadLine(line.to_string()))?;
                let atom = parse_formula(a.trim(), &self.sig)?;
                self.set_atom(&atom, value(q)?)?;
            }
            "transparent" => {
                self.transparent = match rest {
                    "on" | "true" => true,
                    "off" | "false" => false,
                    _ => return Err(EvalError::BadLine(line.to_string())),
                }
            }
            "unknown" => {
                let atom = parse_formula(rest, &self.sig)?;
                self.set_unknown(&atom)?;
            }
            "budget" => {
                self.unfold_budget = rest.parse().map_err(|_| EvalError::BadLine(line.to_string()))?;
            }
            _ => return Err(EvalError::BadLine(line.to_string())),
        }
        Ok(())
    }

    /// Valuation lines only (no signature declarations).
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mode = match self.mode {
            QuantifierMode::Sum => "sum",
            QuantifierMode::Sup => "sup",
        };
        let _ = writeln!(out, "mode {mode}");
        for (p, v) in &self.defaults {
            let _ = writeln!(out, "default {p} = {v}");
        }
        for (a, v) in &self.atoms {
            let _ = writeln!(out, "atom {a} = {v}");
        }
        if self.transparent {
            let _ = writeln!(out, "transparent on");
        }
        if let Some(u) = &self.unknown {
            let _ = writeln!(out, "unknown {u}");
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mode": self.mode,
            "defaults": self.defaults.iter().map(|(p, v)| (p.to_string(), v.to_string())).collect::<BTreeMap<_, _>>(),
            "atoms": self.atoms.iter().map(|(a, v)| (a.to_string(), v.to_string())).collect::<BTreeMap<_, _>>(),
            "transparent": self.transparent,
        })
    }
}

fn at_line(i: usize, e: EvalError) -> EvalError {
    EvalError::Line {
        line: i + 1,
        source: Box::new(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_mixed_file() {
        let v = Valuation::parse(
            "# example\nconst a, b\npred P/1\nmode sup\ndefault P = 1/2\natom P(a) = 0.3\ntransparent on\nbudget 5",
        )
        .unwrap();
        assert_eq!(v.mode, QuantifierMode::Sup);
        assert_eq!(v.default_of(&"P".into()), UnitValue::ratio(1, 2));
        assert!(v.transparent);
        assert_eq!(v.unfold_budget, 5);
        let pa = parse_formula("P(a)", v.signature()).unwrap();
        assert_eq!(v.atom_entry(&pa), Some(&UnitValue::ratio(3, 10)));
        assert_eq!(v.default_of(&"T".into()), UnitValue::zero());
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Valuation::parse("const a\npred P/1\natom P(x) = 1").is_err());
        assert!(Valuation::parse("const a\npred P/1\natom P(a) = 2").is_err());
        assert!(Valuation::parse("const a\nmode both").is_err());
        assert!(Valuation::parse("const a\nfrobnicate").is_err());
        assert!(Valuation::parse("const a\npred P/1\nunknown P(a)\nunknown T(a)").is_err());
    }
}
