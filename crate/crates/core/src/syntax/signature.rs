use std::collections::HashMap;
use std::sync::RwLock;

use super::parser::{parse_formula, parse_pattern};
use super::rewrite::{check_termination, RewriteRule};
use super::{Formula, Symbol, SyntaxError, SUCC, TRUTH};

pub const DEFAULT_STEP_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Constant,
    Function(usize),
    Predicate(usize),
}

#[derive(Debug, Default, Clone)]
struct NameTable {
    by_const: HashMap<Symbol, Formula>,
    by_formula: HashMap<Formula, Symbol>,
}

/// Constants, function and predicate symbols, the naming scheme for
/// sentences, and the coding equations.
///
/// Canonical names requested for sentences without a declared name are
/// allocated on demand and spelled `quote(<normalized sentence>)`, so the
/// same sentence always receives the same constant regardless of the order
/// in which names are requested.
#[derive(Debug)]
pub struct Signature {
    constants: Vec<Symbol>,
    functions: Vec<(Symbol, usize)>,
    predicates: Vec<(Symbol, usize)>,
    kinds: HashMap<Symbol, SymbolKind>,
    arithmetic: bool,
    rules: Vec<RewriteRule>,
    names: RwLock<NameTable>,
    step_budget: usize,
}

impl Clone for Signature {
    fn clone(&self) -> Self {
        Signature {
            constants: self.constants.clone(),
            functions: self.functions.clone(),
            predicates: self.predicates.clone(),
            kinds: self.kinds.clone(),
            arithmetic: self.arithmetic,
            rules: self.rules.clone(),
            names: RwLock::new(self.names.read().expect("name table poisoned").clone()),
            step_budget: self.step_budget,
        }
    }
}

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    /// An empty signature carrying only the truth predicate `T/1`.
    pub fn new() -> Self {
        let mut sig = Signature {
            constants: Vec::new(),
            functions: Vec::new(),
            predicates: Vec::new(),
            kinds: HashMap::new(),
            arithmetic: false,
            rules: Vec::new(),
            names: RwLock::new(NameTable::default()),
            step_budget: DEFAULT_STEP_BUDGET,
        };
        sig.add_predicate(TRUTH, 1).expect("fresh signature");
        sig
    }

    pub fn constants(&self) -> &[Symbol] {
        &self.constants
    }

    pub fn functions(&self) -> &[(Symbol, usize)] {
        &self.functions
    }

    pub fn predicates(&self) -> &[(Symbol, usize)] {
        &self.predicates
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn is_arithmetic(&self) -> bool {
        self.arithmetic
    }

    pub fn step_budget(&self) -> usize {
        self.step_budget
    }

    pub fn set_step_budget(&mut self, budget: usize) {
        self.step_budget = budget;
    }

    pub fn kind_of(&self, name: &str) -> Option<SymbolKind> {
        if self.arithmetic && name == SUCC {
            return Some(SymbolKind::Function(1));
        }
        self.kinds.get(&Symbol::new(name)).copied()
    }

    fn declare(&mut self, name: &str, kind: SymbolKind) -> Result<Symbol, SyntaxError> {
        let valid = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
        if !valid || matches!(name, "Ex" | "quote" | SUCC) {
            return Err(SyntaxError::Parse {
                pos: 0,
                message: format!("`{name}` is not a valid symbol name"),
            });
        }
        let sym = Symbol::new(name);
        if self.kinds.contains_key(&sym) {
            return Err(SyntaxError::DuplicateSymbol(name.to_string()));
        }
        self.kinds.insert(sym.clone(), kind);
        Ok(sym)
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), SyntaxError> {
        let s = self.declare(name, SymbolKind::Constant)?;
        self.constants.push(s);
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        if arity == 0 {
            return self.add_constant(name);
        }
        let s = self.declare(name, SymbolKind::Function(arity))?;
        self.functions.push((s, arity));
        Ok(())
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        let s = self.declare(name, SymbolKind::Predicate(arity))?;
        self.predicates.push((s, arity));
        Ok(())
    }

    /// Enables numerals and the builtin successor `succ/1`.
    pub fn enable_arithmetic(&mut self) {
        self.arithmetic = true;
    }

    pub fn add_rule(&mut self, rule: RewriteRule) -> Result<(), SyntaxError> {
        rule.validate()?;
        let mut candidate = self.rules.clone();
        candidate.push(rule);
        check_termination(&candidate)?;
        self.rules = candidate;
        Ok(())
    }

    /// Removes every rule whose left-hand side is headed by `head`.
    pub fn remove_rules_for(&mut self, head: &str) {
        self.rules.retain(|r| !matches!(&r.lhs, super::Pattern::App(f, _) if f.as_str() == head));
    }

    /// Registers `constant` as the canonical name of `formula`, declaring the
    /// constant if needed. Names are injective in both directions.
    pub fn declare_name(&mut self, constant: &str, formula: &Formula) -> Result<(), SyntaxError> {
        match self.kind_of(constant) {
            None => self.add_constant(constant)?,
            Some(SymbolKind::Constant) => {}
            Some(_) => return Err(SyntaxError::DuplicateSymbol(constant.to_string())),
        }
        if !formula.is_sentence() {
            return Err(SyntaxError::NotASentence(formula.to_string()));
        }
        let key = self.normalize_formula(formula)?;
        let c = Symbol::new(constant);
        let mut names = self.names.write().expect("name table poisoned");
        if let Some(existing) = names.by_formula.get(&key) {
            if *existing != c {
                return Err(SyntaxError::NameConflict(format!("`{key}` is already named `{existing}`")));
            }
        }
        if let Some(existing) = names.by_const.get(&c) {
            if *existing != key {
                return Err(SyntaxError::NameConflict(format!("`{c}` already names `{existing}`")));
            }
        }
        names.by_const.insert(c.clone(), key.clone());
        names.by_formula.insert(key, c);
        Ok(())
    }

    /// The canonical name of a sentence, allocated on first request.
    pub fn name_of(&self, formula: &Formula) -> Result<Symbol, SyntaxError> {
        if !formula.is_sentence() {
            return Err(SyntaxError::NotASentence(formula.to_string()));
        }
        let key = self.normalize_formula(formula)?;
        if let Some(c) = self.names.read().expect("name table poisoned").by_formula.get(&key) {
            return Ok(c.clone());
        }
        let mut names = self.names.write().expect("name table poisoned");
        if let Some(c) = names.by_formula.get(&key) {
            return Ok(c.clone());
        }
        let c = Symbol::new(&format!("quote({key})"));
        names.by_const.insert(c.clone(), key.clone());
        names.by_formula.insert(key, c.clone());
        Ok(c)
    }

    /// The (normalized) sentence a constant names, if any.
    pub fn named_formula(&self, c: &Symbol) -> Option<Formula> {
        self.names.read().expect("name table poisoned").by_const.get(c).cloned()
    }

    /// Declared names in declaration-independent (sorted) order.
    pub fn naming_scheme(&self) -> Vec<(Symbol, Formula)> {
        let names = self.names.read().expect("name table poisoned");
        let mut v: Vec<_> = names
            .by_const
            .iter()
            .filter(|(c, _)| !c.is_generated_name())
            .map(|(c, f)| (c.clone(), f.clone()))
            .collect();
        v.sort();
        v
    }

    /// Loads a signature from its declarative text form.
    pub fn parse(text: &str) -> Result<Self, SyntaxError> {
        let mut sig = Signature::new();
        for (i, line) in text.lines().enumerate() {
            let applied = sig.apply_declaration(line).map_err(|e| SyntaxError::Line {
                line: i + 1,
                source: Box::new(e),
            })?;
            if !applied && !is_blank(line) {
                return Err(SyntaxError::Line {
                    line: i + 1,
                    source: Box::new(SyntaxError::Parse {
                        pos: 0,
                        message: format!("unrecognized declaration `{}`", line.trim()),
                    }),
                });
            }
        }
        Ok(sig)
    }

    /// Applies one declaration line. Returns `Ok(false)` for lines that are
    /// not signature declarations so that other loaders can share files.
    pub fn apply_declaration(&mut self, line: &str) -> Result<bool, SyntaxError> {
        let line = line.trim();
        if is_blank(line) {
            return Ok(false);
        }
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match kw {
            "arith" => self.enable_arithmetic(),
            "const" => {
                for c in rest.split(|ch: char| ch == ',' || ch.is_whitespace()).filter(|s| !s.is_empty()) {
                    self.add_constant(c)?;
                }
            }
            "fun" | "pred" => {
                for decl in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let (name, arity) = decl.split_once('/').ok_or_else(|| SyntaxError::Parse {
                        pos: 0,
                        message: format!("expected `name/arity`, found `{decl}`"),
                    })?;
                    let arity: usize = arity.trim().parse().map_err(|_| SyntaxError::Parse {
                        pos: 0,
                        message: format!("bad arity in `{decl}`"),
                    })?;
                    if kw == "fun" {
                        self.add_function(name.trim(), arity)?;
                    } else {
                        self.add_predicate(name.trim(), arity)?;
                    }
                }
            }
            "name" => {
                let (c, f) = rest.split_once('=').ok_or_else(|| SyntaxError::Parse {
                    pos: 0,
                    message: "expected `name <const> = <formula>`".into(),
                })?;
                let c = c.trim();
                if self.kind_of(c).is_none() {
                    self.add_constant(c)?;
                }
                let formula = parse_formula(f.trim(), self)?;
                self.declare_name(c, &formula)?;
            }
            "rewrite" => {
                let (l, r) = rest.split_once("=>").ok_or_else(|| SyntaxError::Parse {
                    pos: 0,
                    message: "expected `rewrite <lhs> => <rhs>`".into(),
                })?;
                let rule = RewriteRule {
                    lhs: parse_pattern(l.trim(), self)?,
                    rhs: parse_pattern(r.trim(), self)?,
                };
                self.add_rule(rule)?;
            }
            "steps" => {
                self.step_budget = rest.parse().map_err(|_| SyntaxError::Parse {
                    pos: 0,
                    message: format!("bad step budget `{rest}`"),
                })?;
            }
            _ => return Ok(false),
        }
        Ok(true)
    }
}

pub(crate) fn is_blank(line: &str) -> bool {
    let l = line.trim();
    l.is_empty() || l.starts_with("//") || (l.starts_with('#') && !l[1..].starts_with(|c: char| c.is_ascii_digit()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Term};

    #[test]
    fn loads_declarations() {
        let s = Signature::parse("# demo\nconst a, b\nfun f/2\npred P/1, R/0\nname l = P(a)").unwrap();
        assert_eq!(s.constants().len(), 3);
        assert_eq!(s.kind_of("f"), Some(SymbolKind::Function(2)));
        assert_eq!(s.kind_of("T"), Some(SymbolKind::Predicate(1)));
        assert_eq!(s.naming_scheme().len(), 1);
    }

    #[test]
    fn symbol_classes_are_disjoint() {
        assert!(Signature::parse("const a\npred a/1").is_err());
        assert!(Signature::parse("const T").is_err());
    }

    #[test]
    fn naming_is_injective() {
        let e = Signature::parse("const a\npred P/1\nname l = P(a)\nname k = P(a)");
        assert!(e.is_err());
        let e = Signature::parse("const a\npred P/1\nname l = P(a)\nname l = ~P(a)");
        assert!(e.is_err());
    }

    #[test]
    fn generated_names_are_memoized() {
        let s = Signature::parse("const a\npred P/1").unwrap();
        let f = parse_formula("P(a)", &s).unwrap();
        let n1 = s.name_of(&f).unwrap();
        let n2 = s.name_of(&f).unwrap();
        assert_eq!(n1, n2);
        assert_eq!(s.named_formula(&n1), Some(f));
        assert!(s.name_of(&Formula::atom("P", vec![Term::var("x")])).is_err());
    }

    #[test]
    fn concurrent_name_requests_agree() {
        let s = std::sync::Arc::new(Signature::parse("const a\npred P/1").unwrap());
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let s = s.clone();
                std::thread::spawn(move || s.name_of(&parse_formula("~P(a)", &s).unwrap()).unwrap())
            })
            .collect();
        let names: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(names.windows(2).all(|w| w[0] == w[1]));
    }
}
