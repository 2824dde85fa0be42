//! First-order syntax over the connectives `~`, `->` and `Ex`.
//!
//! Terms and formulas are plain immutable trees. Everything that needs the
//! signature (parsing, rewriting, canonical names) lives in [`Signature`].

mod enumerate;
mod parser;
mod render;
mod rewrite;
mod signature;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use enumerate::{enumerate_closed_terms, TermUniverse};
pub use parser::{parse_formula, parse_term};
pub use rewrite::{Pattern, RewriteRule, Strategy};
pub use signature::{Signature, SymbolKind, DEFAULT_STEP_BUDGET};
pub(crate) use signature::is_blank;

use thiserror::Error;

/// Name of the builtin successor symbol of arithmetic signatures.
pub const SUCC: &str = "succ";
/// The truth predicate; present in every signature.
pub const TRUTH: &str = "T";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at offset {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("symbol `{0}` is declared twice")]
    DuplicateSymbol(String),
    #[error("invalid rewrite rule: {0}")]
    InvalidRule(String),
    #[error("`{0}` is not a sentence")]
    NotASentence(String),
    #[error("naming conflict: {0}")]
    NameConflict(String),
    #[error("rewriting exceeded the step budget of {0}")]
    StepBudget(usize),
    #[error("the signature has no constants, so there are no closed terms")]
    NoClosedTerms,
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<SyntaxError>,
    },
}

/// An interned symbol name. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Canonical names allocated on demand are spelled `quote(<formula>)`.
    pub fn is_generated_name(&self) -> bool {
        self.0.starts_with("quote(")
    }

    /// Reserve constants `#0, #1, ...` pad the term universe of signatures
    /// whose declared symbols only generate finitely many closed terms.
    pub fn is_reserve(&self) -> bool {
        self.0.starts_with('#')
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Symbol),
    Const(Symbol),
    App(Symbol, Vec<Term>),
    /// `succ^n(0)`, only meaningful in arithmetic signatures.
    Numeral(u64),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Symbol::new(name))
    }

    pub fn constant(name: &str) -> Self {
        Term::Const(Symbol::new(name))
    }

    /// Builds an application, folding `succ(n)` into the numeral `n+1`.
    pub fn app(f: Symbol, args: Vec<Term>) -> Self {
        if f.as_str() == SUCC && args.len() == 1 {
            if let Term::Numeral(n) = args[0] {
                return Term::Numeral(n + 1);
            }
        }
        Term::App(f, args)
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) | Term::Numeral(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_closed),
        }
    }

    /// Depth with numerals read as `succ^n(0)`.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::Numeral(n) => *n as usize,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn contains_var(&self, x: &Symbol) -> bool {
        match self {
            Term::Var(v) => v == x,
            Term::Const(_) | Term::Numeral(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(x)),
        }
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) | Term::Numeral(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn substitute(&self, x: &Symbol, t: &Term) -> Term {
        match self {
            Term::Var(v) if v == x => t.clone(),
            Term::Var(_) | Term::Const(_) | Term::Numeral(_) => self.clone(),
            Term::App(f, args) => {
                Term::app(f.clone(), args.iter().map(|a| a.substitute(x, t)).collect())
            }
        }
    }

    /// Pushes every closed subterm (including `self` when closed).
    pub fn closed_subterms(&self, out: &mut Vec<Term>) {
        if self.is_closed() {
            out.push(self.clone());
        }
        if let Term::App(_, args) = self {
            for a in args {
                a.closed_subterms(out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Symbol, Vec<Term>),
    Neg(Box<Formula>),
    Cond(Box<Formula>, Box<Formula>),
    Exists(Symbol, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Self {
        Formula::Atom(Symbol::new(pred), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Formula) -> Self {
        Formula::Neg(Box::new(a))
    }

    pub fn cond(a: Formula, b: Formula) -> Self {
        Formula::Cond(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, body: Formula) -> Self {
        Formula::Exists(Symbol::new(x), Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut BTreeSet<Symbol>, out: &mut BTreeSet<Symbol>) {
        match self {
            Formula::Atom(_, args) => {
                let mut vs = BTreeSet::new();
                args.iter().for_each(|a| a.collect_vars(&mut vs));
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Neg(a) => a.collect_free(bound, out),
            Formula::Cond(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(x, a) => {
                let fresh = bound.insert(x.clone());
                a.collect_free(bound, out);
                if fresh {
                    bound.remove(x);
                }
            }
        }
    }

    pub fn has_free(&self, x: &Symbol) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(|a| a.contains_var(x)),
            Formula::Neg(a) => a.has_free(x),
            Formula::Cond(a, b) => a.has_free(x) || b.has_free(x),
            Formula::Exists(y, a) => y != x && a.has_free(x),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Variables bound somewhere inside the formula.
    pub fn binds(&self, x: &Symbol) -> bool {
        match self {
            Formula::Atom(..) => false,
            Formula::Neg(a) => a.binds(x),
            Formula::Cond(a, b) => a.binds(x) || b.binds(x),
            Formula::Exists(y, a) => y == x || a.binds(x),
        }
    }

    /// `A[t/x]`: replaces the free occurrences of `x` by `t`.
    pub fn substitute(&self, x: &Symbol, t: &Term) -> Formula {
        match self {
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|a| a.substitute(x, t)).collect())
            }
            Formula::Neg(a) => Formula::neg(a.substitute(x, t)),
            Formula::Cond(a, b) => Formula::cond(a.substitute(x, t), b.substitute(x, t)),
            Formula::Exists(y, _) if y == x => self.clone(),
            Formula::Exists(y, a) => Formula::Exists(y.clone(), Box::new(a.substitute(x, t))),
        }
    }

    /// Applies `f` to every argument term of every atom.
    pub fn try_map_terms<E>(&self, f: &mut impl FnMut(&Term) -> Result<Term, E>) -> Result<Formula, E> {
        Ok(match self {
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(&mut *f).collect::<Result<_, _>>()?)
            }
            Formula::Neg(a) => Formula::neg(a.try_map_terms(f)?),
            Formula::Cond(a, b) => Formula::cond(a.try_map_terms(f)?, b.try_map_terms(f)?),
            Formula::Exists(x, a) => Formula::Exists(x.clone(), Box::new(a.try_map_terms(f)?)),
        })
    }

    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a Symbol, &'a [Term])) {
        match self {
            Formula::Atom(p, args) => f(p, args),
            Formula::Neg(a) => a.for_each_atom(f),
            Formula::Cond(a, b) => {
                a.for_each_atom(f);
                b.for_each_atom(f);
            }
            Formula::Exists(_, a) => a.for_each_atom(f),
        }
    }

    pub fn closed_subterms(&self, out: &mut Vec<Term>) {
        self.for_each_atom(&mut |_, args| args.iter().for_each(|a| a.closed_subterms(out)));
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(..) => 0,
            Formula::Neg(a) | Formula::Exists(_, a) => 1 + a.depth(),
            Formula::Cond(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// `A[t/x]`. Callers pass closed `t`; no renaming is performed.
pub fn substitute(a: &Formula, x: &Symbol, t: &Term) -> Formula {
    a.substitute(x, t)
}

pub fn free_vars(a: &Formula) -> BTreeSet<Symbol> {
    a.free_vars()
}
