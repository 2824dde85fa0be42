//! Coding equations as left-linear rewrite rules, and term normalization.
//!
//! Rules are oriented left to right and must decrease under a lexicographic
//! path order whose precedence is inferred from the rule set itself (each
//! lhs head is above every function symbol its rhs introduces). Numerals are
//! read as `succ^n(0)`, so `fm(succ(n), y) => Tdot(fm(n, y))` decreases.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Formula, Signature, Symbol, SyntaxError, Term, SUCC};

/// Left- or right-hand side of a rewrite rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Var(Symbol),
    Const(Symbol),
    App(Symbol, Vec<Pattern>),
    Numeral(u64),
    /// `quote(A)` where `A` may mention pattern variables; instantiates to
    /// the canonical name of the instantiated formula.
    Quote(Box<Formula>),
}

impl Pattern {
    pub fn from_term(t: Term) -> Pattern {
        match t {
            Term::Var(v) => Pattern::Var(v),
            Term::Const(c) => Pattern::Const(c),
            Term::Numeral(n) => Pattern::Numeral(n),
            Term::App(f, args) => Pattern::App(f, args.into_iter().map(Pattern::from_term).collect()),
        }
    }

    /// `None` when the pattern still contains an open quote.
    pub fn into_term(self) -> Option<Term> {
        Some(match self {
            Pattern::Var(v) => Term::Var(v),
            Pattern::Const(c) => Term::Const(c),
            Pattern::Numeral(n) => Term::Numeral(n),
            Pattern::App(f, args) => Term::app(
                f,
                args.into_iter().map(Pattern::into_term).collect::<Option<_>>()?,
            ),
            Pattern::Quote(_) => return None,
        })
    }

    fn vars(&self, out: &mut Vec<Symbol>) {
        match self {
            Pattern::Var(v) => out.push(v.clone()),
            Pattern::Const(_) | Pattern::Numeral(_) => {}
            Pattern::App(_, args) => args.iter().for_each(|a| a.vars(out)),
            Pattern::Quote(f) => out.extend(f.free_vars()),
        }
    }

    fn function_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Pattern::App(f, args) => {
                out.insert(f.clone());
                args.iter().for_each(|a| a.function_symbols(out));
            }
            Pattern::Numeral(n) if *n > 0 => {
                out.insert(Symbol::new(SUCC));
            }
            _ => {}
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Var(s) | Pattern::Const(s) => write!(f, "{s}"),
            Pattern::Numeral(n) => write!(f, "{n}"),
            Pattern::Quote(a) => write!(f, "quote({a})"),
            Pattern::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: Pattern,
    pub rhs: Pattern,
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.lhs, self.rhs)
    }
}

/// Redex selection strategy for [`Signature::normalize_term_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    InnermostLeftmost,
    OutermostLeftmost,
}

type Bindings = BTreeMap<Symbol, Term>;

impl RewriteRule {
    /// Static checks: left-linearity, variable containment, no open quote on
    /// the left.
    pub(crate) fn validate(&self) -> Result<(), SyntaxError> {
        let bad = |m: String| Err(SyntaxError::InvalidRule(format!("{self}: {m}")));
        if matches!(self.lhs, Pattern::Var(_)) {
            return bad("left-hand side is a bare variable".into());
        }
        let mut lhs_vars = Vec::new();
        self.lhs.vars(&mut lhs_vars);
        if contains_quote(&self.lhs) {
            return bad("quotes are not allowed on the left-hand side".into());
        }
        let unique: BTreeSet<_> = lhs_vars.iter().cloned().collect();
        if unique.len() != lhs_vars.len() {
            return bad("left-hand side is not linear".into());
        }
        let mut rhs_vars = Vec::new();
        self.rhs.vars(&mut rhs_vars);
        if let Some(v) = rhs_vars.iter().find(|v| !unique.contains(*v)) {
            return bad(format!("variable `{v}` does not occur on the left"));
        }
        Ok(())
    }

    fn matches(&self, sig: &Signature, t: &Term) -> Option<Bindings> {
        let mut b = Bindings::new();
        match_pattern(sig, &self.lhs, t, &mut b).then_some(b)
    }
}

fn contains_quote(p: &Pattern) -> bool {
    match p {
        Pattern::Quote(_) => true,
        Pattern::App(_, args) => args.iter().any(contains_quote),
        _ => false,
    }
}

fn match_pattern(sig: &Signature, p: &Pattern, t: &Term, b: &mut Bindings) -> bool {
    match (p, t) {
        (Pattern::Var(v), _) => match b.get(v) {
            Some(bound) => bound == t,
            None => {
                b.insert(v.clone(), t.clone());
                true
            }
        },
        (Pattern::Const(c), Term::Const(d)) => c == d,
        (Pattern::Numeral(n), Term::Numeral(m)) => n == m,
        (Pattern::App(f, ps), Term::Numeral(k)) if sig.is_arithmetic() && f.as_str() == SUCC && ps.len() == 1 => {
            *k > 0 && match_pattern(sig, &ps[0], &Term::Numeral(k - 1), b)
        }
        (Pattern::Numeral(n), Term::App(f, ts)) if *n > 0 && f.as_str() == SUCC && ts.len() == 1 => {
            match_pattern(sig, &Pattern::Numeral(n - 1), &ts[0], b)
        }
        (Pattern::App(f, ps), Term::App(g, ts)) => {
            f == g && ps.len() == ts.len() && ps.iter().zip(ts).all(|(p, t)| match_pattern(sig, p, t, b))
        }
        _ => false,
    }
}

fn instantiate(sig: &Signature, p: &Pattern, b: &Bindings) -> Result<Term, SyntaxError> {
    Ok(match p {
        Pattern::Var(v) => b.get(v).cloned().unwrap_or_else(|| Term::Var(v.clone())),
        Pattern::Const(c) => Term::Const(c.clone()),
        Pattern::Numeral(n) => Term::Numeral(*n),
        Pattern::App(f, args) => Term::app(
            f.clone(),
            args.iter().map(|a| instantiate(sig, a, b)).collect::<Result<_, _>>()?,
        ),
        Pattern::Quote(f) => {
            let inst = b.iter().fold((**f).clone(), |acc, (v, t)| acc.substitute(v, t));
            Term::Const(sig.name_of(&inst)?)
        }
    })
}

/// Lexicographic path order with numerals unfolded to `succ^n(0)` and open
/// quotes treated as minimal symbols over their free variables.
struct PathOrder {
    above: BTreeSet<(Symbol, Symbol)>,
}

#[derive(Clone, PartialEq)]
enum Shape {
    Var(Symbol),
    Node(Symbol, Vec<Shape>),
}

const ZERO: &str = "#zero";
const QUOTE: &str = "#quote";

fn shape(p: &Pattern) -> Shape {
    match p {
        Pattern::Var(v) => Shape::Var(v.clone()),
        Pattern::Const(c) => Shape::Node(c.clone(), vec![]),
        Pattern::Numeral(n) => {
            (0..*n).fold(Shape::Node(ZERO.into(), vec![]), |acc, _| Shape::Node(SUCC.into(), vec![acc]))
        }
        Pattern::App(f, args) => Shape::Node(f.clone(), args.iter().map(shape).collect()),
        Pattern::Quote(f) => Shape::Node(QUOTE.into(), f.free_vars().into_iter().map(Shape::Var).collect()),
    }
}

impl Shape {
    fn has_var(&self, x: &Symbol) -> bool {
        match self {
            Shape::Var(v) => v == x,
            Shape::Node(_, args) => args.iter().any(|a| a.has_var(x)),
        }
    }
}

impl PathOrder {
    fn gt_sym(&self, f: &Symbol, g: &Symbol) -> bool {
        self.above.contains(&(f.clone(), g.clone()))
    }

    fn gt(&self, s: &Shape, t: &Shape) -> bool {
        let Shape::Node(f, ss) = s else { return false };
        match t {
            Shape::Var(x) => s.has_var(x),
            Shape::Node(g, ts) => {
                if ss.iter().any(|si| si == t || self.gt(si, t)) {
                    return true;
                }
                if !ts.iter().all(|tj| self.gt(s, tj)) {
                    return false;
                }
                if f == g && ss.len() == ts.len() {
                    for (a, b) in ss.iter().zip(ts) {
                        if a != b {
                            return self.gt(a, b);
                        }
                    }
                    return false;
                }
                self.gt_sym(f, g)
            }
        }
    }
}

/// Infers a precedence and checks that every rule decreases.
pub(crate) fn check_termination(rules: &[RewriteRule]) -> Result<(), SyntaxError> {
    // Every head symbol sits above zero, quote, constants and succ, and above
    // each function its rhs introduces.
    let mut edges: BTreeSet<(Symbol, Symbol)> = BTreeSet::new();
    let mut heads = BTreeSet::new();
    for r in rules {
        let head = match &r.lhs {
            Pattern::App(f, _) => f.clone(),
            Pattern::Const(c) => c.clone(),
            Pattern::Numeral(_) => ZERO.into(),
            _ => continue,
        };
        heads.insert(head.clone());
        let mut syms = BTreeSet::new();
        r.rhs.function_symbols(&mut syms);
        for g in syms {
            if g != head {
                edges.insert((head.clone(), g));
            }
        }
    }
    // Transitive closure; a cycle means no precedence orients the rules.
    loop {
        let mut added = Vec::new();
        for (a, b) in &edges {
            for (c, d) in &edges {
                if b == c && !edges.contains(&(a.clone(), d.clone())) {
                    added.push((a.clone(), d.clone()));
                }
            }
        }
        if added.is_empty() {
            break;
        }
        edges.extend(added);
    }
    if let Some((a, _)) = edges.iter().find(|(a, b)| a == b) {
        return Err(SyntaxError::InvalidRule(format!(
            "rules through `{a}` cannot be oriented by a path order"
        )));
    }
    let mut above = edges;
    let mut minimal: Vec<Symbol> = vec![ZERO.into(), QUOTE.into(), SUCC.into()];
    for r in rules {
        collect_consts(&r.lhs, &mut minimal);
        collect_consts(&r.rhs, &mut minimal);
    }
    for h in &heads {
        for m in &minimal {
            if h != m && !above.contains(&(m.clone(), h.clone())) {
                above.insert((h.clone(), m.clone()));
            }
        }
    }
    let order = PathOrder { above };
    for r in rules {
        if !order.gt(&shape(&r.lhs), &shape(&r.rhs)) {
            return Err(SyntaxError::InvalidRule(format!(
                "{r}: right-hand side is not smaller in the path order"
            )));
        }
    }
    Ok(())
}

fn collect_consts(p: &Pattern, out: &mut Vec<Symbol>) {
    match p {
        Pattern::Const(c) => out.push(c.clone()),
        Pattern::App(_, args) => args.iter().for_each(|a| collect_consts(a, out)),
        _ => {}
    }
}

impl Signature {
    fn bump(&self, steps: &mut usize) -> Result<(), SyntaxError> {
        *steps += 1;
        if *steps > self.step_budget() {
            return Err(SyntaxError::StepBudget(self.step_budget()));
        }
        Ok(())
    }

    /// Normal form under the coding equations, innermost-leftmost. Open terms
    /// have their maximal closed subterms normalized.
    pub fn normalize_term(&self, t: &Term) -> Result<Term, SyntaxError> {
        self.normalize_term_with(t, Strategy::InnermostLeftmost)
    }

    pub fn normalize_term_with(&self, t: &Term, strategy: Strategy) -> Result<Term, SyntaxError> {
        if self.rules().is_empty() && !self.is_arithmetic() {
            return Ok(t.clone());
        }
        let mut steps = 0;
        match strategy {
            Strategy::InnermostLeftmost => self.innermost(t, &mut steps),
            Strategy::OutermostLeftmost => {
                let mut cur = t.clone();
                while let Some(next) = self.rewrite_outermost(&cur)? {
                    self.bump(&mut steps)?;
                    cur = next;
                }
                Ok(cur)
            }
        }
    }

    fn innermost(&self, t: &Term, steps: &mut usize) -> Result<Term, SyntaxError> {
        let t = match t {
            Term::Var(_) => return Ok(t.clone()),
            Term::App(f, args) => Term::app(
                f.clone(),
                args.iter().map(|a| self.innermost(a, steps)).collect::<Result<_, _>>()?,
            ),
            _ => t.clone(),
        };
        if !t.is_closed() {
            return Ok(t);
        }
        for rule in self.rules() {
            if let Some(b) = rule.matches(self, &t) {
                self.bump(steps)?;
                let next = instantiate(self, &rule.rhs, &b)?;
                return self.innermost(&next, steps);
            }
        }
        Ok(t)
    }

    /// One step at the leftmost-outermost redex, if any.
    fn rewrite_outermost(&self, t: &Term) -> Result<Option<Term>, SyntaxError> {
        if t.is_closed() {
            if let Term::App(f, args) = t {
                if f.as_str() == SUCC {
                    if let [Term::Numeral(n)] = args.as_slice() {
                        return Ok(Some(Term::Numeral(n + 1)));
                    }
                }
            }
            for rule in self.rules() {
                if let Some(b) = rule.matches(self, t) {
                    return instantiate(self, &rule.rhs, &b).map(Some);
                }
            }
        }
        if let Term::App(f, args) = t {
            for (i, a) in args.iter().enumerate() {
                if let Some(a2) = self.rewrite_outermost(a)? {
                    let mut new_args = args.clone();
                    new_args[i] = a2;
                    return Ok(Some(Term::App(f.clone(), new_args)));
                }
            }
        }
        Ok(None)
    }

    /// Normalizes every maximal closed subterm.
    pub fn normalize_formula(&self, a: &Formula) -> Result<Formula, SyntaxError> {
        if self.rules().is_empty() && !self.is_arithmetic() {
            return Ok(a.clone());
        }
        a.try_map_terms(&mut |t| self.normalize_term(t))
    }

    /// Syntactic equality modulo the coding equations.
    pub fn formulas_equal(&self, a: &Formula, b: &Formula) -> Result<bool, SyntaxError> {
        Ok(a == b || self.normalize_formula(a)? == self.normalize_formula(b)?)
    }
}
