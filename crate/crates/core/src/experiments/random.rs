use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::calculus::{Cedent, FormulaFamily, Language};
use crate::multiset::Multiplicity;
use crate::semantics::{QuantifierMode, UnitValue, Valuation};
use crate::syntax::{Formula, Symbol, Term};

/// Signature of the rule fuzzer: two constants, two unary predicates and a
/// propositional atom.
pub const FUZZ_SIGNATURE: &str = "const a, b\npred P/1, Q/1, R/0\n";

/// Free variable standing for the premise index in family templates.
pub const TEMPLATE_VAR: &str = "n";

const BOUND: [&str; 3] = ["x", "y", "z"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_denominator: u64,
    pub max_context_size: usize,
    pub max_family_prefix: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_denominator: 60,
            max_context_size: 3,
            max_family_prefix: 4,
        }
    }
}

/// Random values, formulas, cedents and valuations over [`FUZZ_SIGNATURE`].
pub struct Sampler<'a> {
    pub rng: ChaCha8Rng,
    pub bounds: Bounds,
    pub lang: &'a Language,
}

impl<'a> Sampler<'a> {
    pub fn new(rng: ChaCha8Rng, bounds: Bounds, lang: &'a Language) -> Self {
        Sampler { rng, bounds, lang }
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Uniform over fractions with denominator at most the bound, with the
    /// endpoints boosted.
    pub fn value(&mut self) -> UnitValue {
        match self.rng.gen_range(0..10) {
            0 => UnitValue::zero(),
            1 => UnitValue::one(),
            _ => {
                let d = self.rng.gen_range(1..=self.bounds.max_denominator) as i64;
                UnitValue::ratio(self.rng.gen_range(0..=d), d)
            }
        }
    }

    /// A value in `[0, hi]` on the same grid.
    pub fn value_below(&mut self, hi: &UnitValue) -> UnitValue {
        let d = self.rng.gen_range(1..=self.bounds.max_denominator) as i64;
        let q = hi.rational() * num_rational::BigRational::from_integer(d.into());
        let top = q.floor().to_integer();
        let top: i64 = num_traits::ToPrimitive::to_i64(&top).unwrap_or(0);
        if self.chance(0.2) {
            return hi.clone();
        }
        UnitValue::ratio(self.rng.gen_range(0..=top), d)
    }

    fn term(&mut self, scope: &[&str], template: bool) -> Term {
        if !scope.is_empty() && self.chance(0.6) {
            return Term::var(scope[self.rng.gen_range(0..scope.len())]);
        }
        if template && self.chance(0.5) {
            return Term::var(TEMPLATE_VAR);
        }
        Term::constant(if self.chance(0.5) { "a" } else { "b" })
    }

    pub fn atom(&mut self, scope: &[&str], template: bool) -> Formula {
        match self.rng.gen_range(0..5) {
            0 => Formula::atom("R", vec![]),
            1 | 2 => Formula::atom("P", vec![self.term(scope, template)]),
            _ => Formula::atom("Q", vec![self.term(scope, template)]),
        }
    }

    /// A formula of depth at most `depth` whose free variables lie in `scope`
    /// (plus the template variable when `template` is set).
    pub fn formula(&mut self, depth: usize, scope: &[&str], template: bool) -> Formula {
        if depth == 0 || self.chance(0.35) {
            return self.atom(scope, template);
        }
        match self.rng.gen_range(0..4) {
            0 => Formula::neg(self.formula(depth - 1, scope, template)),
            1 | 2 => Formula::cond(self.formula(depth - 1, scope, template), self.formula(depth - 1, scope, template)),
            _ if scope.len() < BOUND.len() => {
                let x = BOUND[scope.len()];
                let mut inner = scope.to_vec();
                inner.push(x);
                Formula::exists(x, self.formula(depth - 1, &inner, template))
            }
            _ => self.atom(scope, template),
        }
    }

    /// A formula in which `x` occurs free, except for an occasional vacuous one.
    pub fn body(&mut self, x: &str, template: bool) -> Formula {
        let b = self.formula(2, &[x], template);
        if b.has_free(&Symbol::new(x)) || self.chance(0.2) {
            return b;
        }
        let a = self.atom(&[x], false);
        let a = if a.has_free(&Symbol::new(x)) {
            a
        } else {
            Formula::atom("P", vec![Term::var(x)])
        };
        match self.rng.gen_range(0..3) {
            0 => a,
            1 => Formula::cond(a, b),
            _ => Formula::cond(b, Formula::neg(a)),
        }
    }

    pub fn sentence(&mut self) -> Formula {
        self.formula(2, &[], false)
    }

    pub fn multiplicity(&mut self) -> Multiplicity {
        if self.chance(0.1) {
            Multiplicity::Omega
        } else {
            Multiplicity::Fin(self.rng.gen_range(1..=2))
        }
    }

    /// A random cedent. Template cedents may mention the template variable;
    /// family templates never do.
    pub fn cedent(&mut self, template: bool, families: bool) -> Cedent {
        let n = self.rng.gen_range(0..=self.bounds.max_context_size);
        let mut entries = Vec::with_capacity(n);
        for _ in 0..n {
            let f = self.formula(2, &[], template);
            entries.push((f, self.multiplicity()));
        }
        let mut c = Cedent::from_formulas(self.lang, entries).expect("fuzz formulas normalize");
        if families && self.chance(0.15) {
            let f = self.body("k", false);
            let start = self.rng.gen_range(0..=2);
            let m = if self.chance(0.1) { Multiplicity::Omega } else { Multiplicity::ONE };
            c = c
                .add_family(self.lang, FormulaFamily::new("k", start, f, m))
                .expect("fuzz families normalize");
        }
        c
    }

    /// Random values on the atoms over `a` and `b`; the predicate defaults
    /// (which every other closed term takes) are 0 half of the time.
    pub fn valuation(&mut self, mode: QuantifierMode) -> Valuation {
        let mut v = Valuation::with_signature(self.lang.signature_arc().clone(), mode).expect("fuzz signature");
        let mut atoms = vec![Formula::atom("R", vec![])];
        for p in ["P", "Q"] {
            for c in ["a", "b"] {
                atoms.push(Formula::atom(p, vec![Term::constant(c)]));
            }
        }
        for a in atoms {
            let val = self.value();
            v.set_atom(&a, val).expect("closed atom");
        }
        for p in ["P", "Q"] {
            let val = if self.chance(0.5) { UnitValue::zero() } else { self.value() };
            v.set_default(p, val).expect("declared predicate");
        }
        v
    }
}
