//! The canonical enumeration of closed terms.
//!
//! Terms are listed by depth; within a depth by symbol declaration order
//! (constants, then `0`; functions, then `succ`); and for one symbol by the
//! lexicographic order of the argument indices. When the declared symbols
//! only generate finitely many closed terms, the enumeration continues with
//! reserve constants `#0, #1, ...` so that the universe is always infinite.

use std::sync::Mutex;

use super::{Signature, Symbol, SyntaxError, Term, SUCC};

#[derive(Debug, Clone)]
struct Enumerator {
    constants: Vec<Symbol>,
    functions: Vec<(Symbol, usize)>,
    arithmetic: bool,
    levels: Vec<Vec<Term>>,
    flat: Vec<Term>,
    exhausted: bool,
}

impl Enumerator {
    fn new(sig: &Signature) -> Result<Self, SyntaxError> {
        if sig.constants().is_empty() && !sig.is_arithmetic() {
            return Err(SyntaxError::NoClosedTerms);
        }
        let mut functions = sig.functions().to_vec();
        if sig.is_arithmetic() {
            functions.push((Symbol::new(SUCC), 1));
        }
        Ok(Enumerator {
            constants: sig.constants().to_vec(),
            functions,
            arithmetic: sig.is_arithmetic(),
            levels: Vec::new(),
            flat: Vec::new(),
            exhausted: false,
        })
    }

    fn push_level(&mut self) {
        let d = self.levels.len();
        let level = if d == 0 {
            let mut v: Vec<Term> = self.constants.iter().cloned().map(Term::Const).collect();
            if self.arithmetic {
                v.push(Term::Numeral(0));
            }
            v
        } else {
            let lower: Vec<(&Term, usize)> = self.levels[..d]
                .iter()
                .enumerate()
                .flat_map(|(depth, l)| l.iter().map(move |t| (t, depth)))
                .collect();
            let mut v = Vec::new();
            for (f, arity) in &self.functions {
                let mut idx = vec![0usize; *arity];
                'tuples: loop {
                    if idx.iter().any(|&i| lower[i].1 == d - 1) {
                        let args = idx.iter().map(|&i| lower[i].0.clone()).collect();
                        v.push(Term::app(f.clone(), args));
                    }
                    // Odometer increment, last position fastest.
                    let mut k = *arity;
                    loop {
                        if k == 0 {
                            break 'tuples;
                        }
                        k -= 1;
                        idx[k] += 1;
                        if idx[k] < lower.len() {
                            continue 'tuples;
                        }
                        idx[k] = 0;
                    }
                }
            }
            v
        };
        if level.is_empty() {
            self.exhausted = true;
        }
        self.flat.extend(level.iter().cloned());
        self.levels.push(level);
    }

    fn term(&mut self, i: usize) -> Term {
        while i >= self.flat.len() && !self.exhausted {
            self.push_level();
        }
        match self.flat.get(i) {
            Some(t) => t.clone(),
            None => Term::Const(Symbol::new(&format!("#{}", i - self.flat.len()))),
        }
    }

    fn index_of(&mut self, t: &Term) -> Option<usize> {
        if !t.is_closed() {
            return None;
        }
        if let Term::Const(c) = t {
            if c.is_reserve() {
                let k: usize = c.as_str()[1..].parse().ok()?;
                while !self.exhausted {
                    self.push_level();
                }
                return Some(self.flat.len() + k);
            }
        }
        let d = t.depth();
        while self.levels.len() <= d && !self.exhausted {
            self.push_level();
        }
        let level = self.levels.get(d)?;
        let pos = level.iter().position(|u| u == t)?;
        Some(self.levels[..d].iter().map(Vec::len).sum::<usize>() + pos)
    }
}

/// The first `n` closed terms of the canonical enumeration.
pub fn enumerate_closed_terms(sig: &Signature, n: usize) -> Result<Vec<Term>, SyntaxError> {
    let mut e = Enumerator::new(sig)?;
    Ok((0..n).map(|i| e.term(i)).collect())
}

/// Index set `t_0, t_1, ...` used by the quantifier rules.
///
/// For arithmetic signatures the index set is the numerals: every closed
/// term of the coding theory is provably equal to one, so they form a
/// complete enumeration modulo the equations. Otherwise it is the canonical
/// enumeration of closed terms.
#[derive(Debug)]
pub struct TermUniverse {
    numerals: bool,
    enumerator: Mutex<Enumerator>,
}

impl TermUniverse {
    pub fn for_signature(sig: &Signature) -> Result<Self, SyntaxError> {
        Ok(TermUniverse {
            numerals: sig.is_arithmetic(),
            enumerator: Mutex::new(Enumerator::new(sig)?),
        })
    }

    pub fn uses_numerals(&self) -> bool {
        self.numerals
    }

    pub fn term(&self, i: usize) -> Term {
        if self.numerals {
            return Term::Numeral(i as u64);
        }
        self.enumerator.lock().expect("enumerator poisoned").term(i)
    }

    pub fn index_of(&self, t: &Term) -> Option<usize> {
        if self.numerals {
            return match t {
                Term::Numeral(n) => Some(*n as usize),
                _ => None,
            };
        }
        self.enumerator.lock().expect("enumerator poisoned").index_of(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    #[test]
    fn constants_in_declaration_order() {
        let s = Signature::parse("const a, b").unwrap();
        let ts = enumerate_closed_terms(&s, 2).unwrap();
        assert_eq!(ts, vec![Term::constant("a"), Term::constant("b")]);
        assert!(enumerate_closed_terms(&s, 0).unwrap().is_empty());
    }

    #[test]
    fn unary_function_tower() {
        // Exhaustive listing by depth: depth 0 {a}, depth 1 {f(a)}, depth 2 {f(f(a))}.
        let s = Signature::parse("const a\nfun f/1").unwrap();
        let ts = enumerate_closed_terms(&s, 3).unwrap();
        let expected: Vec<Term> = ["a", "f(a)", "f(f(a))"].iter().map(|t| parse_term(t, &s).unwrap()).collect();
        assert_eq!(ts, expected);
    }

    #[test]
    fn binary_function_lexicographic_within_depth() {
        let s = Signature::parse("const a, b\nfun g/2").unwrap();
        let ts = enumerate_closed_terms(&s, 6).unwrap();
        let want: Vec<Term> = ["a", "b", "g(a, a)", "g(a, b)", "g(b, a)", "g(b, b)"]
            .iter()
            .map(|t| parse_term(t, &s).unwrap())
            .collect();
        assert_eq!(ts, want);
    }

    #[test]
    fn no_constants_is_an_error() {
        let s = Signature::parse("fun f/1").unwrap();
        assert_eq!(enumerate_closed_terms(&s, 1), Err(SyntaxError::NoClosedTerms));
    }

    #[test]
    fn finite_signatures_are_padded() {
        let s = Signature::parse("const a").unwrap();
        let ts = enumerate_closed_terms(&s, 3).unwrap();
        assert_eq!(ts[1], Term::constant("#0"));
        let u = TermUniverse::for_signature(&s).unwrap();
        assert_eq!(u.index_of(&Term::constant("#1")), Some(2));
    }

    #[test]
    fn arithmetic_numerals_sit_at_their_depth() {
        let s = Signature::parse("arith\nconst m\nfun f/1").unwrap();
        let ts = enumerate_closed_terms(&s, 6).unwrap();
        let want: Vec<Term> = ["m", "0", "f(m)", "f(0)", "succ(m)", "1"].iter().map(|t| parse_term(t, &s).unwrap()).collect();
        assert_eq!(ts, want);
        let u = TermUniverse::for_signature(&s).unwrap();
        assert_eq!(u.term(7), Term::Numeral(7));
        assert_eq!(u.index_of(&Term::Numeral(4)), Some(4));
        assert_eq!(u.index_of(&Term::constant("m")), None);
    }
}
