//! Recursive-descent parser for the ASCII concrete syntax.
//!
//! ```text
//! formula := unary ( "->" formula )?
//! unary   := "~" unary | "Ex" var? unary | "(" formula ")" | PRED ( "(" term,* ")" )?
//! term    := NUM | "#" NUM | "quote" "(" formula ")" | IDENT ( "(" term,* ")" )?
//! ```

use super::rewrite::Pattern;
use super::{Formula, Signature, Symbol, SymbolKind, SyntaxError, Term, SUCC};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    Reserve(u64),
    LParen,
    RParen,
    Comma,
    Tilde,
    Arrow,
    Eof,
}

fn err(pos: usize, message: impl Into<String>) -> SyntaxError {
    SyntaxError::Parse {
        pos,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b',' => out.push((Tok::Comma, start)),
            b'~' => out.push((Tok::Tilde, start)),
            b'-' => {
                if bytes.get(i + 1) != Some(&b'>') {
                    return Err(err(start, "expected `->`"));
                }
                i += 1;
                out.push((Tok::Arrow, start));
            }
            b'#' if bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphabetic()) => {
                // `#name` is reserved for internal index variables.
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            b'#' | b'0'..=b'9' => {
                let reserve = c == b'#';
                if reserve {
                    i += 1;
                }
                let digits = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if digits == i {
                    return Err(err(start, "expected digits"));
                }
                let n: u64 = text[digits..i]
                    .parse()
                    .map_err(|_| err(start, "numeral out of range"))?;
                out.push((if reserve { Tok::Reserve(n) } else { Tok::Num(n) }, start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => return Err(err(start, format!("unexpected character `{}`", c as char))),
        }
        i += 1;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn new(text: &str, sig: &'a Signature) -> Result<Self, SyntaxError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            sig,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), SyntaxError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(err(self.offset(), format!("expected {what}")))
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => Err(err(self.offset(), "unexpected trailing input")),
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::cond(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        let at = self.offset();
        match self.bump() {
            Tok::Tilde => Ok(Formula::neg(self.unary()?)),
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(id) if id == "Ex" => {
                let vat = self.offset();
                // `Ex A` without a variable quantifies vacuously.
                let vacuous = match self.peek() {
                    Tok::Ident(p) => matches!(self.sig.kind_of(p), Some(SymbolKind::Predicate(_))),
                    Tok::Tilde | Tok::LParen => true,
                    _ => false,
                };
                if vacuous {
                    let body = self.unary()?;
                    let var = fresh_var(&body, self.sig);
                    return Ok(Formula::Exists(var, Box::new(body)));
                }
                let var = match self.bump() {
                    Tok::Ident(v) => v,
                    _ => return Err(err(vat, "expected a variable after `Ex`")),
                };
                if self.sig.kind_of(&var).is_some() || is_reserved_word(&var) {
                    return Err(err(vat, format!("`{var}` cannot be used as a variable")));
                }
                Ok(Formula::Exists(Symbol::new(&var), Box::new(self.unary()?)))
            }
            Tok::Ident(p) => {
                let arity = match self.sig.kind_of(&p) {
                    Some(SymbolKind::Predicate(n)) => n,
                    _ => return Err(SyntaxError::UnknownSymbol(p)),
                };
                let args = if *self.peek() == Tok::LParen {
                    self.args()?
                } else {
                    Vec::new()
                };
                check_arity(&p, arity, args.len())?;
                Ok(Formula::Atom(Symbol::new(&p), args))
            }
            _ => Err(err(at, "expected a formula")),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, SyntaxError> {
        self.arg_list(|p| p.term())
    }

    fn arg_list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, SyntaxError>) -> Result<Vec<T>, SyntaxError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut out = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            match self.bump() {
                Tok::Comma => continue,
                Tok::RParen => return Ok(out),
                _ => return Err(err(self.toks[self.pos - 1].1, "expected `,` or `)`")),
            }
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let at = self.offset();
        match self.pattern_node(false)? {
            PatternNode::Done(p) => p
                .into_term()
                .ok_or_else(|| err(at, "quoted formula must be a sentence")),
            PatternNode::Quote(_) => unreachable!("quotes are resolved outside pattern mode"),
        }
    }

    fn pattern(&mut self) -> Result<Pattern, SyntaxError> {
        match self.pattern_node(true)? {
            PatternNode::Done(p) => Ok(p),
            PatternNode::Quote(f) => Ok(Pattern::Quote(Box::new(f))),
        }
    }

    /// Shared term/pattern parser. In pattern mode undeclared identifiers are
    /// pattern variables and quotes may contain them.
    fn pattern_node(&mut self, pattern_mode: bool) -> Result<PatternNode, SyntaxError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(n) => {
                if !self.sig.is_arithmetic() {
                    return Err(err(at, "numerals require an arithmetic signature (`arith`)"));
                }
                Ok(PatternNode::Done(Pattern::Numeral(n)))
            }
            Tok::Reserve(n) => Ok(PatternNode::Done(Pattern::Const(Symbol::new(&format!("#{n}"))))),
            Tok::Ident(id) if id == "quote" => {
                self.expect(Tok::LParen, "`(`")?;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                if pattern_mode && !f.is_sentence() {
                    return Ok(PatternNode::Quote(f));
                }
                if !f.is_sentence() {
                    return Err(err(at, format!("quoted formula `{f}` must be a sentence")));
                }
                Ok(PatternNode::Done(Pattern::Const(self.sig.name_of(&f)?)))
            }
            Tok::Ident(id) => {
                let kind = self.sig.kind_of(&id);
                if *self.peek() == Tok::LParen {
                    let arity = match kind {
                        Some(SymbolKind::Function(n)) => n,
                        _ => return Err(SyntaxError::UnknownSymbol(id)),
                    };
                    let args = self.arg_list(|p| {
                        if pattern_mode {
                            p.pattern()
                        } else {
                            p.term().map(Pattern::from_term)
                        }
                    })?;
                    check_arity(&id, arity, args.len())?;
                    return Ok(PatternNode::Done(Pattern::App(Symbol::new(&id), args)));
                }
                match kind {
                    Some(SymbolKind::Constant) => Ok(PatternNode::Done(Pattern::Const(Symbol::new(&id)))),
                    Some(SymbolKind::Function(n)) => Err(SyntaxError::Arity {
                        symbol: id,
                        expected: n,
                        found: 0,
                    }),
                    Some(SymbolKind::Predicate(_)) => {
                        Err(err(at, format!("predicate `{id}` used as a term")))
                    }
                    None if is_reserved_word(&id) => Err(err(at, format!("`{id}` is reserved"))),
                    None => Ok(PatternNode::Done(Pattern::Var(Symbol::new(&id)))),
                }
            }
            _ => Err(err(at, "expected a term")),
        }
    }
}

enum PatternNode {
    Done(Pattern),
    Quote(Formula),
}

/// `x`, `x1`, `x2`, ...: the first name neither free in `body` nor declared.
fn fresh_var(body: &Formula, sig: &Signature) -> Symbol {
    (0..)
        .map(|i| Symbol::new(&if i == 0 { "x".to_string() } else { format!("x{i}") }))
        .find(|v| !body.has_free(v) && sig.kind_of(v.as_str()).is_none())
        .expect("unbounded supply of names")
}

fn is_reserved_word(s: &str) -> bool {
    matches!(s, "Ex" | "quote") || s == SUCC
}

fn check_arity(sym: &str, expected: usize, found: usize) -> Result<(), SyntaxError> {
    if expected != found {
        return Err(SyntaxError::Arity {
            symbol: sym.to_string(),
            expected,
            found,
        });
    }
    Ok(())
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text, sig)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(text, sig)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub(crate) fn parse_pattern(text: &str, sig: &Signature) -> Result<Pattern, SyntaxError> {
    let mut p = Parser::new(text, sig)?;
    let t = p.pattern()?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::parse("const l, c, a\npred P/1\nfun f/1\nname l = ~Ex x T(l)").unwrap()
    }

    #[test]
    fn parses_liar_body() {
        let s = sig();
        let f = parse_formula("~Ex x T(l)", &s).unwrap();
        assert_eq!(parse_formula("~Ex T(l)", &s).unwrap(), f);
        assert_eq!(parse_formula("Ex ~P(x)", &s).unwrap().to_string(), "Ex x1 ~P(x)");
        let expected = Formula::neg(Formula::exists("x", Formula::atom("T", vec![Term::constant("l")])));
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_atoms_and_conditionals() {
        let s = sig();
        let pc = Formula::atom("P", vec![Term::constant("c")]);
        assert_eq!(parse_formula("P(c)", &s).unwrap(), pc);
        assert_eq!(parse_formula("P(c) -> P(c)", &s).unwrap(), Formula::cond(pc.clone(), pc));
    }

    #[test]
    fn conditional_is_right_associative() {
        let s = sig();
        let f = parse_formula("P(a) -> P(c) -> P(l)", &s).unwrap();
        match f {
            Formula::Cond(_, rhs) => assert!(matches!(*rhs, Formula::Cond(..))),
            _ => panic!("expected conditional"),
        }
    }

    #[test]
    fn quote_resolves_to_declared_name() {
        let s = sig();
        let t = parse_term("quote(~Ex x T(l))", &s).unwrap();
        assert_eq!(t, Term::constant("l"));
    }

    #[test]
    fn errors_carry_position_and_symbol() {
        let s = sig();
        match parse_formula("P(c) -> ", &s) {
            Err(SyntaxError::Parse { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(parse_formula("Q(c)", &s), Err(SyntaxError::UnknownSymbol("Q".into())));
        assert_eq!(parse_formula("P(g(c))", &s), Err(SyntaxError::UnknownSymbol("g".into())));
        assert!(matches!(parse_formula("P(c, c)", &s), Err(SyntaxError::Arity { .. })));
        assert!(matches!(parse_formula("P(0)", &s), Err(SyntaxError::Parse { .. })));
    }

    #[test]
    fn open_quote_rejected_outside_patterns() {
        let s = sig();
        assert!(parse_formula("T(quote(P(x)))", &s).is_err());
    }
}
