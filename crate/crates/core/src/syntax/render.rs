use std::fmt;

use super::{Formula, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(s) | Term::Const(s) => write!(f, "{s}"),
            Term::Numeral(n) => write!(f, "{n}"),
            Term::App(g, args) => {
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

/// Prefix operators bind tighter than `->`, which associates to the right.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p, args) if args.is_empty() => write!(f, "{p}"),
            Formula::Atom(p, args) => {
                write!(f, "{p}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Formula::Neg(a) => {
                f.write_str("~")?;
                write_prefix_operand(f, a)
            }
            Formula::Exists(x, a) => {
                write!(f, "Ex {x} ")?;
                write_prefix_operand(f, a)
            }
            Formula::Cond(a, b) => {
                if matches!(**a, Formula::Cond(..)) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                write!(f, " -> {b}")
            }
        }
    }
}

fn write_prefix_operand(f: &mut fmt::Formatter<'_>, a: &Formula) -> fmt::Result {
    if matches!(a, Formula::Cond(..)) {
        write!(f, "({a})")
    } else {
        write!(f, "{a}")
    }
}
