use std::fmt;

use super::term::{Elim, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Const(c) => write!(f, "c[{c}]"),
            Term::Lam(x, None, b) => write!(f, "\\{x}. {b}"),
            Term::Lam(x, Some(a), b) => write!(f, "\\{x}:{a}. {b}"),
            Term::App(..) => {
                let mut spine = Vec::new();
                let mut head = self;
                while let Term::App(fun, e) = head {
                    spine.push(e);
                    head = fun;
                }
                write!(f, "({head}")?;
                for e in spine.iter().rev() {
                    write!(f, " {e}")?;
                }
                f.write_str(")")
            }
            Term::Pair(l, r) => write!(f, "<{l}, {r}>"),
            Term::Inj(i, None, b) => write!(f, "w{} {b}", i.index()),
            Term::Inj(i, Some(a), b) => write!(f, "w{}[{a}] {b}", i.index()),
            Term::Mu(a, None, b) => write!(f, "mu {a}. {b}"),
            Term::Mu(a, Some(t), b) => write!(f, "mu {a}:~{}. {b}", t.display_at(3)),
            Term::Name(a, b) => write!(f, "[{a}] {b}"),
        }
    }
}

impl fmt::Display for Elim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elim::Arg(t) => write!(f, "{t}"),
            Elim::Proj(i) => write!(f, "p{}", i.index()),
            Elim::Case(x1, n1, x2, n2) => write!(f, "[{x1}. {n1} | {x2}. {n2}]"),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Debug for Elim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
