//! Simple types over atoms, ⊥, →, ∧, ∨, and recursive equation systems.

mod circle;
mod equations;
mod polarity;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use circle::{circle_equations, circle_type};
pub use equations::{EquationError, EquationSet};
pub use polarity::{is_good, polarity_in, polarity_of, Goodness, Polarity};

use crate::syntax::{ParseError, Parser};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Atom(Arc<str>),
    Bot,
    Arrow(Arc<Type>, Arc<Type>),
    And(Arc<Type>, Arc<Type>),
    Or(Arc<Type>, Arc<Type>),
}

impl Type {
    pub fn atom(name: &str) -> Type {
        Type::Atom(Arc::from(name))
    }

    pub fn arrow(l: Type, r: Type) -> Type {
        Type::Arrow(Arc::new(l), Arc::new(r))
    }

    pub fn and(l: Type, r: Type) -> Type {
        Type::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Type, r: Type) -> Type {
        Type::Or(Arc::new(l), Arc::new(r))
    }

    /// `~a`, i.e. `a -> bot`.
    pub fn neg(a: Type) -> Type {
        Type::arrow(a, Type::Bot)
    }

    /// The `a` of `~a`, if this is a negation.
    pub fn negated(&self) -> Option<&Type> {
        match self {
            Type::Arrow(a, r) if **r == Type::Bot => Some(a),
            _ => None,
        }
    }

    /// True for types built from atoms, ⊥ and → only.
    pub fn is_simple(&self) -> bool {
        match self {
            Type::Atom(_) | Type::Bot => true,
            Type::Arrow(l, r) => l.is_simple() && r.is_simple(),
            Type::And(..) | Type::Or(..) => false,
        }
    }

    /// Atoms and ⊥ have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Type::Atom(_) | Type::Bot => 0,
            Type::Arrow(l, r) | Type::And(l, r) | Type::Or(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Atom(_) | Type::Bot => 1,
            Type::Arrow(l, r) | Type::And(l, r) | Type::Or(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn atoms(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Type::Atom(a) => {
                out.insert(a.clone());
            }
            Type::Bot => {}
            Type::Arrow(l, r) | Type::And(l, r) | Type::Or(l, r) => {
                l.atoms(out);
                r.atoms(out);
            }
        }
    }

    pub fn mentions(&self, atom: &str) -> bool {
        match self {
            Type::Atom(a) => &**a == atom,
            Type::Bot => false,
            Type::Arrow(l, r) | Type::And(l, r) | Type::Or(l, r) => l.mentions(atom) || r.mentions(atom),
        }
    }

    /// Display wrapper that parenthesizes unless the type binds at least as
    /// tightly as `level` (0 arrow, 1 or, 2 and, 3 atomic or negation).
    pub fn display_at(&self, level: u8) -> impl fmt::Display + '_ {
        TypeAt(self, level)
    }

    fn level(&self) -> u8 {
        match self {
            Type::Atom(_) | Type::Bot => 3,
            Type::Arrow(_, r) if **r == Type::Bot => 3,
            Type::Arrow(..) => 0,
            Type::Or(..) => 1,
            Type::And(..) => 2,
        }
    }
}

struct TypeAt<'a>(&'a Type, u8);

impl fmt::Display for TypeAt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let TypeAt(t, level) = *self;
        if t.level() < level {
            return write!(f, "({})", TypeAt(t, 0));
        }
        match t {
            Type::Atom(a) => f.write_str(a),
            Type::Bot => f.write_str("bot"),
            Type::Arrow(a, r) if **r == Type::Bot => write!(f, "~{}", TypeAt(a, 3)),
            Type::Arrow(l, r) => write!(f, "{} -> {}", TypeAt(l, 1), TypeAt(r, 0)),
            Type::Or(l, r) => write!(f, "{} \\/ {}", TypeAt(l, 2), TypeAt(r, 1)),
            Type::And(l, r) => write!(f, "{} /\\ {}", TypeAt(l, 3), TypeAt(r, 2)),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        TypeAt(self, 0).fmt(f)
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(text, None, crate::syntax::Mode::Curry)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn print_type(t: &Type) -> String {
    t.to_string()
}

impl std::str::FromStr for Type {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_type(s)
    }
}

/// Every type of depth at most `depth` over the given atoms (⊥ included when
/// `with_bot`), using → only, or all three connectives when `full`.
pub fn types_up_to_depth(depth: usize, atoms: &[&str], with_bot: bool, full: bool) -> Vec<Type> {
    let mut layers: Vec<Vec<Type>> = Vec::new();
    let mut base: Vec<Type> = atoms.iter().map(|a| Type::atom(a)).collect();
    if with_bot {
        base.push(Type::Bot);
    }
    layers.push(base);
    for d in 1..=depth {
        let below: Vec<Type> = layers.iter().flatten().cloned().collect();
        let mut next = Vec::new();
        // at least one child has depth exactly d-1
        for l in &below {
            for r in &below {
                if l.depth() != d - 1 && r.depth() != d - 1 {
                    continue;
                }
                next.push(Type::arrow(l.clone(), r.clone()));
                if full {
                    next.push(Type::and(l.clone(), r.clone()));
                    next.push(Type::or(l.clone(), r.clone()));
                }
            }
        }
        layers.push(next);
    }
    layers.into_iter().flatten().collect()
}
