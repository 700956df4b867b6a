//! Terms of the three calculi, their concrete syntax, and substitution.

mod alpha;
mod lex;
mod parse;
mod print;
mod subst;
mod term;

use std::fmt;

pub use alpha::{alpha_eq, canonical, canonical_erased};
pub use lex::is_reserved_word;
pub(crate) use parse::Parser;
pub use parse::{parse_term, parse_term_any, Mode, PHI};
pub use subst::{fresh_name, mu_rename, plug, struct_subst, subst};
pub use term::{Elim, MuVar, Position, Side, Sort, Term, TermVar};

/// A syntax error, located by byte offset into the input.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> ParseError {
        ParseError { offset, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)
    }
}

/// Render a term in the concrete syntax accepted by [`parse_term`].
pub fn print_term(t: &Term) -> String {
    t.to_string()
}
