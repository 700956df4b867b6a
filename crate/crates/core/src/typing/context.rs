use std::collections::BTreeMap;
use std::fmt;

use crate::syntax::{MuVar, ParseError, Parser, TermVar};
use crate::types::Type;

/// Declarations `x : A` and `a : ~B`; for a μ-variable the stored type is `B`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Context {
    terms: BTreeMap<TermVar, Type>,
    mus: BTreeMap<MuVar, Type>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ContextError {
    #[error("variable {0} is declared twice")]
    Duplicate(String),
    #[error("line {line}: {err}")]
    Parse { line: usize, err: ParseError },
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    /// Add `x : a`, failing if `x` is already declared.
    pub fn declare_term(&mut self, x: &str, a: Type) -> Result<(), ContextError> {
        if self.terms.insert(TermVar::new(x), a).is_some() {
            return Err(ContextError::Duplicate(x.to_owned()));
        }
        Ok(())
    }

    /// Add `a : ~b`, failing if `a` is already declared.
    pub fn declare_mu(&mut self, a: &str, b: Type) -> Result<(), ContextError> {
        if self.mus.insert(MuVar::new(a), b).is_some() {
            return Err(ContextError::Duplicate(a.to_owned()));
        }
        Ok(())
    }

    /// Copy with `x : a`, replacing any earlier declaration of `x`.
    pub fn with_term(&self, x: &TermVar, a: Type) -> Context {
        let mut c = self.clone();
        c.terms.insert(x.clone(), a);
        c
    }

    pub fn with_mu(&self, a: &MuVar, b: Type) -> Context {
        let mut c = self.clone();
        c.mus.insert(a.clone(), b);
        c
    }

    pub fn term(&self, x: &TermVar) -> Option<&Type> {
        self.terms.get(x)
    }

    pub fn mu(&self, a: &MuVar) -> Option<&Type> {
        self.mus.get(a)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermVar, &Type)> {
        self.terms.iter()
    }

    pub fn mus(&self) -> impl Iterator<Item = (&MuVar, &Type)> {
        self.mus.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.mus.is_empty()
    }

    pub fn map_types(&self, f: impl Fn(&Type) -> Type) -> Context {
        Context {
            terms: self.terms.iter().map(|(x, t)| (x.clone(), f(t))).collect(),
            mus: self.mus.iter().map(|(a, t)| (a.clone(), f(t))).collect(),
        }
    }

    /// Lines (or `;`-separated items) of the form `x : A` or `mu a : ~A`;
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Context, ContextError> {
        let mut ctx = Context::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for chunk in line.split([';', ',']) {
                if chunk.trim().is_empty() {
                    continue;
                }
                let parse = || -> Result<(bool, String, Type), ParseError> {
                    let mut p = Parser::new(chunk, None, crate::syntax::Mode::Curry)?;
                    let d = p.declaration()?;
                    p.finish()?;
                    Ok(d)
                };
                let (is_mu, x, t) = parse().map_err(|err| ContextError::Parse { line: i + 1, err })?;
                if is_mu {
                    ctx.declare_mu(&x, t)?;
                } else {
                    ctx.declare_term(&x, t)?;
                }
            }
        }
        Ok(ctx)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, t) in &self.terms {
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            write!(f, "{x} : {t}")?;
        }
        for (a, t) in &self.mus {
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            write!(f, "mu {a} : ~{}", t.display_at(3))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}
