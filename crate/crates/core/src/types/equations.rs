use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use super::Type;
use crate::syntax::{ParseError, Parser};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EquationError {
    #[error("recursion variable {0} is defined twice")]
    Duplicate(String),
    #[error("equation for {0} is not contractive: its right-hand side is a recursion variable")]
    NotContractive(String),
    #[error("line {line}: {err}")]
    Parse { line: usize, err: ParseError },
}

/// A system of recursive equations `X_i = F_i`. The left-hand sides are the
/// recursion variables; every other atom is an ordinary type constant.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct EquationSet {
    eqs: BTreeMap<Arc<str>, Type>,
}

impl EquationSet {
    pub fn empty() -> EquationSet {
        EquationSet::default()
    }

    pub fn new<'a>(eqs: impl IntoIterator<Item = (&'a str, Type)>) -> Result<EquationSet, EquationError> {
        let mut map = BTreeMap::new();
        for (x, f) in eqs {
            if map.insert(Arc::<str>::from(x), f).is_some() {
                return Err(EquationError::Duplicate(x.to_owned()));
            }
        }
        for (x, f) in &map {
            if let Type::Atom(y) = f {
                if map.contains_key(y) {
                    return Err(EquationError::NotContractive(x.to_string()));
                }
            }
        }
        Ok(EquationSet { eqs: map })
    }

    /// One `X = type` per line or `;`-separated; `#` starts a comment.
    pub fn parse(text: &str) -> Result<EquationSet, EquationError> {
        let mut eqs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for chunk in line.split(';') {
                if chunk.trim().is_empty() {
                    continue;
                }
                let parse = || -> Result<(String, Type), ParseError> {
                    let mut p = Parser::new(chunk, None, crate::syntax::Mode::Curry)?;
                    let eq = p.equation()?;
                    p.finish()?;
                    Ok(eq)
                };
                eqs.push(parse().map_err(|err| EquationError::Parse { line: i + 1, err })?);
            }
        }
        EquationSet::new(eqs.iter().map(|(x, t)| (x.as_str(), t.clone())))
    }

    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.eqs.len()
    }

    pub fn get(&self, x: &str) -> Option<&Type> {
        self.eqs.get(x)
    }

    pub fn is_rec_var(&self, x: &str) -> bool {
        self.eqs.contains_key(x)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.eqs.keys().map(|k| &**k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.eqs.iter().map(|(k, v)| (&**k, v))
    }

    /// True when every right-hand side uses → only.
    pub fn is_simple(&self) -> bool {
        self.eqs.values().all(Type::is_simple)
    }

    /// Unfold a recursion variable at the head, once. Contractivity means
    /// the result never has a recursion variable at its head.
    pub fn whnf<'a>(&'a self, t: &'a Type) -> &'a Type {
        match t {
            Type::Atom(x) => self.eqs.get(x).unwrap_or(t),
            _ => t,
        }
    }

    /// `a ≈ b` in the least congruence generated by the equations.
    ///
    /// Unfolding `X -> F_X` is an orthogonal ground rewrite system, so two
    /// types are congruent iff they have a common reduct. A pair that recurs
    /// while being compared could only be joined by an infinite unfolding,
    /// so it is treated as a failure.
    pub fn congruent(&self, a: &Type, b: &Type) -> bool {
        if a == b {
            return true;
        }
        if self.eqs.is_empty() {
            return false;
        }
        let mut stack = Vec::new();
        self.join(a, b, &mut stack)
    }

    fn join(&self, a: &Type, b: &Type, stack: &mut Vec<(Type, Type)>) -> bool {
        if a == b {
            return true;
        }
        if stack.iter().any(|(x, y)| x == a && y == b) {
            return false;
        }
        stack.push((a.clone(), b.clone()));
        let ok = match (self.whnf(a), self.whnf(b)) {
            (Type::Atom(x), Type::Atom(y)) => x == y,
            (Type::Bot, Type::Bot) => true,
            (Type::Arrow(l1, r1), Type::Arrow(l2, r2))
            | (Type::And(l1, r1), Type::And(l2, r2))
            | (Type::Or(l1, r1), Type::Or(l2, r2)) => self.join(l1, l2, stack) && self.join(r1, r2, stack),
            _ => false,
        };
        stack.pop();
        ok
    }

    /// Whether `a` and `b` have the same infinite unfolding. Coarser than
    /// [`EquationSet::congruent`]: with `X = (X -> A) -> A` the variable `X`
    /// is bisimilar to, but not congruent with, `X -> A`.
    pub fn bisimilar(&self, a: &Type, b: &Type) -> bool {
        let mut assumed = HashSet::new();
        self.bisim(a, b, &mut assumed)
    }

    // Failure anywhere makes the whole answer false, so assumptions never
    // need to be retracted.
    fn bisim(&self, a: &Type, b: &Type, assumed: &mut HashSet<(Type, Type)>) -> bool {
        if a == b || !assumed.insert((a.clone(), b.clone())) {
            return true;
        }
        match (self.whnf(a), self.whnf(b)) {
            (Type::Atom(x), Type::Atom(y)) => x == y,
            (Type::Bot, Type::Bot) => true,
            (Type::Arrow(l1, r1), Type::Arrow(l2, r2))
            | (Type::And(l1, r1), Type::And(l2, r2))
            | (Type::Or(l1, r1), Type::Or(l2, r2)) => self.bisim(l1, l2, assumed) && self.bisim(r1, r2, assumed),
            _ => false,
        }
    }
}

impl fmt::Display for EquationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, t)) in self.eqs.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{x} = {t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for EquationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::parse_type;

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn congruence_examples() {
        let none = EquationSet::empty();
        assert!(none.congruent(&ty("A"), &ty("A")));
        let eqs = EquationSet::parse("X = A /\\ (X -> B)").unwrap();
        assert!(eqs.congruent(&ty("X"), &ty("A /\\ (X -> B)")));
        assert!(eqs.congruent(&ty("X"), &ty("A /\\ ((A /\\ (X -> B)) -> B)")));
        assert!(!eqs.congruent(&ty("X"), &ty("A /\\ (A -> B)")));
        assert!(!eqs.congruent(&ty("X"), &ty("A")));
    }

    #[test]
    fn congruence_is_finite_unfolding() {
        // X and Y denote the same infinite type A -> A -> ..., but no finite
        // number of unfoldings makes them meet.
        let eqs = EquationSet::parse("X = A -> X; Y = A -> A -> Y").unwrap();
        assert!(!eqs.congruent(&ty("X"), &ty("Y")));
        assert!(eqs.bisimilar(&ty("X"), &ty("Y")));
        assert!(eqs.congruent(&ty("A -> A -> X"), &ty("X")));
        assert!(eqs.congruent(&ty("Y"), &ty("A -> A -> A -> A -> Y")));
        assert!(!eqs.congruent(&ty("Y"), &ty("A -> Y")));

        let eqs = EquationSet::parse("X = (X -> A) -> A").unwrap();
        assert!(!eqs.congruent(&ty("X"), &ty("X -> A")));
        assert!(eqs.bisimilar(&ty("X"), &ty("X -> A")));
    }

    #[test]
    fn parse_and_validate() {
        let eqs = EquationSet::parse("# a comment\nX = A /\\ (B -> X)\n\nY = X \\/ bot # trailing").unwrap();
        assert_eq!(eqs.len(), 2);
        assert_eq!(eqs.to_string(), "X = A /\\ (B -> X); Y = X \\/ bot");
        assert_eq!(EquationSet::parse("X = A; X = B").unwrap_err(), EquationError::Duplicate("X".into()));
        assert_eq!(EquationSet::parse("X = Y; Y = A -> Y").unwrap_err(), EquationError::NotContractive("X".into()));
        assert!(matches!(EquationSet::parse("X = A\nY = ->").unwrap_err(), EquationError::Parse { line: 2, .. }));
        assert!(EquationSet::parse("X = A -> X").unwrap().is_simple());
    }
}
