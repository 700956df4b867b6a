use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::types::Type;

/// A λ-variable. Lives in a namespace disjoint from [`MuVar`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermVar(Arc<str>);

/// A μ-variable (a name for a continuation).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MuVar(Arc<str>);

macro_rules! var_impls {
    ($ty:ident) => {
        impl $ty {
            pub fn new(name: &str) -> Self {
                $ty(Arc::from(name))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $ty {
            fn from(name: &str) -> Self {
                $ty::new(name)
            }
        }
    };
}

var_impls!(TermVar);
var_impls!(MuVar);

/// Which of the three calculi a term belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    /// Pure λ-terms (plus `c[X]` constants in the translation target).
    Lambda,
    /// λμ-terms in de Groote style.
    LambdaMu,
    /// λμ with pairs, injections, projections and case.
    Full,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Lambda => "lambda",
            Sort::LambdaMu => "lambda-mu",
            Sort::Full => "full",
        })
    }
}

/// Index of a projection or injection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn index(self) -> u8 {
        match self {
            Side::Left => 1,
            Side::Right => 2,
        }
    }

    pub fn from_index(i: u8) -> Option<Side> {
        match i {
            1 => Some(Side::Left),
            2 => Some(Side::Right),
            _ => None,
        }
    }

    pub fn pick<T>(self, left: T, right: T) -> T {
        match self {
            Side::Left => left,
            Side::Right => right,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(TermVar),
    /// `c[X]`, a constant of type `~~X -> X`.
    Const(Arc<str>),
    Lam(TermVar, Option<Type>, Arc<Term>),
    App(Arc<Term>, Elim),
    Pair(Arc<Term>, Arc<Term>),
    /// `w1 M` / `w2 M`; the annotation is the whole disjunction.
    Inj(Side, Option<Type>, Arc<Term>),
    /// `mu a:~A. M`; the annotation is the `A` of `a : ~A`.
    Mu(MuVar, Option<Type>, Arc<Term>),
    /// The named term `[a] M`.
    Name(MuVar, Arc<Term>),
}

/// What can stand to the right of an application.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Elim {
    Arg(Arc<Term>),
    Proj(Side),
    Case(TermVar, Arc<Term>, TermVar, Arc<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(TermVar::new(name))
    }

    pub fn constant(atom: &str) -> Term {
        Term::Const(Arc::from(atom))
    }

    pub fn lam(x: &str, ann: Option<Type>, body: Term) -> Term {
        Term::Lam(TermVar::new(x), ann, Arc::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Arc::new(fun), Elim::Arg(Arc::new(arg)))
    }

    pub fn apply(fun: Term, elim: Elim) -> Term {
        Term::App(Arc::new(fun), elim)
    }

    pub fn proj(fun: Term, side: Side) -> Term {
        Term::App(Arc::new(fun), Elim::Proj(side))
    }

    pub fn case(scrutinee: Term, x1: &str, n1: Term, x2: &str, n2: Term) -> Term {
        Term::App(Arc::new(scrutinee), Elim::Case(TermVar::new(x1), Arc::new(n1), TermVar::new(x2), Arc::new(n2)))
    }

    pub fn pair(left: Term, right: Term) -> Term {
        Term::Pair(Arc::new(left), Arc::new(right))
    }

    pub fn inj(side: Side, ann: Option<Type>, body: Term) -> Term {
        Term::Inj(side, ann, Arc::new(body))
    }

    pub fn mu(a: &str, ann: Option<Type>, body: Term) -> Term {
        Term::Mu(MuVar::new(a), ann, Arc::new(body))
    }

    pub fn name(a: &str, body: Term) -> Term {
        Term::Name(MuVar::new(a), Arc::new(body))
    }

    /// Left-nested application `(f e1 e2 ... en)`.
    pub fn apps(fun: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(fun, Term::app)
    }

    /// Node count. Projections and case eliminations count as one node
    /// of their own.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Lam(_, _, b) | Term::Inj(_, _, b) | Term::Mu(_, _, b) | Term::Name(_, b) => 1 + b.size(),
            Term::Pair(l, r) => 1 + l.size() + r.size(),
            Term::App(f, e) => 1 + f.size() + e.size(),
        }
    }

    /// Smallest sort containing the term. Constants are only admitted in
    /// [`Sort::Lambda`], so a term mixing constants with μ or pairs has no sort.
    pub fn sort(&self) -> Option<Sort> {
        let mut uses_const = false;
        let mut needed = Sort::Lambda;
        self.visit(&mut |t| match t {
            Term::Const(_) => uses_const = true,
            Term::Mu(..) | Term::Name(..) => needed = needed.max(Sort::LambdaMu),
            Term::Pair(..) | Term::Inj(..) => needed = Sort::Full,
            Term::App(_, Elim::Proj(_) | Elim::Case(..)) => needed = Sort::Full,
            _ => {}
        });
        if uses_const && needed != Sort::Lambda {
            None
        } else {
            Some(needed)
        }
    }

    /// True when every λ- and μ-binder carries a type annotation.
    pub fn is_church(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |t| {
            if matches!(t, Term::Lam(_, None, _) | Term::Mu(_, None, _)) {
                ok = false;
            }
        });
        ok
    }

    /// Pre-order traversal over every subterm, elimination bodies included.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        for child in self.children() {
            child.visit(f);
        }
    }

    /// Immediate subterms in position order.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Const(_) => vec![],
            Term::Lam(_, _, b) | Term::Inj(_, _, b) | Term::Mu(_, _, b) | Term::Name(_, b) => {
                vec![b]
            }
            Term::Pair(l, r) => vec![l, r],
            Term::App(f, Elim::Arg(a)) => vec![f, a],
            Term::App(f, Elim::Proj(_)) => vec![f],
            Term::App(f, Elim::Case(_, n1, _, n2)) => vec![f, n1, n2],
        }
    }

    /// Copy of the term with all type annotations removed.
    pub fn erase(&self) -> Term {
        match self {
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::Lam(x, _, b) => Term::Lam(x.clone(), None, Arc::new(b.erase())),
            Term::App(f, e) => Term::App(Arc::new(f.erase()), e.map_terms(|t| t.erase())),
            Term::Pair(l, r) => Term::Pair(Arc::new(l.erase()), Arc::new(r.erase())),
            Term::Inj(i, _, b) => Term::Inj(*i, None, Arc::new(b.erase())),
            Term::Mu(a, _, b) => Term::Mu(a.clone(), None, Arc::new(b.erase())),
            Term::Name(a, b) => Term::Name(a.clone(), Arc::new(b.erase())),
        }
    }

    pub fn free_vars(&self) -> (BTreeSet<TermVar>, BTreeSet<MuVar>) {
        let mut fv = FreeVars::default();
        fv.collect(self);
        (fv.terms, fv.mus)
    }

    pub fn free_term_vars(&self) -> BTreeSet<TermVar> {
        self.free_vars().0
    }

    pub fn free_mu_vars(&self) -> BTreeSet<MuVar> {
        self.free_vars().1
    }

    pub fn has_free_term_var(&self, x: &TermVar) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Const(_) => false,
            Term::Lam(y, _, b) => y != x && b.has_free_term_var(x),
            Term::Inj(_, _, b) | Term::Mu(_, _, b) | Term::Name(_, b) => b.has_free_term_var(x),
            Term::Pair(l, r) => l.has_free_term_var(x) || r.has_free_term_var(x),
            Term::App(f, e) => f.has_free_term_var(x) || e.has_free_term_var(x),
        }
    }

    pub fn has_free_mu_var(&self, a: &MuVar) -> bool {
        self.count_free_mu(a) > 0
    }

    /// Number of free occurrences of `a` as the head of a named term.
    pub fn count_free_mu(&self, a: &MuVar) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::Mu(b, _, body) => {
                if b == a {
                    0
                } else {
                    body.count_free_mu(a)
                }
            }
            Term::Name(b, body) => usize::from(b == a) + body.count_free_mu(a),
            Term::Lam(_, _, b) | Term::Inj(_, _, b) => b.count_free_mu(a),
            Term::Pair(l, r) => l.count_free_mu(a) + r.count_free_mu(a),
            Term::App(f, e) => {
                f.count_free_mu(a)
                    + match e {
                        Elim::Arg(t) => t.count_free_mu(a),
                        Elim::Proj(_) => 0,
                        Elim::Case(_, n1, _, n2) => n1.count_free_mu(a) + n2.count_free_mu(a),
                    }
            }
        }
    }

    /// Every variable name occurring anywhere in the term, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        self.visit(&mut |t| match t {
            Term::Var(x) | Term::Lam(x, _, _) => {
                out.insert(x.as_str().to_owned());
            }
            Term::Mu(a, _, _) | Term::Name(a, _) => {
                out.insert(a.as_str().to_owned());
            }
            Term::App(_, Elim::Case(x1, _, x2, _)) => {
                out.insert(x1.as_str().to_owned());
                out.insert(x2.as_str().to_owned());
            }
            _ => {}
        });
    }

    /// The subterm at `pos`, if the path is valid.
    pub fn subterm(&self, pos: &Position) -> Option<&Term> {
        let mut cur = self;
        for &i in &pos.0 {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Rebuild the term with the subterm at `pos` replaced.
    pub fn replace_at(&self, pos: &[usize], new: Term) -> Option<Term> {
        let Some((&i, rest)) = pos.split_first() else {
            return Some(new);
        };
        let sub = |t: &Arc<Term>| -> Option<Arc<Term>> { Some(Arc::new(t.replace_at(rest, new.clone())?)) };
        Some(match (self, i) {
            (Term::Lam(x, ann, b), 0) => Term::Lam(x.clone(), ann.clone(), sub(b)?),
            (Term::Inj(s, ann, b), 0) => Term::Inj(*s, ann.clone(), sub(b)?),
            (Term::Mu(a, ann, b), 0) => Term::Mu(a.clone(), ann.clone(), sub(b)?),
            (Term::Name(a, b), 0) => Term::Name(a.clone(), sub(b)?),
            (Term::Pair(l, r), 0) => Term::Pair(sub(l)?, r.clone()),
            (Term::Pair(l, r), 1) => Term::Pair(l.clone(), sub(r)?),
            (Term::App(f, e), 0) => Term::App(sub(f)?, e.clone()),
            (Term::App(f, Elim::Arg(a)), 1) => Term::App(f.clone(), Elim::Arg(sub(a)?)),
            (Term::App(f, Elim::Case(x1, n1, x2, n2)), 1) => {
                Term::App(f.clone(), Elim::Case(x1.clone(), sub(n1)?, x2.clone(), n2.clone()))
            }
            (Term::App(f, Elim::Case(x1, n1, x2, n2)), 2) => {
                Term::App(f.clone(), Elim::Case(x1.clone(), n1.clone(), x2.clone(), sub(n2)?))
            }
            _ => return None,
        })
    }
}

impl Elim {
    pub fn size(&self) -> usize {
        match self {
            Elim::Arg(t) => t.size(),
            Elim::Proj(_) => 1,
            Elim::Case(_, n1, _, n2) => 1 + n1.size() + n2.size(),
        }
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Elim {
        match self {
            Elim::Arg(t) => Elim::Arg(Arc::new(f(t))),
            Elim::Proj(i) => Elim::Proj(*i),
            Elim::Case(x1, n1, x2, n2) => Elim::Case(x1.clone(), Arc::new(f(n1)), x2.clone(), Arc::new(f(n2))),
        }
    }

    pub fn has_free_term_var(&self, x: &TermVar) -> bool {
        match self {
            Elim::Arg(t) => t.has_free_term_var(x),
            Elim::Proj(_) => false,
            Elim::Case(x1, n1, x2, n2) => (x1 != x && n1.has_free_term_var(x)) || (x2 != x && n2.has_free_term_var(x)),
        }
    }

    /// Free variables of the elimination viewed as a term context.
    pub fn free_vars(&self) -> (BTreeSet<TermVar>, BTreeSet<MuVar>) {
        let mut fv = FreeVars::default();
        fv.collect_elim(self);
        (fv.terms, fv.mus)
    }

    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Elim::Arg(t) => t.all_names(out),
            Elim::Proj(_) => {}
            Elim::Case(x1, n1, x2, n2) => {
                out.insert(x1.as_str().to_owned());
                out.insert(x2.as_str().to_owned());
                n1.all_names(out);
                n2.all_names(out);
            }
        }
    }
}

#[derive(Default)]
struct FreeVars {
    terms: BTreeSet<TermVar>,
    mus: BTreeSet<MuVar>,
    bound_terms: Vec<TermVar>,
    bound_mus: Vec<MuVar>,
}

impl FreeVars {
    fn collect(&mut self, t: &Term) {
        match t {
            Term::Var(x) => {
                if !self.bound_terms.contains(x) {
                    self.terms.insert(x.clone());
                }
            }
            Term::Const(_) => {}
            Term::Lam(x, _, b) => {
                self.bound_terms.push(x.clone());
                self.collect(b);
                self.bound_terms.pop();
            }
            Term::Mu(a, _, b) => {
                self.bound_mus.push(a.clone());
                self.collect(b);
                self.bound_mus.pop();
            }
            Term::Name(a, b) => {
                if !self.bound_mus.contains(a) {
                    self.mus.insert(a.clone());
                }
                self.collect(b);
            }
            Term::Inj(_, _, b) => self.collect(b),
            Term::Pair(l, r) => {
                self.collect(l);
                self.collect(r);
            }
            Term::App(f, e) => {
                self.collect(f);
                self.collect_elim(e);
            }
        }
    }

    fn collect_elim(&mut self, e: &Elim) {
        match e {
            Elim::Arg(t) => self.collect(t),
            Elim::Proj(_) => {}
            Elim::Case(x1, n1, x2, n2) => {
                self.bound_terms.push(x1.clone());
                self.collect(n1);
                self.bound_terms.pop();
                self.bound_terms.push(x2.clone());
                self.collect(n2);
                self.bound_terms.pop();
            }
        }
    }
}

/// A path of child indices from the root of a term.
///
/// Child numbering: binder bodies are `0`; a pair has `0` and `1`; an
/// application has its function at `0`, and its argument at `1` or its case
/// branches at `1` and `2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    /// `prefix` followed by this path.
    pub fn under(&self, prefix: &Position) -> Position {
        let mut p = prefix.0.clone();
        p.extend_from_slice(&self.0);
        Position(p)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "root" || s.is_empty() {
            return Ok(Position::root());
        }
        s.split('.')
            .map(|p| p.parse::<usize>().map_err(|e| format!("bad position component {p:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(Position)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term_any;

    fn t(s: &str) -> Term {
        parse_term_any(s).unwrap()
    }

    #[test]
    fn sizes() {
        assert_eq!(t("x").size(), 1);
        assert_eq!(t("\\x. x").size(), 2);
        assert_eq!(t("mu a. [a] y").size(), 3);
        assert_eq!(t("y").size(), 1);
    }

    #[test]
    fn free_variables() {
        let (tv, mv) = t("\\x. x").free_vars();
        assert!(tv.is_empty() && mv.is_empty());

        let (tv, mv) = t("mu a. [a] x").free_vars();
        assert_eq!(tv.into_iter().collect::<Vec<_>>(), vec![TermVar::new("x")]);
        assert!(mv.is_empty());

        let (tv, mv) = t("(y [x1. x1 | x2. z])").free_vars();
        assert_eq!(tv.into_iter().collect::<Vec<_>>(), vec![TermVar::new("y"), TermVar::new("z")]);
        assert!(mv.is_empty());
    }

    #[test]
    fn positions_resolve() {
        let m = t("(\\x. (x y) <z, w>)");
        assert_eq!(m.subterm(&Position(vec![0, 0, 1])), Some(&t("y")));
        assert_eq!(m.subterm(&Position(vec![1, 1])), Some(&t("w")));
        assert_eq!(m.subterm(&Position(vec![2])), None);
        let r = m.replace_at(&[1, 0], t("q")).unwrap();
        assert_eq!(r, t("(\\x. (x y) <q, w>)"));
        assert_eq!("0.1.2".parse::<Position>().unwrap(), Position(vec![0, 1, 2]));
        assert_eq!(Position::root().to_string(), "root");
    }

    #[test]
    fn sorts() {
        assert_eq!(t("\\x. x").sort(), Some(Sort::Lambda));
        assert_eq!(t("mu a. [a] x").sort(), Some(Sort::LambdaMu));
        assert_eq!(t("(x p1)").sort(), Some(Sort::Full));
        assert_eq!(t("(c[X] x)").sort(), Some(Sort::Lambda));
    }
}
