//! Curry-style typability by first-order unification. Every rule of the
//! systems is syntax-directed, so a term without equations has a principal
//! type; grounding its type variables to one atom gives a Church witness.

use std::collections::HashMap;
use std::sync::Arc;

use crate::syntax::{Elim, MuVar, Side, Term, TermVar};
use crate::types::Type;

#[derive(Clone)]
enum Ty {
    Var(usize),
    Atom(Arc<str>),
    Bot,
    Arrow(Box<Ty>, Box<Ty>),
    And(Box<Ty>, Box<Ty>),
    Or(Box<Ty>, Box<Ty>),
}

impl Ty {
    fn arrow(l: Ty, r: Ty) -> Ty {
        Ty::Arrow(Box::new(l), Box::new(r))
    }

    fn from_type(t: &Type) -> Ty {
        match t {
            Type::Atom(a) => Ty::Atom(a.clone()),
            Type::Bot => Ty::Bot,
            Type::Arrow(l, r) => Ty::arrow(Ty::from_type(l), Ty::from_type(r)),
            Type::And(l, r) => Ty::And(Box::new(Ty::from_type(l)), Box::new(Ty::from_type(r))),
            Type::Or(l, r) => Ty::Or(Box::new(Ty::from_type(l)), Box::new(Ty::from_type(r))),
        }
    }
}

struct NoUnifier;

#[derive(Default)]
struct Unifier {
    bound: Vec<Option<Ty>>,
    /// Binder types in pre-order, for rebuilding an annotated term.
    annotations: Vec<Ty>,
}

impl Unifier {
    fn fresh(&mut self) -> Ty {
        self.bound.push(None);
        Ty::Var(self.bound.len() - 1)
    }

    fn shallow(&self, t: &Ty) -> Ty {
        let mut t = t.clone();
        while let Ty::Var(v) = t {
            match &self.bound[v] {
                Some(u) => t = u.clone(),
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: usize, t: &Ty) -> bool {
        match self.shallow(t) {
            Ty::Var(w) => v == w,
            Ty::Atom(_) | Ty::Bot => false,
            Ty::Arrow(l, r) | Ty::And(l, r) | Ty::Or(l, r) => self.occurs(v, &l) || self.occurs(v, &r),
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> Result<(), NoUnifier> {
        match (self.shallow(a), self.shallow(b)) {
            (Ty::Var(v), Ty::Var(w)) if v == w => Ok(()),
            (Ty::Var(v), t) | (t, Ty::Var(v)) => {
                if self.occurs(v, &t) {
                    return Err(NoUnifier);
                }
                self.bound[v] = Some(t);
                Ok(())
            }
            (Ty::Atom(x), Ty::Atom(y)) if x == y => Ok(()),
            (Ty::Bot, Ty::Bot) => Ok(()),
            (Ty::Arrow(a1, a2), Ty::Arrow(b1, b2)) | (Ty::And(a1, a2), Ty::And(b1, b2)) | (Ty::Or(a1, a2), Ty::Or(b1, b2)) => {
                self.unify(&a1, &b1)?;
                self.unify(&a2, &b2)
            }
            _ => Err(NoUnifier),
        }
    }

    fn ground(&self, t: &Ty, atom: &Type) -> Type {
        match self.shallow(t) {
            Ty::Var(_) => atom.clone(),
            Ty::Atom(a) => Type::Atom(a),
            Ty::Bot => Type::Bot,
            Ty::Arrow(l, r) => Type::arrow(self.ground(&l, atom), self.ground(&r, atom)),
            Ty::And(l, r) => Type::and(self.ground(&l, atom), self.ground(&r, atom)),
            Ty::Or(l, r) => Type::or(self.ground(&l, atom), self.ground(&r, atom)),
        }
    }

    /// Free variables are given fresh types, shared by name.
    fn infer(
        &mut self,
        m: &Term,
        terms: &mut Vec<(TermVar, Ty)>,
        mus: &mut Vec<(MuVar, Ty)>,
        free: &mut HashMap<TermVar, Ty>,
        free_mu: &mut HashMap<MuVar, Ty>,
    ) -> Result<Ty, NoUnifier> {
        match m {
            Term::Var(x) => match terms.iter().rev().find(|(y, _)| y == x) {
                Some((_, t)) => Ok(t.clone()),
                None => {
                    if !free.contains_key(x) {
                        let t = self.fresh();
                        free.insert(x.clone(), t);
                    }
                    Ok(free[x].clone())
                }
            },
            Term::Const(a) => {
                let x = Ty::Atom(a.clone());
                let not = |t: Ty| Ty::arrow(t, Ty::Bot);
                Ok(Ty::arrow(not(not(x.clone())), x))
            }
            Term::Lam(x, ann, b) => {
                let a = self.fresh();
                if let Some(t) = ann {
                    self.unify(&a, &Ty::from_type(t))?;
                }
                self.annotations.push(a.clone());
                terms.push((x.clone(), a.clone()));
                let tb = self.infer(b, terms, mus, free, free_mu);
                terms.pop();
                Ok(Ty::arrow(a, tb?))
            }
            Term::Pair(l, r) => {
                let tl = self.infer(l, terms, mus, free, free_mu)?;
                let tr = self.infer(r, terms, mus, free, free_mu)?;
                Ok(Ty::And(Box::new(tl), Box::new(tr)))
            }
            Term::Inj(side, ann, b) => {
                let whole = self.fresh();
                if let Some(t) = ann {
                    self.unify(&whole, &Ty::from_type(t))?;
                }
                self.annotations.push(whole.clone());
                let tb = self.infer(b, terms, mus, free, free_mu)?;
                let other = self.fresh();
                let or = match side {
                    Side::Left => Ty::Or(Box::new(tb), Box::new(other)),
                    Side::Right => Ty::Or(Box::new(other), Box::new(tb)),
                };
                self.unify(&whole, &or)?;
                Ok(whole)
            }
            Term::Mu(a, ann, b) => {
                let t = self.fresh();
                if let Some(u) = ann {
                    self.unify(&t, &Ty::from_type(u))?;
                }
                self.annotations.push(t.clone());
                mus.push((a.clone(), t.clone()));
                let tb = self.infer(b, terms, mus, free, free_mu);
                mus.pop();
                self.unify(&tb?, &Ty::Bot)?;
                Ok(t)
            }
            Term::Name(a, b) => {
                let t = match mus.iter().rev().find(|(c, _)| c == a) {
                    Some((_, t)) => t.clone(),
                    None => {
                        if !free_mu.contains_key(a) {
                            let t = self.fresh();
                            free_mu.insert(a.clone(), t);
                        }
                        free_mu[a].clone()
                    }
                };
                let tb = self.infer(b, terms, mus, free, free_mu)?;
                self.unify(&tb, &t)?;
                Ok(Ty::Bot)
            }
            Term::App(f, e) => {
                let tf = self.infer(f, terms, mus, free, free_mu)?;
                match e {
                    Elim::Arg(n) => {
                        let tn = self.infer(n, terms, mus, free, free_mu)?;
                        let r = self.fresh();
                        self.unify(&tf, &Ty::arrow(tn, r.clone()))?;
                        Ok(r)
                    }
                    Elim::Proj(side) => {
                        let (l, r) = (self.fresh(), self.fresh());
                        self.unify(&tf, &Ty::And(Box::new(l.clone()), Box::new(r.clone())))?;
                        Ok(if *side == Side::Left { l } else { r })
                    }
                    Elim::Case(x1, n1, x2, n2) => {
                        let (l, r) = (self.fresh(), self.fresh());
                        self.unify(&tf, &Ty::Or(Box::new(l.clone()), Box::new(r.clone())))?;
                        terms.push((x1.clone(), l));
                        let t1 = self.infer(n1, terms, mus, free, free_mu);
                        terms.pop();
                        terms.push((x2.clone(), r));
                        let t2 = self.infer(n2, terms, mus, free, free_mu);
                        terms.pop();
                        let t1 = t1?;
                        self.unify(&t1, &t2?)?;
                        Ok(t1)
                    }
                }
            }
        }
    }

    fn annotate(&self, m: &Term, next: &mut usize, atom: &Type) -> Term {
        let mut take = || {
            let t = self.ground(&self.annotations[*next], atom);
            *next += 1;
            t
        };
        match m {
            Term::Var(_) | Term::Const(_) => m.clone(),
            Term::Lam(x, _, b) => {
                let t = take();
                Term::Lam(x.clone(), Some(t), Arc::new(self.annotate(b, next, atom)))
            }
            Term::Inj(side, _, b) => {
                let t = take();
                Term::Inj(*side, Some(t), Arc::new(self.annotate(b, next, atom)))
            }
            Term::Mu(a, _, b) => {
                let t = take();
                Term::Mu(a.clone(), Some(t), Arc::new(self.annotate(b, next, atom)))
            }
            Term::Name(a, b) => Term::Name(a.clone(), Arc::new(self.annotate(b, next, atom))),
            Term::Pair(l, r) => {
                let l = self.annotate(l, next, atom);
                Term::Pair(Arc::new(l), Arc::new(self.annotate(r, next, atom)))
            }
            Term::App(f, e) => {
                let f = self.annotate(f, next, atom);
                let e = match e {
                    Elim::Arg(n) => Elim::Arg(Arc::new(self.annotate(n, next, atom))),
                    Elim::Proj(s) => Elim::Proj(*s),
                    Elim::Case(x1, n1, x2, n2) => {
                        let n1 = self.annotate(n1, next, atom);
                        Elim::Case(x1.clone(), Arc::new(n1), x2.clone(), Arc::new(self.annotate(n2, next, atom)))
                    }
                };
                Term::App(Arc::new(f), e)
            }
        }
    }
}

/// The principal type of a closed term with every type variable sent to
/// `atom`, together with the correspondingly annotated Church term.
/// Existing annotations are respected. `None` when the term is untypable
/// or not closed.
pub fn curry_type(m: &Term, atom: &Type) -> Option<(Term, Type)> {
    let (fv, fmv) = m.free_vars();
    if !fv.is_empty() || !fmv.is_empty() {
        return None;
    }
    let mut u = Unifier::default();
    let t = u.infer(m, &mut Vec::new(), &mut Vec::new(), &mut HashMap::new(), &mut HashMap::new()).ok()?;
    let church = u.annotate(m, &mut 0, atom);
    Some((church, u.ground(&t, atom)))
}

/// Whether some assignment of types to the free variables makes the term
/// typable. A closed term containing an untypable subterm is untypable.
pub fn curry_typable(m: &Term) -> bool {
    let mut u = Unifier::default();
    u.infer(m, &mut Vec::new(), &mut Vec::new(), &mut HashMap::new(), &mut HashMap::new()).is_ok()
}
