use std::collections::BTreeSet;
use std::sync::Arc;

use super::TranslateError;
use crate::syntax::{Elim, MuVar, Term, TermVar, PHI};
use crate::types::{circle_type, EquationSet, Type};
use crate::typing::{infer, Context, System};

/// Names for the binders the translation introduces: `prefix<n>` from one
/// counter, skipping anything that occurs in the source.
struct Fresh {
    taken: BTreeSet<String>,
    next: usize,
}

impl Fresh {
    fn new(m: &Term) -> Fresh {
        let mut taken = BTreeSet::new();
        m.all_names(&mut taken);
        taken.insert(PHI.to_owned());
        Fresh { taken, next: 1 }
    }

    fn name(&mut self, prefix: &str) -> String {
        loop {
            let cand = format!("{prefix}{}", self.next);
            self.next += 1;
            if !self.taken.contains(&cand) {
                return cand;
            }
        }
    }
}

struct Circle<'a> {
    fresh: Fresh,
    eqs: Option<&'a EquationSet>,
}

fn phi() -> MuVar {
    MuVar::new(PHI)
}

impl Circle<'_> {
    fn whnf(&self, t: Type) -> Type {
        match self.eqs {
            Some(e) => e.whnf(&t).clone(),
            None => t,
        }
    }

    fn infer(&self, ctx: &Context, m: &Term) -> Result<Type, TranslateError> {
        Ok(infer(ctx, m, System::Sfull, self.eqs)?)
    }

    fn split(&self, ctx: &Context, m: &Term) -> Result<(Type, Type), TranslateError> {
        match self.whnf(self.infer(ctx, m)?) {
            Type::And(l, r) | Type::Or(l, r) => Ok(((*l).clone(), (*r).clone())),
            other => Err(TranslateError::Type(crate::typing::TypeError::WrongShape {
                term: m.clone(),
                wanted: "a conjunction or disjunction",
                found: other,
            })),
        }
    }

    /// `ctx` is present when the source is typed and binders should be
    /// annotated; it is dropped under an unannotated binder.
    fn go(&mut self, m: &Term, ctx: Option<&Context>) -> Result<Term, TranslateError> {
        let circ = |a: &Option<Type>| a.as_ref().map(circle_type);
        Ok(match m {
            Term::Var(_) | Term::Const(_) => m.clone(),
            Term::Lam(x, ann, b) => {
                let inner = ctx.zip(ann.as_ref()).map(|(c, a)| c.with_term(x, a.clone()));
                Term::Lam(x.clone(), circ(ann), Arc::new(self.go(b, inner.as_ref())?))
            }
            Term::Mu(a, ann, b) => {
                let inner = ctx.zip(ann.as_ref()).map(|(c, t)| c.with_mu(a, t.clone()));
                Term::Mu(a.clone(), circ(ann), Arc::new(self.go(b, inner.as_ref())?))
            }
            Term::Name(a, b) => Term::Name(a.clone(), Arc::new(self.go(b, ctx)?)),
            Term::App(f, Elim::Arg(n)) => Term::App(Arc::new(self.go(f, ctx)?), Elim::Arg(Arc::new(self.go(n, ctx)?))),
            Term::Pair(l, r) => {
                let z_ann = match ctx {
                    Some(c) => {
                        let (a1, a2) = (self.infer(c, l)?, self.infer(c, r)?);
                        Some(Type::arrow(circle_type(&a1), Type::arrow(circle_type(&a2), Type::Bot)))
                    }
                    None => None,
                };
                let z = self.fresh.name("z");
                let body = Term::apps(Term::var(&z), [self.go(l, ctx)?, self.go(r, ctx)?]);
                Term::lam(&z, z_ann, body)
            }
            Term::Inj(side, ann, b) => {
                let parts = match (ctx, ann) {
                    (Some(_), Some(t)) => match self.whnf(t.clone()) {
                        Type::Or(l, r) => Some(((*l).clone(), (*r).clone())),
                        _ => None,
                    },
                    (None, Some(Type::Or(l, r))) => Some(((**l).clone(), (**r).clone())),
                    _ => None,
                };
                let (a1, a2) = match parts {
                    Some((l, r)) => (Some(Type::neg(circle_type(&l))), Some(Type::neg(circle_type(&r)))),
                    None => (None, None),
                };
                let x1 = self.fresh.name("l");
                let x2 = self.fresh.name("r");
                let xi = side.pick(&x1, &x2);
                let body = Term::app(Term::var(xi), self.go(b, ctx)?);
                Term::lam(&x1, a1, Term::lam(&x2, a2, body))
            }
            Term::App(f, Elim::Proj(side)) => {
                let (alpha_ann, parts) = match ctx {
                    Some(c) => (Some(circle_type(&self.infer(c, m)?)), Some(self.split(c, f)?)),
                    None => (None, None),
                };
                let a = self.fresh.name("a");
                let g = self.fresh.name("g");
                let x1 = self.fresh.name("l");
                let x2 = self.fresh.name("r");
                let (t1, t2) = match parts {
                    Some((l, r)) => (Some(circle_type(&l)), Some(circle_type(&r))),
                    None => (None, None),
                };
                let bot = ctx.map(|_| Type::Bot);
                let xi = side.pick(&x1, &x2);
                let pick = Term::lam(&x1, t1, Term::lam(&x2, t2, Term::mu(&g, bot, Term::name(&a, Term::var(xi)))));
                let inner = Term::app(self.go(f, ctx)?, pick);
                Term::mu(&a, alpha_ann, Term::Name(phi(), Arc::new(inner)))
            }
            Term::App(f, Elim::Case(x1, n1, x2, n2)) => {
                let (alpha_ann, parts) = match ctx {
                    Some(c) => (Some(circle_type(&self.infer(c, m)?)), Some(self.split(c, f)?)),
                    None => (None, None),
                };
                let a = self.fresh.name("a");
                let scrut = self.go(f, ctx)?;
                let mut branch = |x: &TermVar, n: &Term, t: Option<Type>| -> Result<Term, TranslateError> {
                    let inner = ctx.zip(t.as_ref()).map(|(c, t)| c.with_term(x, t.clone()));
                    let body = self.go(n, inner.as_ref())?;
                    let g = self.fresh.name("g");
                    let bot = ctx.map(|_| Type::Bot);
                    Ok(Term::Lam(x.clone(), t.as_ref().map(circle_type), Arc::new(Term::mu(&g, bot, Term::name(&a, body)))))
                };
                let (t1, t2) = match parts {
                    Some((l, r)) => (Some(l), Some(r)),
                    None => (None, None),
                };
                let b1 = branch(x1, n1, t1)?;
                let b2 = branch(x2, n2, t2)?;
                Term::mu(&a, alpha_ann, Term::Name(phi(), Arc::new(Term::apps(scrut, [b1, b2]))))
            }
        })
    }
}

/// `M∘`, without consulting types. Annotations present on the source are
/// mapped through the type encoding; the new binders stay bare.
pub fn circle(m: &Term) -> Term {
    Circle { fresh: Fresh::new(m), eqs: None }.go(m, None).expect("the untyped translation cannot fail")
}

/// `M∘` for a Church term typed in `ctx`, with every introduced binder
/// annotated so that the image is again a Church term.
pub fn circle_typed(ctx: &Context, m: &Term, eqs: Option<&EquationSet>) -> Result<Term, TranslateError> {
    Circle { fresh: Fresh::new(m), eqs }.go(m, Some(ctx))
}

/// `Γ∘`: every type encoded, and `phi : ~bot` declared.
pub fn circle_context(ctx: &Context) -> Result<Context, TranslateError> {
    let mut out = ctx.map_types(circle_type);
    out.declare_mu(PHI, Type::Bot).map_err(|_| TranslateError::PhiCollision)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_term_any};
    use crate::types::{circle_equations, parse_type};
    use crate::typing::typecheck;

    fn t(s: &str) -> Term {
        parse_term_any(s).unwrap()
    }

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn circle_examples() {
        assert!(alpha_eq(&circle(&t("<x, y>")), &t("\\z. (z x y)")));
        assert!(alpha_eq(&circle(&t("w1 x")), &t("\\x1. \\x2. (x1 x)")));
        assert!(alpha_eq(&circle(&t("w2 x")), &t("\\x1. \\x2. (x2 x)")));
        assert!(alpha_eq(&circle(&t("(x p1)")), &t("mu a. [phi] (x \\x1. \\x2. mu g. [a] x1)")));
        assert!(alpha_eq(&circle(&t("(x [y. y | z. z])")), &t("mu a. [phi] (x \\y. mu g. [a] y \\z. mu h. [a] z)")));
    }

    #[test]
    fn fresh_binders_are_distinct_and_avoid_source_names() {
        let m = t("<(z1 p1), (z2 p2)>");
        let c = circle(&m);
        let mut names = BTreeSet::new();
        c.all_names(&mut names);
        assert!(names.contains("z1") && names.contains("z2"));
        let mut gammas = Vec::new();
        c.visit(&mut |s| {
            if let Term::Mu(g, _, _) = s {
                gammas.push(g.clone());
            }
        });
        let distinct: BTreeSet<_> = gammas.iter().collect();
        assert_eq!(distinct.len(), gammas.len());
        assert_eq!(c.free_term_vars(), m.free_term_vars());
        assert_eq!(c.free_mu_vars(), BTreeSet::from([phi()]));
    }

    #[test]
    fn context_examples() {
        let c = circle_context(&Context::parse("x : A /\\ B").unwrap()).unwrap();
        assert_eq!(c, Context::parse("x : (A -> B -> bot) -> bot; mu phi : ~bot").unwrap());
        assert_eq!(circle_context(&Context::new()).unwrap(), Context::parse("mu phi : ~bot").unwrap());
        let c = circle_context(&Context::parse("mu a : ~(A \\/ B)").unwrap()).unwrap();
        assert_eq!(c, Context::parse("mu a : ~(~A -> ~B -> bot); mu phi : ~bot").unwrap());
        let mut clash = Context::new();
        clash.declare_mu(PHI, Type::Bot).unwrap();
        assert_eq!(circle_context(&clash), Err(TranslateError::PhiCollision));
    }

    fn assert_coding(ctx: &str, m: &str, a: &str, eqs: Option<&EquationSet>) {
        let ctx = Context::parse(ctx).unwrap();
        let m = t(m);
        let a = ty(a);
        typecheck(&ctx, &m, &a, System::Sfull, eqs).unwrap();
        let c = circle_typed(&ctx, &m, eqs).unwrap();
        assert!(c.is_church(), "{c}");
        assert!(alpha_eq(&c.erase(), &circle(&m).erase()));
        let ceqs = eqs.map(circle_equations);
        typecheck(&circle_context(&ctx).unwrap(), &c, &circle_type(&a), System::Smu, ceqs.as_ref())
            .unwrap_or_else(|e| panic!("{c}: {e}"));
    }

    #[test]
    fn typed_images_typecheck() {
        assert_coding("x : A /\\ B", "(x p1)", "A", None);
        assert_coding("x : A; y : B", "(<x, y> p2)", "B", None);
        assert_coding("x : A \\/ B; f : A -> C; g : B -> C", "(x [y. (f y) | z. (g z)])", "C", None);
        assert_coding("y : A", "\\x:B. w2[A \\/ B] x", "B -> A \\/ B", None);
        assert_coding("y : A", "mu a:~(A /\\ A). [a] <y, y>", "A /\\ A", None);
        let eqs = EquationSet::parse("X = A /\\ (B -> X)").unwrap();
        assert_coding("x : X; b : B", "((x p2) b)", "X", Some(&eqs));
        assert_coding("x : X", "(x p1)", "A", Some(&eqs));
    }
}
