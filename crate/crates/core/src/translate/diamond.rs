use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::TranslateError;
use crate::syntax::{fresh_name, Elim, MuVar, Term, TermVar};
use crate::types::Type;
use crate::typing::Context;

/// `T_A : ~~A -> A`, built by recursion on the simple type `A`.
pub fn t_term(a: &Type) -> Result<Term, TranslateError> {
    Ok(match a {
        Type::Atom(x) => Term::Const(x.clone()),
        Type::Bot => Term::lam(
            "x",
            Some(Type::neg(Type::neg(Type::Bot))),
            Term::app(Term::var("x"), Term::lam("y", Some(Type::Bot), Term::var("y"))),
        ),
        Type::Arrow(l, r) => {
            let (l, r) = (&**l, &**r);
            let inner = Term::lam(
                "u",
                Some(Type::neg(r.clone())),
                Term::app(
                    Term::var("x"),
                    Term::lam("v", Some(a.clone()), Term::app(Term::var("u"), Term::app(Term::var("v"), Term::var("y")))),
                ),
            );
            Term::lam("x", Some(Type::neg(Type::neg(a.clone()))), Term::lam("y", Some(l.clone()), Term::app(t_term(r)?, inner)))
        }
        Type::And(..) | Type::Or(..) => return Err(TranslateError::NotSimple(a.clone())),
    })
}

/// The λ-variables `x_a` standing for μ-variables. Injective, and disjoint
/// from every name in the term and context it was built for.
#[derive(Clone, Debug, Default)]
pub struct TranslationEnv {
    mu_to_term: BTreeMap<MuVar, TermVar>,
}

impl TranslationEnv {
    pub fn new(ctx: &Context, m: &Term) -> TranslationEnv {
        TranslationEnv::for_terms(ctx, [m])
    }

    /// One environment shared by several terms, so that their images agree
    /// on the μ-variables they have in common.
    pub fn for_terms<'a>(ctx: &Context, terms: impl IntoIterator<Item = &'a Term> + Clone) -> TranslationEnv {
        let mut taken = BTreeSet::new();
        for m in terms.clone() {
            m.all_names(&mut taken);
        }
        let mut mus = BTreeSet::new();
        for (x, _) in ctx.terms() {
            taken.insert(x.as_str().to_owned());
        }
        for (a, _) in ctx.mus() {
            taken.insert(a.as_str().to_owned());
            mus.insert(a.clone());
        }
        for m in terms {
            m.visit(&mut |t| {
                if let Term::Mu(a, _, _) | Term::Name(a, _) = t {
                    mus.insert(a.clone());
                }
            });
        }
        let mut mu_to_term = BTreeMap::new();
        for a in mus {
            let want = format!("x_{a}");
            let name = if taken.contains(&want) { fresh_name(&want, |c| taken.contains(c)) } else { want };
            taken.insert(name.clone());
            mu_to_term.insert(a, TermVar::new(&name));
        }
        TranslationEnv { mu_to_term }
    }

    pub fn x_of(&self, a: &MuVar) -> &TermVar {
        &self.mu_to_term[a]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MuVar, &TermVar)> {
        self.mu_to_term.iter()
    }
}

/// `M⋄`. Every binder must be annotated; `env` must come from
/// [`TranslationEnv::new`] on this term (or a term containing it).
pub fn diamond(m: &Term, env: &TranslationEnv) -> Result<Term, TranslateError> {
    let go = |t: &Arc<Term>| diamond(t, env).map(Arc::new);
    Ok(match m {
        Term::Var(_) | Term::Const(_) => m.clone(),
        Term::Lam(x, Some(a), b) => Term::Lam(x.clone(), Some(a.clone()), go(b)?),
        Term::Lam(x, None, _) => return Err(TranslateError::MissingAnnotation(format!("\\{x}"))),
        Term::App(f, Elim::Arg(n)) => Term::App(go(f)?, Elim::Arg(go(n)?)),
        Term::Mu(a, Some(ty), b) => Term::app(t_term(ty)?, Term::Lam(env.x_of(a).clone(), Some(Type::neg(ty.clone())), go(b)?)),
        Term::Mu(a, None, _) => return Err(TranslateError::MissingAnnotation(format!("mu {a}"))),
        Term::Name(a, b) => Term::App(Arc::new(Term::Var(env.x_of(a).clone())), Elim::Arg(go(b)?)),
        Term::App(..) | Term::Pair(..) | Term::Inj(..) => return Err(TranslateError::NotLambdaMu(m.to_string())),
    })
}

/// `Γ⋄`: each `a : ~B` becomes `x_a : ~B`.
pub fn diamond_context(ctx: &Context, env: &TranslationEnv) -> Context {
    let mut out = Context::new();
    for (x, a) in ctx.terms() {
        out.declare_term(x.as_str(), a.clone()).expect("names are distinct");
    }
    for (a, b) in ctx.mus() {
        out.declare_term(env.x_of(a).as_str(), Type::neg(b.clone())).expect("x_a avoids the context's names");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_term_any};
    use crate::types::{parse_type, types_up_to_depth};
    use crate::typing::{typecheck, System};

    fn t(s: &str) -> Term {
        parse_term_any(s).unwrap()
    }

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn t_term_examples() {
        assert_eq!(t_term(&Type::Bot).unwrap(), t("\\x:~~bot. (x \\y:bot. y)"));
        assert_eq!(t_term(&ty("X")).unwrap(), t("c[X]"));
        let expected = t("\\x:~~(X -> bot). \\y:X. (\\x:~~bot. (x \\y:bot. y) \\u:~bot. (x \\v:X -> bot. (u (v y))))");
        assert_eq!(t_term(&ty("X -> bot")).unwrap(), expected);
        assert!(t_term(&ty("A /\\ B")).is_err());
    }

    #[test]
    fn t_term_types_at_small_depth() {
        for a in types_up_to_depth(2, &["X"], true, false) {
            let want = Type::arrow(Type::neg(Type::neg(a.clone())), a.clone());
            typecheck(&Context::new(), &t_term(&a).unwrap(), &want, System::Sc, None).unwrap_or_else(|e| panic!("T_{a}: {e}"));
        }
    }

    #[test]
    fn diamond_examples() {
        let ctx = Context::parse("x : X").unwrap();
        let m = t("x");
        assert_eq!(diamond(&m, &TranslationEnv::new(&ctx, &m)).unwrap(), m);
        let m = t("mu a:~X. [a] x");
        let env = TranslationEnv::new(&ctx, &m);
        assert_eq!(diamond(&m, &env).unwrap(), t("(c[X] \\x_a:~X. (x_a x))"));
        assert!(diamond(&t("mu a. [a] x"), &env).is_err());
        assert!(diamond(&t("<x, x>"), &env).is_err());
    }

    #[test]
    fn env_avoids_existing_names() {
        let m = t("\\x_a:X. mu a:~X. [a] x_a");
        let env = TranslationEnv::new(&Context::new(), &m);
        let x = env.x_of(&MuVar::new("a")).clone();
        assert_ne!(x.as_str(), "x_a");
        let d = diamond(&m, &env).unwrap();
        assert!(alpha_eq(&d, &t("\\x_a:X. (c[X] \\k:~X. (k x_a))")));
    }

    #[test]
    fn diamond_context_examples() {
        let ctx = Context::parse("x : A; mu a : ~B").unwrap();
        let env = TranslationEnv::new(&ctx, &t("x"));
        assert_eq!(diamond_context(&ctx, &env), Context::parse("x : A; x_a : ~B").unwrap());
        assert!(diamond_context(&Context::new(), &env).is_empty());
    }
}
