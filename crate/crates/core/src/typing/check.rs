use std::fmt;
use std::sync::Arc;

use super::Context;
use crate::syntax::{Elim, MuVar, Sort, Term, TermVar};
use crate::types::{EquationSet, Type};

/// The four typing systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum System {
    /// Simply typed λ-calculus.
    S,
    /// `S` with constants `c[X] : ~~X -> X`.
    Sc,
    /// λμ-calculus.
    Smu,
    /// λμ with conjunction and disjunction.
    Sfull,
}

impl System {
    pub fn sort(self) -> Sort {
        match self {
            System::S | System::Sc => Sort::Lambda,
            System::Smu => Sort::LambdaMu,
            System::Sfull => Sort::Full,
        }
    }

    fn full_types(self) -> bool {
        self == System::Sfull
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::S => "S",
            System::Sc => "Sc",
            System::Smu => "Smu",
            System::Sfull => "Sfull",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("unbound variable {0}")]
    Unbound(TermVar),
    #[error("unbound mu-variable {0}")]
    UnboundMu(MuVar),
    #[error("{term} has type {found} but {expected} was expected")]
    Mismatch { term: Term, expected: Type, found: Type },
    #[error("{term} is used as {wanted} but has type {found}")]
    WrongShape { term: Term, wanted: &'static str, found: Type },
    #[error("cannot infer a type for {0}: binder annotation missing")]
    MissingAnnotation(Term),
    #[error("cannot infer a type for the injection {0}: the disjunction is not annotated")]
    Ambiguous(Term),
    #[error("sort violation: {0}")]
    Sort(String),
}

/// Rule names of a derivation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Ax,
    ArrowI,
    ArrowE,
    BotI,
    BotE,
    AndI,
    AndE,
    OrI,
    OrE,
    Congr,
    Const,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Ax => "ax",
            Rule::ArrowI => "->i",
            Rule::ArrowE => "->e",
            Rule::BotI => "boti",
            Rule::BotE => "bote",
            Rule::AndI => "/\\i",
            Rule::AndE => "/\\e",
            Rule::OrI => "\\/i",
            Rule::OrE => "\\/e",
            Rule::Congr => "~=",
            Rule::Const => "const",
        })
    }
}

/// A typing derivation; each node concludes `ctx |- term : ty`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub ctx: Arc<Context>,
    pub term: Term,
    pub ty: Type,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn count(&self, rule: Rule) -> usize {
        usize::from(self.rule == rule) + self.premises.iter().map(|d| d.count(rule)).sum::<usize>()
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        writeln!(f, "{:indent$}{}  {} |- {} : {}", "", self.rule, self.ctx, self.term, self.ty, indent = 2 * depth)?;
        for p in &self.premises {
            p.write(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

enum Binding {
    Term(TermVar, Type),
    Mu(MuVar, Type),
}

struct Checker<'a> {
    sys: System,
    eqs: Option<&'a EquationSet>,
    base: &'a Context,
    scope: Vec<Binding>,
    // Only maintained when derivations are requested.
    ctx: Option<Arc<Context>>,
}

type Res = Result<Option<Derivation>, TypeError>;

impl<'a> Checker<'a> {
    fn new(sys: System, eqs: Option<&'a EquationSet>, base: &'a Context, build: bool) -> Self {
        Checker { sys, eqs, base, scope: Vec::new(), ctx: build.then(|| Arc::new(base.clone())) }
    }

    fn lookup(&self, x: &TermVar) -> Option<&Type> {
        for b in self.scope.iter().rev() {
            if let Binding::Term(y, t) = b {
                if y == x {
                    return Some(t);
                }
            }
        }
        self.base.term(x)
    }

    fn lookup_mu(&self, a: &MuVar) -> Option<&Type> {
        for b in self.scope.iter().rev() {
            if let Binding::Mu(y, t) = b {
                if y == a {
                    return Some(t);
                }
            }
        }
        self.base.mu(a)
    }

    fn push(&mut self, b: Binding) {
        if let Some(ctx) = &self.ctx {
            self.ctx = Some(Arc::new(match &b {
                Binding::Term(x, t) => ctx.with_term(x, t.clone()),
                Binding::Mu(a, t) => ctx.with_mu(a, t.clone()),
            }));
        }
        self.scope.push(b);
    }

    fn pop(&mut self, saved: Option<Arc<Context>>) {
        self.scope.pop();
        self.ctx = saved;
    }

    fn whnf<'t>(&'t self, t: &'t Type) -> &'t Type {
        match self.eqs {
            Some(e) => e.whnf(t),
            None => t,
        }
    }

    fn conv(&self, found: &Type, expected: &Type) -> bool {
        found == expected || self.eqs.is_some_and(|e| e.congruent(found, expected))
    }

    fn node(&self, rule: Rule, term: &Term, ty: &Type, premises: Vec<Option<Derivation>>) -> Option<Derivation> {
        let ctx = self.ctx.clone()?;
        Some(Derivation { rule, ctx, term: term.clone(), ty: ty.clone(), premises: premises.into_iter().flatten().collect() })
    }

    /// Re-type `d` (a derivation of `term : from`) at `to`, adding a ≈ node
    /// when the two types differ syntactically.
    fn congr(&self, d: Option<Derivation>, term: &Term, from: &Type, to: &Type) -> Option<Derivation> {
        if from == to {
            d
        } else {
            self.node(Rule::Congr, term, to, vec![d])
        }
    }

    fn check_type_sort(&self, t: &Type) -> Result<(), TypeError> {
        if !self.sys.full_types() && !t.is_simple() {
            return Err(TypeError::Sort(format!("type {t} uses /\\ or \\/ outside Sfull")));
        }
        Ok(())
    }

    fn infer(&mut self, m: &Term) -> Result<(Type, Option<Derivation>), TypeError> {
        match m {
            Term::Var(x) => {
                let t = self.lookup(x).cloned().ok_or_else(|| TypeError::Unbound(x.clone()))?;
                let d = self.node(Rule::Ax, m, &t, vec![]);
                Ok((t, d))
            }
            Term::Const(c) => {
                if self.sys != System::Sc {
                    return Err(TypeError::Sort(format!("constant c[{c}] outside Sc")));
                }
                let x = Type::Atom(c.clone());
                let t = Type::arrow(Type::neg(Type::neg(x.clone())), x);
                let d = self.node(Rule::Const, m, &t, vec![]);
                Ok((t, d))
            }
            Term::Lam(x, Some(a), body) => {
                self.check_type_sort(a)?;
                let saved = self.ctx.clone();
                self.push(Binding::Term(x.clone(), a.clone()));
                let r = self.infer(body);
                self.pop(saved);
                let (b, db) = r?;
                let t = Type::arrow(a.clone(), b);
                let d = self.node(Rule::ArrowI, m, &t, vec![db]);
                Ok((t, d))
            }
            Term::Lam(_, None, _) | Term::Mu(_, None, _) => Err(TypeError::MissingAnnotation(m.clone())),
            Term::App(f, e) => self.infer_app(m, f, e, None),
            Term::Pair(l, r) => {
                let (a, dl) = self.infer(l)?;
                let (b, dr) = self.infer(r)?;
                let t = Type::and(a, b);
                let d = self.node(Rule::AndI, m, &t, vec![dl, dr]);
                Ok((t, d))
            }
            Term::Inj(_, Some(t), _) => {
                self.check_type_sort(t)?;
                let d = self.check(m, t)?;
                Ok((t.clone(), d))
            }
            Term::Inj(_, None, _) => Err(TypeError::Ambiguous(m.clone())),
            Term::Mu(a, Some(t), body) => {
                self.check_type_sort(t)?;
                let saved = self.ctx.clone();
                self.push(Binding::Mu(a.clone(), t.clone()));
                let r = self.check(body, &Type::Bot);
                self.pop(saved);
                let d = self.node(Rule::BotE, m, t, vec![r?]);
                Ok((t.clone(), d))
            }
            Term::Name(a, body) => {
                let t = self.lookup_mu(a).cloned().ok_or_else(|| TypeError::UnboundMu(a.clone()))?;
                let db = self.check(body, &t)?;
                let d = self.node(Rule::BotI, m, &Type::Bot, vec![db]);
                Ok((Type::Bot, d))
            }
        }
    }

    /// Applications. With `expected`, case branches are checked against it
    /// instead of inferred.
    fn infer_app(
        &mut self,
        m: &Term,
        f: &Term,
        e: &Elim,
        expected: Option<&Type>,
    ) -> Result<(Type, Option<Derivation>), TypeError> {
        let (tf, df) = self.infer(f)?;
        let head = self.whnf(&tf).clone();
        let df = self.congr(df, f, &tf, &head);
        match (e, &head) {
            (Elim::Arg(n), Type::Arrow(a, b)) => {
                let dn = self.check(n, a)?;
                let t = (**b).clone();
                let d = self.node(Rule::ArrowE, m, &t, vec![df, dn]);
                Ok((t, d))
            }
            (Elim::Arg(_), _) => Err(TypeError::WrongShape { term: f.clone(), wanted: "a function", found: tf }),
            (Elim::Proj(i), Type::And(a1, a2)) => {
                let t = (**i.pick(a1, a2)).clone();
                let d = self.node(Rule::AndE, m, &t, vec![df]);
                Ok((t, d))
            }
            (Elim::Proj(_), _) => Err(TypeError::WrongShape { term: f.clone(), wanted: "a pair", found: tf }),
            (Elim::Case(x1, n1, x2, n2), Type::Or(a1, a2)) => {
                let saved = self.ctx.clone();
                self.push(Binding::Term(x1.clone(), (**a1).clone()));
                let r1 = match expected {
                    Some(c) => self.check(n1, c).map(|d| (c.clone(), d)),
                    None => self.infer(n1),
                };
                self.pop(saved.clone());
                let (c, d1) = r1?;
                self.push(Binding::Term(x2.clone(), (**a2).clone()));
                let r2 = self.check(n2, &c);
                self.pop(saved);
                let d2 = r2?;
                let d = self.node(Rule::OrE, m, &c, vec![df, d1, d2]);
                Ok((c, d))
            }
            (Elim::Case(..), _) => Err(TypeError::WrongShape { term: f.clone(), wanted: "a disjunction", found: tf }),
        }
    }

    fn check(&mut self, m: &Term, expected: &Type) -> Res {
        let head = self.whnf(expected).clone();
        match (m, &head) {
            (Term::Lam(x, ann, body), Type::Arrow(a, b)) => {
                let dom = match ann {
                    Some(a2) => {
                        self.check_type_sort(a2)?;
                        if !self.conv(a2, a) {
                            return Err(TypeError::Mismatch {
                                term: m.clone(),
                                expected: expected.clone(),
                                found: Type::arrow(a2.clone(), (**b).clone()),
                            });
                        }
                        a2.clone()
                    }
                    None => (**a).clone(),
                };
                let saved = self.ctx.clone();
                self.push(Binding::Term(x.clone(), dom.clone()));
                let r = self.check(body, b);
                self.pop(saved);
                let t = Type::arrow(dom, (**b).clone());
                let d = self.node(Rule::ArrowI, m, &t, vec![r?]);
                Ok(self.congr(d, m, &t, expected))
            }
            (Term::Pair(l, r), Type::And(a, b)) => {
                let dl = self.check(l, a)?;
                let dr = self.check(r, b)?;
                let d = self.node(Rule::AndI, m, &head, vec![dl, dr]);
                Ok(self.congr(d, m, &head, expected))
            }
            (Term::Inj(i, ann, body), Type::Or(a1, a2)) => {
                let t = match ann {
                    Some(t) => {
                        self.check_type_sort(t)?;
                        if !self.conv(t, expected) {
                            return Err(TypeError::Mismatch { term: m.clone(), expected: expected.clone(), found: t.clone() });
                        }
                        t.clone()
                    }
                    None => head.clone(),
                };
                let db = self.check(body, i.pick(a1, a2))?;
                let d = self.node(Rule::OrI, m, &head, vec![db]);
                let d = self.congr(d, m, &head, &t);
                Ok(self.congr(d, m, &t, expected))
            }
            (Term::Mu(a, ann, body), _) => {
                let t = match ann {
                    Some(t) => {
                        self.check_type_sort(t)?;
                        if !self.conv(t, expected) {
                            return Err(TypeError::Mismatch { term: m.clone(), expected: expected.clone(), found: t.clone() });
                        }
                        t.clone()
                    }
                    None => expected.clone(),
                };
                let saved = self.ctx.clone();
                self.push(Binding::Mu(a.clone(), t.clone()));
                let r = self.check(body, &Type::Bot);
                self.pop(saved);
                let d = self.node(Rule::BotE, m, &t, vec![r?]);
                Ok(self.congr(d, m, &t, expected))
            }
            (Term::App(f, e @ Elim::Case(..)), _) => {
                let (t, d) = self.infer_app(m, f, e, Some(expected))?;
                Ok(self.congr(d, m, &t, expected))
            }
            (Term::Lam(..) | Term::Pair(..) | Term::Inj(..), _) if !matches!(m, Term::Lam(_, Some(_), _)) => {
                let wanted = match m {
                    Term::Lam(..) => "a function",
                    Term::Pair(..) => "a pair",
                    _ => "a disjunction",
                };
                Err(TypeError::WrongShape { term: m.clone(), wanted, found: expected.clone() })
            }
            _ => {
                let (t, d) = self.infer(m)?;
                if !self.conv(&t, expected) {
                    return Err(TypeError::Mismatch { term: m.clone(), expected: expected.clone(), found: t });
                }
                Ok(self.congr(d, m, &t, expected))
            }
        }
    }
}

fn validate(ctx: &Context, m: &Term, sys: System, eqs: Option<&EquationSet>) -> Result<(), TypeError> {
    match m.sort() {
        None => return Err(TypeError::Sort("constants mixed with mu or pair syntax".into())),
        Some(s) if s > sys.sort() => {
            return Err(TypeError::Sort(format!("a term of sort {s} cannot be typed in {sys}")));
        }
        _ => {}
    }
    if sys.full_types() {
        return Ok(());
    }
    let bad = ctx.terms().map(|(_, t)| t).chain(ctx.mus().map(|(_, t)| t)).find(|t| !t.is_simple());
    if let Some(t) = bad {
        return Err(TypeError::Sort(format!("context type {t} uses /\\ or \\/ outside Sfull")));
    }
    if let Some(e) = eqs {
        if !e.is_simple() {
            return Err(TypeError::Sort(format!("equations {e} use /\\ or \\/ outside Sfull")));
        }
    }
    Ok(())
}

/// Derive `ctx |- m : a` in `sys`, comparing types up to the congruence
/// generated by `eqs` when given.
pub fn check(ctx: &Context, m: &Term, a: &Type, sys: System, eqs: Option<&EquationSet>) -> Result<Derivation, TypeError> {
    validate(ctx, m, sys, eqs)?;
    let mut c = Checker::new(sys, eqs, ctx, true);
    c.check_type_sort(a)?;
    Ok(c.check(m, a)?.expect("derivations are built"))
}

/// As [`check`] without building the derivation.
pub fn typecheck(ctx: &Context, m: &Term, a: &Type, sys: System, eqs: Option<&EquationSet>) -> Result<(), TypeError> {
    validate(ctx, m, sys, eqs)?;
    let mut c = Checker::new(sys, eqs, ctx, false);
    c.check_type_sort(a)?;
    c.check(m, a).map(|_| ())
}

/// The type of an annotated term.
pub fn infer(ctx: &Context, m: &Term, sys: System, eqs: Option<&EquationSet>) -> Result<Type, TypeError> {
    validate(ctx, m, sys, eqs)?;
    Checker::new(sys, eqs, ctx, false).infer(m).map(|(t, _)| t)
}

/// As [`infer`], also returning the derivation.
pub fn infer_derivation(ctx: &Context, m: &Term, sys: System, eqs: Option<&EquationSet>) -> Result<Derivation, TypeError> {
    validate(ctx, m, sys, eqs)?;
    let (_, d) = Checker::new(sys, eqs, ctx, true).infer(m)?;
    Ok(d.expect("derivations are built"))
}

/// The context in force at `pos` inside `m`, when every binder on the way
/// has a known type: λ- and μ-binders by annotation, case binders from the
/// inferred type of the scrutinee.
pub fn context_at(ctx: &Context, m: &Term, pos: &[usize], sys: System, eqs: Option<&EquationSet>) -> Option<Context> {
    let mut ctx = ctx.clone();
    let mut cur = m;
    for &i in pos {
        match (cur, i) {
            (Term::Lam(x, Some(a), _), 0) => ctx = ctx.with_term(x, a.clone()),
            (Term::Mu(a, Some(t), _), 0) => ctx = ctx.with_mu(a, t.clone()),
            (Term::Lam(_, None, _) | Term::Mu(_, None, _), _) => return None,
            (Term::App(f, Elim::Case(x1, _, x2, _)), 1 | 2) => {
                let t = infer(&ctx, f, sys, eqs).ok()?;
                let t = match eqs {
                    Some(e) => e.whnf(&t).clone(),
                    None => t,
                };
                let Type::Or(a1, a2) = t else { return None };
                ctx = if i == 1 { ctx.with_term(x1, (*a1).clone()) } else { ctx.with_term(x2, (*a2).clone()) };
            }
            _ => {}
        }
        cur = *cur.children().get(i)?;
    }
    Some(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term_any;
    use crate::types::parse_type;

    fn t(s: &str) -> Term {
        parse_term_any(s).unwrap()
    }

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn ctx(s: &str) -> Context {
        Context::parse(s).unwrap()
    }

    #[test]
    fn axiom() {
        let d = check(&ctx("x : A"), &t("x"), &ty("A"), System::S, None).unwrap();
        assert_eq!(d.rule, Rule::Ax);
        assert!(d.premises.is_empty());
    }

    #[test]
    fn pair_intro() {
        let d = check(&ctx("x : A; y : B"), &t("<x, y>"), &ty("A /\\ B"), System::Sfull, None).unwrap();
        assert_eq!(d.rule, Rule::AndI);
        assert_eq!(d.premises.iter().map(|p| p.rule).collect::<Vec<_>>(), vec![Rule::Ax, Rule::Ax]);
    }

    #[test]
    fn mendler_term_types_with_equation() {
        let eqs = EquationSet::parse("X = A /\\ (X -> B)").unwrap();
        let m = "\\x:X. ((x p2) x)";
        let term = t(&format!("({m} <y, {m}>)"));
        let d = check(&ctx("y : A"), &term, &ty("B"), System::Sfull, Some(&eqs)).unwrap();
        assert!(d.count(Rule::Congr) > 0);
        assert!(check(&ctx("y : A"), &term, &ty("B"), System::Sfull, None).is_err());
    }

    #[test]
    fn inference() {
        assert_eq!(infer(&Context::new(), &t("\\x:A. x"), System::S, None).unwrap(), ty("A -> A"));
        let c = ctx("mu a : ~A; x : A");
        assert_eq!(infer(&c, &t("[a] x"), System::Smu, None).unwrap(), Type::Bot);
        let d = infer_derivation(&c, &t("[a] x"), System::Smu, None).unwrap();
        assert_eq!(d.rule, Rule::BotI);
        let peirce = t("\\x:(A -> B) -> A. mu a:~A. [a] (x \\y:A. mu d:~B. [a] y)");
        assert_eq!(infer(&Context::new(), &peirce, System::Smu, None).unwrap(), ty("((A -> B) -> A) -> A"));
    }

    #[test]
    fn constants() {
        let c = t("c[X]");
        assert_eq!(infer(&Context::new(), &c, System::Sc, None).unwrap(), ty("~~X -> X"));
        assert!(infer(&Context::new(), &c, System::S, None).is_err());
    }

    #[test]
    fn errors() {
        let e = Context::new();
        assert!(matches!(infer(&e, &t("x"), System::S, None), Err(TypeError::Unbound(_))));
        assert!(matches!(infer(&e, &t("\\x. x"), System::S, None), Err(TypeError::MissingAnnotation(_))));
        assert!(matches!(infer(&ctx("x : A"), &t("w1 x"), System::Sfull, None), Err(TypeError::Ambiguous(_))));
        assert!(matches!(infer(&ctx("x : A"), &t("(x p1)"), System::Sfull, None), Err(TypeError::WrongShape { .. })));
        assert!(matches!(infer(&ctx("x : A"), &t("(x p1)"), System::Smu, None), Err(TypeError::Sort(_))));
        assert!(matches!(check(&ctx("x : A"), &t("x"), &ty("B"), System::S, None), Err(TypeError::Mismatch { .. })));
        assert!(matches!(infer(&ctx("x : A /\\ B"), &t("x"), System::S, None), Err(TypeError::Sort(_))));
    }

    #[test]
    fn checking_mode_needs_no_annotations() {
        let c = ctx("z : A \\/ B");
        let m = t("(z [x. w2 x | y. w1 y])");
        assert!(typecheck(&c, &m, &ty("B \\/ A"), System::Sfull, None).is_ok());
        assert!(typecheck(&Context::new(), &t("\\x. mu a. [a] x"), &ty("A -> A"), System::Smu, None).is_ok());
    }

    #[test]
    fn context_at_case_branch() {
        let c = ctx("z : A \\/ B");
        let m = t("(z [x. x | y. y])");
        let inner = context_at(&c, &m, &[2], System::Sfull, None).unwrap();
        assert_eq!(inner.term(&TermVar::new("y")), Some(&ty("B")));
    }
}
