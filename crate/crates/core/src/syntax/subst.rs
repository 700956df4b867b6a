//! Capture-avoiding substitutions.
//!
//! Bound variables are renamed only when a capture would actually happen.
//! Fresh names are derived deterministically from the old name (strip the
//! numeric suffix, append the smallest unused counter), so every operation
//! here is a pure function of its inputs.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::lex::is_reserved_word;
use super::term::{Elim, MuVar, Term, TermVar};

/// Smallest `stem<k>` (k >= 1) that is not rejected by `taken` and is not a
/// reserved word. The stem is `base` with trailing digits and primes removed.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    let stem = if stem.is_empty() { "v" } else { stem };
    (1usize..)
        .map(|k| format!("{stem}{k}"))
        .find(|cand| !taken(cand) && !is_reserved_word(cand))
        .expect("infinitely many candidates")
}

fn fresh_term_var(base: &TermVar, avoid: &BTreeSet<TermVar>) -> TermVar {
    TermVar::new(&fresh_name(base.as_str(), |c| avoid.contains(&TermVar::new(c))))
}

fn fresh_mu_var(base: &MuVar, avoid: &BTreeSet<MuVar>) -> MuVar {
    MuVar::new(&fresh_name(base.as_str(), |c| avoid.contains(&MuVar::new(c))))
}

/// Rename the λ-binder `y` over `body` to something outside `avoid` (and
/// outside the body's own free variables).
fn rename_term_binder(y: &TermVar, body: &Term, avoid: &BTreeSet<TermVar>) -> (TermVar, Term) {
    let mut all = avoid.clone();
    all.extend(body.free_term_vars());
    let y2 = fresh_term_var(y, &all);
    let body2 = subst(body, y, &Term::Var(y2.clone()));
    (y2, body2)
}

fn rename_mu_binder(a: &MuVar, body: &Term, avoid: &BTreeSet<MuVar>) -> (MuVar, Term) {
    let mut all = avoid.clone();
    all.extend(body.free_mu_vars());
    let a2 = fresh_mu_var(a, &all);
    let body2 = mu_rename(body, a, &a2);
    (a2, body2)
}

/// `m[x := n]`.
pub fn subst(m: &Term, x: &TermVar, n: &Term) -> Term {
    if !m.has_free_term_var(x) {
        return m.clone();
    }
    let (fv_t, fv_m) = n.free_vars();
    Subst { x, n, fv_t: &fv_t, fv_m: &fv_m }.term(m)
}

struct Subst<'a> {
    x: &'a TermVar,
    n: &'a Term,
    fv_t: &'a BTreeSet<TermVar>,
    fv_m: &'a BTreeSet<MuVar>,
}

impl Subst<'_> {
    fn arc(&self, t: &Arc<Term>) -> Arc<Term> {
        if t.has_free_term_var(self.x) {
            Arc::new(self.term(t))
        } else {
            t.clone()
        }
    }

    /// Binder `y` over `body`; returns the possibly renamed binder and the
    /// substituted body.
    fn under_binder(&self, y: &TermVar, body: &Arc<Term>) -> (TermVar, Arc<Term>) {
        if y == self.x || !body.has_free_term_var(self.x) {
            return (y.clone(), body.clone());
        }
        if self.fv_t.contains(y) {
            let mut avoid = self.fv_t.clone();
            avoid.insert(self.x.clone());
            let (y2, b2) = rename_term_binder(y, body, &avoid);
            (y2, Arc::new(self.term(&b2)))
        } else {
            (y.clone(), Arc::new(self.term(body)))
        }
    }

    fn term(&self, m: &Term) -> Term {
        match m {
            Term::Var(y) => {
                if y == self.x {
                    self.n.clone()
                } else {
                    m.clone()
                }
            }
            Term::Const(_) => m.clone(),
            Term::Lam(y, ann, b) => {
                let (y, b) = self.under_binder(y, b);
                Term::Lam(y, ann.clone(), b)
            }
            Term::App(f, e) => Term::App(self.arc(f), self.elim(e)),
            Term::Pair(l, r) => Term::Pair(self.arc(l), self.arc(r)),
            Term::Inj(i, ann, b) => Term::Inj(*i, ann.clone(), self.arc(b)),
            Term::Mu(a, ann, b) => {
                if self.fv_m.contains(a) && b.has_free_term_var(self.x) {
                    let (a2, b2) = rename_mu_binder(a, b, self.fv_m);
                    Term::Mu(a2, ann.clone(), Arc::new(self.term(&b2)))
                } else {
                    Term::Mu(a.clone(), ann.clone(), self.arc(b))
                }
            }
            Term::Name(a, b) => Term::Name(a.clone(), self.arc(b)),
        }
    }

    fn elim(&self, e: &Elim) -> Elim {
        match e {
            Elim::Arg(t) => Elim::Arg(self.arc(t)),
            Elim::Proj(i) => Elim::Proj(*i),
            Elim::Case(x1, n1, x2, n2) => {
                let (x1, n1) = self.under_binder(x1, n1);
                let (x2, n2) = self.under_binder(x2, n2);
                Elim::Case(x1, n1, x2, n2)
            }
        }
    }
}

/// `m[a := b]`: rename free occurrences of the μ-variable `a`.
pub fn mu_rename(m: &Term, a: &MuVar, b: &MuVar) -> Term {
    if a == b || !m.has_free_mu_var(a) {
        return m.clone();
    }
    match m {
        Term::Var(_) | Term::Const(_) => m.clone(),
        Term::Lam(x, ann, body) => Term::Lam(x.clone(), ann.clone(), Arc::new(mu_rename(body, a, b))),
        Term::App(f, e) => Term::App(Arc::new(mu_rename(f, a, b)), e.map_terms(|t| mu_rename(t, a, b))),
        Term::Pair(l, r) => Term::Pair(Arc::new(mu_rename(l, a, b)), Arc::new(mu_rename(r, a, b))),
        Term::Inj(i, ann, body) => Term::Inj(*i, ann.clone(), Arc::new(mu_rename(body, a, b))),
        Term::Mu(c, ann, body) => {
            if c == a {
                m.clone()
            } else if c == b {
                let avoid = BTreeSet::from([a.clone(), b.clone()]);
                let (c2, body2) = rename_mu_binder(c, body, &avoid);
                Term::Mu(c2, ann.clone(), Arc::new(mu_rename(&body2, a, b)))
            } else {
                Term::Mu(c.clone(), ann.clone(), Arc::new(mu_rename(body, a, b)))
            }
        }
        Term::Name(c, body) => {
            let c = if c == a { b.clone() } else { c.clone() };
            Term::Name(c, Arc::new(mu_rename(body, a, b)))
        }
    }
}

/// `m[(a L) := (a (L e))]`, applied innermost first: the named subterm is
/// rewritten before the elimination is attached.
pub fn struct_subst(m: &Term, a: &MuVar, e: &Elim) -> Term {
    if !m.has_free_mu_var(a) {
        return m.clone();
    }
    let (fv_t, fv_m) = e.free_vars();
    StructSubst { a, e, fv_t: &fv_t, fv_m: &fv_m }.term(m)
}

struct StructSubst<'a> {
    a: &'a MuVar,
    e: &'a Elim,
    fv_t: &'a BTreeSet<TermVar>,
    fv_m: &'a BTreeSet<MuVar>,
}

impl StructSubst<'_> {
    fn arc(&self, t: &Arc<Term>) -> Arc<Term> {
        if t.has_free_mu_var(self.a) {
            Arc::new(self.term(t))
        } else {
            t.clone()
        }
    }

    fn under_binder(&self, y: &TermVar, body: &Arc<Term>) -> (TermVar, Arc<Term>) {
        if !body.has_free_mu_var(self.a) {
            return (y.clone(), body.clone());
        }
        if self.fv_t.contains(y) {
            let (y2, b2) = rename_term_binder(y, body, self.fv_t);
            (y2, Arc::new(self.term(&b2)))
        } else {
            (y.clone(), Arc::new(self.term(body)))
        }
    }

    fn term(&self, m: &Term) -> Term {
        match m {
            Term::Var(_) | Term::Const(_) => m.clone(),
            Term::Lam(y, ann, b) => {
                let (y, b) = self.under_binder(y, b);
                Term::Lam(y, ann.clone(), b)
            }
            Term::App(f, e) => {
                let e = match e {
                    Elim::Arg(t) => Elim::Arg(self.arc(t)),
                    Elim::Proj(i) => Elim::Proj(*i),
                    Elim::Case(x1, n1, x2, n2) => {
                        let (x1, n1) = self.under_binder(x1, n1);
                        let (x2, n2) = self.under_binder(x2, n2);
                        Elim::Case(x1, n1, x2, n2)
                    }
                };
                Term::App(self.arc(f), e)
            }
            Term::Pair(l, r) => Term::Pair(self.arc(l), self.arc(r)),
            Term::Inj(i, ann, b) => Term::Inj(*i, ann.clone(), self.arc(b)),
            Term::Mu(c, ann, b) => {
                if c == self.a {
                    m.clone()
                } else if self.fv_m.contains(c) && b.has_free_mu_var(self.a) {
                    let mut avoid = self.fv_m.clone();
                    avoid.insert(self.a.clone());
                    let (c2, b2) = rename_mu_binder(c, b, &avoid);
                    Term::Mu(c2, ann.clone(), Arc::new(self.term(&b2)))
                } else {
                    Term::Mu(c.clone(), ann.clone(), self.arc(b))
                }
            }
            Term::Name(c, b) => {
                let inner = self.arc(b);
                if c == self.a {
                    Term::Name(c.clone(), Arc::new(Term::App(inner, self.e.clone())))
                } else {
                    Term::Name(c.clone(), inner)
                }
            }
        }
    }
}

/// Literal replacement of the free variable `hole` by `filler`, with no
/// renaming: binders of `ctx` are allowed to capture free variables of the
/// filler. Used to plug a term into a one-hole context.
pub fn plug(ctx: &Term, hole: &TermVar, filler: &Term) -> Term {
    if !ctx.has_free_term_var(hole) {
        return ctx.clone();
    }
    let go = |t: &Arc<Term>| Arc::new(plug(t, hole, filler));
    match ctx {
        Term::Var(y) => {
            if y == hole {
                filler.clone()
            } else {
                ctx.clone()
            }
        }
        Term::Const(_) => ctx.clone(),
        Term::Lam(y, ann, b) => Term::Lam(y.clone(), ann.clone(), go(b)),
        Term::App(f, e) => Term::App(go(f), e.map_terms(|t| plug(t, hole, filler))),
        Term::Pair(l, r) => Term::Pair(go(l), go(r)),
        Term::Inj(i, ann, b) => Term::Inj(*i, ann.clone(), go(b)),
        Term::Mu(a, ann, b) => Term::Mu(a.clone(), ann.clone(), go(b)),
        Term::Name(a, b) => Term::Name(a.clone(), go(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_term_any};

    fn t(s: &str) -> Term {
        parse_term_any(s).unwrap()
    }

    fn x(s: &str) -> TermVar {
        TermVar::new(s)
    }

    fn a(s: &str) -> MuVar {
        MuVar::new(s)
    }

    #[test]
    fn subst_examples() {
        assert!(alpha_eq(&subst(&t("x"), &x("x"), &t("\\y. y")), &t("\\y. y")));
        let r = subst(&t("\\y. (x y)"), &x("x"), &t("y"));
        assert!(alpha_eq(&r, &t("\\y1. (y y1)")));
        assert_eq!(r.to_string(), "\\y1. (y y1)");
        let r = subst(&t("(x x)"), &x("x"), &t("\\y. y"));
        assert!(alpha_eq(&r, &t("(\\y. y \\y. y)")));
    }

    #[test]
    fn subst_avoids_mu_capture() {
        // the free name b of the substituted term must stay free
        let r = subst(&t("mu b. [b] x"), &x("x"), &t("mu c. [b] z"));
        assert!(alpha_eq(&r, &t("mu d. [d] mu c. [b] z")));
    }

    #[test]
    fn subst_under_case_binders() {
        let r = subst(&t("(w [y. (y x) | z. x])"), &x("x"), &t("y"));
        assert!(alpha_eq(&r, &t("(w [q. (q y) | z. y])")));
        // bound by the branch: untouched
        let r = subst(&t("(w [x. x | z. z])"), &x("x"), &t("y"));
        assert_eq!(r, t("(w [x. x | z. z])"));
    }

    #[test]
    fn mu_rename_examples() {
        assert_eq!(mu_rename(&t("[a] x"), &a("a"), &a("b")), t("[b] x"));
        assert_eq!(mu_rename(&t("mu a. [a] x"), &a("a"), &a("b")), t("mu a. [a] x"));
        assert_eq!(mu_rename(&t("[a] [a] x"), &a("a"), &a("b")), t("[b] [b] x"));
        // capture by an inner binder named b
        let r = mu_rename(&t("mu b. [a] [b] x"), &a("a"), &a("b"));
        assert!(alpha_eq(&r, &t("mu c. [b] [c] x")));
    }

    #[test]
    fn struct_subst_examples() {
        let z = Elim::Arg(Arc::new(t("z")));
        assert_eq!(struct_subst(&t("[a] (x y)"), &a("a"), &z), t("[a] (x y z)"));
        assert_eq!(struct_subst(&t("[b] x"), &a("a"), &z), t("[b] x"));
        assert_eq!(struct_subst(&t("[a] [a] x"), &a("a"), &z), t("[a] ([a] (x z) z)"));
    }

    #[test]
    fn struct_subst_respects_binders() {
        let z = Elim::Arg(Arc::new(t("y")));
        // a λ-binder that would capture the argument's free y gets renamed
        let r = struct_subst(&t("\\y. [a] y"), &a("a"), &z);
        assert!(alpha_eq(&r, &t("\\q. [a] (q y)")));
        // shadowed μ-binder
        assert_eq!(struct_subst(&t("mu a. [a] x"), &a("a"), &z), t("mu a. [a] x"));
    }

    #[test]
    fn fresh_names_skip_keywords() {
        assert_eq!(fresh_name("p", |_| false), "p3");
        assert_eq!(fresh_name("w", |_| false), "w3");
        assert_eq!(fresh_name("y7", |c| c == "y1"), "y2");
        assert_eq!(fresh_name("123", |_| false), "v1");
    }

    #[test]
    fn plug_captures() {
        let ctx = t("\\y. (h y)");
        assert_eq!(plug(&ctx, &x("h"), &t("(y y)")), t("\\y. ((y y) y)"));
    }
}
