//! Canonical representatives of α-equivalence classes.
//!
//! Bound variables are renamed to `#0`, `#1`, ... in pre-order of their
//! binders. `#` is not an identifier character, so the canonical names can
//! never clash with a free variable.

use std::sync::Arc;

use super::term::{Elim, MuVar, Term, TermVar};

struct Canon {
    next: usize,
    terms: Vec<(TermVar, TermVar)>,
    mus: Vec<(MuVar, MuVar)>,
    erase: bool,
}

impl Canon {
    fn fresh(&mut self) -> String {
        let s = format!("#{}", self.next);
        self.next += 1;
        s
    }

    fn term_var(&self, x: &TermVar) -> TermVar {
        self.terms.iter().rev().find(|(old, _)| old == x).map_or_else(|| x.clone(), |(_, new)| new.clone())
    }

    fn mu_var(&self, a: &MuVar) -> MuVar {
        self.mus.iter().rev().find(|(old, _)| old == a).map_or_else(|| a.clone(), |(_, new)| new.clone())
    }

    fn bind_term(&mut self, x: &TermVar, body: &Term) -> (TermVar, Term) {
        let new = TermVar::new(&self.fresh());
        self.terms.push((x.clone(), new.clone()));
        let b = self.term(body);
        self.terms.pop();
        (new, b)
    }

    fn term(&mut self, t: &Term) -> Term {
        let keep = |ann: &Option<crate::types::Type>, erase: bool| if erase { None } else { ann.clone() };
        match t {
            Term::Var(x) => Term::Var(self.term_var(x)),
            Term::Const(_) => t.clone(),
            Term::Lam(x, ann, b) => {
                let (x, b) = self.bind_term(x, b);
                Term::Lam(x, keep(ann, self.erase), Arc::new(b))
            }
            Term::App(f, e) => {
                let f = self.term(f);
                let e = match e {
                    Elim::Arg(a) => Elim::Arg(Arc::new(self.term(a))),
                    Elim::Proj(i) => Elim::Proj(*i),
                    Elim::Case(x1, n1, x2, n2) => {
                        let (x1, n1) = self.bind_term(x1, n1);
                        let (x2, n2) = self.bind_term(x2, n2);
                        Elim::Case(x1, Arc::new(n1), x2, Arc::new(n2))
                    }
                };
                Term::App(Arc::new(f), e)
            }
            Term::Pair(l, r) => Term::Pair(Arc::new(self.term(l)), Arc::new(self.term(r))),
            Term::Inj(i, ann, b) => Term::Inj(*i, keep(ann, self.erase), Arc::new(self.term(b))),
            Term::Mu(a, ann, b) => {
                let new = MuVar::new(&self.fresh());
                self.mus.push((a.clone(), new.clone()));
                let b = self.term(b);
                self.mus.pop();
                Term::Mu(new, keep(ann, self.erase), Arc::new(b))
            }
            Term::Name(a, b) => Term::Name(self.mu_var(a), Arc::new(self.term(b))),
        }
    }
}

/// The canonical member of the α-class of `t`; annotations are kept.
pub fn canonical(t: &Term) -> Term {
    Canon { next: 0, terms: Vec::new(), mus: Vec::new(), erase: false }.term(t)
}

/// As [`canonical`], with every type annotation removed.
pub fn canonical_erased(t: &Term) -> Term {
    Canon { next: 0, terms: Vec::new(), mus: Vec::new(), erase: true }.term(t)
}

/// Equality up to renaming of bound λ- and μ-variables.
pub fn alpha_eq(m: &Term, n: &Term) -> bool {
    m == n || canonical(m) == canonical(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term_any;

    fn t(s: &str) -> Term {
        parse_term_any(s).unwrap()
    }

    #[test]
    fn alpha_examples() {
        assert!(alpha_eq(&t("\\x. x"), &t("\\y. y")));
        assert!(alpha_eq(&t("mu a. [a] x"), &t("mu b. [b] x")));
        assert!(!alpha_eq(&t("\\x. \\y. x"), &t("\\x. \\y. y")));
    }

    #[test]
    fn free_variables_are_significant() {
        assert!(!alpha_eq(&t("\\x. y"), &t("\\x. z")));
        assert!(!alpha_eq(&t("mu a. [b] x"), &t("mu a. [a] x")));
        assert!(alpha_eq(&t("(u [x. x | y. v])"), &t("(u [p. p | q. v])")));
        assert!(!alpha_eq(&t("(u [x. x | y. y])"), &t("(u [p. p | q. p])")));
    }

    #[test]
    fn namespaces_do_not_mix() {
        // the λ-binder x does not bind the μ-name x
        assert!(!alpha_eq(&t("\\x. [x] x"), &t("\\y. [y] y")));
        assert!(alpha_eq(&t("\\x. [x] x"), &t("\\y. [x] y")));
    }

    #[test]
    fn annotations_matter_unless_erased() {
        let a = t("\\x:A. x");
        let b = t("\\y:B. y");
        assert!(!alpha_eq(&a, &b));
        assert_eq!(canonical_erased(&a), canonical_erased(&b));
    }
}
