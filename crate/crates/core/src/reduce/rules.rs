use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::syntax::{fresh_name, mu_rename, struct_subst, subst, Elim, MuVar, Position, Side, Term, TermVar};
use crate::types::Type;

/// The reduction rules. `Mu*` push an elimination under a μ-abstraction,
/// `Perm*` push it into the branches of a case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Beta,
    MuArg,
    MuProj,
    MuCase,
    PairProj,
    CaseInj,
    PermArg,
    PermProj,
    PermCase,
    Rho,
    Theta,
}

impl Rule {
    pub const ALL: [Rule; 11] = [
        Rule::Beta,
        Rule::MuArg,
        Rule::MuProj,
        Rule::MuCase,
        Rule::PairProj,
        Rule::CaseInj,
        Rule::PermArg,
        Rule::PermProj,
        Rule::PermCase,
        Rule::Rho,
        Rule::Theta,
    ];

    pub fn is_mu(self) -> bool {
        matches!(self, Rule::MuArg | Rule::MuProj | Rule::MuCase)
    }

    /// Counted by `lg_bm`.
    pub fn is_beta_mu(self) -> bool {
        self == Rule::Beta || self.is_mu()
    }

    pub fn is_rho_theta(self) -> bool {
        matches!(self, Rule::Rho | Rule::Theta)
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::Beta => "beta",
            Rule::MuArg => "mu-arg",
            Rule::MuProj => "mu-proj",
            Rule::MuCase => "mu-case",
            Rule::PairProj => "pair-proj",
            Rule::CaseInj => "case-inj",
            Rule::PermArg => "perm-arg",
            Rule::PermProj => "perm-proj",
            Rule::PermCase => "perm-case",
            Rule::Rho => "rho",
            Rule::Theta => "theta",
        }
    }

    fn bit(self) -> u16 {
        1 << (self as u16)
    }
}

/// A rule together with the μ0 flag: set on μ steps whose bound name
/// occurs at most once in the body.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepLabel {
    pub rule: Rule,
    pub mu_zero: bool,
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.rule.name())?;
        if self.mu_zero {
            f.write_str("+mu0")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for StepLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, mu_zero) = match s.strip_suffix("+mu0") {
            Some(n) => (n, true),
            None => (s, false),
        };
        let rule = Rule::ALL.into_iter().find(|r| r.name() == name).ok_or_else(|| format!("unknown step label {s:?}"))?;
        Ok(StepLabel { rule, mu_zero })
    }
}

/// A set of enabled rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RuleSet(u16);

impl RuleSet {
    pub const BETA: RuleSet = RuleSet(1 << Rule::Beta as u16);
    pub const BETAMU: RuleSet =
        RuleSet(Self::BETA.0 | 1 << Rule::MuArg as u16 | 1 << Rule::MuProj as u16 | 1 << Rule::MuCase as u16);
    pub const RHO: RuleSet = RuleSet(1 << Rule::Rho as u16);
    pub const RHO_THETA: RuleSet = RuleSet(Self::RHO.0 | 1 << Rule::Theta as u16);
    pub const BETAMU_RT: RuleSet = RuleSet(Self::BETAMU.0 | Self::RHO_THETA.0);
    pub const FULL: RuleSet = RuleSet(
        Self::BETAMU.0
            | 1 << Rule::PairProj as u16
            | 1 << Rule::CaseInj as u16
            | 1 << Rule::PermArg as u16
            | 1 << Rule::PermProj as u16
            | 1 << Rule::PermCase as u16,
    );
    pub const FULL_RT: RuleSet = RuleSet(Self::FULL.0 | Self::RHO_THETA.0);

    pub fn of(rules: &[Rule]) -> RuleSet {
        RuleSet(rules.iter().fold(0, |acc, r| acc | r.bit()))
    }

    pub fn contains(self, r: Rule) -> bool {
        self.0 & r.bit() != 0
    }

    pub fn union(self, other: RuleSet) -> RuleSet {
        RuleSet(self.0 | other.0)
    }

    pub fn preset_name(self) -> Option<&'static str> {
        [
            (RuleSet::BETA, "beta"),
            (RuleSet::BETAMU, "betamu"),
            (RuleSet::BETAMU_RT, "betamu-rt"),
            (RuleSet::FULL, "full"),
            (RuleSet::FULL_RT, "full-rt"),
            (RuleSet::RHO, "rho"),
            (RuleSet::RHO_THETA, "rho-theta"),
        ]
        .into_iter()
        .find(|(p, _)| *p == self)
        .map(|(_, n)| n)
    }

    pub fn from_preset(name: &str) -> Option<RuleSet> {
        Some(match name {
            "beta" => RuleSet::BETA,
            "betamu" => RuleSet::BETAMU,
            "betamu-rt" => RuleSet::BETAMU_RT,
            "full" => RuleSet::FULL,
            "full-rt" => RuleSet::FULL_RT,
            "rho" => RuleSet::RHO,
            "rho-theta" => RuleSet::RHO_THETA,
            _ => return None,
        })
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.preset_name() {
            return f.write_str(n);
        }
        let names: Vec<_> = Rule::ALL.into_iter().filter(|r| self.contains(*r)).map(Rule::name).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// The rule that applies at the root of `m`, if any (at most one does).
pub fn redex_rule(m: &Term) -> Option<Rule> {
    match m {
        Term::App(f, e) => match (&**f, e) {
            (Term::Lam(..), Elim::Arg(_)) => Some(Rule::Beta),
            (Term::Mu(..), Elim::Arg(_)) => Some(Rule::MuArg),
            (Term::Mu(..), Elim::Proj(_)) => Some(Rule::MuProj),
            (Term::Mu(..), Elim::Case(..)) => Some(Rule::MuCase),
            (Term::Pair(..), Elim::Proj(_)) => Some(Rule::PairProj),
            (Term::Inj(..), Elim::Case(..)) => Some(Rule::CaseInj),
            (Term::App(_, Elim::Case(..)), Elim::Arg(_)) => Some(Rule::PermArg),
            (Term::App(_, Elim::Case(..)), Elim::Proj(_)) => Some(Rule::PermProj),
            (Term::App(_, Elim::Case(..)), Elim::Case(..)) => Some(Rule::PermCase),
            _ => None,
        },
        Term::Name(_, body) if matches!(&**body, Term::Mu(..)) => Some(Rule::Rho),
        Term::Mu(a, _, body) => match &**body {
            Term::Name(b, inner) if a == b && !inner.has_free_mu_var(a) => Some(Rule::Theta),
            _ => None,
        },
        _ => None,
    }
}

fn label_of(m: &Term, rule: Rule) -> StepLabel {
    let mu_zero = rule.is_mu()
        && match m {
            Term::App(f, _) => match &**f {
                Term::Mu(a, _, body) => body.count_free_mu(a) <= 1,
                _ => false,
            },
            _ => false,
        };
    StepLabel { rule, mu_zero }
}

static RT_CHECKED: AtomicU64 = AtomicU64::new(0);
static RT_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// Number of ρ/θ steps performed so far in this process, and how many of
/// them failed to decrease the size.
pub fn rho_theta_audit() -> (u64, u64) {
    (RT_CHECKED.load(Ordering::Relaxed), RT_VIOLATIONS.load(Ordering::Relaxed))
}

fn audit(before: &Term, after: &Term) {
    RT_CHECKED.fetch_add(1, Ordering::Relaxed);
    if after.size() >= before.size() {
        RT_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
        debug_assert!(false, "rho/theta step did not shrink {before} to {after}");
    }
}

/// Type of a μ-binder after an elimination has been pushed under it, when it
/// can be read off the old annotation.
fn mu_ann_after(ann: &Option<Type>, e: &Elim) -> Option<Type> {
    match (ann.as_ref()?, e) {
        (Type::Arrow(_, b), Elim::Arg(_)) => Some((**b).clone()),
        (Type::And(a1, a2), Elim::Proj(i)) => Some((**i.pick(a1, a2)).clone()),
        _ => None,
    }
}

fn elim_free_names(e: &Elim) -> (std::collections::BTreeSet<TermVar>, std::collections::BTreeSet<MuVar>) {
    e.free_vars()
}

/// Contract the redex at the root of `m`.
pub fn contract(m: &Term) -> Option<(StepLabel, Term)> {
    let rule = redex_rule(m)?;
    let label = label_of(m, rule);
    let out = match m {
        Term::App(f, e) => match (&**f, e, rule) {
            (Term::Lam(x, _, body), Elim::Arg(n), Rule::Beta) => subst(body, x, n),
            (Term::Mu(a, ann, body), e, _) if rule.is_mu() => {
                let (_, fmv) = elim_free_names(e);
                let (a, body) = if fmv.contains(a) {
                    let mut taken = fmv.clone();
                    taken.extend(body.free_mu_vars());
                    let a2 = MuVar::new(&fresh_name(a.as_str(), |c| taken.contains(&MuVar::new(c))));
                    let body = mu_rename(body, a, &a2);
                    (a2, body)
                } else {
                    (a.clone(), (**body).clone())
                };
                let body = struct_subst(&body, &a, e);
                Term::Mu(a, mu_ann_after(ann, e), Arc::new(body))
            }
            (Term::Pair(l, r), Elim::Proj(i), Rule::PairProj) => (**i.pick(l, r)).clone(),
            (Term::Inj(i, _, inner), Elim::Case(x1, n1, x2, n2), Rule::CaseInj) => match i {
                Side::Left => subst(n1, x1, inner),
                Side::Right => subst(n2, x2, inner),
            },
            (Term::App(scrut, Elim::Case(x1, n1, x2, n2)), e, _) => {
                let (fv, _) = elim_free_names(e);
                let push = |x: &TermVar, n: &Arc<Term>| -> (TermVar, Term) {
                    let (x, n) = if fv.contains(x) {
                        let mut taken = fv.clone();
                        taken.extend(n.free_term_vars());
                        let x2 = TermVar::new(&fresh_name(x.as_str(), |c| taken.contains(&TermVar::new(c))));
                        let n = subst(n, x, &Term::Var(x2.clone()));
                        (x2, n)
                    } else {
                        (x.clone(), (**n).clone())
                    };
                    (x, Term::App(Arc::new(n), e.clone()))
                };
                let (y1, m1) = push(x1, n1);
                let (y2, m2) = push(x2, n2);
                Term::App(scrut.clone(), Elim::Case(y1, Arc::new(m1), y2, Arc::new(m2)))
            }
            _ => unreachable!("redex_rule and contract disagree on {m}"),
        },
        Term::Name(b, body) => match &**body {
            Term::Mu(a, _, inner) => mu_rename(inner, a, b),
            _ => unreachable!(),
        },
        Term::Mu(_, _, body) => match &**body {
            Term::Name(_, inner) => (**inner).clone(),
            _ => unreachable!(),
        },
        _ => unreachable!(),
    };
    if rule.is_rho_theta() {
        audit(m, &out);
    }
    Some((label, out))
}

/// Every redex enabled in `rs`, outermost first, then left to right.
pub fn redexes(m: &Term, rs: RuleSet) -> Vec<(Position, StepLabel)> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect_redexes(m, rs, &mut path, &mut out);
    out
}

fn collect_redexes(m: &Term, rs: RuleSet, path: &mut Vec<usize>, out: &mut Vec<(Position, StepLabel)>) {
    if let Some(r) = redex_rule(m) {
        if rs.contains(r) {
            out.push((Position(path.clone()), label_of(m, r)));
        }
    }
    for (i, c) in m.children().into_iter().enumerate() {
        path.push(i);
        collect_redexes(c, rs, path, out);
        path.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("position {0} does not exist")]
    BadPosition(Position),
    #[error("no redex at position {0}")]
    NoRedex(Position),
}

/// Contract the redex at `pos`.
pub fn step(m: &Term, pos: &Position) -> Result<(StepLabel, Term), StepError> {
    let sub = m.subterm(pos).ok_or_else(|| StepError::BadPosition(pos.clone()))?;
    let (label, new) = contract(sub).ok_or_else(|| StepError::NoRedex(pos.clone()))?;
    let out = m.replace_at(&pos.0, new).expect("position was resolved above");
    Ok((label, out))
}

/// All one-step reducts, in the order of [`redexes`].
pub fn reducts(m: &Term, rs: RuleSet) -> Vec<(Position, StepLabel, Term)> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect_reducts(m, rs, &mut path, &mut |p, l, t| out.push((p, l, t)));
    out
}

// Reducts of `m` are reported through `emit` already rebuilt into the
// full term by the callers on the way up.
fn collect_reducts(m: &Term, rs: RuleSet, path: &mut Vec<usize>, emit: &mut dyn FnMut(Position, StepLabel, Term)) {
    if let Some(r) = redex_rule(m) {
        if rs.contains(r) {
            let (label, t) = contract(m).expect("redex_rule matched");
            emit(Position(path.clone()), label, t);
        }
    }
    let rebuild = |i: usize, new: Term| -> Term { m.replace_at(&[i], new).expect("child index is valid") };
    for (i, c) in m.children().into_iter().enumerate() {
        path.push(i);
        collect_reducts(c, rs, path, &mut |p, l, t| emit(p, l, rebuild(i, t)));
        path.pop();
    }
}
