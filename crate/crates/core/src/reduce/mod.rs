//! One-step reduction, traces and reduction graphs.

mod graph;
mod rules;
mod trace;

pub use graph::{
    closure, eta, graph_key, reach, reduction_graph, search, sn_verdict, Edge, ReductionGraph, SearchOutcome, SnVerdict,
    DEFAULT_FUEL,
};
pub use rules::{contract, redex_rule, redexes, reducts, rho_theta_audit, step, Rule, RuleSet, StepError, StepLabel};
pub use trace::{normalize, Trace, TraceStep};

use std::sync::Arc;

use crate::syntax::{Position, Term};
use crate::types::EquationSet;
use crate::typing::{context_at, infer, Context, System};

/// As [`step`], but after a μ step the new μ-binder is annotated with the
/// type of the redex, inferred in its context. This keeps Church terms
/// annotated where the annotation cannot be read off the old one, as for
/// an elimination by cases.
pub fn step_typed(
    ctx: &Context,
    m: &Term,
    pos: &Position,
    sys: System,
    eqs: Option<&EquationSet>,
) -> Result<(StepLabel, Term), StepError> {
    let (label, out) = step(m, pos)?;
    if !label.rule.is_mu() {
        return Ok((label, out));
    }
    let redex = m.subterm(pos).expect("step succeeded");
    let ty = context_at(ctx, m, &pos.0, sys, eqs).and_then(|c| infer(&c, redex, sys, eqs).ok());
    let Some(ty) = ty else { return Ok((label, out)) };
    let Some(Term::Mu(a, _, body)) = out.subterm(pos) else { unreachable!("μ steps yield a μ") };
    let fixed = Term::Mu(a.clone(), Some(ty), Arc::clone(body));
    Ok((label, out.replace_at(&pos.0, fixed).expect("position exists")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term_any;
    use crate::types::parse_type;
    use crate::typing::typecheck;

    #[test]
    fn mu_case_keeps_church_terms_typable() {
        let ctx = Context::parse("x : A \\/ B; f : A -> C; g : B -> C").unwrap();
        let m = parse_term_any("(mu a:~(A \\/ B). [a] x [y. (f y) | z. (g z)])").unwrap();
        let c = parse_type("C").unwrap();
        typecheck(&ctx, &m, &c, System::Sfull, None).unwrap();
        let (_, plain) = step(&m, &Position::root()).unwrap();
        assert!(!plain.is_church());
        let (label, typed) = step_typed(&ctx, &m, &Position::root(), System::Sfull, None).unwrap();
        assert_eq!(label.rule, Rule::MuCase);
        assert!(typed.is_church());
        typecheck(&ctx, &typed, &c, System::Sfull, None).unwrap();
        assert_eq!(infer(&ctx, &typed, System::Sfull, None).unwrap(), c);
    }
}
