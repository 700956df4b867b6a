use std::collections::HashSet;

use rayon::prelude::*;

use super::report::{LemmaReport, Outcome};
use crate::reduce::{
    closure, graph_key, redexes, reduction_graph, reducts, search, sn_verdict, step_typed, ReductionGraph, RuleSet,
    SearchOutcome, SnVerdict, Trace,
};
use crate::syntax::{parse_term_any, subst, Sort, Term};
use crate::translate::{circle, circle_context, circle_typed, diamond, diamond_context, t_term, TranslationEnv};
use crate::types::{circle_equations, circle_type, is_good, EquationSet, Goodness, Type};
use crate::typing::{typecheck, Context, System};

/// Cap on exact closures under ρ and ρθ. They are finite because both
/// rules shrink terms; the cap only guards against pathological inputs.
pub const CLOSURE_CAP: usize = 1_000_000;

/// Run `f` over the items in parallel and merge the reports in order.
pub fn sweep<T: Sync>(lemma: &str, items: &[T], f: impl Fn(&T) -> LemmaReport + Sync + Send) -> LemmaReport {
    items.par_iter().map(f).reduce(|| LemmaReport::new(lemma), LemmaReport::merge)
}

pub fn single(lemma: &str, input: impl FnOnce() -> String, outcome: Outcome) -> LemmaReport {
    let mut r = LemmaReport::new(lemma);
    r.record(input, outcome);
    r
}

fn rho_closure(m: &Term) -> Result<ReductionGraph, Outcome> {
    closure(m, RuleSet::RHO, CLOSURE_CAP).ok_or(Outcome::Inconclusive)
}

fn rt_closure(m: &Term) -> Result<ReductionGraph, Outcome> {
    closure(m, RuleSet::RHO_THETA, CLOSURE_CAP).ok_or(Outcome::Inconclusive)
}

fn not_found(what: &str, o: SearchOutcome) -> Outcome {
    match o {
        SearchOutcome::Found(_) => unreachable!(),
        SearchOutcome::Exhausted => Outcome::Fail(format!("no {what}: every reduct was searched")),
        SearchOutcome::OutOfFuel => Outcome::Fail(format!("no {what} within fuel")),
    }
}

// ---- T_A and the typing of translations -------------------------------

/// `|- T_A : ~~A -> A` in the system with constants.
pub fn check_tran(a: &Type) -> Outcome {
    let t = match t_term(a) {
        Ok(t) => t,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let want = Type::arrow(Type::neg(Type::neg(a.clone())), a.clone());
    match typecheck(&Context::new(), &t, &want, System::Sc, None) {
        Ok(()) => Outcome::Pass,
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

/// `Γ⋄ |- M⋄ : A` for a λμ judgement, or `Γ∘ |- M∘ : A∘` for one of the
/// full calculus; under `eqs` (translated for `∘`) when given.
/// Whether `⋄` is out of reach and `∘` applies: the term uses pairs or
/// injections, or some type in sight mentions ∧ or ∨.
fn needs_circle(ctx: &Context, m: &Term, a: Option<&Type>, eqs: Option<&EquationSet>) -> bool {
    let mut simple = m.sort() != Some(Sort::Full);
    m.visit(&mut |t| match t {
        Term::Lam(_, Some(b), _) | Term::Mu(_, Some(b), _) => simple &= b.is_simple(),
        Term::Inj(..) => simple = false,
        _ => {}
    });
    simple &= ctx.terms().all(|(_, t)| t.is_simple()) && ctx.mus().all(|(_, t)| t.is_simple());
    simple &= a.is_none_or(Type::is_simple);
    simple &= eqs.is_none_or(|e| e.iter().all(|(_, t)| t.is_simple()));
    !simple
}

pub fn check_coding(ctx: &Context, m: &Term, a: &Type, eqs: Option<&EquationSet>) -> Outcome {
    let res = if needs_circle(ctx, m, Some(a), eqs) {
        let ceqs = eqs.map(circle_equations);
        circle_typed(ctx, m, eqs).map_err(|e| e.to_string()).and_then(|c| {
            let cctx = circle_context(ctx).map_err(|e| e.to_string())?;
            typecheck(&cctx, &c, &circle_type(a), System::Smu, ceqs.as_ref()).map_err(|e| format!("{c}: {e}"))
        })
    } else {
        let env = TranslationEnv::new(ctx, m);
        diamond(m, &env)
            .map_err(|e| e.to_string())
            .and_then(|d| typecheck(&diamond_context(ctx, &env), &d, a, System::Sc, eqs).map_err(|e| format!("{d}: {e}")))
    };
    match res {
        Ok(()) => Outcome::Pass,
        Err(e) => Outcome::Fail(e),
    }
}

// ---- simulation by ⋄ ---------------------------------------------------

/// `M⋄ ▷β+ N⋄` for a βμ step `M ▷ N` of Church terms.
pub fn diamond_step_witness(ctx: &Context, m: &Term, n: &Term, fuel: usize) -> Result<Trace, Outcome> {
    let env = TranslationEnv::for_terms(ctx, [m, n]);
    let dm = diamond(m, &env).map_err(|e| Outcome::Fail(e.to_string()))?;
    let dn = diamond(n, &env).map_err(|e| Outcome::Fail(e.to_string()))?;
    let target = graph_key(&dn);
    match search(&dm, RuleSet::BETA, fuel, 1, |t, bm| bm >= 1 && graph_key(t) == target) {
        SearchOutcome::Found(t) => Ok(t),
        o => Err(not_found("beta reduction of the image", o)),
    }
}

/// Every βμ step from `m` is simulated by at least one β step.
pub fn check_simulation_diamond(ctx: &Context, m: &Term, sys: System, eqs: Option<&EquationSet>, fuel: usize) -> LemmaReport {
    let mut r = LemmaReport::new("sim-diamond");
    for (pos, _) in redexes(m, RuleSet::BETAMU) {
        let (label, n) = step_typed(ctx, m, &pos, sys, eqs).expect("redex positions are valid");
        let outcome = match diamond_step_witness(ctx, m, &n, fuel) {
            Ok(_) => Outcome::Pass,
            Err(o) => o,
        };
        r.record(|| format!("{m} --{label}@{pos}--> {n}"), outcome);
    }
    r
}

/// Along a βμ trace of Church terms, the simulating β traces add up to at
/// least as many steps. Returns the two lengths.
pub fn diamond_trace_lengths(ctx: &Context, trace: &Trace, fuel: usize) -> Result<(usize, usize), Outcome> {
    let mut total = 0;
    let mut prev = &trace.start;
    for s in &trace.steps {
        total += diamond_step_witness(ctx, prev, &s.term, fuel)?.lg();
        prev = &s.term;
    }
    Ok((trace.lg(), total))
}

pub fn check_simulation_diamond_trace(ctx: &Context, trace: &Trace, fuel: usize) -> Outcome {
    match diamond_trace_lengths(ctx, trace, fuel) {
        Ok((src, img)) if img >= src => Outcome::Pass,
        Ok((src, img)) => Outcome::Fail(format!("image has {img} steps for {src} source steps")),
        Err(o) => o,
    }
}

// ---- simulation by ∘ ---------------------------------------------------

#[derive(Clone, Debug)]
pub struct CircleWitness {
    /// `M∘ ▷*βμρθ P`
    pub forward: Trace,
    /// `N∘ ▷*ρ P`
    pub rho: Trace,
}

/// A `P` with `M∘ ▷*βμρθ P`, `N∘ ▷*ρ P` and at least `min_bm` β/μ steps
/// on the first leg.
pub fn circle_witness(m: &Term, n: &Term, min_bm: usize, fuel: usize) -> Result<CircleWitness, Outcome> {
    let cm = circle(m);
    let cn = circle(n);
    let targets = rho_closure(&cn)?;
    match search(&cm, RuleSet::BETAMU_RT, fuel, min_bm, |t, bm| bm >= min_bm && targets.find(t).is_some()) {
        SearchOutcome::Found(forward) => {
            let i = targets.find(forward.end()).expect("accepted terms are in the closure");
            Ok(CircleWitness { forward, rho: targets.trace_to(i) })
        }
        o => Err(not_found("common reduct", o)),
    }
}

/// Every one-step reduct of `m` in the full calculus.
pub fn check_simulation_circle(m: &Term, fuel: usize) -> LemmaReport {
    let mut r = LemmaReport::new("sim-circle");
    for (pos, label, n) in reducts(m, RuleSet::FULL) {
        let outcome = match circle_witness(m, &n, 1, fuel) {
            Ok(_) => Outcome::Pass,
            Err(o) => o,
        };
        r.record(|| format!("{m} --{label}@{pos}--> {n}"), outcome);
    }
    r
}

/// The aggregate form: for `M ▷* N` of length k, a witness with at least k
/// β/μ steps.
pub fn check_simulation_aggregate(trace: &Trace, fuel: usize) -> Outcome {
    if trace.lg() == 0 {
        return Outcome::Skip;
    }
    match circle_witness(&trace.start, trace.end(), trace.lg(), fuel) {
        Ok(_) => Outcome::Pass,
        Err(o) => o,
    }
}

/// The nine redex families with variable leaves.
pub fn redex_families() -> Vec<(&'static str, Term)> {
    [
        ("beta", "(\\x. (x n) m)"),
        ("pair-proj", "(<m1, m2> p1)"),
        ("case-inj", "(w2 m [x1. n1 | x2. n2])"),
        ("perm-arg", "(m [x1. n1 | x2. n2] n)"),
        ("perm-proj", "(m [x1. n1 | x2. n2] p2)"),
        ("perm-case", "(m [x1. n1 | x2. n2] [y1. l1 | y2. l2])"),
        ("mu-arg", "(mu a. [a] (m mu b. [a] k) n)"),
        ("mu-proj", "(mu b. [b] m p1)"),
        ("mu-case", "(mu b. [b] m [x1. n1 | x2. n2])"),
    ]
    .into_iter()
    .map(|(name, src)| (name, parse_term_any(src).expect("family terms parse")))
    .collect()
}

/// The pair-projection case written out step by step:
/// `((<x, y> p1))∘ ▷β+ mu a. [phi] mu g. [a] x ▷ρ mu a. [a] x ▷θ x`.
pub fn pair_projection_trace() -> Result<Trace, String> {
    let m = parse_term_any("(<x, y> p1)").expect("parses");
    let stage1 = parse_term_any("mu a. [phi] mu g. [a] x").expect("parses");
    let stage2 = parse_term_any("mu a. [a] x").expect("parses");
    let mut trace = search(&circle(&m), RuleSet::BETA, 1000, 0, |t, _| graph_key(t) == graph_key(&stage1))
        .found()
        .ok_or("the beta steps do not reach mu a. [phi] mu g. [a] x")?;
    if trace.lg() == 0 {
        return Err("no beta step".into());
    }
    for (rule, want) in [(RuleSet::RHO, stage2), (RuleSet::RHO_THETA, parse_term_any("x").expect("parses"))] {
        let cur = trace.end().clone();
        let options = reducts(&cur, rule);
        let (pos, label, next) = options
            .into_iter()
            .find(|(_, _, t)| graph_key(t) == graph_key(&want))
            .ok_or_else(|| format!("no single step from {cur} to {want}"))?;
        trace.push(pos, label, next);
    }
    Ok(trace)
}

// ---- postponement of ρθ ------------------------------------------------

/// For a βμρθ trace with a β/μ step, `start ▷βμ+ P ▷ρθ* end`.
pub fn postponement_witness(trace: &Trace, fuel: usize) -> Result<(Trace, Trace), Outcome> {
    if trace.lg_bm() == 0 {
        return Err(Outcome::Skip);
    }
    let end = graph_key(trace.end());
    let mut memo_err = None;
    let found = search(&trace.start, RuleSet::BETAMU, fuel, 1, |p, bm| {
        if bm < 1 || memo_err.is_some() {
            return false;
        }
        match rt_closure(p) {
            Ok(g) => g.find_key(&end).is_some(),
            Err(o) => {
                memo_err = Some(o);
                false
            }
        }
    });
    if let Some(o) = memo_err {
        return Err(o);
    }
    match found {
        SearchOutcome::Found(first) => {
            let g = rt_closure(first.end())?;
            let i = g.find_key(&end).expect("accepted");
            Ok((first, g.trace_to(i)))
        }
        o => Err(not_found("reordering", o)),
    }
}

pub fn check_postponement(trace: &Trace, fuel: usize) -> Outcome {
    match postponement_witness(trace, fuel) {
        Ok(_) => Outcome::Pass,
        Err(o) => o,
    }
}

// ---- commutation -------------------------------------------------------

fn keys_of(ts: impl IntoIterator<Item = Term>) -> HashSet<Term> {
    ts.into_iter().map(|t| graph_key(&t)).collect()
}

fn one_step(m: &Term, rs: RuleSet) -> HashSet<Term> {
    keys_of(reducts(m, rs).into_iter().map(|(_, _, t)| t))
}

/// The one-step diagrams and their ρ* generalizations:
/// ρ against ρθ, ρ against βμ, ρ* against ρθ*, ρ* against βμ.
pub fn check_diag(m: &Term) -> LemmaReport {
    let mut r = LemmaReport::new("diag");
    let rho1: Vec<Term> = reducts(m, RuleSet::RHO).into_iter().map(|(_, _, t)| t).collect();
    let rt1: Vec<Term> = reducts(m, RuleSet::RHO_THETA).into_iter().map(|(_, _, t)| t).collect();
    let bm1: Vec<Term> = reducts(m, RuleSet::BETAMU).into_iter().map(|(_, _, t)| t).collect();

    for p in &rho1 {
        for q in &rt1 {
            let ok = graph_key(p) == graph_key(q) || !one_step(p, RuleSet::RHO_THETA).is_disjoint(&one_step(q, RuleSet::RHO));
            r.record(
                || format!("rho/rho-theta: {m}; P = {p}; Q = {q}"),
                if ok { Outcome::Pass } else { Outcome::Fail("no one-step join".into()) },
            );
        }
        for q in &bm1 {
            let outcome = match rho_closure(q) {
                Ok(g) => {
                    if one_step(p, RuleSet::BETAMU).iter().any(|k| g.find_key(k).is_some()) {
                        Outcome::Pass
                    } else {
                        Outcome::Fail("no join".into())
                    }
                }
                Err(o) => o,
            };
            r.record(|| format!("rho/betamu: {m}; P = {p}; Q = {q}"), outcome);
        }
    }

    let (Ok(rho_star), Ok(rt_star)) = (rho_closure(m), rt_closure(m)) else {
        r.record(|| m.to_string(), Outcome::Inconclusive);
        return r;
    };
    for p in &rho_star.nodes {
        let Ok(p_rt) = rt_closure(p) else {
            r.record(|| m.to_string(), Outcome::Inconclusive);
            continue;
        };
        for q in &rt_star.nodes {
            let outcome = match rho_closure(q) {
                Ok(g) if p_rt.keys().any(|k| g.find_key(k).is_some()) => Outcome::Pass,
                Ok(_) => Outcome::Fail("no join".into()),
                Err(o) => o,
            };
            r.record(|| format!("rho*/rho-theta*: {m}; P = {p}; Q = {q}"), outcome);
        }
        for q in &bm1 {
            let outcome = match rho_closure(q) {
                Ok(g) if one_step(p, RuleSet::BETAMU).iter().any(|k| g.find_key(k).is_some()) => Outcome::Pass,
                Ok(_) => Outcome::Fail("no join".into()),
                Err(o) => o,
            };
            r.record(|| format!("rho*/betamu: {m}; P = {p}; Q = {q}"), outcome);
        }
    }
    r
}

/// For `M ▷ρ* P` and `M ▷*βμρθ Q`, an `N` with `P ▷*βμρθ N`, `Q ▷ρ* N`
/// and as many β/μ steps from `P` as from `M` to `Q`. The `Q` are the
/// first `max_q` terms of a breadth-first walk from `M`, each reached by
/// its shortest trace.
pub fn diag_star_witness(p: &Term, q_trace: &Trace, fuel: usize) -> Result<Trace, Outcome> {
    let k = q_trace.lg_bm();
    let targets = rho_closure(q_trace.end())?;
    match search(p, RuleSet::BETAMU_RT, fuel, k + 1, |t, bm| bm == k && targets.find(t).is_some()) {
        SearchOutcome::Found(t) => Ok(t),
        o => Err(not_found("join with matching count", o)),
    }
}

pub fn check_diag_star(m: &Term, max_q: usize, fuel: usize) -> LemmaReport {
    let mut r = LemmaReport::new("diag-star");
    let Ok(ps) = rho_closure(m) else {
        r.record(|| m.to_string(), Outcome::Inconclusive);
        return r;
    };
    let g = reduction_graph(m, RuleSet::BETAMU_RT, max_q);
    for qi in 0..g.len().min(max_q) {
        let q_trace = g.trace_to(qi);
        for p in &ps.nodes {
            let outcome = match diag_star_witness(p, &q_trace, fuel) {
                Ok(_) => Outcome::Pass,
                Err(o) => o,
            };
            r.record(|| format!("{m}; P = {p}; Q = {}", q_trace.end()), outcome);
        }
    }
    r
}

// ---- SN transfer -------------------------------------------------------

fn implication(premise: &SnVerdict, conclusion: &SnVerdict) -> Outcome {
    match (premise, conclusion) {
        (SnVerdict::Sn(_), SnVerdict::Sn(_)) => Outcome::Pass,
        (SnVerdict::Loop(_), _) => Outcome::Pass,
        (SnVerdict::Sn(_), SnVerdict::Loop(t)) => Outcome::Fail(format!("premise SN but conclusion loops:\n{t}")),
        _ => Outcome::Inconclusive,
    }
}

fn worst(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
    let mut acc = Outcome::Pass;
    for o in outcomes {
        match (&acc, &o) {
            (Outcome::Fail(_), _) => {}
            (_, Outcome::Fail(_)) => acc = o,
            (Outcome::Inconclusive, _) => {}
            (_, Outcome::Inconclusive) => acc = o,
            _ => {}
        }
    }
    acc
}

/// The backward transfers of strong normalization. For a λμ term (Church,
/// so that `⋄` applies): SN of `M⋄` under β gives SN of `M` under βμ, with
/// η bounded by that of the image; SN under βμ gives SN under βμρθ. For a
/// term of the full calculus: SN of `M∘` under βμρθ gives SN of `M`.
pub fn check_sn_transfer(ctx: &Context, m: &Term, fuel: usize) -> Outcome {
    if needs_circle(ctx, m, None, None) {
        let image = sn_verdict(&circle(m), RuleSet::BETAMU_RT, fuel);
        let source = sn_verdict(m, RuleSet::FULL, fuel);
        return implication(&image, &source);
    }
    let env = TranslationEnv::new(ctx, m);
    let d = match diamond(m, &env) {
        Ok(d) => d,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let image = sn_verdict(&d, RuleSet::BETA, fuel);
    let bm = sn_verdict(m, RuleSet::BETAMU, fuel);
    let rt = sn_verdict(m, RuleSet::BETAMU_RT, fuel);
    let bound = match (&image, &bm) {
        (SnVerdict::Sn(i), SnVerdict::Sn(s)) if s > i => {
            Outcome::Fail(format!("eta under betamu is {s} but the image has eta {i}"))
        }
        _ => Outcome::Pass,
    };
    worst([implication(&image, &bm), implication(&bm, &rt), bound])
}

// ---- substitution and ρθ ----------------------------------------------

/// `M` and `N` SN implies `M[x:=N]` SN, for `\x:B. M` and `N : B`.
pub fn check_substitution_sn(abs: &Term, n: &Term, fuel: usize) -> Outcome {
    let Term::Lam(x, _, body) = abs else { return Outcome::Skip };
    let (bv, nv) = (sn_verdict(body, RuleSet::BETA, fuel), sn_verdict(n, RuleSet::BETA, fuel));
    match (&bv, &nv) {
        (SnVerdict::Sn(_), SnVerdict::Sn(_)) => match sn_verdict(&subst(body, x, n), RuleSet::BETA, fuel) {
            SnVerdict::Sn(_) => Outcome::Pass,
            SnVerdict::Loop(t) => Outcome::Fail(format!("substitution loops:\n{t}")),
            SnVerdict::Unknown(_) => Outcome::Inconclusive,
        },
        (SnVerdict::Loop(_), _) | (_, SnVerdict::Loop(_)) => Outcome::Skip,
        _ => Outcome::Inconclusive,
    }
}

/// Every ρθ step in the closure of `m` shrinks the term, so the closure is
/// finite and acyclic.
pub fn check_snrth(m: &Term) -> Outcome {
    let g = match rt_closure(m) {
        Ok(g) => g,
        Err(o) => return o,
    };
    for (i, es) in g.edges.iter().enumerate() {
        for e in es {
            let (a, b) = (&g.nodes[i], &g.nodes[e.target]);
            if b.size() >= a.size() {
                return Outcome::Fail(format!("{} step from {a} to {b} does not shrink", e.label));
            }
        }
    }
    if g.longest_path().is_none() {
        return Outcome::Fail("rho-theta closure has a cycle".into());
    }
    Outcome::Pass
}

// ---- recursive types ---------------------------------------------------

pub struct Counterexample {
    pub name: &'static str,
    pub eqs: EquationSet,
    pub ctx: Context,
    pub term: Term,
    pub ty: Type,
}

/// The two non-good equation sets with their looping terms. The second
/// term only types when both branches of its case agree, so its set is
/// taken with `A := B`.
pub fn counterexamples() -> Vec<Counterexample> {
    let p = |s: &str| parse_term_any(s).expect("parses");
    let m = "\\x:X. ((x p2) x)";
    let n = "\\x:X. (x [y. y | z. (z w2[X] z)])";
    vec![
        Counterexample {
            name: "X = A /\\ (X -> B)",
            eqs: EquationSet::parse("X = A /\\ (X -> B)").expect("parses"),
            ctx: Context::parse("y : A").expect("parses"),
            term: p(&format!("({m} <y, {m}>)")),
            ty: Type::atom("B"),
        },
        Counterexample {
            name: "X = B \\/ (X -> B)",
            eqs: EquationSet::parse("X = B \\/ (X -> B)").expect("parses"),
            ctx: Context::new(),
            term: p(&format!("({n} w2[X] {n})")),
            ty: Type::atom("B"),
        },
    ]
}

pub fn good_example() -> EquationSet {
    EquationSet::parse("X = A /\\ (B -> X)").expect("parses")
}

/// Loop verdicts must come within this many expansions.
pub const COUNTER_FUEL: usize = 20;

pub fn check_counterexample(c: &Counterexample) -> Outcome {
    if is_good(&c.eqs) == Goodness::Good {
        return Outcome::Fail(format!("{} judged good", c.eqs));
    }
    if let Err(e) = typecheck(&c.ctx, &c.term, &c.ty, System::Sfull, Some(&c.eqs)) {
        return Outcome::Fail(format!("does not typecheck: {e}"));
    }
    match sn_verdict(&c.term, RuleSet::FULL, COUNTER_FUEL) {
        SnVerdict::Loop(_) => Outcome::Pass,
        v => Outcome::Fail(format!("expected a loop, got {v}")),
    }
}

pub fn run_counterexamples() -> LemmaReport {
    let mut r = LemmaReport::new("mendler-counter");
    for c in counterexamples() {
        r.record(|| format!("{}: {}", c.name, c.term), check_counterexample(&c));
    }
    let good = good_example();
    r.record(
        || good.to_string(),
        match is_good(&good) {
            Goodness::Good => Outcome::Pass,
            g => Outcome::Fail(g.to_string()),
        },
    );
    r
}

/// SN under `rs` within fuel.
pub fn check_sn(m: &Term, rs: RuleSet, fuel: usize) -> Outcome {
    match sn_verdict(m, rs, fuel) {
        SnVerdict::Sn(_) => Outcome::Pass,
        SnVerdict::Loop(t) => Outcome::Fail(format!("loops:\n{t}")),
        SnVerdict::Unknown(n) => Outcome::Fail(format!("undecided after {n} expansions")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::step;
    use crate::syntax::alpha_eq;
    use crate::types::parse_type;

    fn t(s: &str) -> Term {
        parse_term_any(s).unwrap()
    }

    #[test]
    fn tran_small() {
        for a in ["bot", "X", "X -> bot", "(X -> X) -> bot"] {
            assert_eq!(check_tran(&parse_type(a).unwrap()), Outcome::Pass, "{a}");
        }
    }

    #[test]
    fn diamond_simulation_examples() {
        let ctx = Context::parse("y : A").unwrap();
        let m = t("(\\x:A. x y)");
        let r = check_simulation_diamond(&ctx, &m, System::Smu, None, 1000);
        assert!(r.ok() && r.tried == 1);
        let ctx = Context::parse("x : A -> B; y : A").unwrap();
        let m = t("(mu a:~(A -> B). [a] x y)");
        let n = step_typed(&ctx, &m, &crate::syntax::Position::root(), System::Smu, None).unwrap().1;
        let w = diamond_step_witness(&ctx, &m, &n, 1000).unwrap();
        assert!(w.lg() >= 2, "{w}");
        let r = check_simulation_diamond(&ctx, &t("x"), System::Smu, None, 10);
        assert_eq!(r.tried, 0);
    }

    #[test]
    fn every_redex_family_simulates() {
        for (name, m) in redex_families() {
            let r = check_simulation_circle(&m, 10_000);
            assert!(r.ok() && r.tried >= 1, "{name}: {r}");
            let (_, label, _) = &reducts(&m, RuleSet::FULL)[0];
            assert_eq!(label.rule.name(), name);
        }
    }

    #[test]
    fn redex_family_shapes() {
        let fam: std::collections::HashMap<_, _> = redex_families().into_iter().collect();
        let witness = |name: &str| {
            let m = &fam[name];
            let n = reducts(m, RuleSet::FULL).remove(0).2;
            circle_witness(m, &n, 1, 10_000).unwrap()
        };
        // a single μ step lands exactly on the image of the reduct
        let w = witness("perm-arg");
        assert_eq!((w.forward.lg(), w.forward.lg_bm(), w.rho.lg()), (1, 1, 0));
        // the image of the reduct needs ρ steps to meet
        assert!(witness("perm-proj").rho.lg() >= 1);
        assert!(witness("perm-case").rho.lg() >= 1);
    }

    #[test]
    fn pair_trace_is_golden() {
        let tr = pair_projection_trace().unwrap();
        let labels: Vec<String> = tr.steps.iter().map(|s| s.label.rule.name().to_owned()).collect();
        let n = labels.len();
        assert!(labels[..n - 2].iter().all(|l| l == "beta"), "{tr}");
        assert_eq!(&labels[n - 2..], ["rho", "theta"]);
        assert!(alpha_eq(tr.end(), &t("x")));
        tr.replay().unwrap();
    }

    #[test]
    fn postponement_examples() {
        // θ then β, reordered as β then θ
        let m = t("(\\z. z mu a. [a] \\x. x)");
        let mut tr = Trace::new(m.clone());
        let (l, m1) = step(&m, &crate::syntax::Position(vec![1])).unwrap();
        tr.push(crate::syntax::Position(vec![1]), l, m1.clone());
        let (l, m2) = step(&m1, &crate::syntax::Position::root()).unwrap();
        tr.push(crate::syntax::Position::root(), l, m2);
        let (first, second) = postponement_witness(&tr, 1000).unwrap();
        assert_eq!(first.lg_bm(), first.lg());
        assert!(first.lg() >= 1);
        assert!(second.steps.iter().all(|s| s.label.rule.is_rho_theta()));
        // ρ then β
        let m = t("[b] mu a. [a] (\\z. z x)");
        let (l1, m1) = step(&m, &crate::syntax::Position::root()).unwrap();
        let (l2, m2) = step(&m1, &crate::syntax::Position(vec![0])).unwrap();
        let mut tr = Trace::new(m);
        tr.push(crate::syntax::Position::root(), l1, m1);
        tr.push(crate::syntax::Position(vec![0]), l2, m2);
        assert_eq!(check_postponement(&tr, 1000), Outcome::Pass);
        assert_eq!(check_postponement(&Trace::new(t("x")), 1000), Outcome::Skip);
    }

    #[test]
    fn commutation_examples() {
        let m = t("([b] mu a. [a] x y)");
        let r = check_diag(&m);
        assert!(r.ok(), "{r}");
        let m = t("[b] (mu a. [a] x y)");
        let r = check_diag_star(&m, 20, 1000);
        assert!(r.ok() && r.tried >= 2, "{r}");
        let r = check_diag(&t("[c] mu a. [b] mu d. [a] [d] x"));
        assert!(r.ok() && r.tried > 0, "{r}");
    }

    #[test]
    fn sn_transfer_examples() {
        let ctx = Context::parse("y : A").unwrap();
        assert_eq!(check_sn_transfer(&ctx, &t("(\\x:A. x y)"), 1000), Outcome::Pass);
        let c = &counterexamples()[0];
        // the image loops as well, so the implication holds vacuously
        assert!(matches!(sn_verdict(&circle(&c.term), RuleSet::BETAMU_RT, 1000), SnVerdict::Loop(_)));
        assert_eq!(check_sn_transfer(&c.ctx, &c.term, 1000), Outcome::Pass);
        let big = t("(\\x:A -> A. (x (x (x y))) \\z:A. (\\w:A. w z))");
        assert_eq!(check_sn_transfer(&ctx, &big, 1), Outcome::Inconclusive);
    }

    #[test]
    fn counterexamples_behave() {
        let r = run_counterexamples();
        assert!(r.ok() && r.tried == 3, "{r}");
        // the second term does not type against the literal set
        let literal = EquationSet::parse("X = A \\/ (X -> B)").unwrap();
        let c = &counterexamples()[1];
        assert!(typecheck(&c.ctx, &c.term, &c.ty, System::Sfull, Some(&literal)).is_err());
        assert_ne!(is_good(&literal), Goodness::Good);
    }

    #[test]
    fn substitution_and_snrth() {
        assert_eq!(check_substitution_sn(&t("\\x:A -> A. (x y)"), &t("\\z:A. z"), 100), Outcome::Pass);
        assert_eq!(check_snrth(&t("[b] mu a. [a] mu c. [a] [c] x")), Outcome::Pass);
    }
}
