use std::sync::Arc;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::corpus::CorpusSpec;
use crate::reduce::{redexes, step, step_typed, RuleSet, Trace};
use crate::syntax::{Elim, MuVar, Side, Sort, Term, TermVar};
use crate::types::{types_up_to_depth, EquationSet, Type};
use crate::typing::{Context, System};

/// Type-directed synthesis: a derivation is grown top down from a goal
/// type, so every sample is a well-typed Church term.
pub struct RandomGen {
    rng: ChaCha8Rng,
    sort: Sort,
    universe: Vec<Type>,
    goals: Vec<Type>,
    eqs: Option<EquationSet>,
    max_size: usize,
    effort: usize,
}

#[derive(Clone, Copy)]
enum Move {
    Var,
    Intro,
    App,
    Mu,
    Name,
    Proj,
    Case,
}

const EFFORT: usize = 4000;

impl RandomGen {
    pub fn new(spec: &CorpusSpec, rng: ChaCha8Rng) -> RandomGen {
        let universe = spec.universe();
        let mut atoms: Vec<&str> = spec.atoms.iter().map(String::as_str).collect();
        if let Some(e) = &spec.eqs {
            atoms.extend(e.vars());
        }
        let goals = types_up_to_depth(2, &atoms, spec.sort >= Sort::LambdaMu, spec.sort == Sort::Full)
            .into_iter()
            .filter(|t| matches!(t, Type::Arrow(..)))
            .collect();
        RandomGen { rng, sort: spec.sort, universe, goals, eqs: spec.eqs.clone(), max_size: spec.max_size.max(2), effort: 0 }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A closed term at a random goal type. Goals that turn out to be hard
    /// to inhabit are abandoned and another is drawn.
    pub fn closed_term(&mut self) -> (Context, Term, Type) {
        loop {
            let goal = self.goals.choose(&mut self.rng).expect("goal types exist").clone();
            let size = self.rng.random_range(2..=self.max_size);
            self.effort = 0;
            if let Some(t) = self.term(&Context::new(), &goal, size) {
                return (Context::new(), t, goal);
            }
        }
    }

    fn whnf(&self, t: &Type) -> Type {
        match &self.eqs {
            Some(e) => e.whnf(t).clone(),
            None => t.clone(),
        }
    }

    fn conv(&self, a: &Type, b: &Type) -> bool {
        match &self.eqs {
            Some(e) => e.congruent(a, b),
            None => a == b,
        }
    }

    fn any_type(&mut self, ctx: &Context) -> Type {
        let from_ctx: Vec<Type> = ctx.terms().map(|(_, t)| t.clone()).collect();
        if !from_ctx.is_empty() && self.rng.random_bool(0.5) {
            from_ctx.choose(&mut self.rng).unwrap().clone()
        } else {
            self.universe.choose(&mut self.rng).unwrap().clone()
        }
    }

    /// A term of type `goal` and size at most `budget`.
    pub fn term(&mut self, ctx: &Context, goal: &Type, budget: usize) -> Option<Term> {
        self.effort += 1;
        if budget == 0 || self.effort > EFFORT {
            return None;
        }
        let head = self.whnf(goal);
        let mut moves = Vec::new();
        let vars: Vec<TermVar> = ctx.terms().filter(|(_, t)| self.conv(t, goal)).map(|(x, _)| x.clone()).collect();
        if !vars.is_empty() {
            moves.push(Move::Var);
        }
        if budget >= 2 {
            match head {
                Type::Arrow(..) => moves.push(Move::Intro),
                Type::And(..) | Type::Or(..) if self.sort == Sort::Full && budget >= 3 => moves.push(Move::Intro),
                Type::Or(..) if self.sort == Sort::Full => moves.push(Move::Intro),
                _ => {}
            }
            if self.sort >= Sort::LambdaMu {
                moves.push(Move::Mu);
                if head == Type::Bot && ctx.mus().next().is_some() {
                    moves.push(Move::Name);
                }
            }
        }
        if budget >= 3 {
            moves.push(Move::App);
            if self.sort == Sort::Full {
                moves.push(Move::Proj);
            }
        }
        if budget >= 6 && self.sort == Sort::Full {
            moves.push(Move::Case);
        }
        moves.shuffle(&mut self.rng);
        for mv in moves.into_iter().take(3) {
            if let Some(t) = self.try_move(mv, ctx, goal, &head, budget, &vars) {
                return Some(t);
            }
        }
        None
    }

    fn split(&mut self, total: usize, parts: usize) -> Vec<usize> {
        // each part at least 1
        let mut cuts: Vec<usize> = (0..parts - 1).map(|_| self.rng.random_range(0..=total - parts)).collect();
        cuts.sort_unstable();
        let mut out = Vec::with_capacity(parts);
        let mut prev = 0;
        for c in cuts {
            out.push(c - prev + 1);
            prev = c;
        }
        out.push(total - parts - prev + 1);
        out
    }

    fn try_move(&mut self, mv: Move, ctx: &Context, goal: &Type, head: &Type, budget: usize, vars: &[TermVar]) -> Option<Term> {
        let x = TermVar::new(&format!("x{}", ctx.terms().count()));
        let a = MuVar::new(&format!("a{}", ctx.mus().count()));
        match mv {
            Move::Var => Some(Term::Var(vars.choose(&mut self.rng)?.clone())),
            Move::Intro => match head {
                Type::Arrow(dom, cod) => {
                    let inner = ctx.with_term(&x, (**dom).clone());
                    let body = self.term(&inner, cod, budget - 1)?;
                    Some(Term::Lam(x, Some((**dom).clone()), Arc::new(body)))
                }
                Type::And(l, r) => {
                    let s = self.split(budget - 1, 2);
                    let lt = self.term(ctx, l, s[0])?;
                    let rt = self.term(ctx, r, s[1])?;
                    Some(Term::pair(lt, rt))
                }
                Type::Or(l, r) => {
                    let side = if self.rng.random_bool(0.5) { Side::Left } else { Side::Right };
                    let body = self.term(ctx, side.pick(l, r), budget - 1)?;
                    Some(Term::inj(side, Some(goal.clone()), body))
                }
                _ => None,
            },
            Move::Mu => {
                let inner = ctx.with_mu(&a, goal.clone());
                let body = self.term(&inner, &Type::Bot, budget - 1)?;
                Some(Term::Mu(a, Some(goal.clone()), Arc::new(body)))
            }
            Move::Name => {
                let mus: Vec<(MuVar, Type)> = ctx.mus().map(|(b, t)| (b.clone(), t.clone())).collect();
                let (b, t) = mus.choose(&mut self.rng)?.clone();
                let body = self.term(ctx, &t, budget - 1)?;
                Some(Term::Name(b, Arc::new(body)))
            }
            Move::App => {
                let dom = self.any_type(ctx);
                let s = self.split(budget - 1, 2);
                let f = self.term(ctx, &Type::arrow(dom.clone(), goal.clone()), s[0])?;
                let arg = self.term(ctx, &dom, s[1])?;
                Some(Term::app(f, arg))
            }
            Move::Proj => {
                let other = self.any_type(ctx);
                let side = if self.rng.random_bool(0.5) { Side::Left } else { Side::Right };
                let pair_ty = match side {
                    Side::Left => Type::and(goal.clone(), other),
                    Side::Right => Type::and(other, goal.clone()),
                };
                let f = self.term(ctx, &pair_ty, budget - 2)?;
                Some(Term::proj(f, side))
            }
            Move::Case => {
                let l = self.any_type(ctx);
                let r = self.any_type(ctx);
                let s = self.split(budget - 2, 3);
                let scrut = self.term(ctx, &Type::or(l.clone(), r.clone()), s[0])?;
                let n1 = self.term(&ctx.with_term(&x, l), goal, s[1])?;
                let n2 = self.term(&ctx.with_term(&x, r), goal, s[2])?;
                Some(Term::apply(scrut, Elim::Case(x.clone(), Arc::new(n1), x, Arc::new(n2))))
            }
        }
    }
}

/// A random reduction of at most `len` steps. With a typing, μ steps keep
/// their binders annotated.
pub fn random_trace(
    m: &Term,
    rs: RuleSet,
    len: usize,
    rng: &mut impl Rng,
    typing: Option<(&Context, System, Option<&EquationSet>)>,
) -> Trace {
    let mut trace = Trace::new(m.clone());
    for _ in 0..len {
        let cur = trace.end().clone();
        let options = redexes(&cur, rs);
        let Some((pos, _)) = options.choose(rng) else { break };
        let (label, next) = match typing {
            Some((ctx, sys, eqs)) => step_typed(ctx, &cur, pos, sys, eqs),
            None => step(&cur, pos),
        }
        .expect("redex positions are valid");
        trace.push(pos.clone(), label, next);
    }
    trace
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::corpus::{enumerate_typed_terms, CorpusSpec};
    use crate::typing::typecheck;
    use rand::SeedableRng;

    #[test]
    fn random_terms_are_typed_and_deterministic() {
        for sort in [Sort::Lambda, Sort::LambdaMu, Sort::Full] {
            let spec = CorpusSpec::random(sort, 10, 7, 50);
            let a = enumerate_typed_terms(&spec);
            let b = enumerate_typed_terms(&spec);
            assert_eq!(a.len(), 50);
            for (i, j) in a.iter().zip(&b) {
                assert_eq!(i.term, j.term);
                typecheck(&i.ctx, &i.church, &i.ty, spec.system(), None).unwrap_or_else(|e| panic!("{}: {e}", i.church));
                assert!(i.term.size() <= 10);
            }
        }
    }

    #[test]
    fn random_traces_preserve_types() {
        let spec = CorpusSpec::random(Sort::Full, 10, 3, 40);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for i in enumerate_typed_terms(&spec) {
            let tr = random_trace(&i.church, RuleSet::FULL, 6, &mut rng, Some((&i.ctx, System::Sfull, None)));
            tr.replay().unwrap();
            for t in tr.terms() {
                typecheck(&i.ctx, t, &i.ty, System::Sfull, None).unwrap_or_else(|e| panic!("{t}: {e}"));
            }
        }
    }
}
