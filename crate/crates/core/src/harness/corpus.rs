use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::RandomGen;
use crate::syntax::{canonical_erased, Elim, Mode, MuVar, Side, Sort, Term, TermVar};
use crate::types::{types_up_to_depth, EquationSet, Type};
use crate::typing::{curry_typable, curry_type, Context, System};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generation {
    Exhaustive,
    Random { seed: u64, count: usize },
}

#[derive(Clone, Debug)]
pub struct CorpusSpec {
    pub sort: Sort,
    pub max_size: usize,
    pub atoms: Vec<String>,
    pub mode: Mode,
    pub eqs: Option<EquationSet>,
    pub generation: Generation,
    /// Binder annotations range over the types of at most this depth
    /// (atoms have depth 0) built from the atoms, the recursion variables
    /// and, outside the λ sort, ⊥.
    pub type_depth: usize,
}

impl CorpusSpec {
    /// Closed Church terms over one atom, annotations of depth ≤ 1.
    pub fn exhaustive(sort: Sort, max_size: usize) -> CorpusSpec {
        CorpusSpec {
            sort,
            max_size,
            atoms: vec!["A".to_owned()],
            mode: Mode::Church,
            eqs: None,
            generation: Generation::Exhaustive,
            type_depth: 1,
        }
    }

    pub fn random(sort: Sort, max_size: usize, seed: u64, count: usize) -> CorpusSpec {
        CorpusSpec { generation: Generation::Random { seed, count }, ..CorpusSpec::exhaustive(sort, max_size) }
    }

    pub fn system(&self) -> System {
        match self.sort {
            Sort::Lambda => System::S,
            Sort::LambdaMu => System::Smu,
            Sort::Full => System::Sfull,
        }
    }

    /// The annotation types.
    pub fn universe(&self) -> Vec<Type> {
        let mut atoms: Vec<&str> = self.atoms.iter().map(String::as_str).collect();
        if let Some(e) = &self.eqs {
            for x in e.vars() {
                if !atoms.contains(&x) {
                    atoms.push(x);
                }
            }
        }
        types_up_to_depth(self.type_depth, &atoms, self.sort >= Sort::LambdaMu, self.sort == Sort::Full)
    }
}

/// A typed corpus entry. `term` is Church or erased according to the
/// spec's mode; `church` is always the annotated witness, which checks at
/// `ty` in `ctx`.
#[derive(Clone, Debug)]
pub struct CorpusItem {
    pub ctx: Context,
    pub term: Term,
    pub church: Term,
    pub ty: Type,
}

/// Church mode enumerates annotated terms over the annotation universe.
/// Exhaustive Curry mode without equations enumerates erased closed terms
/// and keeps the typable ones, so annotations of any depth are covered;
/// with equations it erases the Church corpus instead.
pub fn enumerate_typed_terms(spec: &CorpusSpec) -> Vec<CorpusItem> {
    if spec.mode == Mode::Curry && spec.generation == Generation::Exhaustive && spec.eqs.is_none() {
        return enumerate_curry(spec);
    }
    let church = match spec.generation {
        Generation::Exhaustive => {
            let mut e = Enumerator::new(spec);
            let ctx = Context::new();
            let mut out = Vec::new();
            for n in 1..=spec.max_size {
                for (t, ty) in e.terms(&ctx, n).iter() {
                    out.push((ctx.clone(), t.clone(), ty.clone()));
                }
            }
            out
        }
        Generation::Random { seed, count } => {
            let mut g = RandomGen::new(spec, ChaCha8Rng::seed_from_u64(seed));
            (0..count).map(|_| g.closed_term()).collect()
        }
    };
    match spec.mode {
        Mode::Church => church.into_iter().map(|(ctx, t, ty)| CorpusItem { ctx, term: t.clone(), church: t, ty }).collect(),
        Mode::Curry => {
            let mut seen = HashSet::new();
            church
                .into_iter()
                .filter(|(_, t, _)| spec.generation != Generation::Exhaustive || seen.insert(canonical_erased(t)))
                .map(|(ctx, t, ty)| CorpusItem { ctx, term: t.erase(), church: t, ty })
                .collect()
        }
    }
}

fn enumerate_curry(spec: &CorpusSpec) -> Vec<CorpusItem> {
    let atom = Type::atom(spec.atoms.first().map_or("A", String::as_str));
    let mut e = ErasedEnumerator { sort: spec.sort, memo: HashMap::new() };
    let mut out = Vec::new();
    for n in 1..=spec.max_size {
        for t in e.terms(0, 0, n).iter() {
            if let Some((church, ty)) = curry_type(t, &atom) {
                out.push(CorpusItem { ctx: Context::new(), term: t.clone(), church, ty });
            }
        }
    }
    out
}

/// Erased terms of an exact size whose free variables are among
/// `x0..x{k-1}` and `a0..a{j-1}`, pruned to those typable under some
/// assignment of types to the free variables.
struct ErasedEnumerator {
    sort: Sort,
    memo: HashMap<(usize, usize, usize), Arc<Vec<Term>>>,
}

impl ErasedEnumerator {
    fn terms(&mut self, k: usize, j: usize, n: usize) -> Arc<Vec<Term>> {
        if let Some(b) = self.memo.get(&(k, j, n)) {
            return b.clone();
        }
        let mut b = self.build(k, j, n);
        b.retain(curry_typable);
        let b = Arc::new(b);
        self.memo.insert((k, j, n), b.clone());
        b
    }

    fn build(&mut self, k: usize, j: usize, n: usize) -> Vec<Term> {
        let mut out = Vec::new();
        if n == 1 {
            out.extend((0..k).map(|i| Term::var(&format!("x{i}"))));
            return out;
        }
        let x = format!("x{k}");
        let a = format!("a{j}");
        for b in self.terms(k + 1, j, n - 1).iter() {
            out.push(Term::lam(&x, None, b.clone()));
        }
        for l in 1..n - 1 {
            let fs = self.terms(k, j, l);
            let args = self.terms(k, j, n - 1 - l);
            for f in fs.iter() {
                for m in args.iter() {
                    out.push(Term::app(f.clone(), m.clone()));
                }
            }
        }
        if self.sort >= Sort::LambdaMu {
            for b in self.terms(k, j + 1, n - 1).iter() {
                out.push(Term::mu(&a, None, b.clone()));
            }
            for b in self.terms(k, j, n - 1).iter() {
                for i in 0..j {
                    out.push(Term::name(&format!("a{i}"), b.clone()));
                }
            }
        }
        if self.sort == Sort::Full {
            for l in 1..n - 1 {
                let ls = self.terms(k, j, l);
                let rs = self.terms(k, j, n - 1 - l);
                for p in ls.iter() {
                    for q in rs.iter() {
                        out.push(Term::pair(p.clone(), q.clone()));
                    }
                }
            }
            if n >= 3 {
                for f in self.terms(k, j, n - 2).iter() {
                    out.push(Term::proj(f.clone(), Side::Left));
                    out.push(Term::proj(f.clone(), Side::Right));
                }
            }
            for b in self.terms(k, j, n - 1).iter() {
                out.push(Term::inj(Side::Left, None, b.clone()));
                out.push(Term::inj(Side::Right, None, b.clone()));
            }
            for l in 1..n.saturating_sub(3) {
                let rest = n - 2 - l;
                for f in self.terms(k, j, l).iter() {
                    for i in 1..rest {
                        let n1s = self.terms(k + 1, j, i);
                        let n2s = self.terms(k + 1, j, rest - i);
                        for n1 in n1s.iter() {
                            for n2 in n2s.iter() {
                                out.push(Term::case(f.clone(), &x, n1.clone(), &x, n2.clone()));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

type Bucket = Arc<Vec<(Term, Type)>>;

/// All Church terms of an exact size typable in a context, bottom up.
/// Binders are named after the number of variables already in scope, so
/// every alpha class is produced once.
struct Enumerator<'a> {
    sort: Sort,
    universe: Vec<Type>,
    eqs: Option<&'a EquationSet>,
    memo: HashMap<(Context, usize), Bucket>,
}

impl<'a> Enumerator<'a> {
    fn new(spec: &'a CorpusSpec) -> Enumerator<'a> {
        Enumerator { sort: spec.sort, universe: spec.universe(), eqs: spec.eqs.as_ref(), memo: HashMap::new() }
    }

    fn whnf(&self, t: &Type) -> Type {
        match self.eqs {
            Some(e) => e.whnf(t).clone(),
            None => t.clone(),
        }
    }

    fn conv(&self, a: &Type, b: &Type) -> bool {
        match self.eqs {
            Some(e) => e.congruent(a, b),
            None => a == b,
        }
    }

    fn terms(&mut self, ctx: &Context, n: usize) -> Bucket {
        let key = (ctx.clone(), n);
        if let Some(b) = self.memo.get(&key) {
            return b.clone();
        }
        let b = Arc::new(self.build(ctx, n));
        self.memo.insert(key, b.clone());
        b
    }

    fn build(&mut self, ctx: &Context, n: usize) -> Vec<(Term, Type)> {
        let mut out = Vec::new();
        if n == 1 {
            for (x, t) in ctx.terms() {
                out.push((Term::Var(x.clone()), t.clone()));
            }
            return out;
        }
        let x = TermVar::new(&format!("x{}", ctx.terms().count()));
        let a = MuVar::new(&format!("a{}", ctx.mus().count()));
        let full = self.sort == Sort::Full;

        for t in self.universe.clone() {
            let inner = ctx.with_term(&x, t.clone());
            for (b, tb) in self.terms(&inner, n - 1).iter() {
                out.push((Term::Lam(x.clone(), Some(t.clone()), Arc::new(b.clone())), Type::arrow(t.clone(), tb.clone())));
            }
        }
        for k in 1..n - 1 {
            let fs = self.terms(ctx, k);
            let args = self.terms(ctx, n - 1 - k);
            for (f, tf) in fs.iter() {
                let Type::Arrow(dom, cod) = self.whnf(tf) else { continue };
                for (m, tm) in args.iter() {
                    if self.conv(tm, &dom) {
                        out.push((Term::app(f.clone(), m.clone()), (*cod).clone()));
                    }
                }
            }
        }
        if self.sort >= Sort::LambdaMu {
            for t in self.universe.clone() {
                let inner = ctx.with_mu(&a, t.clone());
                for (b, tb) in self.terms(&inner, n - 1).iter() {
                    if self.conv(tb, &Type::Bot) {
                        out.push((Term::Mu(a.clone(), Some(t.clone()), Arc::new(b.clone())), t.clone()));
                    }
                }
            }
            let mus: Vec<(MuVar, Type)> = ctx.mus().map(|(b, t)| (b.clone(), t.clone())).collect();
            let bodies = self.terms(ctx, n - 1);
            for (b, t) in &mus {
                for (m, tm) in bodies.iter() {
                    if self.conv(tm, t) {
                        out.push((Term::Name(b.clone(), Arc::new(m.clone())), Type::Bot));
                    }
                }
            }
        }
        if full {
            for k in 1..n - 1 {
                let ls = self.terms(ctx, k);
                let rs = self.terms(ctx, n - 1 - k);
                for (l, tl) in ls.iter() {
                    for (r, tr) in rs.iter() {
                        out.push((Term::pair(l.clone(), r.clone()), Type::and(tl.clone(), tr.clone())));
                    }
                }
            }
            if n >= 3 {
                for (f, tf) in self.terms(ctx, n - 2).iter() {
                    if let Type::And(l, r) = self.whnf(tf) {
                        out.push((Term::proj(f.clone(), Side::Left), (*l).clone()));
                        out.push((Term::proj(f.clone(), Side::Right), (*r).clone()));
                    }
                }
            }
            for t in self.universe.clone() {
                let Type::Or(l, r) = self.whnf(&t) else { continue };
                for (b, tb) in self.terms(ctx, n - 1).iter() {
                    for (side, want) in [(Side::Left, &l), (Side::Right, &r)] {
                        if self.conv(tb, want) {
                            out.push((Term::inj(side, Some(t.clone()), b.clone()), t.clone()));
                        }
                    }
                }
            }
            // n = 1 + scrutinee + 1 + branch + branch
            for k in 1..n.saturating_sub(3) {
                let rest = n - 2 - k;
                for (f, tf) in self.terms(ctx, k).iter() {
                    let Type::Or(l, r) = self.whnf(tf) else { continue };
                    let c1 = ctx.with_term(&x, (*l).clone());
                    let c2 = ctx.with_term(&x, (*r).clone());
                    for j in 1..rest {
                        let n1s = self.terms(&c1, j);
                        let n2s = self.terms(&c2, rest - j);
                        for (n1, t1) in n1s.iter() {
                            for (n2, t2) in n2s.iter() {
                                if self.conv(t1, t2) {
                                    let e = Elim::Case(x.clone(), Arc::new(n1.clone()), x.clone(), Arc::new(n2.clone()));
                                    out.push((Term::apply(f.clone(), e), t1.clone()));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_term_any};
    use crate::types::parse_type;
    use crate::typing::typecheck;

    #[test]
    fn small_lambda_corpus() {
        let items = enumerate_typed_terms(&CorpusSpec::exhaustive(Sort::Lambda, 3));
        let id = parse_term_any("\\x:A. x").unwrap();
        assert!(items.iter().any(|i| alpha_eq(&i.term, &id) && i.ty == parse_type("A -> A").unwrap()));
        for s in [Sort::Lambda, Sort::LambdaMu, Sort::Full] {
            let spec = CorpusSpec::exhaustive(s, 4);
            for i in enumerate_typed_terms(&spec) {
                typecheck(&i.ctx, &i.church, &i.ty, spec.system(), None).unwrap_or_else(|e| panic!("{}: {e}", i.church));
                assert!(i.term.sort().unwrap() <= s);
            }
        }
    }

    #[test]
    fn corpus_with_equations_typechecks() {
        let mut spec = CorpusSpec::exhaustive(Sort::Full, 5);
        spec.eqs = Some(EquationSet::parse("X = A /\\ (B -> X)").unwrap());
        spec.atoms = vec!["A".into(), "B".into()];
        spec.type_depth = 0;
        let items = enumerate_typed_terms(&spec);
        assert!(items.iter().any(|i| i.church.to_string().contains("p2")));
        for i in items {
            typecheck(&i.ctx, &i.church, &i.ty, spec.system(), spec.eqs.as_ref()).unwrap_or_else(|e| panic!("{}: {e}", i.church));
        }
    }

    // Independent oracle: every raw term over the same names and annotation
    // types, kept when closed and accepted by the checker.
    fn brute_force(max: usize, universe: &[Type]) -> usize {
        fn raw(n: usize, depth: usize, universe: &[Type]) -> Vec<Term> {
            let mut out = Vec::new();
            if n == 1 {
                for i in 0..depth {
                    out.push(Term::var(&format!("x{i}")));
                }
                return out;
            }
            for t in universe {
                for b in raw(n - 1, depth + 1, universe) {
                    out.push(Term::lam(&format!("x{depth}"), Some(t.clone()), b));
                }
            }
            for k in 1..n - 1 {
                for f in raw(k, depth, universe) {
                    for a in raw(n - 1 - k, depth, universe) {
                        out.push(Term::app(f.clone(), a));
                    }
                }
            }
            out
        }
        let mut count = 0;
        for n in 1..=max {
            for m in raw(n, 0, universe) {
                if crate::typing::infer(&Context::new(), &m, System::S, None).is_ok() {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn matches_brute_force_enumeration() {
        let spec = CorpusSpec::exhaustive(Sort::Lambda, 4);
        let n = enumerate_typed_terms(&spec).len();
        assert_eq!(n, brute_force(4, &spec.universe()));
        assert!(n > 0);
        let spec = CorpusSpec::exhaustive(Sort::Lambda, 5);
        assert_eq!(enumerate_typed_terms(&spec).len(), brute_force(5, &spec.universe()));
    }

    #[test]
    fn curry_corpus_covers_church_erasures() {
        for (sort, n) in [(Sort::Lambda, 6), (Sort::LambdaMu, 5), (Sort::Full, 4)] {
            let church = enumerate_typed_terms(&CorpusSpec::exhaustive(sort, n));
            let mut spec = CorpusSpec::exhaustive(sort, n);
            spec.mode = Mode::Curry;
            let curry = enumerate_typed_terms(&spec);
            let keys: HashSet<_> = curry.iter().map(|i| canonical_erased(&i.term)).collect();
            assert_eq!(keys.len(), curry.len());
            for i in &church {
                assert!(keys.contains(&canonical_erased(&i.term)), "{}", i.term);
            }
            for i in &curry {
                assert!(i.term.sort().unwrap() <= sort);
                typecheck(&i.ctx, &i.church, &i.ty, spec.system(), None).unwrap_or_else(|e| panic!("{}: {e}", i.church));
            }
        }
    }

    // Oracle for the pruned erased enumeration: all raw λμ terms, filtered
    // only at the top.
    #[test]
    fn curry_pruning_loses_nothing() {
        fn raw(n: usize, k: usize, j: usize) -> Vec<Term> {
            let mut out = Vec::new();
            if n == 1 {
                return (0..k).map(|i| Term::var(&format!("x{i}"))).collect();
            }
            for b in raw(n - 1, k + 1, j) {
                out.push(Term::lam(&format!("x{k}"), None, b));
            }
            for b in raw(n - 1, k, j + 1) {
                out.push(Term::mu(&format!("a{j}"), None, b));
            }
            for b in raw(n - 1, k, j) {
                for i in 0..j {
                    out.push(Term::name(&format!("a{i}"), b.clone()));
                }
            }
            for l in 1..n - 1 {
                for f in raw(l, k, j) {
                    for a in raw(n - 1 - l, k, j) {
                        out.push(Term::app(f.clone(), a));
                    }
                }
            }
            out
        }
        let mut spec = CorpusSpec::exhaustive(Sort::LambdaMu, 6);
        spec.mode = Mode::Curry;
        let got = enumerate_typed_terms(&spec).len();
        let want = (1..=6).flat_map(|n| raw(n, 0, 0)).filter(|m| curry_type(m, &Type::atom("A")).is_some()).count();
        assert_eq!(got, want);
    }

    #[test]
    fn curry_mode_deduplicates_erasures() {
        let mut spec = CorpusSpec::exhaustive(Sort::Lambda, 3);
        spec.mode = Mode::Curry;
        let items = enumerate_typed_terms(&spec);
        // \x0. x0, \x0. \x1. x0 and \x0. \x1. x1
        assert_eq!(items.len(), 3);
        assert!(items.iter().all(|i| !i.term.to_string().contains(':')));
        spec.mode = Mode::Church;
        assert!(enumerate_typed_terms(&spec).len() > 3);
    }
}
