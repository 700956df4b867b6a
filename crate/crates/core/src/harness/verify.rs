use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::corpus::{enumerate_typed_terms, CorpusItem, CorpusSpec};
use super::lemmas::*;
use super::random::{random_trace, RandomGen};
use super::report::{LemmaReport, Outcome};
use crate::reduce::{reduction_graph, RuleSet, Trace, DEFAULT_FUEL};
use crate::syntax::{Mode, Sort, Term};
use crate::types::{types_up_to_depth, EquationSet, Type};
use crate::typing::curry_type;

pub const LEMMAS: [&str; 17] = [
    "tran",
    "coding1",
    "coding2",
    "coding3",
    "coding4",
    "sim-diamond",
    "sim-circle",
    "sim-aggregate",
    "postpone",
    "diag",
    "diag-star",
    "sn-transfer",
    "subst-sn",
    "snrth",
    "mendler-counter",
    "sn-sweep",
    "all",
];

/// Knobs for [`run_lemma`]; unset fields take per-lemma defaults.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub sort: Option<Sort>,
    pub max_size: Option<usize>,
    pub fuel: usize,
    pub seed: u64,
    pub count: Option<usize>,
    pub eqs: Option<EquationSet>,
    pub depth: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { sort: None, max_size: None, fuel: DEFAULT_FUEL, seed: 0, count: None, eqs: None, depth: None }
    }
}

impl VerifyOptions {
    fn size(&self, default: usize) -> usize {
        self.max_size.unwrap_or(default)
    }

    fn count(&self, default: usize) -> usize {
        self.count.unwrap_or(default)
    }

    fn corpus(&self, sort: Sort, default_size: usize) -> CorpusSpec {
        let mut spec = CorpusSpec::exhaustive(self.sort.unwrap_or(sort), self.size(default_size));
        if let Some(e) = &self.eqs {
            with_equations(&mut spec, e.clone());
        }
        spec
    }
}

/// Corpora under equations draw annotations from the atoms and recursion
/// variables alone.
pub fn with_equations(spec: &mut CorpusSpec, eqs: EquationSet) {
    let mut atoms = std::collections::BTreeSet::new();
    for (_, t) in eqs.iter() {
        let mut a = std::collections::BTreeSet::new();
        t.atoms(&mut a);
        atoms.extend(a.into_iter().filter(|x| !eqs.is_rec_var(x)).map(|x| x.to_string()));
    }
    spec.atoms = atoms.into_iter().collect();
    spec.type_depth = 0;
    spec.eqs = Some(eqs);
}

/// Every closed typable erased term up to the given size.
pub fn sn_sweep_spec(sort: Sort, size: usize) -> CorpusSpec {
    let mut spec = CorpusSpec::exhaustive(sort, size);
    spec.mode = Mode::Curry;
    spec
}

pub fn sn_sweep_size(sort: Sort) -> usize {
    match sort {
        Sort::Full => 6,
        _ => 7,
    }
}

pub fn full_preset(sort: Sort) -> RuleSet {
    match sort {
        Sort::Lambda => RuleSet::BETA,
        Sort::LambdaMu => RuleSet::BETAMU,
        Sort::Full => RuleSet::FULL,
    }
}

fn coding(lemma: &str, spec: &CorpusSpec) -> LemmaReport {
    let items = enumerate_typed_terms(spec);
    let eqs = spec.eqs.as_ref();
    sweep(lemma, &items, |i| {
        single(lemma, || format!("{} |- {} : {}", i.ctx, i.church, i.ty), check_coding(&i.ctx, &i.church, &i.ty, eqs))
    })
}

/// Random typed terms, each with a random trace of at most `max_len`
/// steps, drawn until `want` traces satisfy `keep`. Steps keep the Church
/// annotations up to date.
fn drawn_traces(
    o: &VerifyOptions,
    sort: Sort,
    size: usize,
    rs: RuleSet,
    max_len: usize,
    want: usize,
    keep: impl Fn(&Trace) -> bool,
) -> Vec<(CorpusItem, Trace)> {
    let mut spec = CorpusSpec::random(o.sort.unwrap_or(sort), o.size(size), o.seed, want);
    if let Some(e) = &o.eqs {
        with_equations(&mut spec, e.clone());
    }
    let sys = spec.system();
    let mut gen = RandomGen::new(&spec, ChaCha8Rng::seed_from_u64(o.seed));
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed ^ 0x5eed);
    let mut out = Vec::new();
    for _ in 0..want * 50 {
        if out.len() == want {
            break;
        }
        let (ctx, m, ty) = gen.closed_term();
        let len = rng.random_range(1..=max_len);
        let tr = random_trace(&m, rs, len, &mut rng, Some((&ctx, sys, spec.eqs.as_ref())));
        if keep(&tr) {
            out.push((CorpusItem { ctx, term: m.clone(), church: m, ty }, tr));
        }
    }
    out
}

/// Run the named check with the given options.
pub fn run_lemma(id: &str, o: &VerifyOptions) -> Result<LemmaReport, String> {
    let fuel = o.fuel;
    Ok(match id {
        "tran" => {
            let types = types_up_to_depth(o.depth.unwrap_or(3), &["X"], true, false);
            sweep(id, &types, |a| single(id, || a.to_string(), check_tran(a)))
        }
        "coding1" => coding(id, &o.corpus(Sort::LambdaMu, 5)),
        "coding2" => coding(id, &o.corpus(Sort::Full, 4)),
        "coding3" => {
            let mut spec = CorpusSpec::exhaustive(Sort::LambdaMu, o.size(5));
            with_equations(&mut spec, o.eqs.clone().unwrap_or_else(|| EquationSet::parse("X = A -> X").expect("parses")));
            coding(id, &spec)
        }
        "coding4" => {
            let mut spec = CorpusSpec::exhaustive(Sort::Full, o.size(5));
            with_equations(&mut spec, o.eqs.clone().unwrap_or_else(good_example));
            coding(id, &spec)
        }
        "sim-diamond" => {
            let traces = drawn_traces(o, Sort::LambdaMu, 10, RuleSet::BETAMU, 5, o.count(1000), |t| t.lg() >= 1);
            sweep(id, &traces, |(i, tr)| single(id, || tr.to_string(), check_simulation_diamond_trace(&i.ctx, tr, fuel)))
        }
        "sim-circle" => {
            let steps = drawn_traces(o, Sort::Full, 10, RuleSet::FULL, 1, o.count(500), |t| t.lg() == 1);
            sweep(id, &steps, |(_, tr)| {
                let outcome = circle_witness(&tr.start, tr.end(), 1, fuel).map_or_else(|o| o, |_| Outcome::Pass);
                single(id, || tr.to_string(), outcome)
            })
        }
        "sim-aggregate" => {
            let traces = drawn_traces(o, Sort::Full, 8, RuleSet::FULL, 3, o.count(100), |t| t.lg() >= 1);
            sweep(id, &traces, |(_, tr)| single(id, || tr.to_string(), check_simulation_aggregate(tr, fuel)))
        }
        "postpone" => {
            let traces = drawn_traces(o, Sort::LambdaMu, 10, RuleSet::BETAMU_RT, 6, o.count(300), |t| t.lg_bm() >= 1);
            sweep(id, &traces, |(_, tr)| single(id, || tr.to_string(), check_postponement(tr, fuel)))
        }
        "diag" => {
            let items = enumerate_typed_terms(&o.corpus(Sort::LambdaMu, 5));
            sweep(id, &items, |i| {
                let g = reduction_graph(&i.term, RuleSet::BETAMU_RT, 10);
                g.nodes.iter().map(check_diag).fold(LemmaReport::new(id), LemmaReport::merge)
            })
        }
        "diag-star" => {
            let items = enumerate_typed_terms(&o.corpus(Sort::LambdaMu, 4));
            sweep(id, &items, |i| check_diag_star(&i.term, 10, fuel))
        }
        "sn-transfer" => {
            let mut items = enumerate_typed_terms(&o.corpus(Sort::LambdaMu, 5));
            if o.sort.is_none() {
                items.extend(enumerate_typed_terms(&o.corpus(Sort::Full, 4)));
            }
            sweep(id, &items, |i| single(id, || i.church.to_string(), check_sn_transfer(&i.ctx, &i.church, fuel)))
        }
        "subst-sn" => {
            let mut spec = CorpusSpec::exhaustive(Sort::Lambda, o.size(6));
            spec.mode = Mode::Curry;
            let items = enumerate_typed_terms(&spec);
            let abs: Vec<&CorpusItem> = items.iter().filter(|i| matches!(i.term, Term::Lam(..))).collect();
            let a = Type::atom("A");
            sweep(id, &abs, |f| {
                let mut r = LemmaReport::new(id);
                for n in items.iter().filter(|n| curry_type(&Term::app(f.term.clone(), n.term.clone()), &a).is_some()) {
                    r.record(|| format!("{} applied to {}", f.term, n.term), check_substitution_sn(&f.term, &n.term, fuel));
                }
                r
            })
        }
        "snrth" => {
            let items = enumerate_typed_terms(&o.corpus(Sort::LambdaMu, 5));
            let mut r = sweep(id, &items, |i| {
                let g = reduction_graph(&i.term, RuleSet::BETAMU_RT, 20);
                let mut r = LemmaReport::new(id);
                for n in &g.nodes {
                    r.record(|| n.to_string(), check_snrth(n));
                }
                r
            });
            let full = enumerate_typed_terms(&o.corpus(Sort::Full, 4));
            r = r.merge(sweep(id, &full, |i| {
                let c = crate::translate::circle(&i.term);
                let g = reduction_graph(&c, RuleSet::BETAMU_RT, 20);
                let mut r = LemmaReport::new(id);
                for n in &g.nodes {
                    r.record(|| n.to_string(), check_snrth(n));
                }
                r
            }));
            r
        }
        "mendler-counter" => run_counterexamples(),
        "sn-sweep" => {
            let specs: Vec<CorpusSpec> = match (o.sort, &o.eqs) {
                (_, Some(_)) => vec![o.corpus(Sort::Full, 6)],
                (Some(sort), None) => vec![sn_sweep_spec(sort, o.size(sn_sweep_size(sort)))],
                (None, None) => [Sort::Lambda, Sort::LambdaMu, Sort::Full]
                    .into_iter()
                    .map(|s| sn_sweep_spec(s, o.size(sn_sweep_size(s))))
                    .collect(),
            };
            let mut r = LemmaReport::new(id);
            for spec in specs {
                let rs = full_preset(spec.sort);
                let items = enumerate_typed_terms(&spec);
                r = r.merge(sweep(id, &items, |i| single(id, || i.term.to_string(), check_sn(&i.term, rs, fuel))));
            }
            r
        }
        "all" => {
            let mut r = LemmaReport::new("all");
            for l in LEMMAS.iter().filter(|l| **l != "all") {
                let sub = run_lemma(l, o)?;
                r = r.merge(LemmaReport { lemma: String::new(), ..sub });
            }
            r
        }
        _ => return Err(format!("unknown lemma {id:?}; expected one of {}", LEMMAS.join(", "))),
    })
}
