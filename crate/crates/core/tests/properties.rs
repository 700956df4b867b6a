use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lmcalc::harness::{random_trace, CorpusSpec, RandomGen};
use lmcalc::reduce::{sn_verdict, RuleSet, SnVerdict};
use lmcalc::syntax::{alpha_eq, parse_term_any, struct_subst, subst, Elim, MuVar, Side, Sort, Term, TermVar};
use lmcalc::translate::{circle, diamond, TranslationEnv};
use lmcalc::types::{parse_type, EquationSet, Type};
use lmcalc::typing::{curry_type, typecheck, Context};

fn sort_of(i: u8) -> Sort {
    [Sort::Lambda, Sort::LambdaMu, Sort::Full][i as usize % 3]
}

fn generator(sort: Sort, size: usize, seed: u64) -> RandomGen {
    RandomGen::new(&CorpusSpec::random(sort, size, seed, 1), ChaCha8Rng::seed_from_u64(seed))
}

fn typed_term(sort: Sort, size: usize, seed: u64) -> (Context, Term, Type) {
    generator(sort, size, seed).closed_term()
}

fn named_occurrences(m: &Term, a: &MuVar) -> usize {
    match m {
        Term::Mu(b, _, _) if b == a => 0,
        Term::Name(b, body) => usize::from(b == a) + named_occurrences(body, a),
        _ => m.children().into_iter().map(|c| named_occurrences(c, a)).sum(),
    }
}

fn arb_type() -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![Just(Type::atom("A")), Just(Type::atom("X")), Just(Type::Bot)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Type::arrow(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Type::and(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Type::or(l, r)),
        ]
    })
}

// Untyped terms over a handful of names, free variables included.
fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::var("x")), Just(Term::var("y")), Just(Term::var("z"))];
    leaf.prop_recursive(5, 40, 3, |inner| {
        let name = prop_oneof![Just("x"), Just("y"), Just("z")];
        let mu = prop_oneof![Just("a"), Just("b")];
        let side = prop_oneof![Just(Side::Left), Just(Side::Right)];
        prop_oneof![
            (name.clone(), inner.clone()).prop_map(|(x, b)| Term::lam(x, None, b)),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            (mu.clone(), inner.clone()).prop_map(|(a, b)| Term::mu(a, None, b)),
            (mu, inner.clone()).prop_map(|(a, b)| Term::name(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::pair(l, r)),
            (inner.clone(), side.clone()).prop_map(|(f, s)| Term::proj(f, s)),
            (side, inner.clone()).prop_map(|(s, b)| Term::inj(s, None, b)),
            (inner.clone(), name.clone(), inner.clone(), name, inner)
                .prop_map(|(f, x1, n1, x2, n2)| Term::case(f, x1, n1, x2, n2)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printed_terms_parse_back(m in arb_term()) {
        let back = parse_term_any(&m.to_string()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn printed_church_terms_parse_back(sort in 0u8..3, seed in any::<u64>()) {
        let (_, m, _) = typed_term(sort_of(sort), 10, seed);
        prop_assert_eq!(parse_term_any(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn printed_types_parse_back(t in arb_type()) {
        prop_assert_eq!(parse_type(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn substitution_free_variables(m in arb_term(), n in arb_term()) {
        let x = TermVar::new("x");
        let r = subst(&m, &x, &n);
        let mut want = m.free_term_vars();
        let occurs = want.remove(&x);
        if occurs {
            want.extend(n.free_term_vars());
        }
        prop_assert_eq!(r.free_term_vars(), want);
        if !occurs {
            prop_assert!(alpha_eq(&r, &m));
        }
        prop_assert!(alpha_eq(&subst(&m, &x, &Term::var("x")), &m));
    }

    #[test]
    fn substitutions_commute(m in arb_term(), n in arb_term(), l in arb_term()) {
        // M[x:=N][y:=L] = M[y:=L][x:=N[y:=L]] when x is not free in L
        let (x, y) = (TermVar::new("x"), TermVar::new("y"));
        prop_assume!(!l.free_term_vars().contains(&x));
        let lhs = subst(&subst(&m, &x, &n), &y, &l);
        let rhs = subst(&subst(&m, &y, &l), &x, &subst(&n, &y, &l));
        prop_assert!(alpha_eq(&lhs, &rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn structural_substitution_appends_the_elimination(m in arb_term(), n in arb_term(), side in any::<bool>()) {
        let a = MuVar::new("a");
        let k = named_occurrences(&m, &a);
        for e in [Elim::Arg(n.clone().into()), Elim::Proj(if side { Side::Left } else { Side::Right })] {
            let r = struct_subst(&m, &a, &e);
            // [a]P becomes [a](P e): the application node and the elimination
            let grows = 1 + match &e {
                Elim::Arg(n) => n.size(),
                _ => 1,
            };
            prop_assert_eq!(r.size(), m.size() + k * grows);
            let mut want = m.free_mu_vars();
            if k > 0 {
                want.extend(Term::apply(Term::var("hole"), e.clone()).free_mu_vars());
            }
            prop_assert_eq!(r.free_mu_vars(), want);
            if k == 0 {
                prop_assert!(alpha_eq(&r, &m));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn subject_reduction(sort in 0u8..3, seed in any::<u64>()) {
        let sort = sort_of(sort);
        let spec = CorpusSpec::random(sort, 10, seed, 1);
        let (ctx, m, ty) = typed_term(sort, 10, seed);
        let rs = match sort {
            Sort::Lambda => RuleSet::BETA,
            Sort::LambdaMu => RuleSet::BETAMU_RT,
            Sort::Full => RuleSet::FULL_RT,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trace = random_trace(&m, rs, 6, &mut rng, Some((&ctx, spec.system(), None)));
        for t in trace.terms() {
            prop_assert!(typecheck(&ctx, t, &ty, spec.system(), None).is_ok(), "{} lost type {}", t, ty);
        }
    }

    #[test]
    fn typed_terms_are_strongly_normalizing(sort in 0u8..3, seed in any::<u64>()) {
        let sort = sort_of(sort);
        let (_, m, _) = typed_term(sort, 10, seed);
        let rs = if sort == Sort::Full { RuleSet::FULL_RT } else { RuleSet::BETAMU_RT };
        prop_assert!(matches!(sn_verdict(&m, rs, 100_000), SnVerdict::Sn(_)), "{}", m);
    }

    #[test]
    fn erasures_of_typed_terms_are_curry_typable(sort in 0u8..3, seed in any::<u64>()) {
        let sort = sort_of(sort);
        let (_, m, _) = typed_term(sort, 10, seed);
        let (church, ty) = curry_type(&m.erase(), &Type::atom("A")).expect("typable");
        let sys = CorpusSpec::exhaustive(sort, 1).system();
        prop_assert!(typecheck(&Context::new(), &church, &ty, sys, None).is_ok());
    }

    #[test]
    fn diamond_commutes_with_substitution(seed in any::<u64>()) {
        let mut g = generator(Sort::LambdaMu, 8, seed);
        let (ctx, f, _) = g.closed_term();
        let Term::Lam(x, Some(b), body) = &f else { return Ok(()) };
        let Some(n) = g.term(&ctx, b, 5) else { return Ok(()) };
        let m = subst(body, x, &n);
        let env = TranslationEnv::for_terms(&ctx, [body.as_ref(), &n, &m]);
        let lhs = diamond(&m, &env).unwrap();
        let rhs = subst(&diamond(body, &env).unwrap(), x, &diamond(&n, &env).unwrap());
        prop_assert!(alpha_eq(&lhs, &rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn circle_commutes_with_substitution(m in arb_term(), n in arb_term()) {
        let x = TermVar::new("x");
        let lhs = circle(&subst(&m, &x, &n));
        let rhs = subst(&circle(&m), &x, &circle(&n));
        prop_assert!(alpha_eq(&lhs, &rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn congruence_is_an_equivalence_containing_unfolding(a in arb_type(), b in arb_type()) {
        let eqs = EquationSet::parse("X = A /\\ (B -> X)").unwrap();
        prop_assert!(eqs.congruent(&a, &a));
        prop_assert_eq!(eqs.congruent(&a, &b), eqs.congruent(&b, &a));
        let unfolded = Type::and(Type::atom("A"), Type::arrow(Type::atom("B"), Type::atom("X")));
        prop_assert!(eqs.congruent(&Type::arrow(a.clone(), Type::atom("X")), &Type::arrow(a.clone(), unfolded)));
        prop_assert!(eqs.congruent(eqs.whnf(&a), &a));
    }
}
