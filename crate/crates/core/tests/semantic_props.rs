use std::collections::{HashMap, HashSet};

use proptest::prelude::*;
use qsets::classical::eval_classical;
use qsets::eval::{eval_desugared, eval_equal, eval_member};
use qsets::formula::desugar;
use qsets::generate::{
    random_formula, random_hfset, rng_for, universe_generate, FormulaShape, GeneratedUniverse,
};
use qsets::universe::{qset_commutator, support_many};
use qsets::{
    eval, parse, Environment, Evaluator, Formula, HFSet, Projection, QUniverse, SemanticsMode, Term,
};

const SHAPE: FormulaShape = FormulaShape {
    depth: 3,
    quantifiers: 2,
    derived: true,
};

fn generated(seed: u64) -> GeneratedUniverse {
    let dim = 2 + (seed % 3) as usize;
    universe_generate(seed, dim, 2, 3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_roundtrip(seed in any::<u64>()) {
        let g = generated(seed);
        let mut rng = rng_for(seed ^ 0x5eed);
        let f = random_formula(&mut rng, &g.names(), &[], SHAPE);
        let text = f.to_string();
        prop_assert_eq!(parse(&text).unwrap(), f.clone());
        prop_assert!(f.is_delta0());
        let d = desugar(&f);
        prop_assert!(d.is_primitive());
        prop_assert_eq!(desugar(&d), d);
    }

    #[test]
    fn identity_clauses(seed in any::<u64>()) {
        let g = generated(seed);
        let env = &g.env;
        let mut ev = Evaluator::new(env, SemanticsMode::Reformed);
        for (a, u) in g.names().iter().zip(&g.sets) {
            for (b, v) in g.names().iter().zip(&g.sets) {
                let ext = parse(&format!("(A x in {a} . x in {b}) & (A x in {b} . x in {a})")).unwrap();
                prop_assert_eq!(ev.equal(u, v), ev.eval(&ext).unwrap());
                let wit = parse(&format!("E x in {b} . x = {a}")).unwrap();
                prop_assert_eq!(ev.member(u, v), ev.eval(&wit).unwrap());
            }
        }
    }

    #[test]
    fn desugaring_preserves_values(seed in any::<u64>()) {
        let g = generated(seed);
        let mut rng = rng_for(seed.rotate_left(7));
        let f = random_formula(&mut rng, &g.names(), &[], SHAPE);
        // Takeuti's ∃ is not the dual of its ∀, so only Reformed qualifies.
        let mode = SemanticsMode::Reformed;
        prop_assert_eq!(eval(&f, &g.env, mode).unwrap(), eval_desugared(&f, &g.env, mode).unwrap());
    }

    #[test]
    fn memo_is_sound(seed in any::<u64>()) {
        let g = generated(seed);
        let mut rng = rng_for(seed.wrapping_add(1));
        let f = random_formula(&mut rng, &g.names(), &[], SHAPE);
        for mode in [SemanticsMode::Reformed, SemanticsMode::Takeuti] {
            let memo = Evaluator::new(&g.env, mode).eval(&f).unwrap();
            let plain = Evaluator::new(&g.env, mode).without_memo().eval(&f).unwrap();
            prop_assert_eq!(memo, plain);
        }
        for u in &g.sets {
            let mut fresh = Evaluator::new(&g.env, SemanticsMode::Reformed).without_memo();
            prop_assert!(fresh.equal(u, u).is_one());
        }
    }

    #[test]
    fn values_commute_with_the_support(seed in any::<u64>()) {
        let g = generated(seed);
        let dim = g.env.dim();
        let com = qset_commutator(&g.sets, dim).unwrap();
        let support: Vec<Projection> = support_many(&g.sets).into_iter().collect();
        let mut rng = rng_for(!seed);
        let f = random_formula(&mut rng, &g.names(), &[], SHAPE);
        let v = eval(&f, &g.env, SemanticsMode::Reformed).unwrap();
        prop_assert!(com.commutes(&v));
        for s in &support {
            prop_assert!(s.commutes(&com));
        }
    }

    #[test]
    fn restriction_keeps_values_below_p(seed in any::<u64>()) {
        let g = generated(seed);
        let universe = g.env.universe();
        let p = g.pool[0].clone();
        for u in &g.sets {
            let r = universe.restrict(u, &p).unwrap();
            // The tag entry ⟨u, 0⟩ adds one level.
            prop_assert_eq!(r.rank(), u.rank() + 1);
            for (_, v) in r.entries() {
                prop_assert!(v.leq(&p));
            }
            let again = universe.restrict(u, &p).unwrap();
            prop_assert_eq!(again.id(), r.id());
            let full = universe.restrict(u, &Projection::one(g.env.dim())).unwrap();
            prop_assert!(eval_equal(&g.env, &full, u, SemanticsMode::Reformed).is_one());
            let none = universe.restrict(u, &Projection::zero(g.env.dim())).unwrap();
            prop_assert!(eval_equal(&g.env, &none, &universe.empty_set(), SemanticsMode::Reformed).is_one());
        }
    }

    #[test]
    fn check_sets_are_two_valued_and_classical(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (random_hfset(&mut rng_for(a), 3), random_hfset(&mut rng_for(b), 3));
        let env = Environment::new(3).unwrap();
        let uni = env.universe();
        let (cx, cy) = (uni.check_embed(&x), uni.check_embed(&y));
        let m = eval_member(&env, &cx, &cy, SemanticsMode::Reformed);
        let e = eval_equal(&env, &cx, &cy, SemanticsMode::Takeuti);
        prop_assert_eq!(m.is_one(), y.contains(&x));
        prop_assert!(m.is_one() || m.is_zero());
        prop_assert_eq!(e.is_one(), x == y);
        prop_assert!(e.is_one() || e.is_zero());
        prop_assert_eq!(cx == cy, x == y);
    }
}

#[test]
fn boolean_universes_agree_across_modes() {
    let mut seen = 0;
    for seed in 0..400u64 {
        let g = generated(seed);
        if g.kind.to_string() != "boolean" {
            continue;
        }
        seen += 1;
        let mut rng = rng_for(seed);
        for _ in 0..4 {
            let f = random_formula(&mut rng, &g.names(), &[], SHAPE);
            let r = eval(&f, &g.env, SemanticsMode::Reformed).unwrap();
            let t = eval(&f, &g.env, SemanticsMode::Takeuti).unwrap();
            assert_eq!(r, t, "{f}");
        }
    }
    assert!(seen >= 20, "only {seen} boolean universes");
}

#[test]
fn interning_is_canonical() {
    let uni = QUniverse::new(2).unwrap();
    let p = Projection::from_int_span(&[&[1, 1]], 2).unwrap();
    let (a, b) = (uni.check_ordinal(0), uni.check_ordinal(1));
    let u = uni
        .make_qset(vec![
            (a.clone(), p.clone()),
            (b.clone(), Projection::one(2)),
        ])
        .unwrap();
    let v = uni
        .make_qset(vec![
            (b.clone(), Projection::one(2)),
            (a.clone(), p.clone()),
        ])
        .unwrap();
    assert_eq!(u.id(), v.id());
    assert_eq!(u.rank(), 2);
    let support: HashSet<Projection> = u.support().iter().cloned().collect();
    assert!(support.contains(&p));
    assert!(uni.make_qset(vec![(a.clone(), p.clone()), (a, p)]).is_err());
}

#[test]
fn check_embedding_is_injective_on_small_sets() {
    let uni = QUniverse::new(2).unwrap();
    let sets: Vec<HFSet> = (0..256u64).map(HFSet::from_ackermann).collect();
    let ids: HashSet<u64> = sets.iter().map(|s| uni.check_embed(s).id()).collect();
    assert_eq!(ids.len(), sets.len());
    for n in 0..6 {
        assert_eq!(uni.check_ordinal(n), uni.check_embed(&HFSet::ordinal(n)));
    }
}

#[test]
fn classical_and_quantum_agree_on_check_constants() {
    let env = Environment::new(2).unwrap();
    let domain: Vec<HFSet> = (0..16u64).map(HFSet::from_ackermann).collect();
    let text = "A x in check:3 . E y in check:3 . x in y | y = check:2";
    let f = parse(text).unwrap();
    let q = eval(&f, &env, SemanticsMode::Reformed).unwrap();
    let c = eval_classical(&f, &HashMap::new(), &domain).unwrap();
    assert_eq!(q.is_one(), c);
    assert!(q.is_one() || q.is_zero());
}

#[test]
fn bound_variables_shadow() {
    let env = qsets::env::counterexample_environment();
    let f = Formula::exists_in(
        "x",
        Term::Const("u".into()),
        Formula::exists_in(
            "x",
            Term::Var("x".into()),
            Formula::Equal(Term::Var("x".into()), Term::Var("x".into())),
        ),
    );
    // The only element of u is 0̌, which has no elements.
    assert!(eval(&f, &env, SemanticsMode::Reformed).unwrap().is_zero());
}
