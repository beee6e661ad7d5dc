use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{run_suite, Case, SuiteConfig, SuiteReport};
use crate::classical::eval_classical;
use crate::commutator::{commutant_sample, in_generated_logic};
use crate::corpus::builtin_corpus;
use crate::env::{counterexample_environment, Environment};
use crate::error::Result;
use crate::eval::{Evaluator, SemanticsMode};
use crate::formula::{parse, Formula, Term};
use crate::generate::{random_formula, random_hfset, rng_for, universe_generate, FormulaShape};
use crate::lattice::{Conditional, Projection};
use crate::universe::{qset_commutator, support_many, QSet};

const MODES: [SemanticsMode; 2] = [SemanticsMode::Reformed, SemanticsMode::Takeuti];

/// The two sides of the De Morgan counterexample in both modes.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleValues {
    pub p: Projection,
    pub q: Projection,
    pub takeuti_exists: Projection,
    pub takeuti_not_forall: Projection,
    pub reformed_exists: Projection,
    pub reformed_not_forall: Projection,
}

impl CounterexampleValues {
    /// Takeuti: `⟦∃x∈u ¬φ⟧ = 0 < P = ⟦¬∀x∈u φ⟧`; Reformed: both sides `P`.
    pub fn reproduced(&self) -> bool {
        self.takeuti_exists.is_zero()
            && self.takeuti_not_forall == self.p
            && !self.p.is_zero()
            && self.reformed_exists == self.p
            && self.reformed_not_forall == self.p
    }
}

pub fn reproduce_counterexample() -> Result<CounterexampleValues> {
    let env = counterexample_environment();
    let exists = parse("E x in u . !!x in v")?;
    let not_forall = parse("!(A x in u . !x in v)")?;
    let side = |f: &Formula, m| Evaluator::new(&env, m).eval(f);
    Ok(CounterexampleValues {
        p: env.projection("P").expect("declared"),
        q: env.projection("Q").expect("declared"),
        takeuti_exists: side(&exists, SemanticsMode::Takeuti)?,
        takeuti_not_forall: side(&not_forall, SemanticsMode::Takeuti)?,
        reformed_exists: side(&exists, SemanticsMode::Reformed)?,
        reformed_not_forall: side(&not_forall, SemanticsMode::Reformed)?,
    })
}

struct Setup {
    env: Environment,
    sets: Vec<QSet>,
    names: Vec<String>,
    pool: Vec<Projection>,
    boolean: bool,
    rng: rand_chacha::ChaCha8Rng,
}

fn setup(c: &mut Case, cfg: &SuiteConfig) -> Result<Setup> {
    let mut rng = rng_for(c.seed);
    let dim = rng.gen_range(cfg.dim_min..=cfg.dim_max);
    let g = universe_generate(rng.gen(), dim, cfg.rank, cfg.branch)?;
    c.set_universe(&g.env);
    let names = g.names();
    Ok(Setup {
        boolean: g.kind == crate::generate::PoolKind::Boolean,
        env: g.env,
        sets: g.sets,
        pool: g.pool,
        names,
        rng,
    })
}

const BODY: FormulaShape = FormulaShape {
    depth: 2,
    quantifiers: 1,
    derived: true,
};

const CLOSED: FormulaShape = FormulaShape {
    depth: 3,
    quantifiers: 2,
    derived: true,
};

/// The four De Morgan identities, exact in Reformed mode. Takeuti-mode
/// failures of the quantifier laws are tallied, not failed.
pub fn suite_demorgan(cfg: &SuiteConfig) -> SuiteReport {
    let mut prelude = super::Case::new(usize::MAX, cfg.seed);
    match reproduce_counterexample() {
        Ok(v) => {
            prelude.count("counterexample_reproduced", v.reproduced() as u64);
            prelude.expect(
                "counterexample",
                None,
                v.reproduced(),
                "Takeuti 0 < P, Reformed P = P",
            );
        }
        Err(e) => prelude.fail("counterexample", None, "evaluation without error", e),
    }
    run_suite("demorgan", cfg, Some(prelude), |c| {
        let mut s = setup(c, cfg)?;
        let x = "x".to_string();
        let phi = random_formula(&mut s.rng, &s.names, std::slice::from_ref(&x), BODY);
        let psi = random_formula(&mut s.rng, &s.names, &[], BODY);
        let chi = random_formula(&mut s.rng, &s.names, &[], BODY);
        let u = Term::Const(s.names.choose(&mut s.rng).expect("named sets").clone());
        let not = Formula::not;
        let identities = [
            (
                "not-and",
                not(Formula::and(psi.clone(), chi.clone())),
                Formula::or(not(psi.clone()), not(chi.clone())),
            ),
            (
                "not-or",
                not(Formula::or(psi.clone(), chi.clone())),
                Formula::and(not(psi), not(chi)),
            ),
            (
                "not-forall",
                not(Formula::forall_in(&x, u.clone(), phi.clone())),
                Formula::exists_in(&x, u.clone(), not(phi.clone())),
            ),
            (
                "not-exists",
                not(Formula::exists_in(&x, u.clone(), phi.clone())),
                Formula::forall_in(&x, u, not(phi)),
            ),
        ];
        let mut reformed = Evaluator::new(&s.env, SemanticsMode::Reformed);
        let mut takeuti = Evaluator::new(&s.env, SemanticsMode::Takeuti);
        for (name, lhs, rhs) in &identities {
            let (l, r) = (reformed.eval(lhs)?, reformed.eval(rhs)?);
            c.expect_eq(&format!("{name}:reformed"), Some(lhs), &l, &r);
            let (tl, tr) = (takeuti.eval(lhs)?, takeuti.eval(rhs)?);
            if matches!(*name, "not-and" | "not-or") {
                c.expect_eq(&format!("{name}:takeuti"), Some(lhs), &tl, &tr);
            } else if tl != tr {
                c.count("takeuti_discrepancies", 1);
            }
            if s.boolean {
                c.expect_eq("boolean-agreement", Some(lhs), &l, &tl);
                c.expect_eq("boolean-agreement", Some(rhs), &r, &tr);
            }
        }
        if s.boolean {
            c.count("boolean_cases", 1);
        }
        Ok(())
    })
}

/// `⟦φ(u⃗)⟧ ∧ p = ⟦φ(u⃗|_p)⟧ ∧ p` for `p` in the commutant of the support,
/// plus the atomic strong form and commutation of `p` with both values.
pub fn suite_restriction(cfg: &SuiteConfig) -> SuiteReport {
    run_suite("restriction", cfg, None, |c| {
        let mut s = setup(c, cfg)?;
        let dim = s.env.dim();
        let universe = s.env.universe().clone();
        let support: Vec<Projection> = support_many(&s.sets).into_iter().collect();
        let p = match c.index % 10 {
            0 => Projection::one(dim),
            1 => Projection::zero(dim),
            2 => qset_commutator(&s.sets, dim)?,
            _ => commutant_sample(&support, dim, c.seed)?
                .choose(&mut s.rng)
                .expect("sample contains 0 and 1")
                .clone(),
        };
        if !p.is_zero() && !p.is_one() {
            c.count("proper_p", 1);
        }
        let phi = random_formula(&mut s.rng, &s.names, &[], CLOSED);
        let mut renv = Environment::with_universe(universe.clone());
        let mut restricted = Vec::new();
        for (name, u) in s.names.iter().zip(&s.sets) {
            let r = universe.restrict(u, &p)?;
            renv.add_qset(name, r.clone())?;
            restricted.push(r);
        }

        let mut ev = Evaluator::new(&s.env, SemanticsMode::Reformed);
        let mut rev = Evaluator::new(&renv, SemanticsMode::Reformed);
        let plain = ev.eval(&phi)?;
        let cut = rev.eval(&phi)?;
        c.expect_eq("restriction", Some(&phi), &plain.meet(&p), &cut.meet(&p));
        if p.is_one() {
            c.expect_eq("restriction-by-one", Some(&phi), &plain, &cut);
        }
        c.expect(
            "commutativity",
            Some(&phi),
            p.commutes(&plain) && p.commutes(&cut),
            "p commutes with both truth values",
        );

        // Atomic forms on the constants and their elements.
        let mut atoms: Vec<QSet> = s.sets.clone();
        for u in &s.sets {
            atoms.extend(u.domain().cloned());
        }
        atoms.sort();
        atoms.dedup();
        let cut_atoms: Vec<QSet> = atoms
            .iter()
            .map(|a| universe.restrict(a, &p))
            .collect::<Result<_>>()?;
        for (a, ar) in atoms.iter().zip(&cut_atoms) {
            for (b, br) in atoms.iter().zip(&cut_atoms) {
                let member = ev.member(a, b).meet(&p);
                c.expect_eq("atomic-member", None, &member, &rev.member(ar, br));
                let equal = ev.equal(a, b).meet(&p);
                c.expect_eq("atomic-equal", None, &equal, &rev.equal(ar, br).meet(&p));
            }
        }
        Ok(())
    })
}

/// Every corpus formula satisfies `⟦φ(u⃗)⟧ ≥ ⌣(u⃗)` on random bindings.
pub fn suite_transfer(cfg: &SuiteConfig) -> SuiteReport {
    let corpus = builtin_corpus();
    let mut prelude = super::Case::new(usize::MAX, cfg.seed);
    match equality_axiom_witness() {
        Ok((value, com)) => {
            prelude.expect(
                "witness",
                None,
                com.leq(&value),
                "witness value >= commutator",
            );
            prelude.expect("witness", None, !value.is_one(), "witness value below 1");
            if !value.is_one() {
                prelude.count("equality_axiom_below_one", 1);
            }
        }
        Err(e) => prelude.fail("witness", None, "evaluation without error", e),
    }
    run_suite("transfer", cfg, Some(prelude), |c| {
        let mut s = setup(c, cfg)?;
        let dim = s.env.dim();
        let mut pool: Vec<QSet> = s.sets.clone();
        for u in &s.sets {
            pool.extend(u.domain().cloned());
        }
        pool.extend((0..2).map(|n| s.env.universe().check_ordinal(n)));
        // Same keys, partly resampled values: these make equalities proper.
        for u in &s.sets {
            let entries = u
                .entries()
                .iter()
                .map(|(k, v)| {
                    let v = match s.rng.gen_range(0..3) {
                        0 => v.clone(),
                        1 => Projection::one(dim),
                        _ => s.pool.choose(&mut s.rng).expect("nonempty").clone(),
                    };
                    (k.clone(), v)
                })
                .collect();
            pool.push(s.env.universe().make_qset(entries)?);
        }
        let mut ev = Evaluator::new(&s.env, SemanticsMode::Reformed);
        let mut alternatives: Vec<(Conditional, Evaluator)> = if cfg.conditionals {
            [Conditional::Contrapositive, Conditional::Relevance]
                .into_iter()
                .map(|k| {
                    let e = Evaluator::new(&s.env, SemanticsMode::Reformed).with_conditional(k);
                    (k, e)
                })
                .collect()
        } else {
            Vec::new()
        };
        for entry in &corpus {
            let bound: Vec<(String, QSet)> = entry
                .constants
                .iter()
                .map(|n| {
                    (
                        n.clone(),
                        pool.choose(&mut s.rng).expect("nonempty").clone(),
                    )
                })
                .collect();
            let values: Vec<QSet> = bound.iter().map(|(_, u)| u.clone()).collect();
            let com = qset_commutator(&values, dim)?;
            let value = ev.eval_with(&entry.formula, &bound)?;
            c.count("evaluations", 1);
            c.expect(
                &format!("transfer:{}", entry.name),
                Some(&entry.formula),
                com.leq(&value),
                &format!("value {value} >= commutator {com}"),
            );
            if !value.is_one() {
                c.count("below_one", 1);
                if entry.is_equality_axiom() && !com.is_one() {
                    c.count("equality_axiom_below_one", 1);
                }
            }
            for (k, alt) in alternatives.iter_mut() {
                let v = alt.eval_with(&entry.formula, &bound)?;
                c.count(&format!("exploratory_{k}_violations"), !com.leq(&v) as u64);
            }
        }
        Ok(())
    })
}

/// `(u = v & w in u) -> w in v` with `u = {<0̌, P>}`, `v = 1̌`,
/// `w = {<0̌, Q>}` on the counterexample lines: the value is `P⊥ < 1`
/// while the commutator is 0. Returns `(value, commutator)`.
pub fn equality_axiom_witness() -> Result<(Projection, Projection)> {
    let env = counterexample_environment();
    let f = parse("(u = v & w in u) -> w in v")?;
    let bound: Vec<(String, QSet)> = [("u", "u"), ("v", "check:1"), ("w", "v")]
        .iter()
        .map(|(n, m)| (n.to_string(), env.qset(m).expect("declared")))
        .collect();
    let values: Vec<QSet> = bound.iter().map(|(_, u)| u.clone()).collect();
    let value = Evaluator::new(&env, SemanticsMode::Reformed).eval_with(&f, &bound)?;
    Ok((value, qset_commutator(&values, env.dim())?))
}

/// Classical truth over HF sets coincides with quantum truth value 1 on
/// checks, and values on checks are 0 or 1.
pub fn suite_elementary_equivalence(cfg: &SuiteConfig) -> SuiteReport {
    run_suite("eqv", cfg, None, |c| {
        let mut rng = rng_for(c.seed);
        let mut env = Environment::new(cfg.dim_min)?;
        let mut bindings = HashMap::new();
        let mut names = Vec::new();
        for i in 0..3 {
            let name = format!("c{i}");
            let a = random_hfset(&mut rng, cfg.hf_rank);
            env.add_qset(&name, env.universe().check_embed(&a))?;
            bindings.insert(name.clone(), a);
            names.push(name);
        }
        names.extend((0..3).map(|n| format!("check:{n}")));
        let phi = random_formula(&mut rng, &names, &[], CLOSED);
        let truth = eval_classical(&phi, &bindings, &[])?;
        for mode in MODES {
            let value = Evaluator::new(&env, mode).eval(&phi)?;
            c.expect(
                &format!("two-valued:{mode}"),
                Some(&phi),
                value.is_zero() || value.is_one(),
                "value is 0 or 1",
            );
            c.expect_eq(
                &format!("agreement:{mode}"),
                Some(&phi),
                &truth,
                &value.is_one(),
            );
        }
        if truth {
            c.count("classically_true", 1);
        }
        let us: Vec<QSet> = (0..3)
            .map(|i| env.qset(&format!("c{i}")).expect("bound"))
            .collect();
        let mut ev = Evaluator::new(&env, SemanticsMode::Reformed);
        for (i, a) in us.iter().enumerate() {
            for (j, b) in us.iter().enumerate() {
                let same = bindings[&format!("c{i}")] == bindings[&format!("c{j}")];
                let expected = if same {
                    Projection::one(env.dim())
                } else {
                    Projection::zero(env.dim())
                };
                c.expect_eq("check-equality", None, &expected, &ev.equal(a, b));
            }
        }
        Ok(())
    })
}

/// Truth values lie in the logic generated by the support of their
/// constants.
pub fn suite_range(cfg: &SuiteConfig) -> SuiteReport {
    run_suite("range", cfg, None, |c| {
        let mut s = setup(c, cfg)?;
        let support: Vec<Projection> = support_many(&s.sets).into_iter().collect();
        let phi = random_formula(&mut s.rng, &s.names, &[], CLOSED);
        for mode in MODES {
            let value = Evaluator::new(&s.env, mode).eval(&phi)?;
            if !value.is_zero() && !value.is_one() {
                c.count("proper_values", 1);
            }
            c.expect(
                &format!("range:{mode}"),
                Some(&phi),
                in_generated_logic(&value, &support)?,
                &format!("{value} in the logic generated by the support"),
            );
        }
        Ok(())
    })
}
