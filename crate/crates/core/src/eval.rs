//! Q-valued truth values of closed Δ0 formulas.
//!
//! Atomic values follow the mutual recursion
//!
//! ```text
//! ⟦u = v⟧ = ⋀_{u'∈dom u} (u(u') → ⟦u' ∈ v⟧) ∧ ⋀_{v'∈dom v} (v(v') → ⟦v' ∈ u⟧)
//! ⟦u ∈ v⟧ = ⋁_{v'∈dom v} (v(v') ⊙ ⟦u = v'⟧)
//! ```
//!
//! where `⊙` is the Sasaki projection `*` under [`SemanticsMode::Reformed`]
//! and plain meet `∧` under [`SemanticsMode::Takeuti`]. Bounded existential
//! quantifiers use the same `⊙`. Each call strictly lowers the pair of ranks,
//! so the recursion terminates; results are memoized per node pair.

use std::collections::HashMap;
use std::fmt;

use crate::env::Environment;
use crate::error::{Error, Result};
use crate::formula::{desugar, Formula, Term};
use crate::lattice::{Conditional, Projection};
use crate::universe::QSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SemanticsMode {
    /// Membership and `∃x∈u` via the Sasaki projection; De Morgan holds.
    #[default]
    Reformed,
    /// Membership and `∃x∈u` via meet.
    Takeuti,
}

impl SemanticsMode {
    /// `a ⊙ b` for this mode.
    pub fn and_then(self, a: &Projection, b: &Projection) -> Projection {
        match self {
            SemanticsMode::Reformed => a.sasaki_star(b),
            SemanticsMode::Takeuti => a.meet(b),
        }
    }
}

impl fmt::Display for SemanticsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SemanticsMode::Reformed => "reformed",
            SemanticsMode::Takeuti => "takeuti",
        })
    }
}

impl std::str::FromStr for SemanticsMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "reformed" => Ok(SemanticsMode::Reformed),
            "takeuti" => Ok(SemanticsMode::Takeuti),
            other => Err(format!("unknown semantics `{other}`")),
        }
    }
}

/// Evaluates formulas over one environment in one mode.
///
/// Each evaluator owns its memo tables; independent evaluators may run in
/// parallel over a shared environment.
pub struct Evaluator<'e> {
    env: &'e Environment,
    mode: SemanticsMode,
    conditional: Conditional,
    memoize: bool,
    equal_memo: HashMap<(u64, u64), Projection>,
    member_memo: HashMap<(u64, u64), Projection>,
}

impl<'e> Evaluator<'e> {
    pub fn new(env: &'e Environment, mode: SemanticsMode) -> Self {
        Evaluator {
            env,
            mode,
            conditional: Conditional::Sasaki,
            memoize: true,
            equal_memo: HashMap::new(),
            member_memo: HashMap::new(),
        }
    }

    /// Disables memoization (used to check the memo tables are sound).
    pub fn without_memo(mut self) -> Self {
        self.memoize = false;
        self
    }

    /// Replaces the Sasaki arrow by another conditional throughout: in
    /// `=`, `→`, `∀x∈u`, and in `*` via `P*Q = (P → Q⊥)⊥`.
    pub fn with_conditional(mut self, c: Conditional) -> Self {
        self.conditional = c;
        self
    }

    pub fn mode(&self) -> SemanticsMode {
        self.mode
    }

    fn arrow(&self, a: &Projection, b: &Projection) -> Projection {
        self.conditional.apply(a, b)
    }

    fn and_then(&self, a: &Projection, b: &Projection) -> Projection {
        match (self.mode, self.conditional) {
            (SemanticsMode::Reformed, c) if c != Conditional::Sasaki => {
                self.arrow(a, &b.ortho()).ortho()
            }
            (mode, _) => mode.and_then(a, b),
        }
    }

    /// `⟦u = v⟧`.
    pub fn equal(&mut self, u: &QSet, v: &QSet) -> Projection {
        let dim = u.dim();
        if u == v && self.conditional == Conditional::Sasaki && self.memoize {
            // ⟦u = u⟧ = 1 by induction; the memo-free path still recomputes it.
            return Projection::one(dim);
        }
        let key = if u.id() <= v.id() {
            (u.id(), v.id())
        } else {
            (v.id(), u.id())
        };
        if self.memoize {
            if let Some(p) = self.equal_memo.get(&key) {
                return p.clone();
            }
        }
        let mut acc = Projection::one(dim);
        'sides: for (a, b) in [(u, v), (v, u)] {
            for (a_prime, value) in a.entries() {
                if value.is_zero() {
                    continue;
                }
                let member = self.member(a_prime, b);
                acc = acc.meet(&self.arrow(value, &member));
                if acc.is_zero() {
                    break 'sides;
                }
            }
        }
        let acc = self.env.universe().logic().intern(acc);
        if self.memoize {
            self.equal_memo.insert(key, acc.clone());
        }
        acc
    }

    /// `⟦u ∈ v⟧`.
    pub fn member(&mut self, u: &QSet, v: &QSet) -> Projection {
        let key = (u.id(), v.id());
        if self.memoize {
            if let Some(p) = self.member_memo.get(&key) {
                return p.clone();
            }
        }
        let mut acc = Projection::zero(u.dim());
        for (v_prime, value) in v.entries() {
            if value.is_zero() {
                continue;
            }
            let eq = self.equal(u, v_prime);
            acc = acc.join(&self.and_then(value, &eq));
            if acc.is_one() {
                break;
            }
        }
        let acc = self.env.universe().logic().intern(acc);
        if self.memoize {
            self.member_memo.insert(key, acc.clone());
        }
        acc
    }

    /// Evaluates a closed Δ0 formula whose constants name quantum sets in the
    /// environment (or `check:n`).
    pub fn eval(&mut self, f: &Formula) -> Result<Projection> {
        self.eval_with(f, &[])
    }

    /// Like [`Evaluator::eval`], with extra name bindings that take
    /// precedence over the environment.
    pub fn eval_with(&mut self, f: &Formula, bindings: &[(String, QSet)]) -> Result<Projection> {
        if let Some(x) = f.first_unbounded() {
            return Err(Error::NotDelta0(x.to_string()));
        }
        let env = self.env;
        f.check_bindings(&|name| {
            bindings.iter().any(|(n, _)| n == name) || env.qset(name).is_some()
        })?;
        let mut scope: Vec<(String, QSet)> = bindings.to_vec();
        let scope_base = scope.len();
        let r = self.eval_rec(f, &mut scope, scope_base)?;
        Ok(self.env.universe().logic().intern(r))
    }

    fn resolve(&self, t: &Term, scope: &[(String, QSet)], base: usize) -> Result<QSet> {
        match t {
            Term::Var(x) => scope[base..]
                .iter()
                .rev()
                .find(|(n, _)| n == x)
                .map(|(_, u)| u.clone())
                .ok_or_else(|| Error::UnboundVariable(x.clone())),
            Term::Const(c) => scope[..base]
                .iter()
                .find(|(n, _)| n == c)
                .map(|(_, u)| u.clone())
                .or_else(|| self.env.qset(c))
                .ok_or_else(|| Error::UnknownConstant(c.clone())),
        }
    }

    fn eval_rec(
        &mut self,
        f: &Formula,
        scope: &mut Vec<(String, QSet)>,
        base: usize,
    ) -> Result<Projection> {
        let dim = self.env.dim();
        Ok(match f {
            Formula::Member(a, b) => {
                let (a, b) = (self.resolve(a, scope, base)?, self.resolve(b, scope, base)?);
                self.member(&a, &b)
            }
            Formula::Equal(a, b) => {
                let (a, b) = (self.resolve(a, scope, base)?, self.resolve(b, scope, base)?);
                self.equal(&a, &b)
            }
            Formula::Not(g) => self.eval_rec(g, scope, base)?.ortho(),
            Formula::And(a, b) => {
                let a = self.eval_rec(a, scope, base)?;
                a.meet(&self.eval_rec(b, scope, base)?)
            }
            Formula::Or(a, b) => {
                let a = self.eval_rec(a, scope, base)?;
                a.join(&self.eval_rec(b, scope, base)?)
            }
            Formula::Implies(a, b) => {
                let a = self.eval_rec(a, scope, base)?;
                let b = self.eval_rec(b, scope, base)?;
                self.arrow(&a, &b)
            }
            Formula::Iff(a, b) => {
                let a = self.eval_rec(a, scope, base)?;
                let b = self.eval_rec(b, scope, base)?;
                self.arrow(&a, &b).meet(&self.arrow(&b, &a))
            }
            Formula::ForAllIn(x, t, body) => {
                let bound = self.resolve(t, scope, base)?;
                let mut acc = Projection::one(dim);
                for (elem, value) in bound.entries() {
                    if value.is_zero() {
                        continue;
                    }
                    scope.push((x.clone(), elem.clone()));
                    let inner = self.eval_rec(body, scope, base);
                    scope.pop();
                    acc = acc.meet(&self.arrow(value, &inner?));
                    if acc.is_zero() {
                        break;
                    }
                }
                acc
            }
            Formula::ExistsIn(x, t, body) => {
                let bound = self.resolve(t, scope, base)?;
                let mut acc = Projection::zero(dim);
                for (elem, value) in bound.entries() {
                    if value.is_zero() {
                        continue;
                    }
                    scope.push((x.clone(), elem.clone()));
                    let inner = self.eval_rec(body, scope, base);
                    scope.pop();
                    acc = acc.join(&self.and_then(value, &inner?));
                    if acc.is_one() {
                        break;
                    }
                }
                acc
            }
            Formula::ForAll(x, _) | Formula::Exists(x, _) => {
                return Err(Error::NotDelta0(x.clone()))
            }
        })
    }
}

/// `⟦f⟧` in the given mode, with a fresh evaluator.
pub fn eval(f: &Formula, env: &Environment, mode: SemanticsMode) -> Result<Projection> {
    Evaluator::new(env, mode).eval(f)
}

/// `⟦f⟧` after rewriting derived connectives into `¬ ∧ → ∀∈`. Only
/// meaningful for [`SemanticsMode::Reformed`], where it must agree with
/// [`eval`].
pub fn eval_desugared(f: &Formula, env: &Environment, mode: SemanticsMode) -> Result<Projection> {
    Evaluator::new(env, mode).eval(&desugar(f))
}

/// `⟦u = v⟧` with a fresh evaluator.
pub fn eval_equal(env: &Environment, u: &QSet, v: &QSet, mode: SemanticsMode) -> Projection {
    Evaluator::new(env, mode).equal(u, v)
}

/// `⟦u ∈ v⟧` with a fresh evaluator.
pub fn eval_member(env: &Environment, u: &QSet, v: &QSet, mode: SemanticsMode) -> Projection {
    Evaluator::new(env, mode).member(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::counterexample_environment;
    use crate::formula::parse;

    const MODES: [SemanticsMode; 2] = [SemanticsMode::Reformed, SemanticsMode::Takeuti];

    #[test]
    fn empty_sets_are_equal() {
        let env = Environment::new(2).unwrap();
        let e = env.qset("check:0").unwrap();
        for m in MODES {
            assert!(eval_equal(&env, &e, &e, m).is_one());
        }
    }

    #[test]
    fn one_is_not_zero() {
        let env = Environment::new(2).unwrap();
        let c0 = env.qset("check:0").unwrap();
        let c1 = env.qset("check:1").unwrap();
        for m in MODES {
            assert!(eval_equal(&env, &c1, &c0, m).is_zero());
            assert!(eval_member(&env, &c0, &c1, m).is_one());
            assert!(eval_member(&env, &c1, &c0, m).is_zero());
        }
    }

    #[test]
    fn single_entry_membership() {
        let env = counterexample_environment();
        let q = env.projection("Q").unwrap();
        let c0 = env.qset("check:0").unwrap();
        let v = env.qset("v").unwrap();
        for m in MODES {
            assert_eq!(eval_member(&env, &c0, &v, m), q);
        }
    }

    #[test]
    fn self_equality_is_one_without_memo() {
        let env = counterexample_environment();
        for name in ["u", "v", "check:3"] {
            let u = env.qset(name).unwrap();
            let mut ev = Evaluator::new(&env, SemanticsMode::Reformed).without_memo();
            assert!(ev.equal(&u, &u).is_one(), "{name}");
        }
    }

    #[test]
    fn counterexample_values() {
        let env = counterexample_environment();
        let p = env.projection("P").unwrap();
        let exists = parse("E x in u . !!x in v").unwrap();
        let not_forall = parse("!(A x in u . !x in v)").unwrap();

        let t = SemanticsMode::Takeuti;
        assert!(eval(&exists, &env, t).unwrap().is_zero());
        assert_eq!(eval(&not_forall, &env, t).unwrap(), p);

        let r = SemanticsMode::Reformed;
        assert_eq!(eval(&exists, &env, r).unwrap(), p);
        assert_eq!(eval(&not_forall, &env, r).unwrap(), p);
    }

    #[test]
    fn empty_bounded_forall_is_one() {
        let env = counterexample_environment();
        let f = parse("A x in check:0 . x in x").unwrap();
        for m in MODES {
            assert!(eval(&f, &env, m).unwrap().is_one());
        }
    }

    #[test]
    fn rejects_bad_formulas() {
        let env = counterexample_environment();
        let r = SemanticsMode::Reformed;
        assert_eq!(
            eval(&parse("A x . x = x").unwrap(), &env, r),
            Err(Error::NotDelta0("x".into()))
        );
        assert_eq!(
            eval(&parse("w = w").unwrap(), &env, r),
            Err(Error::UnknownConstant("w".into()))
        );
        let loose = Formula::Member(Term::Var("y".into()), Term::Const("u".into()));
        assert_eq!(
            eval(&loose, &env, r),
            Err(Error::UnboundVariable("y".into()))
        );
    }

    #[test]
    fn bindings_shadow_environment() {
        let env = counterexample_environment();
        let c1 = env.qset("check:1").unwrap();
        let f = parse("check:0 in u").unwrap();
        let mut ev = Evaluator::new(&env, SemanticsMode::Reformed);
        assert_eq!(ev.eval(&f).unwrap(), env.projection("P").unwrap());
        assert!(ev.eval_with(&f, &[("u".to_string(), c1)]).unwrap().is_one());
    }

    #[test]
    fn mode_names_roundtrip() {
        for m in MODES {
            assert_eq!(m.to_string().parse::<SemanticsMode>().unwrap(), m);
        }
        assert!("classical".parse::<SemanticsMode>().is_err());
    }
}
