//! Seeded random universes, formulas and hereditarily finite sets.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::env::Environment;
use crate::error::{Error, Result};
use crate::formula::{Formula, Term};
use crate::lattice::Projection;
use crate::linalg::{dot, orthogonal_complement, rat, Vector};
use crate::universe::{HFSet, QSet, QUniverse};

pub const MAX_GEN_RANK: usize = 3;
pub const MAX_GEN_BRANCH: usize = 3;

/// Named constants bound in every generated environment.
pub const GENERATED_SETS: usize = 3;

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// How the projections of a generated universe relate to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolKind {
    /// Independent random rational subspaces.
    Random,
    /// Spans of subsets of one orthogonal basis; everything commutes.
    Boolean,
    /// Random inside a hidden subspace `E`, Boolean on `E⊥`. The commutator
    /// of such a pool dominates `E⊥`.
    Block,
}

impl fmt::Display for PoolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoolKind::Random => "random",
            PoolKind::Boolean => "boolean",
            PoolKind::Block => "block",
        })
    }
}

fn random_vector(rng: &mut impl Rng, dim: usize) -> Vector {
    loop {
        let v: Vector = (0..dim).map(|_| rat(rng.gen_range(-2..=2))).collect();
        if v.iter().any(|x| *x != rat(0)) {
            return v;
        }
    }
}

fn combination(rng: &mut impl Rng, basis: &[Vector], dim: usize) -> Vector {
    let mut v = vec![rat(0); dim];
    for b in basis {
        let c = rat(rng.gen_range(-2..=2));
        for (x, y) in v.iter_mut().zip(b) {
            *x += &c * y;
        }
    }
    v
}

/// Unnormalized Gram–Schmidt; stays rational. Dependent inputs are dropped.
pub fn orthogonalize(vectors: &[Vector]) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for b in &out {
            let c = dot(&w, b) / dot(b, b);
            for (x, y) in w.iter_mut().zip(b) {
                *x -= &c * y;
            }
        }
        if w.iter().any(|x| *x != rat(0)) {
            out.push(w);
        }
    }
    out
}

/// A random subspace with small integer spanning vectors.
pub fn random_projection(rng: &mut impl Rng, dim: usize) -> Projection {
    let k = rng.gen_range(0..=dim);
    let vs = (0..k).map(|_| random_vector(rng, dim)).collect();
    Projection::from_span(vs, dim).expect("generated vectors have the ambient length")
}

/// A random subspace that is neither 0 nor the whole space (for `dim ≥ 2`).
pub fn random_proper_projection(rng: &mut impl Rng, dim: usize) -> Projection {
    if dim < 2 {
        return random_projection(rng, dim);
    }
    loop {
        let k = rng.gen_range(1..dim);
        let vs = (0..k).map(|_| random_vector(rng, dim)).collect();
        let p = Projection::from_span(vs, dim).expect("ambient length");
        if !p.is_one() {
            return p;
        }
    }
}

/// A random orthogonal basis of the whole space.
pub fn random_orthogonal_basis(rng: &mut impl Rng, dim: usize) -> Vec<Vector> {
    loop {
        let vs: Vec<Vector> = (0..dim).map(|_| random_vector(rng, dim)).collect();
        let basis = orthogonalize(&vs);
        if basis.len() == dim {
            return basis;
        }
    }
}

fn subset_span(rng: &mut impl Rng, basis: &[Vector]) -> Vec<Vector> {
    basis
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect()
}

/// A subset of `basis` that is neither empty nor everything, when possible.
fn proper_subset_span(rng: &mut impl Rng, basis: &[Vector]) -> Vec<Vector> {
    loop {
        let vs = subset_span(rng, basis);
        if basis.len() < 2 || (!vs.is_empty() && vs.len() < basis.len()) {
            return vs;
        }
    }
}

pub fn projection_pool(
    rng: &mut impl Rng,
    dim: usize,
    size: usize,
    kind: PoolKind,
) -> Vec<Projection> {
    let span = |vs: Vec<Vector>| Projection::from_span(vs, dim).expect("ambient length");
    match kind {
        PoolKind::Random => (0..size)
            .map(|_| random_proper_projection(rng, dim))
            .collect(),
        PoolKind::Boolean => {
            let basis = random_orthogonal_basis(rng, dim);
            (0..size)
                .map(|_| span(proper_subset_span(rng, &basis)))
                .collect()
        }
        PoolKind::Block => {
            let e = span(
                (0..rng.gen_range(1..=dim))
                    .map(|_| random_vector(rng, dim))
                    .collect(),
            );
            let inside = e.basis().to_vec();
            let outside = orthogonalize(&orthogonal_complement(&inside, dim));
            (0..size)
                .map(|_| {
                    let mut vs: Vec<Vector> = (0..rng.gen_range(0..=inside.len()))
                        .map(|_| combination(rng, &inside, dim))
                        .collect();
                    vs.extend(subset_span(rng, &outside));
                    span(vs)
                })
                .collect()
        }
    }
}

/// A generated test universe: an environment binding `p0…` to the pool and
/// `u0…` to the quantum sets in `sets`.
pub struct GeneratedUniverse {
    pub env: Environment,
    pub kind: PoolKind,
    pub pool: Vec<Projection>,
    pub sets: Vec<QSet>,
}

impl GeneratedUniverse {
    pub fn names(&self) -> Vec<String> {
        (0..self.sets.len()).map(|i| format!("u{i}")).collect()
    }
}

fn check_caps(dim: usize, max_rank: usize, max_branch: usize) -> Result<()> {
    if dim == 0 || dim > crate::MAX_DIMENSION {
        return Err(Error::DimensionTooLarge(dim));
    }
    if max_rank > MAX_GEN_RANK || max_branch > MAX_GEN_BRANCH || max_branch == 0 {
        return Err(Error::GeneratorCaps(format!(
            "rank {max_rank} (max {MAX_GEN_RANK}), branch {max_branch} (1..={MAX_GEN_BRANCH})"
        )));
    }
    Ok(())
}

/// Deterministic pseudo-random universe; the pool kind is drawn from the seed.
pub fn universe_generate(
    seed: u64,
    dim: usize,
    max_rank: usize,
    max_branch: usize,
) -> Result<GeneratedUniverse> {
    let mut rng = rng_for(seed);
    let kind = match rng.gen_range(0..10) {
        0..=4 => PoolKind::Random,
        5..=7 => PoolKind::Block,
        _ => PoolKind::Boolean,
    };
    universe_generate_with(&mut rng, dim, max_rank, max_branch, kind)
}

pub fn universe_generate_with(
    rng: &mut impl Rng,
    dim: usize,
    max_rank: usize,
    max_branch: usize,
    kind: PoolKind,
) -> Result<GeneratedUniverse> {
    check_caps(dim, max_rank, max_branch)?;
    let universe = Arc::new(QUniverse::new(dim)?);
    let mut env = Environment::with_universe(universe.clone());
    let pool_size = rng.gen_range(2..=4);
    let pool = projection_pool(rng, dim, pool_size, kind);
    for (i, p) in pool.iter().enumerate() {
        env.add_projection(&format!("p{i}"), p.clone())?;
    }
    let one = Projection::one(dim);
    let zero = Projection::zero(dim);

    let mut levels: Vec<Vec<QSet>> = vec![vec![universe.empty_set()]];
    for rank in 1..=max_rank {
        let below: Vec<QSet> = levels.iter().flatten().cloned().collect();
        let mut level = Vec::new();
        for _ in 0..3 {
            let top = levels[rank - 1].choose(rng).expect("levels are nonempty");
            let mut keys = vec![top.clone()];
            for _ in 1..rng.gen_range(1..=max_branch) {
                let k = below.choose(rng).expect("nonempty");
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
            let entries = keys
                .into_iter()
                .map(|k| {
                    let v = match rng.gen_range(0..10) {
                        0 => zero.clone(),
                        1 | 2 => one.clone(),
                        _ => pool.choose(rng).expect("pool is nonempty").clone(),
                    };
                    (k, v)
                })
                .collect();
            level.push(universe.make_qset(entries)?);
        }
        levels.push(level);
    }

    let candidates: Vec<QSet> = if max_rank == 0 {
        levels[0].clone()
    } else {
        levels[1..].iter().flatten().cloned().collect()
    };
    let sets: Vec<QSet> = (0..GENERATED_SETS)
        .map(|_| candidates.choose(rng).expect("nonempty").clone())
        .collect();
    for (i, u) in sets.iter().enumerate() {
        env.add_qset(&format!("u{i}"), u.clone())?;
    }
    Ok(GeneratedUniverse {
        env,
        kind,
        pool,
        sets,
    })
}

/// Shape limits for [`random_formula`].
#[derive(Debug, Clone, Copy)]
pub struct FormulaShape {
    pub depth: usize,
    pub quantifiers: usize,
    /// Allow `|`, `<->` and `E x in t`.
    pub derived: bool,
}

impl Default for FormulaShape {
    fn default() -> Self {
        FormulaShape {
            depth: 3,
            quantifiers: 2,
            derived: true,
        }
    }
}

/// A random Δ0 formula over `constants` with `free` variables in scope.
pub fn random_formula(
    rng: &mut impl Rng,
    constants: &[String],
    free: &[String],
    shape: FormulaShape,
) -> Formula {
    let mut scope = free.to_vec();
    gen_formula(
        rng,
        constants,
        &mut scope,
        shape.depth,
        shape.quantifiers,
        shape,
    )
}

fn gen_term(rng: &mut impl Rng, constants: &[String], scope: &[String]) -> Term {
    let n = constants.len() + scope.len();
    let i = rng.gen_range(0..n);
    if i < scope.len() {
        // Innermost variables are the interesting ones; bias towards them.
        let j = if rng.gen_bool(0.5) {
            scope.len() - 1
        } else {
            i
        };
        Term::Var(scope[j].clone())
    } else {
        Term::Const(constants[i - scope.len()].clone())
    }
}

fn gen_formula(
    rng: &mut impl Rng,
    constants: &[String],
    scope: &mut Vec<String>,
    depth: usize,
    quantifiers: usize,
    shape: FormulaShape,
) -> Formula {
    let atom = depth == 0 || rng.gen_range(0..4) == 0;
    if atom {
        let a = gen_term(rng, constants, scope);
        let b = gen_term(rng, constants, scope);
        return if rng.gen_bool(0.5) {
            Formula::Member(a, b)
        } else {
            Formula::Equal(a, b)
        };
    }
    let choices: &[u8] = match (quantifiers > 0, shape.derived) {
        (true, true) => &[0, 1, 2, 3, 4, 5, 6, 6, 7, 7],
        (true, false) => &[0, 1, 2, 6, 6],
        (false, true) => &[0, 1, 2, 3, 4],
        (false, false) => &[0, 1, 2],
    };
    let sub = |rng: &mut _, scope: &mut Vec<String>, q| {
        gen_formula(rng, constants, scope, depth - 1, q, shape)
    };
    match *choices.choose(rng).expect("nonempty") {
        0 => Formula::not(sub(rng, scope, quantifiers)),
        1 => Formula::and(sub(rng, scope, quantifiers), sub(rng, scope, quantifiers)),
        2 => Formula::implies(sub(rng, scope, quantifiers), sub(rng, scope, quantifiers)),
        3 => Formula::or(sub(rng, scope, quantifiers), sub(rng, scope, quantifiers)),
        4 => Formula::iff(sub(rng, scope, quantifiers), sub(rng, scope, quantifiers)),
        k => {
            let bound = gen_term(rng, constants, scope);
            let var = format!("x{}", scope.len());
            scope.push(var.clone());
            let body = sub(rng, scope, quantifiers - 1);
            scope.pop();
            if k == 6 {
                Formula::forall_in(&var, bound, body)
            } else {
                Formula::exists_in(&var, bound, body)
            }
        }
    }
}

/// A uniformly random hereditarily finite set of rank at most `max_rank`
/// (`max_rank ≤ 4`).
pub fn random_hfset(rng: &mut impl Rng, max_rank: usize) -> HFSet {
    assert!(max_rank <= 4, "HF rank cap is 4");
    // |V_r| for r = 0..=4 is 0, 1, 2, 4, 16: V_{r} has exactly those codes.
    let size: u64 = match max_rank {
        0 => 1,
        1 => 2,
        2 => 4,
        3 => 16,
        _ => 65536,
    };
    HFSet::from_ackermann(rng.gen_range(0..size))
}
