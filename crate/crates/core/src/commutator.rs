//! Commutators of finite families of projections, the unital *-algebra a
//! family generates, and a sampler for its commutant.
//!
//! Three independent routes to `com(A)` live here:
//!
//! * [`commutator_finite`]: join over all sign patterns of the meets,
//!   `⋁_θ ⋀_{P∈A} P^θ(P)`;
//! * [`commutator_kernel`]: projection onto `⋂ ker([P1,P2]P3)` over ordered
//!   triples from `A`;
//! * [`commutator_algebra`]: projection onto `⋂ ker([X,Y])` over a basis of
//!   the algebra `A''`.
//!
//! They agree on every finite family; the test suites check this exactly.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::Projection;
use num_traits::Zero;

use crate::linalg::{kernel_basis, Matrix, Rational, SpanBuilder};

/// Largest family accepted by [`commutator_finite`] (it visits up to
/// `2^n` sign patterns).
pub const MAX_FINITE_COMMUTATOR: usize = 12;

fn distinct(family: &[Projection]) -> Vec<Projection> {
    family
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn common_dim(family: &[Projection]) -> Result<Option<usize>> {
    let Some(first) = family.first() else {
        return Ok(None);
    };
    let dim = first.dim();
    if let Some(p) = family.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch(dim, p.dim()));
    }
    Ok(Some(dim))
}

/// Bruns–Kalmbach commutator `com(F) = ⋁_{θ:F→{id,⊥}} ⋀_{P∈F} P^θ(P)`.
///
/// Duplicates are collapsed first. Sign patterns whose partial meet is
/// already 0 are pruned; they contribute nothing to the join.
pub fn commutator_finite(family: &[Projection]) -> Result<Projection> {
    let dim = common_dim(family)?.unwrap_or(0);
    let members = distinct(family);
    if members.len() > MAX_FINITE_COMMUTATOR {
        return Err(Error::CommutatorCap(members.len()));
    }
    if members.is_empty() {
        return Ok(Projection::one(dim));
    }
    let signed: Vec<[Projection; 2]> = members.iter().map(|p| [p.clone(), p.ortho()]).collect();
    let mut acc = Projection::zero(dim);
    sign_patterns(&signed, 0, Projection::one(dim), &mut acc);
    Ok(acc)
}

fn sign_patterns(
    signed: &[[Projection; 2]],
    depth: usize,
    partial: Projection,
    acc: &mut Projection,
) {
    if partial.is_zero() || partial.leq(acc) {
        return;
    }
    if depth == signed.len() {
        *acc = acc.join(&partial);
        return;
    }
    for choice in &signed[depth] {
        sign_patterns(signed, depth + 1, partial.meet(choice), acc);
        if acc.is_one() {
            return;
        }
    }
}

fn nonzero_rows(m: &Matrix) -> impl Iterator<Item = Vec<Rational>> + '_ {
    m.rows()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .map(|r| r.to_vec())
}

fn projection_onto_kernel(stack: Vec<Vec<Rational>>, dim: usize) -> Projection {
    if stack.is_empty() {
        return Projection::one(dim);
    }
    let kernel = kernel_basis(&Matrix::from_rows(stack, dim));
    Projection::from_span(kernel, dim).expect("kernel vectors have the ambient length")
}

/// `com(A)` as the projection onto `{ψ : [P1,P2]P3 ψ = 0 for all P1,P2,P3 ∈ A}`.
pub fn commutator_kernel(family: &[Projection]) -> Result<Projection> {
    let dim = common_dim(family)?.unwrap_or(0);
    let members = distinct(family);
    let mut stack = Vec::new();
    for (i, p1) in members.iter().enumerate() {
        for p2 in &members[i + 1..] {
            // [P2,P1] = -[P1,P2] has the same kernel contribution.
            let c = p1.matrix().commutator(p2.matrix());
            if c.is_zero() {
                continue;
            }
            for p3 in &members {
                let m = c.mul(p3.matrix());
                stack.extend(nonzero_rows(&m));
            }
        }
    }
    Ok(projection_onto_kernel(stack, dim))
}

fn flatten(m: &Matrix) -> Vec<Rational> {
    m.entries().to_vec()
}

fn unflatten(v: &[Rational], n: usize) -> Matrix {
    Matrix::from_rows(v.chunks(n).map(|c| c.to_vec()).collect(), n)
}

/// Basis of the unital *-algebra generated by `family`: the smallest matrix
/// space containing the identity and every member, closed under products and
/// transposition. In finite dimension this is the bicommutant `A''`.
///
/// `dim` is needed only when the family is empty.
pub fn generated_algebra(family: &[Projection], dim: usize) -> Result<Vec<Matrix>> {
    let dim = common_dim(family)?.unwrap_or(dim);
    let gens: Vec<Matrix> = distinct(family)
        .iter()
        .filter(|p| !p.is_zero() && !p.is_one())
        .map(|p| p.matrix().clone())
        .collect();
    let mut span = SpanBuilder::new(dim * dim);
    let mut elements = vec![Matrix::identity(dim)];
    span.insert(&flatten(&elements[0]));
    for g in &gens {
        if span.insert(&flatten(g)) {
            elements.push(g.clone());
        }
    }
    // Every word in the generators arises by repeatedly left-multiplying a
    // known element by a generator; transposes of words are words again.
    let mut frontier = 0;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        frontier += 1;
        let mut candidates: Vec<Matrix> = gens.iter().map(|g| g.mul(&current)).collect();
        candidates.push(current.transpose());
        for c in candidates {
            if span.insert(&flatten(&c)) {
                elements.push(c);
            }
        }
    }
    Ok(span.basis().iter().map(|v| unflatten(v, dim)).collect())
}

/// `com(A)` as the projection onto `{ψ : [X,Y]ψ = 0 for all X,Y ∈ A''}`.
pub fn commutator_algebra(family: &[Projection]) -> Result<Projection> {
    let dim = common_dim(family)?.unwrap_or(0);
    let basis = generated_algebra(family, dim)?;
    let mut stack = Vec::new();
    for (i, x) in basis.iter().enumerate() {
        for y in &basis[i + 1..] {
            let c = x.commutator(y);
            stack.extend(nonzero_rows(&c));
        }
    }
    Ok(projection_onto_kernel(stack, dim))
}

/// Whether `x` lies in the logic generated by `family`, i.e. whether its
/// matrix lies in the generated algebra.
pub fn in_generated_logic(x: &Projection, family: &[Projection]) -> Result<bool> {
    if let Some(d) = common_dim(family)? {
        if d != x.dim() {
            return Err(Error::DimensionMismatch(d, x.dim()));
        }
    }
    let dim = x.dim();
    let mut span = SpanBuilder::new(dim * dim);
    for m in generated_algebra(family, dim)? {
        span.insert(&flatten(&m));
    }
    Ok(span.contains(&flatten(x.matrix())))
}

/// Upper bound on the size of the Boolean closure built by
/// [`commutant_sample`].
const SAMPLE_CLOSURE_CAP: usize = 48;

/// Families larger than this have their subsets sampled rather than
/// enumerated.
const SUBSET_ENUMERATION_CAP: usize = 8;

/// Draws projections from the commutant `A^!`.
///
/// Candidates are the commutators `com(S)` of subfamilies `S ⊆ A`, closed
/// under `∧`, `∨` and `⊥` (up to a size cap), together with 0 and 1. Only
/// candidates that commute with every member of `A` are returned, so the
/// output is always a subset of `A^!` and always contains 0, 1 and `com(A)`.
pub fn commutant_sample(family: &[Projection], dim: usize, seed: u64) -> Result<Vec<Projection>> {
    let dim = common_dim(family)?.unwrap_or(dim);
    let members = distinct(family);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let subsets: Vec<Vec<Projection>> = if members.len() <= SUBSET_ENUMERATION_CAP {
        (0u32..(1 << members.len()))
            .map(|mask| {
                members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect()
    } else {
        let mut out = vec![members.clone()];
        for _ in 0..64 {
            let mut s = members.clone();
            s.shuffle(&mut rng);
            let k = (rand::Rng::gen_range(&mut rng, 1..=SUBSET_ENUMERATION_CAP)).min(s.len());
            s.truncate(k);
            out.push(s);
        }
        out
    };

    let mut pool: BTreeSet<Projection> = BTreeSet::new();
    pool.insert(Projection::zero(dim));
    pool.insert(Projection::one(dim));
    for s in &subsets {
        if !s.is_empty() && s.len() <= MAX_FINITE_COMMUTATOR {
            pool.insert(commutator_finite(s)?);
        }
    }
    let admissible = |p: &Projection| members.iter().all(|q| p.commutes(q));
    let mut found: BTreeSet<Projection> = pool.iter().filter(|p| admissible(p)).cloned().collect();
    for p in &members {
        if admissible(p) {
            found.insert(p.clone());
        }
    }

    // Boolean closure of the admissible seeds; each new element is combined
    // once with everything found so far.
    let mut queue: Vec<Projection> = found.iter().cloned().collect();
    let mut done: Vec<Projection> = Vec::new();
    while let Some(a) = queue.pop() {
        if found.len() >= SAMPLE_CLOSURE_CAP {
            break;
        }
        let mut fresh = vec![a.ortho()];
        for b in done.iter().chain(std::iter::once(&a)) {
            fresh.push(a.meet(b));
            fresh.push(a.join(b));
        }
        done.push(a);
        for c in fresh {
            if found.len() >= SAMPLE_CLOSURE_CAP {
                break;
            }
            if !found.contains(&c) && admissible(&c) {
                found.insert(c.clone());
                queue.push(c);
            }
        }
    }

    let mut out: Vec<Projection> = found.into_iter().collect();
    out.shuffle(&mut rng);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(v: &[i64]) -> Projection {
        Projection::from_int_span(&[v], v.len()).unwrap()
    }

    #[test]
    fn finite_commutator_examples() {
        let p = line(&[1, 1]);
        assert!(commutator_finite(std::slice::from_ref(&p))
            .unwrap()
            .is_one());
        let q = line(&[1, 0]);
        assert_eq!(
            commutator_finite(&[p.clone(), q.clone()]).unwrap(),
            p.commutator_pair(&q)
        );
        let z = Projection::zero(2);
        assert_eq!(
            commutator_finite(&[p.clone(), q.clone(), z]).unwrap(),
            commutator_finite(&[p, q]).unwrap()
        );
    }

    #[test]
    fn finite_commutator_cap() {
        let fam: Vec<Projection> = (1..=13).map(|k| line(&[1, k])).collect();
        assert_eq!(commutator_finite(&fam), Err(Error::CommutatorCap(13)));
    }

    #[test]
    fn kernel_and_algebra_commutator_examples() {
        let p = line(&[1, 0]);
        let q = line(&[0, 1]);
        let d = line(&[1, 1]);
        for f in [commutator_kernel, commutator_algebra] {
            assert!(f(&[p.clone(), q.clone()]).unwrap().is_one());
            assert!(f(&[p.clone(), d.clone()]).unwrap().is_zero());
        }
    }

    #[test]
    fn generated_algebra_examples() {
        let p = line(&[1, 1]);
        assert_eq!(
            generated_algebra(std::slice::from_ref(&p), 2)
                .unwrap()
                .len(),
            2
        );
        assert_eq!(generated_algebra(&[p, line(&[1, 0])], 2).unwrap().len(), 4);
        let empty = generated_algebra(&[], 3).unwrap();
        assert_eq!(empty, vec![Matrix::identity(3)]);
    }

    #[test]
    fn generated_logic_membership() {
        let p = line(&[1, 1]);
        assert!(in_generated_logic(&p, std::slice::from_ref(&p)).unwrap());
        assert!(in_generated_logic(&p.ortho(), std::slice::from_ref(&p)).unwrap());
        assert!(!in_generated_logic(&line(&[1, 0]), &[p]).unwrap());
    }

    #[test]
    fn commutant_sample_basics() {
        let fam = vec![line(&[1, 0, 0]), line(&[1, 1, 0])];
        let s = commutant_sample(&fam, 3, 1).unwrap();
        assert!(s.contains(&Projection::zero(3)));
        assert!(s.contains(&Projection::one(3)));
        let com = commutator_finite(&fam).unwrap();
        assert!(s.contains(&com));
        // com = span{e3} here: the two lines live in the e1,e2 plane.
        assert_eq!(com, line(&[0, 0, 1]));
        for p in &s {
            assert!(fam.iter().all(|q| p.commutes(q)));
        }
    }
}
