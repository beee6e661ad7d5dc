//! The logic `Q`: projections of a finite-dimensional rational inner-product
//! space, ordered by range inclusion.
//!
//! A [`Projection`] is stored as the canonical (RREF) basis of its range, so
//! two projections are equal exactly when their bases are identical. Meet is
//! range intersection, orthocomplement is the orthogonal complement, and join
//! is obtained from those two by De Morgan.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::linalg::{
    self, canonical_basis, format_rational, intersect_spans, orthogonal_complement,
    projection_matrix, unit_vector, Matrix, Vector,
};

struct Inner {
    dim: usize,
    basis: Vec<Vector>,
    matrix: OnceLock<Matrix>,
}

/// A closed subspace (equivalently, an orthogonal projection).
#[derive(Clone)]
pub struct Projection(Arc<Inner>);

impl PartialEq for Projection {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.dim == other.0.dim && self.0.basis == other.0.basis)
    }
}

impl Eq for Projection {}

impl Hash for Projection {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.dim.hash(state);
        self.0.basis.hash(state);
    }
}

impl PartialOrd for Projection {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used for sets and maps: by dimension, then rank, then basis.
/// This is *not* the lattice order; see [`Projection::leq`].
impl Ord for Projection {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.dim, self.0.basis.len(), &self.0.basis).cmp(&(
            other.0.dim,
            other.0.basis.len(),
            &other.0.basis,
        ))
    }
}

impl Projection {
    fn from_canonical(dim: usize, basis: Vec<Vector>) -> Self {
        Projection(Arc::new(Inner {
            dim,
            basis,
            matrix: OnceLock::new(),
        }))
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_canonical(dim, Vec::new())
    }

    pub fn one(dim: usize) -> Self {
        Self::from_canonical(dim, (0..dim).map(|i| unit_vector(dim, i)).collect())
    }

    /// Projection onto the span of `vectors` (which need not be independent).
    pub fn from_span(vectors: Vec<Vector>, dim: usize) -> Result<Self> {
        if dim > crate::MAX_DIMENSION {
            return Err(Error::DimensionTooLarge(dim));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::VectorLength {
                expected: dim,
                found: v.len(),
            });
        }
        Ok(Self::from_canonical(dim, canonical_basis(&vectors, dim)))
    }

    /// Shorthand for tests and demos: the span of integer vectors.
    pub fn from_int_span(vectors: &[&[i64]], dim: usize) -> Result<Self> {
        Self::from_span(
            vectors
                .iter()
                .map(|v| v.iter().map(|&x| linalg::rat(x)).collect())
                .collect(),
            dim,
        )
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// Canonical RREF basis of the range.
    pub fn basis(&self) -> &[Vector] {
        &self.0.basis
    }

    /// Dimension of the range.
    pub fn rank(&self) -> usize {
        self.0.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.basis.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.basis.len() == self.0.dim
    }

    /// The orthogonal projection matrix, computed once and cached.
    pub fn matrix(&self) -> &Matrix {
        self.0
            .matrix
            .get_or_init(|| projection_matrix(&self.0.basis, self.0.dim))
    }

    fn assert_same_dim(&self, other: &Projection) {
        assert_eq!(
            self.0.dim, other.0.dim,
            "lattice operation on projections of different dimension"
        );
    }

    /// `P ∧ Q`: range intersection.
    ///
    /// Panics if the dimensions differ; use [`LogicContext`] for a checked
    /// variant.
    pub fn meet(&self, other: &Projection) -> Projection {
        self.assert_same_dim(other);
        if self.is_zero() || other.is_one() || self == other {
            return self.clone();
        }
        if other.is_zero() || self.is_one() {
            return other.clone();
        }
        let dim = self.0.dim;
        Self::from_canonical(
            dim,
            canonical_basis(&intersect_spans(&self.0.basis, &other.0.basis, dim), dim),
        )
    }

    /// `P⊥`: orthogonal complement.
    pub fn ortho(&self) -> Projection {
        let dim = self.0.dim;
        if self.is_zero() {
            return Self::one(dim);
        }
        if self.is_one() {
            return Self::zero(dim);
        }
        Self::from_canonical(
            dim,
            canonical_basis(&orthogonal_complement(&self.0.basis, dim), dim),
        )
    }

    /// `P ∨ Q = (P⊥ ∧ Q⊥)⊥`.
    pub fn join(&self, other: &Projection) -> Projection {
        self.assert_same_dim(other);
        if self.is_zero() || other.is_one() || self == other {
            return other.clone();
        }
        if other.is_zero() || self.is_one() {
            return self.clone();
        }
        self.ortho().meet(&other.ortho()).ortho()
    }

    /// Range inclusion.
    pub fn leq(&self, other: &Projection) -> bool {
        self.assert_same_dim(other);
        if self.is_zero() || other.is_one() {
            return true;
        }
        if self.rank() > other.rank() {
            return false;
        }
        let mut both = other.0.basis.clone();
        both.extend(self.0.basis.iter().cloned());
        linalg::span_dimension(&both, self.0.dim) == other.rank()
    }

    /// `P ⌣ Q`, tested as `[P, Q] = 0` on the projection matrices.
    pub fn commutes(&self, other: &Projection) -> bool {
        self.assert_same_dim(other);
        if self.is_zero() || self.is_one() || other.is_zero() || other.is_one() || self == other {
            return true;
        }
        self.matrix().commutator(other.matrix()).is_zero()
    }

    /// `P ⌣ Q` by the lattice definition `P = (P∧Q) ∨ (P∧Q⊥)`.
    pub fn commutes_lattice(&self, other: &Projection) -> bool {
        *self == self.meet(other).join(&self.meet(&other.ortho()))
    }

    /// Sasaki arrow `P → Q = P⊥ ∨ (P ∧ Q)`.
    pub fn sasaki_arrow(&self, other: &Projection) -> Projection {
        self.ortho().join(&self.meet(other))
    }

    /// Sasaki projection `P * Q = (P → Q⊥)⊥`.
    pub fn sasaki_star(&self, other: &Projection) -> Projection {
        self.sasaki_arrow(&other.ortho()).ortho()
    }

    /// Contrapositive Sasaki conditional `(P ∨ Q)⊥ ∨ Q`.
    pub fn contrapositive_conditional(&self, other: &Projection) -> Projection {
        self.join(other).ortho().join(other)
    }

    /// Relevance conditional `(P∧Q) ∨ (P⊥∧Q) ∨ (P⊥∧Q⊥)`.
    pub fn relevance_conditional(&self, other: &Projection) -> Projection {
        let pc = self.ortho();
        self.meet(other)
            .join(&pc.meet(other))
            .join(&pc.meet(&other.ortho()))
    }

    /// `P ⇔ Q = (P → Q) ∧ (Q → P)` with the Sasaki arrow.
    pub fn equivalence(&self, other: &Projection) -> Projection {
        self.sasaki_arrow(other).meet(&other.sasaki_arrow(self))
    }

    /// Marsden commutator `com(P, Q)`: the four-term join of sign-pattern meets.
    pub fn commutator_pair(&self, other: &Projection) -> Projection {
        let pc = self.ortho();
        let qc = other.ortho();
        self.meet(other)
            .join(&self.meet(&qc))
            .join(&pc.meet(other))
            .join(&pc.meet(&qc))
    }

    /// Classification used when printing truth values.
    pub fn classify(&self) -> Classification {
        if self.is_one() {
            Classification::One
        } else if self.is_zero() {
            Classification::Zero
        } else {
            Classification::Proper
        }
    }

    /// Canonical basis as rational strings.
    pub fn basis_strings(&self) -> Vec<Vec<String>> {
        self.0
            .basis
            .iter()
            .map(|v| v.iter().map(format_rational).collect())
            .collect()
    }
}

impl fmt::Debug for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `span{(1,0), (0,1)}`-style display, with basis vectors scaled to
/// primitive integer form.
impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.is_one() {
            return write!(f, "1");
        }
        let vecs: Vec<String> = self
            .0
            .basis
            .iter()
            .map(|v| {
                let ints = linalg::primitive_integer_vector(v);
                let parts: Vec<String> = ints.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        write!(f, "span{{{}}}", vecs.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    One,
    Zero,
    Proper,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::One => "one",
            Classification::Zero => "zero",
            Classification::Proper => "proper",
        })
    }
}

/// The three polynomially definable material conditionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conditional {
    Sasaki,
    Contrapositive,
    Relevance,
}

impl Conditional {
    pub const ALL: [Conditional; 3] = [
        Conditional::Sasaki,
        Conditional::Contrapositive,
        Conditional::Relevance,
    ];

    pub fn apply(self, p: &Projection, q: &Projection) -> Projection {
        match self {
            Conditional::Sasaki => p.sasaki_arrow(q),
            Conditional::Contrapositive => p.contrapositive_conditional(q),
            Conditional::Relevance => p.relevance_conditional(q),
        }
    }
}

impl fmt::Display for Conditional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conditional::Sasaki => "sasaki",
            Conditional::Contrapositive => "contrapositive",
            Conditional::Relevance => "relevance",
        })
    }
}

/// A logic on a fixed ambient space, with an interning table so equal
/// projections share storage (and their cached matrices).
pub struct LogicContext {
    dim: usize,
    table: RwLock<HashSet<Projection>>,
}

impl LogicContext {
    pub fn new(dim: usize) -> Result<Self> {
        if dim > crate::MAX_DIMENSION {
            return Err(Error::DimensionTooLarge(dim));
        }
        let ctx = LogicContext {
            dim,
            table: RwLock::new(HashSet::new()),
        };
        ctx.intern(Projection::zero(dim));
        ctx.intern(Projection::one(dim));
        Ok(ctx)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn zero(&self) -> Projection {
        self.intern(Projection::zero(self.dim))
    }

    pub fn one(&self) -> Projection {
        self.intern(Projection::one(self.dim))
    }

    /// Returns the shared representative of `p`.
    pub fn intern(&self, p: Projection) -> Projection {
        if let Some(existing) = self.table.read().unwrap().get(&p) {
            return existing.clone();
        }
        let mut table = self.table.write().unwrap();
        if let Some(existing) = table.get(&p) {
            return existing.clone();
        }
        table.insert(p.clone());
        p
    }

    pub fn len(&self) -> usize {
        self.table.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn span(&self, vectors: Vec<Vector>) -> Result<Projection> {
        Ok(self.intern(Projection::from_span(vectors, self.dim)?))
    }

    fn check(&self, p: &Projection) -> Result<()> {
        if p.dim() != self.dim {
            Err(Error::DimensionMismatch(self.dim, p.dim()))
        } else {
            Ok(())
        }
    }

    fn check2(&self, p: &Projection, q: &Projection) -> Result<()> {
        self.check(p)?;
        self.check(q)
    }

    pub fn meet(&self, p: &Projection, q: &Projection) -> Result<Projection> {
        self.check2(p, q)?;
        Ok(self.intern(p.meet(q)))
    }

    pub fn join(&self, p: &Projection, q: &Projection) -> Result<Projection> {
        self.check2(p, q)?;
        Ok(self.intern(p.join(q)))
    }

    pub fn ortho(&self, p: &Projection) -> Result<Projection> {
        self.check(p)?;
        Ok(self.intern(p.ortho()))
    }

    pub fn leq(&self, p: &Projection, q: &Projection) -> Result<bool> {
        self.check2(p, q)?;
        Ok(p.leq(q))
    }

    pub fn commutes(&self, p: &Projection, q: &Projection) -> Result<bool> {
        self.check2(p, q)?;
        Ok(p.commutes(q))
    }

    pub fn sasaki_arrow(&self, p: &Projection, q: &Projection) -> Result<Projection> {
        self.check2(p, q)?;
        Ok(self.intern(p.sasaki_arrow(q)))
    }

    pub fn sasaki_star(&self, p: &Projection, q: &Projection) -> Result<Projection> {
        self.check2(p, q)?;
        Ok(self.intern(p.sasaki_star(q)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1() -> Projection {
        Projection::from_int_span(&[&[1, 0]], 2).unwrap()
    }

    fn e2() -> Projection {
        Projection::from_int_span(&[&[0, 1]], 2).unwrap()
    }

    fn diag() -> Projection {
        Projection::from_int_span(&[&[1, 1]], 2).unwrap()
    }

    #[test]
    fn complement_laws_on_a_line() {
        let p = diag();
        assert_eq!(p.meet(&p), p);
        assert!(p.join(&p.ortho()).is_one());
        assert!(p.meet(&p.ortho()).is_zero());
        assert!(Projection::zero(2).leq(&p));
    }

    #[test]
    fn distinct_lines_meet_in_zero() {
        assert!(e1().meet(&diag()).is_zero());
        assert!(e1().join(&diag()).is_one());
    }

    #[test]
    fn commutation_examples() {
        let p = diag();
        assert!(p.commutes(&p.ortho()));
        assert!(!e1().commutes(&diag()));
        assert!(p.commutes(&Projection::one(2)));
        assert!(!e1().commutes_lattice(&diag()));
        assert!(e1().commutes_lattice(&e2()));
    }

    #[test]
    fn sasaki_examples() {
        let p = diag();
        assert!(p.sasaki_arrow(&p).is_one());
        assert_eq!(e1().sasaki_arrow(&diag()), e2());
        assert!(Projection::zero(2).sasaki_arrow(&p).is_one());

        assert_eq!(p.sasaki_star(&Projection::one(2)), p);
        assert_eq!(e1().sasaki_star(&diag()), e1());
        assert_eq!(e1().sasaki_star(&e2()), e1().meet(&e2()));
    }

    #[test]
    fn conditionals_differ_on_noncommuting_lines() {
        let (p, q) = (e1(), diag());
        let s = p.sasaki_arrow(&q);
        let c = p.contrapositive_conditional(&q);
        let r = p.relevance_conditional(&q);
        // S = P⊥ = span{e2}; C = (P∨Q)⊥ ∨ Q = Q; R = 0 ∨ 0 ∨ (P⊥∧Q⊥) = 0.
        assert_eq!(s, e2());
        assert_eq!(c, q);
        assert!(r.is_zero());
        assert_ne!(s, c);
        assert_ne!(c, r);
        assert_ne!(s, r);
    }

    #[test]
    fn conditionals_are_one_under_order() {
        let p = e1();
        let q = Projection::one(2);
        for c in Conditional::ALL {
            assert!(c.apply(&p, &q).is_one());
            assert!(c.apply(&p, &p).is_one());
        }
    }

    #[test]
    fn equivalence_examples() {
        let p = diag();
        assert!(p.equivalence(&p).is_one());
        assert!(Projection::zero(2)
            .equivalence(&Projection::one(2))
            .is_zero());
        assert!(!e1().equivalence(&diag()).is_one());
    }

    #[test]
    fn marsden_commutator_examples() {
        assert!(e1().commutator_pair(&e2()).is_one());
        assert!(e1().commutator_pair(&diag()).is_zero());
        assert!(diag().commutator_pair(&diag()).is_one());
    }

    #[test]
    fn context_interns_and_checks_dimension() {
        let ctx = LogicContext::new(2).unwrap();
        let a = ctx.intern(diag());
        let b = ctx.intern(diag());
        assert!(Arc::ptr_eq(&a.0, &b.0));
        let other = Projection::one(3);
        assert_eq!(ctx.meet(&a, &other), Err(Error::DimensionMismatch(2, 3)));
        assert!(LogicContext::new(9).is_err());
    }

    #[test]
    fn display_uses_primitive_vectors() {
        assert_eq!(diag().to_string(), "span{(1,1)}");
        assert_eq!(Projection::one(2).to_string(), "1");
        assert_eq!(Projection::zero(2).to_string(), "0");
        assert_eq!(diag().classify(), Classification::Proper);
    }
}
