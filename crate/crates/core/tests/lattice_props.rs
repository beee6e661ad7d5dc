use proptest::prelude::*;
use qsets::commutator::{
    commutator_algebra, commutator_finite, commutator_kernel, in_generated_logic,
};
use qsets::linalg::{
    canonical_basis, intersect_spans, orthogonal_complement, projection_matrix, rat,
    span_dimension, Matrix, Vector,
};
use qsets::{Conditional, LogicContext, Projection};

fn vector(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-3i64..=3, dim).prop_map(|v| v.into_iter().map(rat).collect())
}

fn span(dim: usize) -> impl Strategy<Value = Vec<Vector>> {
    prop::collection::vec(vector(dim), 0..=dim)
}

fn projection(dim: usize) -> impl Strategy<Value = Projection> {
    span(dim).prop_map(move |s| Projection::from_span(s, dim).unwrap())
}

fn pair() -> impl Strategy<Value = (Projection, Projection)> {
    (2usize..=4).prop_flat_map(|d| (projection(d), projection(d)))
}

fn triple() -> impl Strategy<Value = (Projection, Projection, Projection)> {
    (2usize..=4).prop_flat_map(|d| (projection(d), projection(d), projection(d)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rank_nullity(s in (1usize..=5).prop_flat_map(span)) {
        let dim = s.first().map_or(1, |v| v.len());
        if s.is_empty() {
            return Ok(());
        }
        let r = span_dimension(&s, dim);
        prop_assert_eq!(r + orthogonal_complement(&s, dim).len(), dim);
        let back = orthogonal_complement(&orthogonal_complement(&s, dim), dim);
        prop_assert_eq!(canonical_basis(&back, dim), canonical_basis(&s, dim));
    }

    #[test]
    fn projection_matrix_is_idempotent_and_symmetric(p in (1usize..=4).prop_flat_map(projection)) {
        let m = p.matrix();
        prop_assert_eq!(&m.mul(m), m);
        prop_assert_eq!(&m.transpose(), m);
        prop_assert_eq!(m.rank(), p.rank());
        let rebuilt = projection_matrix(p.basis(), p.dim());
        prop_assert_eq!(&rebuilt, m);
    }

    #[test]
    fn canonical_form_ignores_spanning_set((p, extra) in (2usize..=4).prop_flat_map(|d| (projection(d), vector(d)))) {
        // Adding a vector already in the span changes nothing.
        let dim = p.dim();
        let mut s = p.basis().to_vec();
        if let Some(b) = s.first().cloned() {
            let inside: Vector = b.iter().map(|x| x * rat(3)).collect();
            s.push(inside);
        }
        prop_assert_eq!(Projection::from_span(s, dim).unwrap(), p.clone());
        let mut t = p.basis().to_vec();
        t.push(extra.clone());
        let bigger = Projection::from_span(t, dim).unwrap();
        prop_assert!(p.leq(&bigger));
    }

    #[test]
    fn intersection_is_contained_in_both((a, b) in (2usize..=4).prop_flat_map(|d| (span(d), span(d)))) {
        let dim = a.first().or(b.first()).map_or(2, |v| v.len());
        let m = intersect_spans(&a, &b, dim);
        let pa = Projection::from_span(a.clone(), dim).unwrap();
        let pb = Projection::from_span(b.clone(), dim).unwrap();
        let pm = Projection::from_span(m, dim).unwrap();
        prop_assert_eq!(pm, pa.meet(&pb));
    }

    #[test]
    fn orthomodular_lattice((p, q, r) in triple()) {
        prop_assert_eq!(p.ortho().ortho(), p.clone());
        prop_assert!(p.meet(&p.ortho()).is_zero());
        prop_assert!(p.join(&p.ortho()).is_one());
        prop_assert_eq!(p.meet(&q), q.meet(&p));
        prop_assert_eq!(p.join(&q.join(&r)), p.join(&q).join(&r));
        prop_assert_eq!(p.meet(&p.join(&q)), p.clone());
        prop_assert_eq!(p.join(&q).ortho(), p.ortho().meet(&q.ortho()));
        if p.leq(&q) {
            prop_assert!(q.ortho().leq(&p.ortho()));
            prop_assert_eq!(p.join(&p.ortho().meet(&q)), q.clone());
        }
        let pq = p.meet(&q);
        prop_assert_eq!(pq.clone(), q.join(&p).meet(&pq));
    }

    #[test]
    fn conditionals((p, q) in pair()) {
        for c in [Conditional::Sasaki, Conditional::Contrapositive, Conditional::Relevance] {
            let arrow = c.apply(&p, &q);
            prop_assert_eq!(arrow.is_one(), p.leq(&q), "{} E", c);
            prop_assert!(p.meet(&arrow).leq(&q), "{} MP", c);
            prop_assert!(arrow.meet(&q.ortho()).leq(&p.ortho()), "{} MT", c);
        }
        let star = p.sasaki_star(&q);
        prop_assert_eq!(star.clone(), p.meet(&p.ortho().join(&q)));
        prop_assert!(star.leq(&p));
        prop_assert_eq!(p.commutes(&q), p.commutes_lattice(&q));
        if p.commutes(&q) {
            prop_assert_eq!(p.sasaki_arrow(&q), p.ortho().join(&q));
            prop_assert_eq!(star, p.meet(&q));
        }
    }

    #[test]
    fn commutator_methods_agree(family in (2usize..=3).prop_flat_map(|d| prop::collection::vec(projection(d), 1..=3))) {
        let finite = commutator_finite(&family).unwrap();
        prop_assert_eq!(&commutator_kernel(&family).unwrap(), &finite);
        prop_assert_eq!(&commutator_algebra(&family).unwrap(), &finite);
        for p in &family {
            prop_assert!(p.commutes(&finite));
            prop_assert!(in_generated_logic(p, &family).unwrap());
        }
        if family.len() == 2 {
            prop_assert_eq!(family[0].commutator_pair(&family[1]), finite);
        }
    }
}

#[test]
fn interning_shares_arcs() {
    let ctx = LogicContext::new(3).unwrap();
    let a = ctx.span(vec![vec![rat(1), rat(2), rat(0)]]).unwrap();
    let b = ctx.span(vec![vec![rat(-2), rat(-4), rat(0)]]).unwrap();
    assert_eq!(a, b);
    let before = ctx.len();
    let m = ctx.meet(&a, &ctx.one()).unwrap();
    assert_eq!(m, a);
    assert_eq!(ctx.len(), before);
    assert!(ctx.leq(&ctx.zero(), &a).unwrap());
}

#[test]
fn identity_matrix_projects_onto_everything() {
    let one = Projection::one(3);
    assert_eq!(one.matrix(), &Matrix::identity(3));
    assert!(Projection::zero(3).matrix().is_zero());
    assert!(LogicContext::new(9).is_err());
}
