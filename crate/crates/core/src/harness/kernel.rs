use rand::seq::SliceRandom;
use rand::Rng;

use super::{run_suite, Case, SuiteConfig, SuiteReport};
use crate::commutator::{
    commutant_sample, commutator_algebra, commutator_finite, commutator_kernel, in_generated_logic,
};
use crate::error::Result;
use crate::generate::{projection_pool, random_projection, rng_for, PoolKind};
use crate::lattice::{Conditional, Projection};
use crate::linalg::{rat, Vector};

/// A random projection commuting with `q`: a subspace of `q` plus a
/// subspace of `q⊥`.
fn commuting_with(rng: &mut impl Rng, q: &Projection) -> Projection {
    let dim = q.dim();
    let mut vs: Vec<Vector> = Vec::new();
    for basis in [q.basis().to_vec(), q.ortho().basis().to_vec()] {
        if basis.is_empty() {
            continue;
        }
        for _ in 0..rng.gen_range(0..=basis.len()) {
            let mut v = vec![rat(0); dim];
            for b in &basis {
                let c = rat(rng.gen_range(-2..=2));
                for (x, y) in v.iter_mut().zip(b) {
                    *x += &c * y;
                }
            }
            vs.push(v);
        }
    }
    Projection::from_span(vs, dim).expect("ambient length")
}

fn triple(rng: &mut impl Rng, dim: usize) -> [Projection; 3] {
    let kind = match rng.gen_range(0..4) {
        0 | 1 => None,
        2 => Some(PoolKind::Block),
        _ => Some(PoolKind::Boolean),
    };
    match kind {
        None => [0, 1, 2].map(|_| random_projection(rng, dim)),
        Some(k) => {
            let pool = projection_pool(rng, dim, 3, k);
            [pool[0].clone(), pool[1].clone(), pool[2].clone()]
        }
    }
}

fn lattice_laws(c: &mut Case, p: &Projection, q: &Projection, r: &Projection) {
    let dim = p.dim();
    let (one, zero) = (Projection::one(dim), Projection::zero(dim));
    let above = p.join(r);

    c.expect(
        "order",
        None,
        p.leq(&above) && above.ortho().leq(&p.ortho()),
        "P <= P v R and its contrapositive",
    );
    c.expect(
        "order",
        None,
        p.meet(q).leq(p) && p.leq(&p.join(q)),
        "P ^ Q <= P <= P v Q",
    );
    c.expect_eq("involution", None, p, &p.ortho().ortho());
    c.expect_eq("complement", None, &one, &p.join(&p.ortho()));
    c.expect_eq("complement", None, &zero, &p.meet(&p.ortho()));
    c.expect_eq(
        "orthomodular",
        None,
        &above,
        &p.join(&p.ortho().meet(&above)),
    );

    c.expect_eq("meet-commutative", None, &p.meet(q), &q.meet(p));
    c.expect_eq(
        "meet-associative",
        None,
        &p.meet(q).meet(r),
        &p.meet(&q.meet(r)),
    );
    c.expect_eq(
        "join-associative",
        None,
        &p.join(q).join(r),
        &p.join(&q.join(r)),
    );
    c.expect_eq("absorption", None, p, &p.meet(&p.join(q)));
    c.expect_eq(
        "de-morgan",
        None,
        &p.meet(q).ortho(),
        &p.ortho().join(&q.ortho()),
    );
    c.expect("bounds", None, zero.leq(p) && p.leq(&one), "0 <= P <= 1");
}

fn conditional_laws(c: &mut Case, p: &Projection, q: &Projection, r: &Projection) {
    let dim = p.dim();
    let one = Projection::one(dim);
    for cond in Conditional::ALL {
        let arrow = cond.apply(p, q);
        c.expect_eq(&format!("E:{cond}"), None, &p.leq(q), &arrow.is_one());
        c.expect_eq(&format!("E:{cond}"), None, &one, &cond.apply(&p.meet(q), q));
        c.expect_eq(&format!("E:{cond}"), None, &one, &cond.apply(p, &p.join(r)));
        c.expect(
            "MP",
            None,
            p.meet(&arrow).leq(q),
            &format!("P ^ (P ->{cond} Q) <= Q"),
        );
        c.expect(
            "MT",
            None,
            q.ortho().meet(&arrow).leq(&p.ortho()),
            &format!("Q' ^ (P ->{cond} Q) <= P'"),
        );
    }

    let com = p.commutator_pair(q);
    let (pc, qc) = (p.ortho(), q.ortho());
    let expanded = p
        .meet(q)
        .join(&pc.meet(q))
        .join(&pc.meet(&qc))
        .join(&pc.meet(&com.ortho()));
    c.expect_eq("arrow-expansion", None, &p.sasaki_arrow(q), &expanded);
    let star_expanded = p.meet(q).join(&p.meet(&com.ortho()));
    let star = p.sasaki_star(q);
    c.expect_eq("star-expansion", None, &star, &star_expanded);
    c.expect_eq("duality", None, &star, &p.sasaki_arrow(&qc).ortho());
    c.expect_eq("duality", None, &star, &p.meet(&pc.join(q)));
    c.expect_eq("commutes", None, &p.commutes_lattice(q), &p.commutes(q));
    c.expect_eq("equivalence", None, &(p == q), &p.equivalence(q).is_one());

    if p.commutes(q) {
        c.count("commuting_pairs", 1);
        let boolean = pc.join(q);
        for cond in Conditional::ALL {
            c.expect_eq(
                &format!("boolean:{cond}"),
                None,
                &boolean,
                &cond.apply(p, q),
            );
        }
        c.expect_eq("boolean:star", None, &p.meet(q), &star);
        c.expect_eq("boolean:com", None, &one, &com);
    }
}

/// Distributivity and the arrow/star localizations for projections
/// commuting with a fixed `q`.
fn logic_laws(c: &mut Case, rng: &mut impl Rng, q: &Projection) {
    let family: Vec<Projection> = (0..3).map(|_| commuting_with(rng, q)).collect();
    for f in &family {
        c.expect(
            "logic-setup",
            None,
            f.commutes(q),
            "generated family commutes with Q",
        );
    }
    let dim = q.dim();
    let join = family.iter().fold(Projection::zero(dim), |a, b| a.join(b));
    let distributed = family
        .iter()
        .fold(Projection::zero(dim), |a, b| a.join(&q.meet(b)));
    c.expect_eq("logic-distributive", None, &q.meet(&join), &distributed);

    let (p1, p2) = (&family[0], &family[1]);
    let (p1q, p2q) = (p1.meet(q), p2.meet(q));
    c.expect_eq(
        "logic-arrow",
        None,
        &p1.sasaki_arrow(p2).meet(q),
        &p1q.sasaki_arrow(&p2q).meet(q),
    );
    c.expect_eq(
        "logic-star",
        None,
        &p1.sasaki_star(p2).meet(q),
        &p1q.sasaki_star(&p2q).meet(q),
    );
}

fn commutator_laws(
    c: &mut Case,
    rng: &mut impl Rng,
    p: &Projection,
    q: &Projection,
    seed: u64,
) -> Result<()> {
    let dim = p.dim();
    c.expect_eq(
        "com-pair-finite",
        None,
        &p.commutator_pair(q),
        &commutator_finite(&[p.clone(), q.clone()])?,
    );

    let size = rng.gen_range(1..=3);
    let kind = *[
        PoolKind::Random,
        PoolKind::Block,
        PoolKind::Block,
        PoolKind::Boolean,
    ]
    .choose(rng)
    .expect("nonempty");
    let family = projection_pool(rng, dim, size, kind);
    let finite = commutator_finite(&family)?;
    let kernel = commutator_kernel(&family)?;
    let algebra = commutator_algebra(&family)?;
    c.count("commutator_sets", 1);
    if !finite.is_one() && !finite.is_zero() {
        c.count("commutator_sets_proper", 1);
    }
    c.expect_eq("com-finite-kernel", None, &finite, &kernel);
    c.expect_eq("com-finite-algebra", None, &finite, &algebra);
    c.expect(
        "com-commutant",
        None,
        family.iter().all(|a| a.commutes(&finite)),
        "com(A) commutes with every member of A",
    );
    c.expect(
        "com-generated",
        None,
        in_generated_logic(&finite, &family)?,
        "com(A) lies in the logic generated by A",
    );

    let sample = commutant_sample(&family, dim, seed)?;
    c.expect(
        "commutant-sample",
        None,
        sample.iter().all(|s| family.iter().all(|a| a.commutes(s))),
        "sampled projections commute with A",
    );
    c.expect(
        "commutant-sample",
        None,
        sample.iter().any(Projection::is_zero)
            && sample.iter().any(Projection::is_one)
            && sample.contains(&finite),
        "sample contains 0, 1 and com(A)",
    );
    Ok(())
}

/// Ortholattice and orthomodular laws, Hardegree conditions, the arrow and
/// star expansions, localization under commutation, and agreement of the
/// three commutator computations.
pub fn suite_kernel_laws(cfg: &SuiteConfig) -> SuiteReport {
    run_suite("kernel", cfg, None, |c| {
        let seed = c.seed;
        let mut rng = rng_for(seed);
        let dim = rng.gen_range(cfg.dim_min..=cfg.dim_max);
        let [p, q, r] = triple(&mut rng, dim);
        lattice_laws(c, &p, &q, &r);
        conditional_laws(c, &p, &q, &r);
        logic_laws(c, &mut rng, &q);
        commutator_laws(c, &mut rng, &p, &q, seed)
    })
}
