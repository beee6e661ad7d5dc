"""Smoke test for the qsets_py extension module.

Build and install it first, e.g. `maturin develop -m crates/py/Cargo.toml`,
or put the compiled library on PYTHONPATH as `qsets_py.so`.
"""

import json

import qsets_py as q


def main():
    p = q.Projection([[1, 0]], 2)
    r = q.Projection([["1", "1"]], 2)
    assert p.meet(r).is_zero()
    assert p.join(r).is_one()
    assert not p.commutes(r)
    assert p.sasaki_arrow(r) == q.Projection([[0, 1]], 2)
    assert p.sasaki_star(r) == p
    assert p.ortho().ortho() == p
    assert p.commutator(r).is_zero()
    assert p.conditional(r, "relevance").is_zero()
    assert p.conditional(r, "contrapositive") == r
    assert {p, q.Projection([[2, 0]], 2)} == {p}

    assert q.commutator_finite([p, r]) == q.commutator_kernel([p, r])
    assert q.commutator_algebra([p, r]).is_zero()
    assert q.in_generated_logic(p, [p])
    assert not q.in_generated_logic(p, [r])
    sample = q.commutant_sample([p], 2, seed=1)
    assert all(s.commutes(p) for s in sample)

    assert q.parse("!(A x in u . !(x in v))") == "!(A x in u . !x in v)"
    assert q.is_delta0("A x in u . x in v")
    assert not q.is_delta0("A x . x = x")
    assert q.desugar("a in b | c in d") == "!(!a in b & !c in d)"

    env = q.Environment.counterexample()
    P = env.projection("P")
    assert env.eval("E x in u . !!x in v", "takeuti").is_zero()
    assert env.eval("!(A x in u . !x in v)", "takeuti") == P
    assert env.eval("E x in u . !!x in v") == P
    assert env.eval("check:0 in check:1").classify() == "one"

    demo = q.demo_counterexample()
    assert demo["reproduced"] and demo["takeuti_exists"].is_zero()

    env2 = q.Environment(2)
    env2.add_projection("L", p)
    u = env2.add_qset("u", [("check:0", "L"), ("check:1", "full")])
    assert u.rank == 2 and len(u) == 2
    assert set(u.support()) == {q.Projection.zero(2), p, q.Projection.one(2)}
    cut = env2.restrict(u, q.Projection.one(2))
    env2.bind("w", cut)
    assert env2.eval("w = u").is_one()
    assert env2.eval("u = u").is_one()
    reloaded = q.Environment.from_json(env2.to_json())
    assert reloaded.eval("w = u").is_one()
    assert q.qset_commutator_of([env.qset("u"), env.qset("v")], 2).is_zero()

    report = q.run_suite("demorgan", seed=3, cases=20)
    assert report["passed"], json.dumps(report, indent=2)
    assert report["cases"] == 20

    print("qsets_py smoke test passed")


if __name__ == "__main__":
    main()
