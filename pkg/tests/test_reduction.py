import random

import pytest

from lambda_forge.clifford import CliffordTableau, generator_tableaux
from lambda_forge.field import ONE
from lambda_forge.gf2 import all_points, span, x_point, z_point
from lambda_forge.lifting import lift, make_params
from lambda_forge.polytope import enumerate_vertices_n1
from lambda_forge.reduction import (
    CoinStep,
    FixedStep,
    MeasureStep,
    ReductionEngine,
    embed_tail_assignment,
    lifted_operator,
    reduce_static,
    reduced_distribution,
)
from lambda_forge.simulate import born_distribution
from lambda_forge.stabilizer import Assignment, enumerate_stabilizer_states

rng = random.Random(37)


def sigma_z_plus(n=2, m=1):
    return embed_tail_assignment(
        Assignment.from_pairs([(z_point(1, 1), 0)]), n, m
    )


def test_case_one_in_stabilizer():
    eng = ReductionEngine(2, 1, sigma_z_plus())
    step, _ = eng.process(x_point(2, 1) ^ z_point(2, 2))
    assert step == MeasureStep(x_point(1, 1), 0)
    # opposite tail sign flips the outcome
    sig = embed_tail_assignment(Assignment.from_pairs([(z_point(1, 1), 1)]), 2, 1)
    step, _ = ReductionEngine(2, 1, sig).process(x_point(2, 1) ^ z_point(2, 2))
    assert step == MeasureStep(x_point(1, 1), 1)


def test_tail_only_observable_is_fixed():
    eng = ReductionEngine(2, 1, sigma_z_plus())
    step, _ = eng.process(z_point(2, 2))
    assert step == FixedStep(0)


def test_case_two_coin():
    eng = ReductionEngine(2, 1, sigma_z_plus())
    step, pend = eng.process(x_point(2, 1) ^ x_point(2, 2))
    assert isinstance(step, CoinStep)
    for c in (0, 1):
        nxt = pend.resolve_coin(c)
        assert nxt.conj.is_valid()
    with pytest.raises(ValueError):
        eng.process(x_point(2, 2) ^ x_point(2, 2))  # zero point


def test_resolve_without_pending():
    eng = ReductionEngine(2, 1, sigma_z_plus())
    with pytest.raises(ValueError):
        eng.resolve_coin(0)


def test_sigma_must_be_tail_supported():
    head = Assignment.from_pairs([(z_point(2, 1), 0)])
    with pytest.raises(ValueError):
        ReductionEngine(2, 1, head)


def test_empty_sequence():
    eng = ReductionEngine(2, 1, sigma_z_plus())
    X = enumerate_vertices_n1()[0]
    assert reduced_distribution(X, eng, []) == {(): ONE}


def test_distribution_equality_random_instances():
    verts = enumerate_vertices_n1()
    for n in (2, 3):
        gens = generator_tableaux(n)
        for _ in range(8):
            m = 1 if n == 2 else rng.choice([1, 2])
            if m == 1:
                X = rng.choice(verts)
            else:
                line = span([rng.choice(all_points(2, include_zero=False))])
                r = Assignment(line, [rng.randint(0, 1)])
                X = lift(rng.choice(verts), make_params(2, line, r))
            I_t, s_t = rng.choice(enumerate_stabilizer_states(n - m))
            sig = embed_tail_assignment(s_t, n, m)
            U = CliffordTableau.identity(n)
            for _ in range(6):
                U = rng.choice(gens).compose(U)
            seq = [
                rng.choice(all_points(n, include_zero=False))
                for _ in range(rng.randint(1, 5))
            ]
            full = born_distribution(U.conjugate(lifted_operator(X, sig)), seq)
            red = reduced_distribution(X, ReductionEngine(n, m, sig, U), seq)
            assert full == red


def test_static_plan():
    eng = ReductionEngine(2, 1, sigma_z_plus())
    seq = [x_point(2, 1) ^ x_point(2, 2), z_point(2, 2), x_point(2, 1)]
    plan = reduce_static(eng, seq, coins=[1])
    kinds = [s["kind"] for s in plan["steps"]]
    assert kinds[0] == "coin" and plan["steps"][0]["outcome"] == 1
    assert plan["coins"][0] == {"step": 0, "outcome": 1}
    assert [c["step"] for c in plan["coins"]] == [
        s["step"] for s in plan["steps"] if s["kind"] == "coin"
    ]
    assert plan["m"] == 1
    # emitted measurements act on the head register only
    for s in plan["steps"]:
        if s["kind"] == "measure":
            assert len(s["observable"]) == 1


def test_output_never_longer():
    eng = ReductionEngine(3, 1, embed_tail_assignment(rng.choice(enumerate_stabilizer_states(2))[1], 3, 1))
    seq = [rng.choice(all_points(3, include_zero=False)) for _ in range(5)]
    plan = reduce_static(eng, seq, coins=[0, 0, 0, 0, 0])
    measured = [s for s in plan["steps"] if s["kind"] == "measure"]
    assert len(measured) <= len(seq)
