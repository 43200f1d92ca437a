import random
from fractions import Fraction

import pytest

from lambda_forge.cnc import CncSet
from lambda_forge.gf2 import (
    PauliPoint,
    all_points,
    span,
    x_point,
    y_point,
    z_point,
)
from lambda_forge.orbit import (
    ALPHA0_TABLE,
    OrbitVertex,
    alpha0_vertex,
    assignment_solutions,
    check_collection_rules,
    classify_operator,
    derive_assignments,
    enumerate_collections,
    isotropic_poset,
    measure_update,
    mixture_identities_report,
    omega_from_collection,
    poset_dot,
)
from lambda_forge.pauli import QOperator
from lambda_forge.polytope import is_vertex, membership
from lambda_forge.stabilizer import all_assignments

rng = random.Random(31)

I0 = span([x_point(2, 1) ^ z_point(2, 2), z_point(2, 1) ^ x_point(2, 2)])


def test_alpha0_parameters():
    V = classify_operator(alpha0_vertex())
    assert V.I == I0
    locals_ = {PauliPoint.zero(2)} | {
        f(2, q) for f in (x_point, y_point, z_point) for q in (1, 2)
    }
    assert V.omega == frozenset(locals_)
    # the six listed collection members
    listed = frozenset(
        span(g)
        for g in (
            [x_point(2, 1) ^ z_point(2, 2), z_point(2, 1) ^ x_point(2, 2)],
            [x_point(2, 1) ^ x_point(2, 2), z_point(2, 1) ^ z_point(2, 2)],
            [x_point(2, 1) ^ y_point(2, 2), y_point(2, 1) ^ z_point(2, 2)],
            [z_point(2, 1) ^ y_point(2, 2), y_point(2, 1) ^ x_point(2, 2)],
            [y_point(2, 1) ^ x_point(2, 2), x_point(2, 1) ^ y_point(2, 2)],
            [z_point(2, 1) ^ y_point(2, 2), y_point(2, 1) ^ z_point(2, 2)],
        )
    )
    assert len(listed) == 6
    assert V.collection == listed
    # gamma' signs: IX:-1 XI:+1 IZ:-1 IY:-1 ZI:+1 YI:-1
    gp = V.gamma_p_map
    assert gp[x_point(2, 2)] == 1
    assert gp[x_point(2, 1)] == 0
    assert gp[z_point(2, 2)] == 1
    assert gp[y_point(2, 2)] == 1
    assert gp[z_point(2, 1)] == 0
    assert gp[y_point(2, 1)] == 1
    # gamma'' is the off-zero flip
    gpp = V.gamma_pp_map
    assert all(gpp[p] == 1 ^ gp[p] for p in gp if not p.is_zero())


def test_alpha0_membership_and_extremality():
    cert = membership(alpha0_vertex())
    assert cert.is_member
    assert is_vertex(alpha0_vertex(), cert) == (True, 15)


def test_build_round_trip():
    V = classify_operator(alpha0_vertex())
    V2 = OrbitVertex.build(V.I, V.gamma, V.collection, V.gamma_p_map)
    assert V2.operator() == alpha0_vertex()
    assert {lbl: val for lbl, val in ALPHA0_TABLE.items() if val} == {
        p.label(): c.a for p, c in alpha0_vertex().coeffs.items()
    }


def test_build_validation():
    V = classify_operator(alpha0_vertex())
    bad_gp = dict(V.gamma_p_map)
    bad_gp[x_point(2, 1)] ^= 1  # breaks one sign equation
    with pytest.raises(ValueError):
        OrbitVertex.build(V.I, V.gamma, V.collection, bad_gp)
    with pytest.raises(ValueError):
        OrbitVertex.build(V.I, V.gamma, frozenset(list(V.collection)[:5]), V.gamma_p_map)


def test_collections_structure():
    cols = enumerate_collections(I0)
    assert len(cols) == 16
    sizes = sorted(len(c) for c in cols)
    assert sizes == [6, 6, 6, 6, 8, 8, 8, 8, 8, 8, 8, 8, 10, 10, 10, 10]
    for C in cols:
        assert check_collection_rules(I0, C)
    omegas = {omega_from_collection(C) for C in cols if len(C) == 6}
    assert len(omegas) == 4
    for om in omegas:
        assert len(om) == 7
        assert not any(I0.contains(p) for p in om if not p.is_zero())


def test_sign_system_solution_count():
    gamma = next(iter(all_assignments(I0)))
    for C in enumerate_collections(I0):
        if len(C) != 6:
            continue
        om = omega_from_collection(C)
        sols = assignment_solutions(I0, gamma, om)
        assert len(sols) == 8
        pairs = derive_assignments(I0, gamma, C)
        assert len(pairs) == 8
        for gp, gpp in pairs:
            assert gp[PauliPoint.zero(2)] == 0
            assert all(gpp[p] == 1 ^ gp[p] for p in gp if not p.is_zero())


def test_update_weight_profiles():
    V = classify_operator(alpha0_vertex())
    a = x_point(2, 1) ^ z_point(2, 2)  # in I
    s = V.gamma.value(a)
    assert [w for w, _ in measure_update(V, a, s)] == [
        Fraction(1, 2),
        Fraction(1, 4),
        Fraction(1, 4),
    ]
    assert measure_update(V, a, 1 ^ s) == []
    a = x_point(2, 1)  # in Omega; gamma'(x1) = 0
    pieces = measure_update(V, a, 0)
    assert [w for w, _ in pieces] == [Fraction(1, 2), Fraction(1, 4)]
    total = sum(w for w, _ in pieces)
    assert [w / total for w, _ in pieces] == [Fraction(2, 3), Fraction(1, 3)]
    assert [w for w, _ in measure_update(V, a, 1)] == [Fraction(1, 4)]
    a = x_point(2, 1) ^ x_point(2, 2)  # outside both
    for s in (0, 1):
        assert [w for w, _ in measure_update(V, a, s)] == [
            Fraction(1, 4),
            Fraction(1, 4),
        ]


def test_update_pieces_are_commutant_cnc():
    V = classify_operator(alpha0_vertex())
    for a in all_points(2, include_zero=False):
        for s in (0, 1):
            for w, piece in measure_update(V, a, s):
                assert isinstance(piece, CncSet)
                assert piece.omega == frozenset(span([a]).perp().points())
                assert piece.gamma[a] == s


def test_update_oracle_sampled():
    V = classify_operator(alpha0_vertex())
    vertices = [V]
    # a couple of Pauli conjugates stay in the family with the same parameters
    from lambda_forge.clifford import CliffordTableau

    for u in list(V.I.points())[1:]:
        vertices.append(
            classify_operator(CliffordTableau.pauli(2, u).conjugate(alpha0_vertex()))
        )
    for vert in vertices:
        op = vert.operator()
        for a in all_points(2, include_zero=False):
            for s in (0, 1):
                total = QOperator.zero(2)
                for w, piece in measure_update(vert, a, s):
                    total = total + piece.operator().scale(w)
                assert total == op.project(a, s)


def test_pauli_conjugates_share_parameters():
    V = classify_operator(alpha0_vertex())
    from lambda_forge.clifford import CliffordTableau

    for u in V.I.points():
        if u.is_zero():
            continue
        moved = classify_operator(
            CliffordTableau.pauli(2, u).conjugate(alpha0_vertex())
        )
        assert moved.I == V.I
        assert moved.collection == V.collection
        assert moved.omega == V.omega
        assert moved.gamma == V.gamma
        assert moved.gamma_p != V.gamma_p


def test_outcome_probability_normalization():
    V = classify_operator(alpha0_vertex())
    for a in all_points(2, include_zero=False):
        total = Fraction(0)
        for s in (0, 1):
            total += sum((w for w, _ in measure_update(V, a, s)), Fraction(0))
        assert total == 1


def test_mixture_identities():
    rep = mixture_identities_report()
    assert rep["checked"] == 336
    assert all(v == 0 for k, v in rep.items() if k.startswith("identity-"))


def test_poset():
    data = isotropic_poset()
    ones = [n for n in data["nodes"] if n["dim"] == 1]
    twos = [n for n in data["nodes"] if n["dim"] == 2]
    assert len(ones) == 15 and len(twos) == 15
    assert len(data["edges"]) == 45
    from collections import Counter

    cover_counts = Counter(a for a, _ in data["edges"])
    assert set(cover_counts.values()) == {3}
    flagged = {n["id"] for n in twos if n["in_flagship_collection"]}
    assert len(flagged) == 6
    dot = poset_dot()
    assert dot.count("--") == 45 and "salmon" in dot


def test_vertex_json():
    V = classify_operator(alpha0_vertex())
    doc = V.to_json()
    assert len(doc["collection"]) == 6
    assert len(doc["omega"]) == 7
    assert QOperator.from_json({"n": 2, "coeffs": doc["coeffs"]}) == alpha0_vertex()
