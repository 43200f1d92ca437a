import random
from fractions import Fraction

import pytest

from lambda_forge.cnc import (
    CncSet,
    UpdateNotClosedForm,
    anticommuting_sets,
    closure_extend,
    cnc_vertices,
    consistent_assignments,
    is_closed,
    is_cnc,
    is_maximal_cnc,
    line_perp_sets,
    maximal_cnc_sets,
)
from lambda_forge.gf2 import (
    PauliPoint,
    all_points,
    span,
    x_point,
    y_point,
    z_point,
)
from lambda_forge.pauli import QOperator
from lambda_forge.polytope import is_vertex, membership
from lambda_forge.stabilizer import enumerate_stabilizer_states, stabilizer_projector

rng = random.Random(13)


def test_closure_examples():
    pts = [PauliPoint.zero(2), x_point(2, 1), z_point(2, 1), y_point(2, 1), x_point(2, 2)]
    assert not is_closed(pts)  # x1 and x2 commute but x1+x2 is missing
    assert is_closed(all_points(1))


def test_maximality():
    assert is_maximal_cnc(all_points(1))
    iso = span([z_point(2, 1), z_point(2, 2)])
    assert is_cnc(iso.points()) and not is_maximal_cnc(iso.points())
    assert is_maximal_cnc(span([x_point(2, 1)]).perp().points())
    with pytest.raises(ValueError):
        is_maximal_cnc([PauliPoint.zero(3), x_point(3, 1)])


def test_shape_counts():
    assert len(line_perp_sets(2)) == 15
    assert len(anticommuting_sets(2)) == 6
    assert len(maximal_cnc_sets(2)) == 21
    assert len(maximal_cnc_sets(1)) == 1
    for omega in anticommuting_sets(2):
        assert is_maximal_cnc(omega)


def test_cnc_vertex_counts():
    assert len(cnc_vertices(1)) == 8
    assert len(cnc_vertices(2)) == 15 * 16 + 6 * 32


def test_operator_examples():
    zero_set = CncSet([PauliPoint.zero(2)], {PauliPoint.zero(2): 0})
    assert zero_set.operator() == QOperator.maximally_mixed(2)
    full = CncSet.full_single_qubit((0, 0, 0))
    assert full.operator() == QOperator.from_labels(1, {"I": 1, "X": 1, "Y": 1, "Z": 1})
    I, s = enumerate_stabilizer_states(2)[11]
    c = CncSet.from_assignment(s)
    assert c.operator() == stabilizer_projector(I, s)


def test_invariants_enforced():
    x1, z1 = x_point(2, 1), z_point(2, 1)
    with pytest.raises(ValueError):  # not closed
        CncSet(
            [PauliPoint.zero(2), x1, x_point(2, 2)],
            {PauliPoint.zero(2): 0, x1: 0, x_point(2, 2): 0},
        )
    iso = span([x1, x_point(2, 2)])
    vals = {p: 0 for p in iso.points()}
    vals[x1 ^ x_point(2, 2)] = 1  # breaks consistency (beta = 0 here)
    with pytest.raises(ValueError):
        CncSet(iso.points(), vals)


def test_cnc_vertices_are_polytope_vertices():
    for c in rng.sample(cnc_vertices(2), 24):
        op = c.operator()
        cert = membership(op)
        assert cert.is_member
        assert is_vertex(op, cert)[0]


def test_update_deterministic_branch():
    I, s = enumerate_stabilizer_states(2)[3]
    c = CncSet.from_assignment(s)
    a = I.basis_points()[0]
    good = c.measure_update(a, s.value(a))
    assert len(good) == 1 and good[0][0] == 1 and good[0][1] == c
    assert c.measure_update(a, 1 ^ s.value(a)) == []


def test_update_shrinks_nonisotropic():
    # measuring inside the full single-qubit set keeps only the commutant
    c = CncSet.full_single_qubit((0, 1, 0))
    x = x_point(1, 1)
    pieces = c.measure_update(x, 0)
    assert len(pieces) == 1
    w, piece = pieces[0]
    assert w == 1 and piece.omega == {PauliPoint.zero(1), x}
    assert piece.operator() == c.operator().project(x, 0)
    assert c.measure_update(x, 1) == []


def test_update_isotropic_extension():
    I, s = enumerate_stabilizer_states(2)[3]
    c = CncSet.from_assignment(s)
    outside = next(p for p in all_points(2, include_zero=False) if not I.contains(p))
    for out in (0, 1):
        pieces = c.measure_update(outside, out)
        assert len(pieces) == 1 and pieces[0][0] == Fraction(1, 2)
        piece = pieces[0][1]
        assert outside in piece.omega and piece.gamma[outside] == out
        got = piece.operator().scale(Fraction(1, 2))
        assert got == c.operator().project(outside, out)


def test_update_oracle_sweep_sampled():
    cases = rng.sample(cnc_vertices(2), 10) + cnc_vertices(1)
    for c in cases:
        pts = all_points(c.n, include_zero=False)
        for a in rng.sample(pts, min(6, len(pts))):
            for s in (0, 1):
                try:
                    pieces = c.measure_update(a, s)
                except UpdateNotClosedForm:
                    assert a not in c.omega and not c.is_isotropic_subspace()
                    continue
                total = QOperator.zero(c.n)
                for w, piece in pieces:
                    total = total + piece.operator().scale(w)
                assert total == c.operator().project(a, s)


def test_update_weight_normalization():
    I, s = enumerate_stabilizer_states(2)[7]
    c = CncSet.from_assignment(s)
    for a in all_points(2, include_zero=False):
        total = Fraction(0)
        for out in (0, 1):
            total += sum((w for w, _ in c.measure_update(a, out)), Fraction(0))
        assert total == 1


def test_closure_extend_conflict():
    x1, z1 = x_point(2, 1), z_point(2, 1)
    x2, z2 = x_point(2, 2), z_point(2, 2)
    # pin a 4-cycle of inferences that cannot close consistently
    vals = {x1: 0, z2: 0, (x1 ^ z2): 1}
    with pytest.raises(ValueError):
        closure_extend(vals)


def test_consistent_assignment_counts():
    assert len(consistent_assignments(all_points(1))) == 8
    perp = span([y_point(2, 2)]).perp()
    assert len(consistent_assignments(perp.points())) == 16
    pent = anticommuting_sets(2)[0]
    assert len(consistent_assignments(pent)) == 32


def test_json_round_trip():
    c = cnc_vertices(2)[100]
    assert CncSet.from_json(c.to_json()) == c
