import random

import numpy as np
import pytest

from lambda_forge.field import ONE
from lambda_forge.gf2 import span, x_point, z_point
from lambda_forge.pauli import QOperator, beta
from lambda_forge.stabilizer import (
    Assignment,
    all_assignments,
    convolve,
    enumerate_stabilizer_states,
    state_from_json,
    state_label,
    state_to_json,
    stabilizer_projector,
)

rng = random.Random(1)


def test_state_counts():
    assert len(enumerate_stabilizer_states(1)) == 6
    assert len(enumerate_stabilizer_states(2)) == 60
    assert len(enumerate_stabilizer_states(3)) == 1080


def test_projectors_idempotent_unit_trace():
    for I, s in enumerate_stabilizer_states(2):
        P = stabilizer_projector(I, s)
        assert P.product(P) == P
        assert P.trace() == ONE


def test_projectors_distinct():
    keys = {stabilizer_projector(I, s).key() for I, s in enumerate_stabilizer_states(2)}
    assert len(keys) == 60


def test_dense_ranks():
    # trivial subspace: identity
    assert stabilizer_projector(span([], n=2), []) == QOperator.identity(2)
    # <z1> at n=1 with sign 0: |0><0|
    P = stabilizer_projector(span([z_point(1, 1)]), [0])
    assert np.allclose(P.dense_matrix(), [[1, 0], [0, 0]])
    # maximal at n=2: rank 1
    I, s = enumerate_stabilizer_states(2)[17]
    assert np.linalg.matrix_rank(stabilizer_projector(I, s).dense_matrix()) == 1
    # one-dimensional at n=2: rank 2
    J = span([x_point(2, 1)])
    P = stabilizer_projector(J, [1])
    assert np.linalg.matrix_rank(P.dense_matrix()) == 2


def test_assignment_consistency_by_construction():
    for I, s in rng.sample(enumerate_stabilizer_states(2), 12):
        pts = list(I.points())
        for v in pts:
            for w in pts:
                assert s.value(v ^ w) == (s.value(v) + s.value(w) + beta(v, w)) % 2


def test_assignment_from_pairs_conflict():
    zz = z_point(2, 1) ^ z_point(2, 2)
    xx = x_point(2, 1) ^ x_point(2, 2)
    yy = zz ^ xx
    # consistent: s(yy) = s(zz) + s(xx) + beta = 0 + 0 + 1
    asg = Assignment.from_pairs([(zz, 0), (xx, 0)])
    assert asg.value(yy) == 1
    with pytest.raises(ValueError):
        Assignment.from_pairs([(zz, 0), (xx, 0), (yy, 0)])


def test_assignment_restrict():
    I, s = enumerate_stabilizer_states(2)[29]
    line = span([I.basis_points()[0]])
    r = s.restrict(line)
    assert r.value(I.basis_points()[0]) == s.value(I.basis_points()[0])
    with pytest.raises(ValueError):
        s.restrict(span([x_point(2, 1), z_point(2, 1)]))


def test_inconsistent_projector_rejected():
    I = span([z_point(2, 1), z_point(2, 2)])
    with pytest.raises(ValueError):
        stabilizer_projector(I, Assignment.zero(span([z_point(2, 1)])))


def test_convolve():
    x2 = x_point(2, 2)
    zh = z_point(2, 1)
    r = Assignment.from_pairs([(x2, 1)])
    s2 = Assignment.from_pairs([(zh, 0)])
    conv = convolve(r, s2)
    assert conv.subspace.dim == 2
    assert conv.value(x2 ^ zh) == 1
    assert conv.value(x2) == 1 and conv.value(zh) == 0
    # identity-domain convolution leaves the other side unchanged
    triv = Assignment.zero(span([], n=2))
    same = convolve(triv, s2)
    assert same.subspace == s2.subspace and same.value(zh) == 0
    # conflicting overlap
    with pytest.raises(ValueError):
        convolve(Assignment.from_pairs([(zh, 1)]), s2)


def test_json_and_labels():
    I, s = enumerate_stabilizer_states(2)[41]
    assert state_from_json(state_to_json(I, s)) == (I, s)
    assert state_label(I, s).count(",") == 1
    # unicode minus accepted
    obj = {"generators": ["−ZI", "+IZ"]}
    I2, s2 = state_from_json(obj)
    assert s2.value(z_point(2, 1)) == 1


def test_all_assignments_count():
    I = span([z_point(2, 1), z_point(2, 2)])
    assert len(list(all_assignments(I))) == 4
