"""A walk through the single-qubit polytope.

The trace-1 Hermitian operators with nonnegative overlap against all six
single-qubit stabilizer states form a cube in the (a_x, a_y, a_z) chart:
|a_v| <= 1.  Its eight corners are the operators (1 +- X +- Y +- Z)/2 --
not quantum states (one eigenvalue is negative), yet every density
matrix is a mixture of them.
"""

from fractions import Fraction

from lambda_forge import (
    FieldElem,
    INV_SQRT2,
    ONE,
    PauliPoint,
    QOperator,
    decompose,
    enumerate_vertices_n1,
    is_vertex,
    membership,
    x_point,
    y_point,
)

verts = enumerate_vertices_n1()
print(f"extremal points found: {len(verts)}")
for V in verts:
    labels = {p.label(): str(c) for p, c in sorted(V.coeffs.items(), key=lambda kv: kv[0].key())}
    ok, rank = is_vertex(V)
    print(f"  {labels}  extremal={ok} rank={rank}")

# eigenvalues show these are not density matrices
import numpy as np

eigs = np.linalg.eigvalsh(verts[0].dense_matrix())
print(f"\neigenvalues of one vertex: {eigs}  (one is negative!)")

# the magic state decomposes exactly over the corners
t_state = QOperator(
    1,
    {PauliPoint.zero(1): ONE, x_point(1, 1): INV_SQRT2, y_point(1, 1): INV_SQRT2},
)
print("\nmagic state is a member:", membership(t_state).is_member)
weights = decompose(t_state, verts)
print("decomposition weights (exact elements of Q(sqrt 2)):")
total = QOperator.zero(1)
for i, w in weights.items():
    total = total + verts[i].scale(w)
    print(f"  vertex {i}: {w}")
assert total == t_state
print("re-substitution is exact.")
