"""The 1920-member two-qubit extremal family with half-integer signs.

Each member is parameterized by a maximal isotropic I, a sign assignment
on it, a six-member collection of maximal isotropics (whose uncovered
points form the seven-point set Omega), and one of eight solutions of a
small Z_2 linear system.  The family coincides exactly with the Clifford
orbit of the flagship operator.
"""

import time

from lambda_forge.orbit import (
    alpha0_vertex,
    classify_operator,
    clifford_orbit_keys,
    enumerate_collections,
    enumerate_family,
    family_operator_keys,
    measure_update,
    poset_dot,
)
from lambda_forge.gf2 import all_points
from lambda_forge.pauli import QOperator
from lambda_forge.polytope import is_vertex, membership

A = alpha0_vertex()
V = classify_operator(A)
print("flagship parameters:")
print("  I          =", V.I)
print("  collection =", sorted(str(J) for J in V.collection))
print("  Omega      =", sorted(p.label() for p in V.omega))
print("  extremal   =", is_vertex(A, membership(A)))

cols = enumerate_collections(V.I)
print(f"\nrule-satisfying collections through I: {len(cols)} "
      f"(sizes {sorted(len(c) for c in cols)})")
print("only the four six-member ones produce extremal operators.")

t0 = time.time()
fam = enumerate_family()
orbit = clifford_orbit_keys()
print(f"\nfamily size {len(fam)}, Clifford orbit size {len(orbit)}, "
      f"sets equal: {family_operator_keys() == orbit}  "
      f"({time.time()-t0:.1f}s)")

# one measurement update: mixture of commutant-supported cnc operators
a = next(p for p in all_points(2, include_zero=False) if p in V.omega)
pieces = measure_update(V, a, 0)
print(f"\nmeasuring {a.label()} with outcome 0:")
total = QOperator.zero(2)
for w, piece in pieces:
    print(f"  weight {w} on a cnc set of {len(piece.omega)} points")
    total = total + piece.operator().scale(w)
assert total == A.project(a, 0)
print("mixture equals the exact projection.")

with open("isotropic_poset.dot", "w") as fh:
    fh.write(poset_dot())
print("\nwrote isotropic_poset.dot (render with graphviz)")
