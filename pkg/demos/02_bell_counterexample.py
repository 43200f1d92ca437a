"""Tensor products can leave the polytope.

Both factors below are extremal points of the single-qubit polytope, yet
their tensor product has overlap exactly -1/2 with a Bell state, so it
is not even a member on two qubits.  Membership is decided against all
60 two-qubit stabilizer states in exact arithmetic.
"""

from lambda_forge import QOperator, membership

A0 = QOperator.from_labels(1, {"I": 1, "X": 1, "Y": 1, "Z": 1})
AA = A0.tensor(A0)

bell = QOperator.from_labels(2, {"II": 1, "ZZ": -1, "XX": -1, "YY": -1})
print("overlap with the (-ZZ, -XX) Bell state:", AA.trace_inner(bell))

cert = membership(AA)
print("member of the two-qubit polytope:", cert.is_member)
print("first violated facet:", cert.violation, "=", cert.values[cert.violation])
negative = sorted(k for k, v in cert.values.items() if v.sign() < 0)
print(f"all violated facets ({len(negative)}):")
for k in negative:
    print("  ", k, "=", cert.values[k])
