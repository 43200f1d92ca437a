"""Exact Hermitian-operator algebra in the n-qubit Pauli basis.

Conventions
-----------
The Pauli operator indexed by a point v = (v_Z, v_X) of E_n is

    T_v = i^{q(v)} X(v_X) Z(v_Z),      q(v) = |{qubits with both bits}|,

with the exponent of i counted as an integer (mod 4), so that

* every T_v is Hermitian with T_v^2 = 1,
* T at a (1,1) qubit equals the matrix Y (i * X Z = Y),
* T factors over disjoint qubit supports: T_{v+u} = T_v (x) T_u.

Products carry a Z_4 phase: T_v T_w = i^{phase(v, w)} T_{v+w}, and for
commuting v, w the Hermitian sign bit beta(v, w) is phase/2.

A ``QOperator`` is the exact coefficient map of a Hermitian operator

    A = (1/2^n) sum_v alpha_v T_v,

with alpha_v in Q(sqrt(2)).  Absent coefficients are zero; trace(A) is
the coefficient at v = 0.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from .field import ZERO, ONE, FieldElem
from .gf2 import PauliPoint, symplectic_form, zx_overlap

DENSE_ORACLE_BOUND = 5


class PhasedPauli:
    """i^phase * T_point with phase in Z_4; Hermitian iff phase is even."""

    __slots__ = ("point", "phase")

    def __init__(self, point: PauliPoint, phase: int = 0):
        object.__setattr__(self, "point", point)
        object.__setattr__(self, "phase", phase & 3)

    def __setattr__(self, name, value):
        raise AttributeError("PhasedPauli is immutable")

    def __reduce__(self):
        return (PhasedPauli, (self.point, self.phase))

    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    def sign(self) -> int:
        """+1 or -1 for a Hermitian element."""
        if not self.is_hermitian():
            raise ValueError("phase is imaginary; no real sign")
        return 1 if self.phase == 0 else -1

    def __eq__(self, other):
        return (
            isinstance(other, PhasedPauli)
            and self.point == other.point
            and self.phase == other.phase
        )

    def __hash__(self):
        return hash((self.point, self.phase))

    def __repr__(self):
        pref = ["+", "+i", "-", "-i"][self.phase]
        return f"{pref}{self.point.label()}"

    @staticmethod
    def from_label(text: str) -> "PhasedPauli":
        text = text.strip().replace("−", "-")
        phase = 0
        if text.startswith(("+i", "-i")):
            phase = 1 if text[0] == "+" else 3
            text = text[2:]
        elif text.startswith("+"):
            text = text[1:]
        elif text.startswith("-"):
            phase = 2
            text = text[1:]
        elif text.startswith("i"):
            phase = 1
            text = text[1:]
        return PhasedPauli(PauliPoint.from_label(text), phase)


def product_phase(v: PauliPoint, w: PauliPoint) -> int:
    """Exponent k in T_v T_w = i^k T_{v+w} (mod 4)."""
    if v.n != w.n:
        raise ValueError("qubit count mismatch")
    return (
        zx_overlap(v)
        + zx_overlap(w)
        - zx_overlap(PauliPoint(v.n, v.z ^ w.z, v.x ^ w.x))
        + 2 * (v.z & w.x).bit_count()
    ) & 3


def pauli_mul(p: PhasedPauli, q: PhasedPauli) -> PhasedPauli:
    """Normal-ordered product of two phased Pauli operators."""
    point = p.point ^ q.point
    return PhasedPauli(point, p.phase + q.phase + product_phase(p.point, q.point))


def beta(v: PauliPoint, w: PauliPoint) -> int:
    """Sign bit with T_{v+w} = (-1)^beta T_v T_w, defined for commuting pairs."""
    if symplectic_form(v, w) != 0:
        raise ValueError("beta is undefined for anticommuting points")
    return product_phase(v, w) >> 1


class QOperator:
    """Exact Hermitian operator A = (1/2^n) sum_v alpha_v T_v."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Optional[Mapping[PauliPoint, FieldElem]] = None):
        cleaned: dict[PauliPoint, FieldElem] = {}
        if coeffs:
            for point, c in coeffs.items():
                if point.n != n:
                    raise ValueError("coefficient point has wrong qubit count")
                c = FieldElem.coerce(c)
                if not c.is_zero():
                    cleaned[point] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("QOperator is immutable")

    def __reduce__(self):
        return (QOperator, (self.n, self.coeffs))

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero(n: int) -> "QOperator":
        return QOperator(n, {})

    @staticmethod
    def identity(n: int) -> "QOperator":
        """The identity operator (trace 2^n, the multiplicative unit)."""
        return QOperator(n, {PauliPoint.zero(n): FieldElem(1 << n)})

    @staticmethod
    def maximally_mixed(n: int) -> "QOperator":
        """The trace-1 state 1/2^n."""
        return QOperator(n, {PauliPoint.zero(n): ONE})

    @staticmethod
    def from_labels(n: int, entries: Mapping[str, object]) -> "QOperator":
        return QOperator(
            n,
            {
                PauliPoint.from_label(lbl): FieldElem.coerce(val)
                for lbl, val in entries.items()
            },
        )

    # -- basic queries ---------------------------------------------------

    def coeff(self, point: PauliPoint) -> FieldElem:
        return self.coeffs.get(point, ZERO)

    def trace(self) -> FieldElem:
        return self.coeff(PauliPoint.zero(self.n))

    def support(self) -> frozenset[PauliPoint]:
        return frozenset(self.coeffs)

    def key(self):
        """Canonical hashable form (sorted coefficient items)."""
        return (
            self.n,
            tuple(
                sorted((p.key(), c.a, c.b) for p, c in self.coeffs.items())
            ),
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, QOperator)
            and self.n == other.n
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        items = sorted(self.coeffs.items(), key=lambda kv: kv[0].key())
        body = " ".join(f"{c!s}*{p.label()}" for p, c in items) or "0"
        return f"QOperator({self.n}; {body})"

    # -- linear structure -----------------------------------------------

    def __add__(self, other: "QOperator") -> "QOperator":
        if self.n != other.n:
            raise ValueError("qubit count mismatch")
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            out[p] = out.get(p, ZERO) + c
        return QOperator(self.n, out)

    def __sub__(self, other: "QOperator") -> "QOperator":
        return self + other.scale(-1)

    def scale(self, factor) -> "QOperator":
        factor = FieldElem.coerce(factor)
        return QOperator(self.n, {p: c * factor for p, c in self.coeffs.items()})

    # -- multiplicative structure ----------------------------------------

    def _complex_coeffs(self) -> dict[PauliPoint, tuple[FieldElem, FieldElem]]:
        return {p: (c, ZERO) for p, c in self.coeffs.items()}

    @staticmethod
    def _complex_product(
        n: int,
        left: Mapping[PauliPoint, tuple[FieldElem, FieldElem]],
        right: Mapping[PauliPoint, tuple[FieldElem, FieldElem]],
    ) -> dict[PauliPoint, tuple[FieldElem, FieldElem]]:
        half = Fraction(1, 1 << n)
        out: dict[PauliPoint, tuple[FieldElem, FieldElem]] = {}
        for v, (ar, ai) in left.items():
            for w, (br, bi) in right.items():
                u = v ^ w
                ph = product_phase(v, w)
                re = ar * br - ai * bi
                im = ar * bi + ai * br
                if ph == 1:
                    re, im = -im, re
                elif ph == 2:
                    re, im = -re, -im
                elif ph == 3:
                    re, im = im, -re
                cur = out.get(u)
                if cur is None:
                    out[u] = (re, im)
                else:
                    out[u] = (cur[0] + re, cur[1] + im)
        return {
            p: (re * half, im * half)
            for p, (re, im) in out.items()
            if not (re.is_zero() and im.is_zero())
        }

    def product(self, other: "QOperator") -> "QOperator":
        """Exact operator product; raises if the result is not Hermitian."""
        if self.n != other.n:
            raise ValueError("qubit count mismatch")
        mixed = QOperator._complex_product(
            self.n, self._complex_coeffs(), other._complex_coeffs()
        )
        coeffs = {}
        for p, (re, im) in mixed.items():
            if not im.is_zero():
                raise ValueError(
                    "operator product is not Hermitian; cannot coerce to QOperator"
                )
            coeffs[p] = re
        return QOperator(self.n, coeffs)

    def tensor(self, other: "QOperator") -> "QOperator":
        """Tensor product with self's qubits first."""
        m = self.n
        n = m + other.n
        out = {}
        for v, a in self.coeffs.items():
            for w, b in other.coeffs.items():
                point = PauliPoint(n, v.z | (w.z << m), v.x | (w.x << m))
                out[point] = a * b
        return QOperator(n, out)

    def trace_inner(self, other: "QOperator") -> FieldElem:
        """Tr(self * other), exact.  Bilinear and symmetric."""
        if self.n != other.n:
            raise ValueError("qubit count mismatch")
        small, large = (
            (self.coeffs, other.coeffs)
            if len(self.coeffs) <= len(other.coeffs)
            else (other.coeffs, self.coeffs)
        )
        total = ZERO
        for p, c in small.items():
            d = large.get(p)
            if d is not None:
                total = total + c * d
        return total * Fraction(1, 1 << self.n)

    def project(self, a: PauliPoint, s: int) -> "QOperator":
        """Pi_{a,s} self Pi_{a,s} with Pi_{a,s} = (1 + (-1)^s T_a)/2."""
        if a.is_zero():
            raise ValueError("projection axis must be nonzero")
        if a.n != self.n:
            raise ValueError("qubit count mismatch")
        half_pow = Fraction(1 << (self.n - 1))
        sign = ONE if s % 2 == 0 else -ONE
        proj = {
            PauliPoint.zero(self.n): (FieldElem(half_pow), ZERO),
            a: (sign * half_pow, ZERO),
        }
        mid = QOperator._complex_product(self.n, proj, self._complex_coeffs())
        out = QOperator._complex_product(self.n, mid, proj)
        coeffs = {}
        for p, (re, im) in out.items():
            assert im.is_zero(), "projection of a Hermitian operator must be Hermitian"
            coeffs[p] = re
        return QOperator(self.n, coeffs)

    # -- dense oracle ------------------------------------------------------

    def dense_matrix(self) -> np.ndarray:
        """Explicit 2^n x 2^n complex matrix; verification oracle only."""
        if self.n > DENSE_ORACLE_BOUND:
            raise ValueError(f"dense oracle capped at n={DENSE_ORACLE_BOUND}")
        dim = 1 << self.n
        total = np.zeros((dim, dim), dtype=complex)
        for p, c in self.coeffs.items():
            total += float(c) * pauli_matrix(p)
        return total / dim

    # -- JSON -----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "coeffs": {
                p.label(): {"a": str(c.a), "b": str(c.b)}
                for p, c in sorted(self.coeffs.items(), key=lambda kv: kv[0].key())
            },
        }

    @staticmethod
    def from_json(obj: Mapping) -> "QOperator":
        n = int(obj["n"])
        coeffs = {}
        for label, val in obj.get("coeffs", {}).items():
            if isinstance(val, dict):
                c = FieldElem(Fraction(val.get("a", 0)), Fraction(val.get("b", 0)))
            else:
                c = FieldElem(Fraction(val))
            coeffs[PauliPoint.from_label(label)] = c
        return QOperator(n, coeffs)


_SINGLE = {
    (0, 0): np.eye(2, dtype=complex),
    (0, 1): np.array([[0, 1], [1, 0]], dtype=complex),
    (1, 0): np.array([[1, 0], [0, -1]], dtype=complex),
    (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
}


def pauli_matrix(p: PauliPoint, phase: int = 0) -> np.ndarray:
    """Dense matrix of i^phase T_p (qubit 1 is the first tensor factor)."""
    mat = np.ones((1, 1), dtype=complex)
    for i in range(p.n):
        mat = np.kron(mat, _SINGLE[((p.z >> i) & 1, (p.x >> i) & 1)])
    return (1j ** (phase & 3)) * mat


def pauli_projector(a: PauliPoint, s: int) -> QOperator:
    """The rank-2^{n-1} projector (1 + (-1)^s T_a)/2 as a QOperator."""
    n = a.n
    half = Fraction(1 << (n - 1))
    sign = half if s % 2 == 0 else -half
    return QOperator(n, {PauliPoint.zero(n): FieldElem(half), a: FieldElem(sign)})
