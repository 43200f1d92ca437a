"""Clifford-group action on Pauli labels via tableaux.

A tableau stores the conjugation images of the 2n generators x_1..x_n,
z_1..z_n as signed Pauli points.  Global phases of the underlying
unitaries never enter: every construction here depends only on the
induced signed action, which consists of a symplectic map on E_n plus a
sign for each generator image.  The group of such actions has order
|Sp_{2n}(Z_2)| * 4^n  (24 for one qubit, 11520 for two).
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping, Sequence

from .gf2 import (
    PauliPoint,
    Subspace,
    solve_gf2,
    span,
    symplectic_form,
    x_point,
    z_point,
    zx_overlap,
)
from .pauli import PhasedPauli, QOperator, pauli_mul
from .stabilizer import Assignment, stabilizer_projector


class CliffordTableau:
    """Signed Pauli action of a Clifford unitary."""

    __slots__ = ("n", "images")

    def __init__(self, n: int, images: Sequence[tuple[PauliPoint, int]]):
        if len(images) != 2 * n:
            raise ValueError("need images for x_1..x_n, z_1..z_n")
        imgs = tuple((p, s & 1) for p, s in images)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "images", imgs)

    def __setattr__(self, name, value):
        raise AttributeError("CliffordTableau is immutable")

    def __reduce__(self):
        return (CliffordTableau, (self.n, self.images))

    # -- constructors ----------------------------------------------------

    @staticmethod
    def identity(n: int) -> "CliffordTableau":
        imgs = [(x_point(n, q), 0) for q in range(1, n + 1)]
        imgs += [(z_point(n, q), 0) for q in range(1, n + 1)]
        return CliffordTableau(n, imgs)

    @staticmethod
    def hadamard(n: int, qubit: int) -> "CliffordTableau":
        t = CliffordTableau.identity(n)
        imgs = list(t.images)
        imgs[qubit - 1] = (z_point(n, qubit), 0)
        imgs[n + qubit - 1] = (x_point(n, qubit), 0)
        return CliffordTableau(n, imgs)

    @staticmethod
    def phase_gate(n: int, qubit: int) -> "CliffordTableau":
        """S: X -> Y, Z -> Z."""
        t = CliffordTableau.identity(n)
        imgs = list(t.images)
        imgs[qubit - 1] = (
            PauliPoint(n, 1 << (qubit - 1), 1 << (qubit - 1)),
            0,
        )
        return CliffordTableau(n, imgs)

    @staticmethod
    def cnot(n: int, control: int, target: int) -> "CliffordTableau":
        if control == target:
            raise ValueError("control and target must differ")
        t = CliffordTableau.identity(n)
        imgs = list(t.images)
        imgs[control - 1] = (x_point(n, control) ^ x_point(n, target), 0)
        imgs[n + target - 1] = (z_point(n, target) ^ z_point(n, control), 0)
        return CliffordTableau(n, imgs)

    @staticmethod
    def pauli(n: int, u: PauliPoint) -> "CliffordTableau":
        """Conjugation by T_u: v -> (-1)^{[u,v]} v."""
        imgs = []
        for q in range(1, n + 1):
            p = x_point(n, q)
            imgs.append((p, symplectic_form(u, p)))
        for q in range(1, n + 1):
            p = z_point(n, q)
            imgs.append((p, symplectic_form(u, p)))
        return CliffordTableau(n, imgs)

    # -- the action -------------------------------------------------------

    def apply_point(self, v: PauliPoint) -> PhasedPauli:
        """The signed image of T_v; always Hermitian."""
        if v.n != self.n:
            raise ValueError("qubit count mismatch")
        # T_v = i^{q(v)} X(v_x) Z(v_z); conjugation distributes over the
        # generator factors, and the i^{q(v)} prefactor survives unchanged.
        acc = PhasedPauli(PauliPoint.zero(self.n), 0)
        for i in range(self.n):
            if (v.x >> i) & 1:
                img, sgn = self.images[i]
                acc = pauli_mul(acc, PhasedPauli(img, 2 * sgn))
        for i in range(self.n):
            if (v.z >> i) & 1:
                img, sgn = self.images[self.n + i]
                acc = pauli_mul(acc, PhasedPauli(img, 2 * sgn))
        out = PhasedPauli(acc.point, acc.phase + zx_overlap(v))
        assert out.is_hermitian(), "Clifford image of a Hermitian Pauli must be Hermitian"
        return out

    def apply_signed(self, p: PhasedPauli) -> PhasedPauli:
        img = self.apply_point(p.point)
        return PhasedPauli(img.point, img.phase + p.phase)

    def point_map(self, v: PauliPoint) -> PauliPoint:
        return self.apply_point(v).point

    def conjugate(self, A: QOperator) -> QOperator:
        """U A U^dagger: relocate coefficients with signs; trace preserved."""
        if A.n != self.n:
            raise ValueError("qubit count mismatch")
        out = {}
        for v, c in A.coeffs.items():
            img = self.apply_point(v)
            out[img.point] = c if img.sign() > 0 else -c
        return QOperator(self.n, out)

    # -- group structure -----------------------------------------------------

    def compose(self, other: "CliffordTableau") -> "CliffordTableau":
        """Tableau of (self after other): v -> self(other(v))."""
        if self.n != other.n:
            raise ValueError("qubit count mismatch")
        imgs = []
        for p, s in other.images:
            moved = self.apply_point(p)
            imgs.append((moved.point, (s + (moved.phase >> 1)) & 1))
        return CliffordTableau(self.n, imgs)

    def invert(self) -> "CliffordTableau":
        n = self.n
        # Invert the symplectic matrix: solve for preimages of each basis
        # point, using the identity [S v, S w] = [v, w].
        cols = [p.key() for p, _ in self.images]
        basis = [x_point(n, q) for q in range(1, n + 1)]
        basis += [z_point(n, q) for q in range(1, n + 1)]
        imgs = []
        for g in basis:
            pre_key = _solve_linear_combination(cols, g.key())
            pre = PauliPoint.from_key(n, _combine(cols_basis=basis, mask=pre_key))
            fwd = self.apply_point(pre)
            assert fwd.point == g
            imgs.append((pre, fwd.phase >> 1))
        return CliffordTableau(n, imgs)

    def is_valid(self) -> bool:
        n = self.n
        basis = [x_point(n, q) for q in range(1, n + 1)]
        basis += [z_point(n, q) for q in range(1, n + 1)]
        for i in range(2 * n):
            for j in range(i + 1, 2 * n):
                if symplectic_form(self.images[i][0], self.images[j][0]) != symplectic_form(
                    basis[i], basis[j]
                ):
                    return False
        return _rank([p.key() for p, _ in self.images]) == 2 * n

    def __eq__(self, other):
        return (
            isinstance(other, CliffordTableau)
            and self.n == other.n
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.n, self.images))

    def __repr__(self):
        names = [f"x{q}" for q in range(1, self.n + 1)] + [
            f"z{q}" for q in range(1, self.n + 1)
        ]
        body = ", ".join(
            f"{nm}->{'-' if s else '+'}{p.label()}"
            for nm, (p, s) in zip(names, self.images)
        )
        return f"CliffordTableau({body})"

    # -- JSON -----------------------------------------------------------------

    def to_json(self) -> dict:
        out = {}
        for q in range(1, self.n + 1):
            p, s = self.images[q - 1]
            out[f"x{q}"] = ("-" if s else "+") + p.label()
        for q in range(1, self.n + 1):
            p, s = self.images[self.n + q - 1]
            out[f"z{q}"] = ("-" if s else "+") + p.label()
        return out

    @staticmethod
    def from_json(obj: Mapping) -> "CliffordTableau":
        keys = sorted(obj)
        n = len(keys) // 2
        imgs = []
        for prefix in ("x", "z"):
            for q in range(1, n + 1):
                pp = PhasedPauli.from_label(obj[f"{prefix}{q}"])
                if not pp.is_hermitian():
                    raise ValueError("generator images must be Hermitian")
                imgs.append((pp.point, pp.phase >> 1))
        t = CliffordTableau(n, imgs)
        if not t.is_valid():
            raise ValueError("images do not define a symplectic action")
        return t


def _rank(rows: Iterable[int]) -> int:
    basis = []
    for r in rows:
        for b in basis:
            if r >> (b.bit_length() - 1) & 1:
                r ^= b
        if r:
            basis.append(r)
            basis.sort(reverse=True)
    return len(basis)


def _solve_linear_combination(cols: Sequence[int], target: int) -> int:
    """Mask m with xor of cols[i] over set bits of m equal to target."""
    rows = []
    width = max((c.bit_length() for c in cols), default=0)
    width = max(width, target.bit_length())
    # Row-reduce the transposed system.
    aug = []
    for bit in range(width):
        row = 0
        for i, c in enumerate(cols):
            row |= ((c >> bit) & 1) << i
        aug.append((row, (target >> bit) & 1))
    pivots: dict[int, tuple[int, int]] = {}
    for mask, b in aug:
        while mask:
            p = mask.bit_length() - 1
            if p in pivots:
                pm, pb = pivots[p]
                mask ^= pm
                b ^= pb
            else:
                pivots[p] = (mask, b)
                break
        if mask == 0 and b:
            raise ValueError("target is outside the span")
    sol = 0
    for p in sorted(pivots):
        mask, b = pivots[p]
        acc = b
        rest = mask & ~(1 << p)
        while rest:
            q = rest & -rest
            if sol >> (q.bit_length() - 1) & 1:
                acc ^= 1
            rest ^= q
        if acc:
            sol |= 1 << p
    return sol


def _combine(cols_basis: Sequence[PauliPoint], mask: int) -> int:
    key = 0
    for i, p in enumerate(cols_basis):
        if (mask >> i) & 1:
            key ^= p.key()
    return key


def generator_tableaux(n: int) -> list[CliffordTableau]:
    gens = []
    for q in range(1, n + 1):
        gens.append(CliffordTableau.hadamard(n, q))
        gens.append(CliffordTableau.phase_gate(n, q))
    for c in range(1, n + 1):
        for t in range(1, n + 1):
            if c != t:
                gens.append(CliffordTableau.cnot(n, c, t))
    for q in range(1, n + 1):
        gens.append(CliffordTableau.pauli(n, x_point(n, q)))
        gens.append(CliffordTableau.pauli(n, z_point(n, q)))
    return gens


def enumerate_action(n: int, bound: int = 2) -> list[CliffordTableau]:
    """All signed Pauli actions of the n-qubit Clifford group (n <= bound)."""
    if n > bound:
        raise ValueError(f"Clifford enumeration capped at n={bound}")
    gens = generator_tableaux(n)
    start = CliffordTableau.identity(n)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = g.compose(cur)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return sorted(seen, key=lambda t: tuple((p.key(), s) for p, s in t.images))


def operator_orbit(A: QOperator) -> set:
    """Canonical keys of the Clifford orbit of A, by breadth-first search."""
    gens = generator_tableaux(A.n)
    seen = {A.key(): A}
    queue = deque([A])
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = g.conjugate(cur)
            k = nxt.key()
            if k not in seen:
                seen[k] = nxt
                queue.append(nxt)
    return set(seen)


def complete_symplectic_map(
    n: int, prescribed: Sequence[tuple[PauliPoint, PauliPoint]]
) -> CliffordTableau:
    """A tableau (all generator signs +) whose point map extends the
    prescribed source -> destination pairs.

    The pairs must preserve the symplectic form pairwise and be linearly
    independent on the source side.
    """
    srcs: list[PauliPoint] = []
    dsts: list[PauliPoint] = []
    for sp, dp in prescribed:
        for s0, d0 in zip(srcs, dsts):
            if symplectic_form(sp, s0) != symplectic_form(dp, d0):
                raise ValueError("prescribed pairs do not preserve the form")
        srcs.append(sp)
        dsts.append(dp)
    if _rank([p.key() for p in srcs]) != len(srcs):
        raise ValueError("prescribed source points must be independent")

    basis = [x_point(n, q) for q in range(1, n + 1)]
    basis += [z_point(n, q) for q in range(1, n + 1)]
    for g in basis:
        if _in_span([p.key() for p in srcs], g.key()):
            continue
        w = _extension_image(n, srcs, dsts, g)
        srcs.append(g)
        dsts.append(w)

    src_keys = [p.key() for p in srcs]
    imgs = []
    for g in basis:
        mask = _solve_linear_combination(src_keys, g.key())
        key = 0
        for i in range(len(srcs)):
            if (mask >> i) & 1:
                key ^= dsts[i].key()
        imgs.append((PauliPoint.from_key(n, key), 0))
    t = CliffordTableau(n, imgs)
    assert t.is_valid()
    return t


def _in_span(rows: Sequence[int], key: int) -> bool:
    return _rank(list(rows) + [key]) == _rank(rows)


def _extension_image(
    n: int,
    srcs: Sequence[PauliPoint],
    dsts: Sequence[PauliPoint],
    g: PauliPoint,
) -> PauliPoint:
    """Any point w with [dst_i, w] = [src_i, g] for all i, chosen outside
    the destination span so the extended map stays invertible."""
    from .gf2 import _swap_halves  # packed symplectic pairing

    rows = [_swap_halves(d.key(), n) for d in dsts]
    rhs = [symplectic_form(s, g) for s in srcs]
    particular = solve_gf2(rows, rhs, 2 * n)
    if particular is None:
        raise AssertionError("nondegenerate form must make the system solvable")
    dst_keys = [d.key() for d in dsts]
    if not _in_span(dst_keys, particular):
        return PauliPoint.from_key(n, particular)
    # Walk the homogeneous solutions until one leaves the span.
    from .gf2 import _nullspace

    for h in _iterate_null_combinations(_nullspace(rows, 2 * n)):
        cand = particular ^ h
        if not _in_span(dst_keys, cand):
            return PauliPoint.from_key(n, cand)
    raise AssertionError("no invertible extension found")


def _iterate_null_combinations(null_basis: Sequence[int]):
    for mask in range(1, 1 << len(null_basis)):
        h = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                h ^= null_basis[i]
            m >>= 1
            i += 1
        yield h


def tableau_for_projector_pair(
    J0: Subspace, r0: Assignment, J: Subspace, r: Assignment
) -> CliffordTableau:
    """A tableau C with point map sending J0 onto J and
    C(Pi_{J0,r0}) = Pi_{J,r} exactly.

    Only the stated postcondition is canonical; the particular tableau is
    one valid choice (sign fixes are applied by composing with a Pauli
    conjugation chosen from the coset logic of J-perp).
    """
    if J0.n != J.n or J0.dim != J.dim:
        raise ValueError("subspace dimensions must match")
    n = J0.n
    pairs = list(zip(J0.basis_points(), J.basis_points()))
    base = complete_symplectic_map(n, pairs)
    moved = base.conjugate(stabilizer_projector(J0, r0))
    # Read off the sign error on each basis row of J, then cancel it with
    # a Pauli whose commutation pattern reproduces exactly that functional.
    rows = J.basis_points()
    delta = []
    for p in rows:
        c = moved.coeff(p)
        got = 0 if c.a > 0 else 1
        delta.append(got ^ r.value(p))
    from .gf2 import _swap_halves

    u_key = solve_gf2([_swap_halves(p.key(), n) for p in rows], delta, 2 * n)
    assert u_key is not None
    fix = CliffordTableau.pauli(n, PauliPoint.from_key(n, u_key))
    result = fix.compose(base)
    assert result.conjugate(stabilizer_projector(J0, r0)) == stabilizer_projector(J, r)
    return result
