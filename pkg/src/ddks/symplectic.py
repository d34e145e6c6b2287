"""The mod-center linear algebra of an extra-special 2-group.

V = G/Z(G) is an F2 symplectic space: the pairing comes from commutators
([x, y] = z^(u,v)) and the quadratic form from squares (x^2 = z^q(v)).
Structures of type (2, 2) are counted by enumerating their images in V
("reduced structures") and lifting each one in 2^8 ways.

Vectors are bitmasks over the ordered basis (r̄1, t̄1, ..., r̄b, t̄b)
given by the generator images; bit 2j is the r̄-coordinate, bit 2j+1 the
t̄-coordinate of the j-th pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .group_core import FiniteGroup
from .structures import (
    DDKStructure,
    StructureType,
    bulk_relator_filter,
    generation_mask_filter,
    relations_for_type,
    verify_structure,
)


def sp_order(b: int) -> int:
    """|Sp(2b, F2)| by the standard product formula."""
    if b < 1:
        raise ValueError("b >= 1 required")
    out = 2 ** (b * b)
    for i in range(1, b + 1):
        out *= 4**i - 1
    return out


def orthogonal_order(b: int, epsilon: int) -> int:
    """|O_epsilon(2b, F2)|."""
    if b < 1 or epsilon not in (1, -1):
        raise ValueError("need b >= 1 and epsilon in {+1, -1}")
    out = 2 ** (b * (b - 1) + 1) * (2**b - epsilon)
    for i in range(1, b):
        out *= 4**i - 1
    return out


def aut_order(b: int, epsilon: int) -> int:
    """|Aut(G)| for the extra-special group of order 2^(2b+1) and type epsilon."""
    if b < 1 or epsilon not in (1, -1):
        raise ValueError("need b >= 1 and epsilon in {+1, -1}")
    out = 2 ** (b * (b + 1) + 1) * (2**b - epsilon)
    for i in range(1, b):
        out *= 4**i - 1
    return out


class SymplecticSpace:
    """V = G/Z(G) with pairing, quadratic form, projection and section."""

    def __init__(self, G: FiniteGroup):
        center = G.center()
        if len(center) != 2:
            raise ValueError("extra-special input needed: |Z(G)| must be 2")
        self.group = G
        self.z_element = max(center)

        # V must be elementary abelian; label cosets by the projection
        quotient, proj = G.quotient(center)
        if any(quotient.element_order[x] > 2 for x in quotient.elements()):
            raise ValueError("G/Z(G) is not elementary abelian")
        if len(derived := G.derived_subgroup()) != 2:
            raise ValueError("extra-special input needed: [G, G] must equal Z(G)")
        assert set(derived) == set(center)

        # coordinates: basis vectors are the nonzero generator images
        basis_cosets = [
            proj[g] for g in G.generator_elements if proj[g] != 0
        ]
        dim = len(basis_cosets)
        if quotient.order != 2**dim or dim % 2 != 0:
            raise ValueError("generator images do not give a basis of G/Z(G)")
        self.dim = dim
        self.b = dim // 2

        coord = {0: 0}
        frontier = [0]
        while frontier:
            nxt = []
            for y in frontier:
                for i, g in enumerate(basis_cosets):
                    image = quotient.mul(y, g)
                    v = coord[y] ^ (1 << i)
                    if image in coord:
                        if coord[image] != v:
                            raise ValueError(
                                "generator images do not give a basis of G/Z(G)"
                            )
                    else:
                        coord[image] = v
                        nxt.append(image)
            frontier = nxt
        if len(coord) != quotient.order:
            raise ValueError("generator images do not generate G/Z(G)")

        self._projection = [coord[proj[x]] for x in G.elements()]
        section = [G.order] * (2**dim)
        for x in G.elements():
            v = self._projection[x]
            if x < section[v]:
                section[v] = x
        self._section = section

        # Gram matrix from commutators of the basis lifts
        lifts = [section[1 << i] for i in range(dim)]

        def comm_exp(x: int, y: int) -> int:
            c = G.commutator(x, y)
            if c == 0:
                return 0
            if c == self.z_element:
                return 1
            raise ValueError("commutator outside the center")

        self.gram = [
            [comm_exp(lifts[i], lifts[j]) for j in range(dim)]
            for i in range(dim)
        ]
        expected = [
            [
                1 if (i // 2 == j // 2 and i != j) else 0
                for j in range(dim)
            ]
            for i in range(dim)
        ]
        if self.gram != expected:
            raise ValueError(
                "generator images are not an ordered symplectic basis"
            )
        # pair(u, v) = popcount(u & J v); J swaps each (r, t) bit pair
        self._jtable = [self._apply_j(v) for v in range(2**dim)]

        def square_exp(x: int) -> int:
            s = G.mul(x, x)
            if s == 0:
                return 0
            if s == self.z_element:
                return 1
            raise ValueError("square outside the center (exponent > 4)")

        self.q_table = [square_exp(section[v]) for v in range(2**dim)]

        # construction-time invariant checks
        for v in range(2**dim):
            if self.pair(v, v) != 0:
                raise AssertionError("pairing is not alternating")
        for v in range(1, 2**dim):
            if all(self.pair(v, u) == 0 for u in range(2**dim)):
                raise AssertionError("pairing is degenerate")
        for u in range(2**dim):
            for v in range(2**dim):
                if (
                    self.q_table[u ^ v]
                    != (self.q_table[u] + self.q_table[v] + self.pair(u, v)) % 2
                ):
                    raise AssertionError("parallelogram law fails")
        for x in G.elements():
            for y in G.elements():
                if self.pair(self._projection[x], self._projection[y]) != comm_exp(x, y):
                    raise AssertionError("pairing disagrees with commutators")
            if self.q_table[self._projection[x]] != square_exp(x):
                raise AssertionError("form disagrees with squares")

    def _apply_j(self, v: int) -> int:
        out = 0
        for j in range(self.b):
            pair_bits = (v >> (2 * j)) & 3
            out |= ((pair_bits >> 1) | ((pair_bits & 1) << 1)) << (2 * j)
        return out

    def pair(self, u: int, v: int) -> int:
        return bin(u & self._jtable[v]).count("1") & 1

    def q(self, v: int) -> int:
        return self.q_table[v]

    def projection(self, x: int) -> int:
        return self._projection[x]

    def section(self, v: int) -> int:
        return self._section[v]

    def vectors(self) -> range:
        return range(2**self.dim)


def induced_space(G: FiniteGroup) -> SymplecticSpace:
    return SymplecticSpace(G)


def form_type(space: SymplecticSpace) -> int:
    """epsilon from the zero count of q: #zeros = 2^(2b-1) + epsilon 2^(b-1)."""
    zeros = sum(1 for v in space.vectors() if space.q(v) == 0)
    half = 2 ** (space.dim - 1)
    step = 2 ** (space.b - 1)
    if zeros == half + step:
        return 1
    if zeros == half - step:
        return -1
    raise ValueError(f"zero count {zeros} matches neither form type")


def arf_invariant(space: SymplecticSpace) -> int:
    """Sum of q(e)q(f) over the dual pairs of one symplectic basis."""
    basis = next(enumerate_symplectic_bases(space))
    return (
        sum(space.q(basis[2 * i]) * space.q(basis[2 * i + 1]) for i in range(space.b))
        % 2
    )


def enumerate_symplectic_bases(space: SymplecticSpace) -> Iterator[tuple[int, ...]]:
    """All ordered symplectic bases (e1, f1, e2, f2) of a dim-4 space."""
    if space.dim != 4:
        raise ValueError("basis enumeration supports dim 4 only")
    pair = space.pair
    for e1 in range(1, 16):
        for f1 in range(1, 16):
            if pair(e1, f1) != 1:
                continue
            perp = [
                v for v in range(1, 16)
                if pair(e1, v) == 0 and pair(f1, v) == 0
            ]
            for e2 in perp:
                for f2 in perp:
                    if pair(e2, f2) == 1:
                        yield (e1, f1, e2, f2)


@dataclass(frozen=True)
class ReducedStructure:
    """Images in V of the eight non-z slots of a type-(2,2) structure."""

    vectors: tuple[int, ...]
    case_tag: str

    def __post_init__(self):
        if len(self.vectors) != 8:
            raise ValueError("a reduced structure has 8 vectors")
        if self.case_tag not in ("a", "b"):
            raise ValueError("case tag must be 'a' or 'b'")


def _span_dim(space: SymplecticSpace, vectors: Sequence[int]) -> int:
    pivots: dict[int, int] = {}  # leading bit -> reduced vector
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top in pivots:
                v ^= pivots[top]
            else:
                pivots[top] = v
                break
    return len(pivots)


def verify_reduced(
    space: SymplecticSpace, vectors: Sequence[int]
) -> tuple[bool, str | None]:
    """Check the full pairing-constraint table and spanning."""
    if len(vectors) != 8:
        raise ValueError("expected 8 vectors")
    r11, t11, r12, t12, r21, t21, r22, t22 = vectors
    pair = space.pair
    if (pair(r12, t12) + pair(r11, t11)) % 2 != 1:
        return False, "sum condition on (r12,t12), (r11,t11) violated"
    if (pair(r21, t21) + pair(r22, t22)) % 2 != 1:
        return False, "sum condition on (r21,t21), (r22,t22) violated"
    rs1, ts1 = (r11, r12), (t11, t12)
    rs2, ts2 = (r21, r22), (t21, t22)
    for j in range(2):
        for k in range(2):
            delta = 1 if j == k else 0
            if pair(rs1[j], ts2[k]) != delta:
                return False, f"(r1{j+1}, t2{k+1}) != {delta}"
            if pair(ts1[j], rs2[k]) != delta:
                return False, f"(t1{j+1}, r2{k+1}) != {delta}"
            if pair(rs1[j], rs2[k]) != 0:
                return False, f"(r1{j+1}, r2{k+1}) != 0"
            if pair(ts1[j], ts2[k]) != 0:
                return False, f"(t1{j+1}, t2{k+1}) != 0"
    if _span_dim(space, vectors) != space.dim:
        return False, "vectors do not span V"
    return True, None


_COEFF_MATRICES = tuple(
    (a, b, c, d)
    for a in (0, 1)
    for b in (0, 1)
    for c in (0, 1)
    for d in (0, 1)
    if (a * d + b * c) % 2 == 1
)

# case (b) swaps the roles of the quadruples (r11,t11,r22,t22) and
# (r12,t12,r21,t21): exchange the two j-indices in each half
_J_SWAP = (2, 3, 0, 1, 6, 7, 4, 5)


def enumerate_reduced_structures(space: SymplecticSpace) -> Iterator[ReducedStructure]:
    """All reduced structures: case (a) from symplectic bases and the six
    coefficient matrices with ad+bc=1, then case (b) as the swapped images.
    Every emitted tuple is re-verified against the constraint table."""
    if space.dim != 4:
        raise ValueError("reduced enumeration supports dim 4 only")
    bases = list(enumerate_symplectic_bases(space))
    for case in ("a", "b"):
        for r11, t11, r22, t22 in bases:
            for a, b, c, d in _COEFF_MATRICES:
                r12 = (c * r11) ^ (a * t11) ^ r22
                t12 = (d * r11) ^ (b * t11) ^ t22
                r21 = r11 ^ (b * r22) ^ (a * t22)
                t21 = t11 ^ (d * r22) ^ (c * t22)
                vectors = (r11, t11, r12, t12, r21, t21, r22, t22)
                if case == "b":
                    vectors = tuple(vectors[i] for i in _J_SWAP)
                ok, diag = verify_reduced(space, vectors)
                if not ok:
                    raise AssertionError(f"constructed tuple invalid: {diag}")
                if space.pair(vectors[0], vectors[1]) != (1 if case == "a" else 0):
                    raise AssertionError("case tag disagrees with pairing pattern")
                yield ReducedStructure(vectors, case)


def reduce_structure(space: SymplecticSpace, s: DDKStructure) -> ReducedStructure:
    """Project a verified structure to V."""
    vectors = tuple(space.projection(e) for e in s.elements[:8])
    ok, diag = verify_reduced(space, vectors)
    if not ok:
        raise ValueError(f"projection is not a reduced structure: {diag}")
    tag = "a" if space.pair(vectors[0], vectors[1]) == 1 else "b"
    return ReducedStructure(vectors, tag)


def lift_reduced(
    space: SymplecticSpace, r: ReducedStructure, G: FiniteGroup
) -> Iterator[DDKStructure]:
    """The 2^8 structures over a reduced structure: multiply each section
    lift by z or not, slotwise. Every candidate must verify."""
    if G is not space.group:
        raise ValueError("space was not built from this group")
    z = space.z_element
    base = [space.section(v) for v in r.vectors]
    shifted = [G.mul(x, z) for x in base]
    t = StructureType(2, 2)
    for mask in range(256):
        elems = tuple(
            shifted[i] if (mask >> i) & 1 else base[i] for i in range(8)
        ) + (z,)
        ok, diag = verify_structure(G, elems, t)
        if not ok:
            raise AssertionError(f"lift failed verification: {diag}")
        yield DDKStructure(G, t, elems)


def symplectic_structure_rows(G: FiniteGroup) -> np.ndarray:
    """All type-(2,2) structures via the reduced-then-lift construction,
    as a lexicographically sorted (count, 9) array; bulk re-verified."""
    space = induced_space(G)
    reduced = [r.vectors for r in enumerate_reduced_structures(space)]
    base = np.array(
        [[space.section(v) for v in vecs] for vecs in reduced], dtype=np.uint8
    )
    mulz = np.array(
        [G.mul(x, space.z_element) for x in G.elements()], dtype=np.uint8
    )
    masks = np.arange(256, dtype=np.uint16)
    patterns = ((masks[:, None] >> np.arange(8)[None, :]) & 1).astype(bool)
    lifted = np.where(patterns[None, :, :], mulz[base][:, None, :], base[:, None, :])
    rows = lifted.reshape(-1, 8)
    rows = np.concatenate(
        [rows, np.full((len(rows), 1), space.z_element, dtype=np.uint8)], axis=1
    )
    rows = rows[np.lexsort(rows.T[::-1])]
    ok = bulk_relator_filter(G, rows, relations_for_type(StructureType(2, 2)))
    orders = np.array(G.element_order, dtype=np.int32)
    ok &= orders[rows[:, -1]] == 2
    ok &= generation_mask_filter(G, rows)
    if not ok.all():
        raise AssertionError(
            f"{int((~ok).sum())} lifted candidates failed verification"
        )
    return rows


def count_structures_symplectic(G: FiniteGroup) -> int:
    return len(symplectic_structure_rows(G))
