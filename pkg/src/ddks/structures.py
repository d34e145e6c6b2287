"""Diagonal double Kodaira structures: relation systems, verification, search.

A structure of type (b, n) on a finite group G is an ordered tuple

    (r_11, t_11, ..., r_1b, t_1b, r_21, t_21, ..., r_2b, t_2b, z)

of generators of G with o(z) = n satisfying two surface relations and the
conjugacy-action relations of the genus-b pure braid group of two strands;
a prestructure is the genus-2 tuple subject to the conjugacy relations
(R1)-(R10), (T1)-(T10) only, with o(z) >= 2 and no generation requirement.

Relators are oriented as LHS * RHS^-1 for a relation "LHS = RHS".
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import multiprocessing
import numpy as np

from .group_core import (
    ElementSet,
    FiniteGroup,
    Homomorphism,
    Presentation,
    Word,
    commutator,
)

SEARCH_ORDER_CAP = 64


@dataclass(frozen=True)
class StructureType:
    """Type (b, n): base/fibre genus parameter b and branching order n."""

    b: int
    n: int

    def __post_init__(self):
        if self.b < 2 or self.n < 2:
            raise ValueError("structure type requires b >= 2 and n >= 2")

    @property
    def tuple_length(self) -> int:
        return 4 * self.b + 1


# -- tuple slot layout ------------------------------------------------

def slot_index(i: int, kind: str, j: int, b: int) -> int:
    """Index of r_ij / t_ij / z in the structure tuple."""
    if kind == "z":
        return 4 * b
    base = 0 if i == 1 else 2 * b
    return base + 2 * (j - 1) + (0 if kind == "r" else 1)


def slot_names(b: int) -> list[str]:
    names = []
    for i in (1, 2):
        for j in range(1, b + 1):
            names += [f"r{i}{j}", f"t{i}{j}"]
    names.append("z")
    return names


def _r(i: int, j: int, b: int) -> Word:
    return Word.gen(slot_index(i, "r", j, b))


def _t(i: int, j: int, b: int) -> Word:
    return Word.gen(slot_index(i, "t", j, b))


def _z(b: int) -> Word:
    return Word.gen(4 * b)


# -- relation systems -------------------------------------------------

@lru_cache(maxsize=None)
def labeled_relations_for_type(t: StructureType) -> tuple[tuple[str, Word], ...]:
    """The full relator list, as (label, relator) pairs.

    Two surface relators S1, S2, then the conjugacy blocks: R-labels for the
    action of r_1j, T-labels for the action of t_1j, each numbered in
    emission order (j ascending; within each j, the r_2k targets with k
    descending, then the t_2k targets with k descending, then z).  For
    b = 2 this reproduces exactly the labels (S1), (S2), (R1)-(R10),
    (T1)-(T10).
    """
    b = t.b
    out: list[tuple[str, Word]] = []
    z = _z(b)

    # S1:  [r_1b^-1, t_1b^-1] t_1b^-1 ... [r_11^-1, t_11^-1] t_11^-1
    #      (t_11 t_12 ... t_1b)  =  z
    lhs = Word(())
    for j in range(b, 0, -1):
        lhs = lhs * commutator(_r(1, j, b).inverse(), _t(1, j, b).inverse())
        lhs = lhs * _t(1, j, b).inverse()
    for j in range(1, b + 1):
        lhs = lhs * _t(1, j, b)
    out.append(("S1", lhs * z.inverse()))

    # S2:  [r_21^-1, t_21] t_21 ... [r_2b^-1, t_2b] t_2b
    #      (t_2b^-1 ... t_21^-1)  =  z^-1
    lhs = Word(())
    for j in range(1, b + 1):
        lhs = lhs * commutator(_r(2, j, b).inverse(), _t(2, j, b))
        lhs = lhs * _t(2, j, b)
    for j in range(b, 0, -1):
        lhs = lhs * _t(2, j, b).inverse()
    out.append(("S2", lhs * z))

    def conj_rhs_r(j: int, k: int) -> Word:
        # [r_1j, r_2k] = ...
        if j <= k:
            return Word(())
        return (
            z.inverse() * _r(2, k, b) * _r(2, j, b).inverse() * z
            * _r(2, j, b) * _r(2, k, b).inverse()
        )

    def conj_rhs_rt(j: int, k: int) -> Word:
        # [r_1j, t_2k] = ...
        if j < k:
            return Word(())
        if j == k:
            return z.inverse()
        return commutator(z.inverse(), _t(2, k, b))

    def conj_rhs_tr(j: int, k: int) -> Word:
        # [t_1j, r_2k] = ...
        if j < k:
            return Word(())
        if j == k:
            return _t(2, j, b).inverse() * z * _t(2, j, b)
        return commutator(_t(2, j, b).inverse(), z)

    def conj_rhs_tt(j: int, k: int) -> Word:
        # [t_1j, t_2k] = ...
        if j < k:
            return Word(())
        if j == k:
            return commutator(_t(2, j, b).inverse(), z)
        tj, tk = _t(2, j, b), _t(2, k, b)
        return (
            tj.inverse() * z * tj * z.inverse() * tk * z
            * tj.inverse() * z.inverse() * tj * tk.inverse()
        )

    idx = 0
    for j in range(1, b + 1):
        for k in range(b, 0, -1):
            idx += 1
            out.append((f"R{idx}", commutator(_r(1, j, b), _r(2, k, b)) * conj_rhs_r(j, k).inverse()))
        for k in range(b, 0, -1):
            idx += 1
            out.append((f"R{idx}", commutator(_r(1, j, b), _t(2, k, b)) * conj_rhs_rt(j, k).inverse()))
        idx += 1
        out.append((f"R{idx}", commutator(_r(1, j, b), z) * commutator(_r(2, j, b).inverse(), z).inverse()))
    idx = 0
    for j in range(1, b + 1):
        for k in range(b, 0, -1):
            idx += 1
            out.append((f"T{idx}", commutator(_t(1, j, b), _r(2, k, b)) * conj_rhs_tr(j, k).inverse()))
        for k in range(b, 0, -1):
            idx += 1
            out.append((f"T{idx}", commutator(_t(1, j, b), _t(2, k, b)) * conj_rhs_tt(j, k).inverse()))
        idx += 1
        out.append((f"T{idx}", commutator(_t(1, j, b), z) * commutator(_t(2, j, b).inverse(), z).inverse()))

    assert len(out) == 4 * b * b + 2 * b + 2
    return tuple(out)


def relations_for_type(t: StructureType) -> list[Word]:
    return [w for _, w in labeled_relations_for_type(t)]


@lru_cache(maxsize=None)
def labeled_simplified_relations_for_type(t: StructureType) -> tuple[tuple[str, Word], ...]:
    """The class-2 form of the relation system ([G,G] central).

    z-centrality relators C1..C4b, surface relators S1'/S2' without the
    boundary t-products, and plain commutator values [r_1j, t_2k] =
    z^(-delta), [t_1j, r_2k] = z^(delta), [r_1j, r_2k] = [t_1j, t_2k] = 1.
    """
    b = t.b
    z = _z(b)
    out: list[tuple[str, Word]] = []
    idx = 0
    for i in (1, 2):
        for j in range(1, b + 1):
            for kind in ("r", "t"):
                idx += 1
                g = _r(i, j, b) if kind == "r" else _t(i, j, b)
                out.append((f"C{idx}", commutator(g, z)))

    lhs = Word(())
    for j in range(b, 0, -1):
        lhs = lhs * commutator(_r(1, j, b).inverse(), _t(1, j, b).inverse())
    out.append(("S1'", lhs * z.inverse()))
    lhs = Word(())
    for j in range(1, b + 1):
        lhs = lhs * commutator(_r(2, j, b).inverse(), _t(2, j, b))
    out.append(("S2'", lhs * z))

    idx = 0
    for j in range(1, b + 1):
        for k in range(1, b + 1):
            idx += 1
            out.append((f"R'{idx}", commutator(_r(1, j, b), _r(2, k, b))))
            idx += 1
            rhs = z.inverse() if j == k else Word(())
            out.append((f"R'{idx}", commutator(_r(1, j, b), _t(2, k, b)) * rhs.inverse()))
    idx = 0
    for j in range(1, b + 1):
        for k in range(1, b + 1):
            idx += 1
            rhs = z if j == k else Word(())
            out.append((f"T'{idx}", commutator(_t(1, j, b), _r(2, k, b)) * rhs.inverse()))
            idx += 1
            out.append((f"T'{idx}", commutator(_t(1, j, b), _t(2, k, b))))
    return tuple(out)


def simplified_relations_for_type(t: StructureType) -> list[Word]:
    return [w for _, w in labeled_simplified_relations_for_type(t)]


@lru_cache(maxsize=None)
def braid_presentation(b: int) -> Presentation:
    """The two-strand genus-b pure braid group presentation.

    Generators rho_ij, tau_ij, A12 in tuple-slot order; relators are
    exactly relations_for_type (with A12 in the z slot).
    """
    names = []
    for i in (1, 2):
        for j in range(1, b + 1):
            names += [f"rho{i}{j}", f"tau{i}{j}"]
    names.append("A12")
    rels = relations_for_type(StructureType(b, 2))  # relators don't involve n
    return Presentation(tuple(names), tuple(rels))


# prestructure = genus-2 conjugacy relations only
_PRE_TYPE = StructureType(2, 2)


def prestructure_relations() -> tuple[tuple[str, Word], ...]:
    return tuple(
        (label, w)
        for label, w in labeled_relations_for_type(_PRE_TYPE)
        if not label.startswith("S")
    )


# -- structure containers ---------------------------------------------

@dataclass(frozen=True)
class DDKStructure:
    ambient: FiniteGroup
    stype: StructureType
    elements: tuple[int, ...]

    def __post_init__(self):
        if len(self.elements) != self.stype.tuple_length:
            raise ValueError(
                f"type ({self.stype.b},{self.stype.n}) needs "
                f"{self.stype.tuple_length} elements, got {len(self.elements)}"
            )

    @property
    def z(self) -> int:
        return self.elements[-1]

    def words(self) -> list[str] | None:
        if self.ambient.element_words is None:
            return None
        return [
            self.ambient.element_words[e].format(self.ambient.generator_names)
            for e in self.elements
        ]


@dataclass(frozen=True)
class Prestructure:
    ambient: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        if len(self.elements) != 9:
            raise ValueError("a prestructure has 9 elements")

    @property
    def z(self) -> int:
        return self.elements[-1]


@dataclass(frozen=True)
class KSubgroupData:
    K1: ElementSet
    K2: ElementSet
    m1: int
    m2: int
    strong: bool


# -- verification -----------------------------------------------------

def verify_structure(
    G: FiniteGroup, elements: Sequence[int], t: StructureType
) -> tuple[bool, str | None]:
    """Check o(z) = n, all relators, and generation; diagnostic on failure."""
    elements = tuple(elements)
    if len(elements) != t.tuple_length:
        raise ValueError(
            f"expected {t.tuple_length} elements for type ({t.b},{t.n}), "
            f"got {len(elements)}"
        )
    oz = G.element_order[elements[-1]]
    if oz < 2:
        return False, "o(z) >= 2 violated"
    if oz != t.n:
        return False, f"o(z) = {t.n} violated (o(z) = {oz})"
    for label, rel in labeled_relations_for_type(t):
        if G.evaluate_word(rel, elements) != 0:
            return False, f"relation {label} violated"
    if len(G.subgroup_generated(elements)) != G.order:
        return False, "generation violated"
    return True, None


def verify_prestructure(
    G: FiniteGroup, elements: Sequence[int]
) -> tuple[bool, str | None]:
    """Check o(z) >= 2 and the twenty genus-2 conjugacy relations."""
    elements = tuple(elements)
    if len(elements) != 9:
        raise ValueError(f"expected 9 elements, got {len(elements)}")
    if G.element_order[elements[-1]] < 2:
        return False, "o(z) >= 2 violated"
    for label, rel in prestructure_relations():
        if G.evaluate_word(rel, elements) != 0:
            return False, f"relation {label} violated"
    return True, None


def k_subgroups(s: DDKStructure) -> KSubgroupData:
    """K1 / K2 generated by each half of the tuple plus z, with indices."""
    b = s.stype.b
    g = s.ambient
    k1 = g.subgroup_generated(s.elements[0:2 * b] + (s.z,))
    k2 = g.subgroup_generated(s.elements[2 * b:4 * b] + (s.z,))
    m1 = g.order // len(k1)
    m2 = g.order // len(k2)
    return KSubgroupData(k1, k2, m1, m2, strong=(m1 == 1 and m2 == 1))


def structure_to_hom(s: DDKStructure) -> Homomorphism:
    """The surjection from the pure braid group presentation defined by s."""
    hom = Homomorphism(braid_presentation(s.stype.b), s.ambient, s.elements)
    if not hom.is_surjective():
        raise AssertionError("verified structure failed to generate the group")
    if s.ambient.element_order[s.z] != s.stype.n:
        raise AssertionError("verified structure has wrong o(z)")
    return hom


def example_structure(G: FiniteGroup, n: int = 2) -> DDKStructure:
    """The explicit genus-2 structure on an extra-special group of order 32.

    Built from the presentation generators (r1, t1, r2, t2, z) as
    r11 = r1, t11 = t1, r12 = r2 t1, t12 = r1 t2,
    r21 = r1 t2, t21 = r2 t1, r22 = r2, t22 = t2.
    """
    if len(G.generator_elements) != 5:
        raise ValueError("expected a 5-generator extra-special realization")
    r1, t1, r2, t2, z = G.generator_elements
    elems = (
        r1, t1, G.mul(r2, t1), G.mul(r1, t2),
        G.mul(r1, t2), G.mul(r2, t1), r2, t2,
        z,
    )
    s = DDKStructure(G, StructureType(2, n), elems)
    ok, diag = verify_structure(G, elems, s.stype)
    if not ok:
        raise AssertionError(f"example structure invalid: {diag}")
    return s


# -- subgroup lattice helpers (for bulk generation tests) -------------

def all_subgroup_masks(G: FiniteGroup) -> list[int]:
    """Bitmasks of every subgroup, via incremental generator extension."""
    assert G.order <= 64, "mask representation requires order <= 64"
    cached = getattr(G, "_subgroup_masks", None)
    if cached is not None:
        return cached
    closures: dict[int, int] = {}

    def close(members: Iterable[int]) -> int:
        sub = G.subgroup_generated(members)
        mask = 0
        for m in sub:
            mask |= 1 << m
        return mask

    found = {close({g}) for g in G.elements()}
    work = list(found)
    while work:
        h = work.pop()
        members = [i for i in range(G.order) if h >> i & 1]
        for g in G.elements():
            if h >> g & 1:
                continue
            k = close(members + [g])
            if k not in found:
                found.add(k)
                work.append(k)
    out = sorted(found)
    G._subgroup_masks = out
    return out


def maximal_subgroup_masks(G: FiniteGroup) -> list[int]:
    cached = getattr(G, "_maximal_masks", None)
    if cached is not None:
        return cached
    full = (1 << G.order) - 1
    proper = [m for m in all_subgroup_masks(G) if m != full]
    maximal = [
        m for m in proper
        if not any(m != o and m & ~o == 0 for o in proper)
    ]
    G._maximal_masks = maximal
    return maximal


def generation_mask_filter(G: FiniteGroup, rows: np.ndarray) -> np.ndarray:
    """Boolean mask: which rows (tuples of element indices) generate G.

    A tuple generates G iff it is not contained in any maximal subgroup.
    """
    maximal = maximal_subgroup_masks(G)
    masks = np.zeros(len(rows), dtype=np.uint64)
    one = np.uint64(1)
    for col in range(rows.shape[1]):
        masks |= one << rows[:, col].astype(np.uint64)
    ok = np.ones(len(rows), dtype=bool)
    for m in maximal:
        ok &= (masks & ~np.uint64(m)) != 0
    return ok


def bulk_relator_filter(
    G: FiniteGroup, rows: np.ndarray, relators: Iterable[Word]
) -> np.ndarray:
    """Boolean mask: rows under which every relator evaluates to identity."""
    n = G.order
    flat_mul = np.array(G.cayley, dtype=np.int32).reshape(-1)
    inv = np.array(G.inverse, dtype=np.int32)
    ok = np.ones(len(rows), dtype=bool)
    cols = rows.astype(np.int32)
    for rel in relators:
        acc = np.zeros(len(rows), dtype=np.int32)
        for letter in rel:
            g = cols[:, abs(letter) - 1]
            if letter < 0:
                g = inv[g]
            acc = flat_mul[acc * n + g]
        ok &= acc == 0
    return ok


# -- backtracking search ----------------------------------------------

class _Engine:
    """Precomputed multiplication/commutator tables for the genus-2 search."""

    def __init__(self, cayley: list[list[int]], element_order: list[int]):
        n = len(cayley)
        self.n = n
        self.element_order = element_order
        flat = array("i", [0] * (n * n))
        for a in range(n):
            row = cayley[a]
            base = a * n
            for b_ in range(n):
                flat[base + b_] = row[b_]
        self.mul = flat
        inv = array("i", [0] * n)
        for a in range(n):
            inv[a] = cayley[a].index(0)
        self.inv = inv
        comm = array("i", [0] * (n * n))
        for a in range(n):
            ia = inv[a]
            for b_ in range(n):
                comm[a * n + b_] = flat[flat[flat[a * n + b_] * n + ia] * n + inv[b_]]
        self.comm = comm
        # right_sol[a][c] = ascending list of x with [a, x] = c
        # left_sol[b][c]  = ascending list of x with [x, b] = c
        right: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(n)]
        left: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(n)]
        for a in range(n):
            base = a * n
            for b_ in range(n):
                c = comm[base + b_]
                right[a][c].append(b_)
                left[b_][c].append(a)
        self.right_sol = right
        self.left_sol = left

    @staticmethod
    def for_group(G: FiniteGroup) -> "_Engine":
        cached = getattr(G, "_search_engine", None)
        if cached is None:
            cached = _Engine(G.cayley, list(G.element_order))
            G._search_engine = cached
        return cached


def _dfs_genus2(
    eng: _Engine, z: int, r11: int, structure_mode: bool
) -> Iterator[tuple[int, ...]]:
    """All genus-2 tuples with the given z, r11 satisfying the conjugacy
    relations (and, in structure mode, the surface relations).

    Variable order: t21 by (R4), r12 by (R9), t22 by (R8), t11 by (T5),
    r21 by (T2), t12 by (T10), r22 by (T6); every other relation is
    applied as soon as its variables are assigned.
    """
    n = eng.n
    mul = eng.mul
    inv = eng.inv
    comm = eng.comm
    right = eng.right_sol
    left = eng.left_sol
    iz = inv[z]
    comm_r11_z = comm[r11 * n + z]
    for t21 in right[r11][iz]:                        # R4: [r11, t21] = z^-1
        it21 = inv[t21]
        c_t9_51 = comm[iz * n + t21]                  # R9 rhs: [z^-1, t21]
        c4 = comm[it21 * n + z]                       # T4/T5 rhs: [t21^-1, z]
        c2 = mul[mul[it21 * n + z] * n + t21]         # T2 rhs: t21^-1 z t21
        for r12 in left[t21][c_t9_51]:                # R9: [r12, t21] = [z^-1, t21]
            for t22 in right[r12][iz]:                # R8: [r12, t22] = z^-1
                if comm[r11 * n + t22]:               # R3: [r11, t22] = 1
                    continue
                it22 = inv[t22]
                c10 = comm[it22 * n + z]              # T7/T8/T10 rhs: [t22^-1, z]
                # T9 rhs: t22^-1 z t22 z^-1 t21 z t22^-1 z^-1 t22 t21^-1
                v = mul[mul[it22 * n + z] * n + t22]
                v = mul[mul[mul[v * n + iz] * n + t21] * n + z]
                v = mul[mul[mul[v * n + it22] * n + iz] * n + t22]
                t9_rhs = mul[v * n + it21]
                c6 = mul[mul[it22 * n + z] * n + t22]  # T6 rhs: t22^-1 z t22
                for t11 in left[z][c4]:               # T5: [t11, z] = [t21^-1, z]
                    if comm[t11 * n + t22]:           # T3: [t11, t22] = 1
                        continue
                    if comm[t11 * n + t21] != c4:     # T4: [t11, t21] = [t21^-1, z]
                        continue
                    if structure_mode:
                        # S1 partial: B = [r11^-1, t11^-1]
                        s1_mid = comm[inv[r11] * n + inv[t11]]
                    for r21 in right[t11][c2]:        # T2: [t11, r21] = t21^-1 z t21
                        if comm[r11 * n + r21]:       # R2: [r11, r21] = 1
                            continue
                        ir21 = inv[r21]
                        if comm_r11_z != comm[ir21 * n + z]:  # R5
                            continue
                        c_s2 = comm[ir21 * n + t21]   # S2 prefix: [r21^-1, t21]
                        for t12 in left[z][c10]:      # T10: [t12, z] = [t22^-1, z]
                            if comm[t12 * n + r21] != c10:    # T7
                                continue
                            if comm[t12 * n + t22] != c10:    # T8
                                continue
                            if comm[t12 * n + t21] != t9_rhs:  # T9
                                continue
                            it12 = inv[t12]
                            if structure_mode:
                                # S1: [r12^-1, t12^-1] t12^-1 [r11^-1, t11^-1] t12 = z
                                v = comm[inv[r12] * n + it12]
                                v = mul[mul[mul[v * n + it12] * n + s1_mid] * n + t12]
                                if v != z:
                                    continue
                            for r22 in right[t12][c6]:  # T6: [t12, r22] = t22^-1 z t22
                                if comm[r11 * n + r22]:        # R1
                                    continue
                                if comm[r12 * n + r22]:        # R6
                                    continue
                                if comm[t11 * n + r22]:        # T1
                                    continue
                                ir22 = inv[r22]
                                # R7: [r12, r21] = z^-1 r21 r22^-1 z r22 r21^-1
                                v = mul[mul[iz * n + r21] * n + ir22]
                                v = mul[mul[mul[v * n + z] * n + r22] * n + ir21]
                                if comm[r12 * n + r21] != v:
                                    continue
                                if comm[r12 * n + z] != comm[ir22 * n + z]:  # R10
                                    continue
                                if structure_mode:
                                    # S2: [r21^-1, t21] t21 [r22^-1, t22] t21^-1 = z^-1
                                    v = mul[mul[mul[c_s2 * n + t21] * n + comm[ir22 * n + t22]] * n + it21]
                                    if v != iz:
                                        continue
                                yield (r11, t11, r12, t12, r21, t21, r22, t22, z)


def _z_candidates_structures(G: FiniteGroup, n: int) -> list[int]:
    return [x for x in G.elements() if G.element_order[x] == n]


def _z_candidates_prestructures(G: FiniteGroup) -> list[int]:
    return [x for x in G.elements() if G.element_order[x] >= 2]


# worker plumbing for parallel enumeration ---------------------------

_WORKER_ENGINE: _Engine | None = None


def _worker_init(cayley, element_order):
    global _WORKER_ENGINE
    _WORKER_ENGINE = _Engine(cayley, element_order)


def _worker_run(task):
    z, r11, structure_mode = task
    out = array("B")
    for row in _dfs_genus2(_WORKER_ENGINE, z, r11, structure_mode):
        out.extend(row)
    return out.tobytes()


def _default_jobs() -> int:
    return multiprocessing.cpu_count()


def structure_rows(
    G: FiniteGroup, t: StructureType, jobs: int | None = None
) -> np.ndarray:
    """All type-(2,n) structures as a (count, 9) array, lexicographically
    sorted; every row is re-verified against the full relation system.

    Raises for b != 2 (enumeration is genus-2 only) and for groups above
    the search cap.
    """
    if t.b != 2:
        raise ValueError("enumeration supports b = 2 only")
    if G.order > SEARCH_ORDER_CAP:
        raise ValueError(f"search cap is order {SEARCH_ORDER_CAP}")
    if jobs is None:
        jobs = _default_jobs()
    tasks = [
        (z, r11, True)
        for z in _z_candidates_structures(G, t.n)
        for r11 in range(G.order)
    ]
    chunks: list[bytes] = []
    if jobs <= 1 or len(tasks) < 8:
        eng = _Engine.for_group(G)
        for task in tasks:
            out = array("B")
            for row in _dfs_genus2(eng, task[0], task[1], True):
                out.extend(row)
            chunks.append(out.tobytes())
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(
            jobs, initializer=_worker_init,
            initargs=(G.cayley, list(G.element_order)),
        ) as pool:
            chunks = pool.map(_worker_run, tasks, chunksize=8)
    blob = b"".join(chunks)
    rows = np.frombuffer(blob, dtype=np.uint8).reshape(-1, 9).copy()
    if len(rows):
        rows = rows[np.lexsort(rows.T[::-1])]
    # soundness: the backtracker's output is re-checked against the
    # authoritative relator list, o(z), and generation
    ok = bulk_relator_filter(G, rows, relations_for_type(t))
    orders = np.array(G.element_order, dtype=np.int32)
    ok &= orders[rows[:, -1]] == t.n
    ok &= generation_mask_filter(G, rows)
    if not ok.all():
        raise AssertionError(
            f"backtracking emitted {int((~ok).sum())} invalid tuples"
        )
    return rows


def enumerate_structures(
    G: FiniteGroup, t: StructureType, jobs: int | None = None
) -> Iterator[DDKStructure]:
    """Stream of verified structures in canonical lexicographic order."""
    for row in structure_rows(G, t, jobs=jobs):
        yield DDKStructure(G, t, tuple(int(x) for x in row))


def count_structures(G: FiniteGroup, t: StructureType, jobs: int | None = None) -> int:
    return len(structure_rows(G, t, jobs=jobs))


# -- prestructure search ----------------------------------------------

@dataclass(frozen=True)
class QuotientEvidence:
    """Outcome of the no-prestructure check on all proper quotients."""

    quotient_orders: tuple[int, ...]
    all_empty: bool


@dataclass(frozen=True)
class PrestructureSearchInfo:
    mode: str                      # "full" or "socle"
    z_candidates: tuple[int, ...]
    evidence: QuotientEvidence | None


def _shortcut_evidence(G: FiniteGroup) -> QuotientEvidence:
    """Run the full prestructure search on every proper non-trivial quotient.

    If all are empty, any prestructure on G must have z in every non-trivial
    normal subgroup (else the image in some G/N would be a prestructure with
    z-image non-trivial), i.e. z lies in the socle.
    """
    orders = []
    all_empty = True
    for nsub in G.normal_subgroups():
        if len(nsub) in (1, G.order):
            continue
        q, _ = G.quotient(nsub)
        orders.append(q.order)
        if any(True for _ in iter_prestructure_tuples(q, mode="full")):
            all_empty = False
            break
    return QuotientEvidence(tuple(sorted(orders)), all_empty)


def prestructure_search_info(G: FiniteGroup, mode: str = "auto") -> PrestructureSearchInfo:
    if mode not in ("auto", "full", "socle"):
        raise ValueError(f"unknown search mode {mode!r}")
    if mode == "auto":
        mode = "full" if G.order <= 24 else "socle"
    if mode == "socle":
        evidence = _shortcut_evidence(G)
        if evidence.all_empty:
            soc = G.socle()
            zs = tuple(x for x in soc if G.element_order[x] >= 2)
            return PrestructureSearchInfo("socle", zs, evidence)
        # hypothesis failed: the restriction would be unsound
        return PrestructureSearchInfo(
            "full", tuple(_z_candidates_prestructures(G)), evidence
        )
    return PrestructureSearchInfo(
        "full", tuple(_z_candidates_prestructures(G)), None
    )


def iter_prestructure_tuples(
    G: FiniteGroup, mode: str = "auto"
) -> Iterator[tuple[int, ...]]:
    """Deterministic complete stream of prestructure tuples.

    Every yielded tuple has been re-verified (in vectorized batches)
    against the authoritative relation list.
    """
    if G.order > SEARCH_ORDER_CAP:
        raise ValueError(f"search cap is order {SEARCH_ORDER_CAP}")
    info = prestructure_search_info(G, mode)
    eng = _Engine.for_group(G)
    rels = [w for _, w in prestructure_relations()]
    batch: list[tuple[int, ...]] = []

    def flush():
        if not batch:
            return
        rows = np.array(batch, dtype=np.uint8)
        ok = bulk_relator_filter(G, rows, rels)
        if not ok.all():
            raise AssertionError("prestructure search emitted an invalid tuple")
        for row in batch:
            yield row
        batch.clear()

    for z in info.z_candidates:
        for r11 in range(G.order):
            for row in _dfs_genus2(eng, z, r11, False):
                batch.append(row)
                if len(batch) >= 65536:
                    yield from flush()
    yield from flush()


def enumerate_prestructures(G: FiniteGroup, mode: str = "auto") -> Iterator[Prestructure]:
    for row in iter_prestructure_tuples(G, mode):
        yield Prestructure(G, row)


def reference_prestructures(G: FiniteGroup) -> list[tuple[int, ...]]:
    """Slow reference search used to cross-check the production engine.

    Assigns slots in the fixed order r11, t11, r21, t21, r22, t22, r12,
    t12 with z outermost, testing each conjugacy relation by direct word
    evaluation as soon as all its slots are filled.  No solution tables,
    no bit masks, no batching.  Intended for very small groups.
    """
    slot_order = [0, 1, 4, 5, 6, 7, 2, 3]
    ready: list[list[Word]] = [[] for _ in range(8)]
    for _, rel in prestructure_relations():
        slots = {abs(letter) - 1 for letter in rel if abs(letter) - 1 != 8}
        ready[max(slot_order.index(s) for s in slots)].append(rel)
    found: list[tuple[int, ...]] = []
    assign = [0] * 9

    def extend(pos: int) -> None:
        if pos == 8:
            found.append(tuple(assign))
            return
        slot = slot_order[pos]
        for g in range(G.order):
            assign[slot] = g
            if all(G.evaluate_word(rel, assign) == 0 for rel in ready[pos]):
                extend(pos + 1)
        assign[slot] = 0

    for z in range(G.order):
        if G.element_order[z] < 2:
            continue
        assign[8] = z
        extend(0)
    return sorted(found)


@dataclass(frozen=True)
class PrestructureReport:
    count: int
    mode: str
    socle_z_candidates: int | None
    quotient_orders_checked: tuple[int, ...] | None
    sample: tuple[tuple[int, ...], ...]


def prestructure_report(
    G: FiniteGroup, mode: str = "auto", sample_limit: int = 100
) -> PrestructureReport:
    """Run the search to completion; certified-empty when count == 0."""
    info = prestructure_search_info(G, mode)
    count = 0
    sample: list[tuple[int, ...]] = []
    for row in iter_prestructure_tuples(G, mode):
        count += 1
        if len(sample) < sample_limit:
            sample.append(row)
    return PrestructureReport(
        count=count,
        mode=info.mode,
        socle_z_candidates=len(info.z_candidates) if info.mode == "socle" else None,
        quotient_orders_checked=(
            info.evidence.quotient_orders if info.evidence else None
        ),
        sample=tuple(sample),
    )


# -- serialization ----------------------------------------------------

def structure_to_dict(s: DDKStructure, label: str | None = None) -> dict:
    out = {
        "group": label,
        "b": s.stype.b,
        "n": s.stype.n,
        "elements": [int(x) for x in s.elements],
    }
    words = s.words()
    if words is not None:
        out["words"] = words
    return out


def structure_from_dict(G: FiniteGroup, data: dict) -> DDKStructure:
    try:
        t = StructureType(int(data["b"]), int(data["n"]))
        elements = tuple(int(x) for x in data["elements"])
    except (KeyError, TypeError, ValueError) as e:
        raise ValueError(f"malformed structure data: {e}") from e
    if any(not 0 <= x < G.order for x in elements):
        raise ValueError("element index out of range for the group")
    return DDKStructure(G, t, elements)
