"""First homology of the covering surface attached to a structure.

The kernel of the surjection from the orbifold surface-braid group onto G
is the fundamental group of the covering surface.  Its abelianization is
computed without any coset enumeration: cosets of the kernel biject with
elements of G (the coset action is g -> g * phi(x)), so a Schreier
transversal, the abelianized rewritten relators, and an integer Smith
normal form give H_1 directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .group_core import FiniteGroup, Homomorphism, Presentation, Word
from .structures import (
    DDKStructure,
    braid_presentation,
    k_subgroups,
    verify_structure,
)

__all__ = [
    "HomologyInvariants",
    "SmithDecomposition",
    "Transversal",
    "abelianized_relator_matrix",
    "first_homology",
    "h1_of_surface",
    "integer_determinant",
    "orbifold_presentation",
    "schreier_transversal",
    "smith_normal_form",
]

_INT64_GUARD = 2 ** 31  # keep |entry| below this so one update round cannot overflow


# ------------------------------------------------------------ transversal

@dataclass(frozen=True)
class Transversal:
    """Coset representatives indexed by target element, identity first.

    Built breadth-first over the alphabet x1 < x1^-1 < x2 < x2^-1 < ...,
    so representatives are shortest-lex and prefix-closed (every prefix of
    a representative is itself a representative).
    """

    representative_words: tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.representative_words)


def schreier_transversal(hom: Homomorphism) -> Transversal:
    if not hom.is_surjective():
        raise ValueError("homomorphism is not surjective")
    G = hom.target
    reps: list[Word | None] = [None] * G.order
    reps[0] = Word.identity()
    queue = [0]
    steps = []
    for index, image in enumerate(hom.images):
        steps.append((index + 1, image))
        steps.append((-(index + 1), G.inverse[image]))
    while queue:
        frontier = []
        for g in queue:
            base = reps[g]
            for letter, image in steps:
                h = G.mul(g, image)
                if reps[h] is None:
                    reps[h] = Word(base.letters + (letter,))
                    frontier.append(h)
        queue = frontier
    assert all(r is not None for r in reps)
    for rep in reps:
        for cut in range(len(rep)):
            prefix = Word(rep.letters[:cut])
            assert reps[hom.image_of_word(prefix)] == prefix
    return Transversal(tuple(reps))


# -------------------------------------------------------- relator matrix

def _schreier_columns(
    hom: Homomorphism, t: Transversal
) -> dict[tuple[int, int], int]:
    """Map non-tree (coset, generator) pairs to column indices.

    A pair (u, x) is a tree edge exactly when rep(u) * x is itself a
    representative (of the coset u * phi(x)); those Schreier generators are
    trivial and get no column.
    """
    G = hom.target
    columns: dict[tuple[int, int], int] = {}
    for u, rep in enumerate(t.representative_words):
        for x, image in enumerate(hom.images):
            v = G.mul(u, image)
            if Word(rep.letters + (x + 1,)) == t.representative_words[v]:
                continue
            if Word(t.representative_words[v].letters + (-(x + 1),)) == rep:
                continue
            columns[(u, x)] = len(columns)
    assert len(columns) == G.order * (len(hom.images) - 1) + 1
    return columns


def abelianized_relator_matrix(
    p: Presentation, hom: Homomorphism, t: Transversal
) -> np.ndarray:
    """One row per (coset, relator): exponent sums of Schreier generators
    in the rewritten conjugate rep * r * rep^-1 (tree edges excluded)."""
    G = hom.target
    columns = _schreier_columns(hom, t)
    matrix = np.zeros((G.order * len(p.relators), len(columns)), dtype=np.int64)
    inverse_images = [G.inverse[image] for image in hom.images]
    for u in range(G.order):
        for j, rel in enumerate(p.relators):
            row = matrix[u * len(p.relators) + j]
            c = u
            for letter in rel.letters:
                x = abs(letter) - 1
                if letter > 0:
                    key = (c, x)
                    c = G.mul(c, hom.images[x])
                    sign = 1
                else:
                    c = G.mul(c, inverse_images[x])
                    key = (c, x)
                    sign = -1
                col = columns.get(key)
                if col is not None:
                    row[col] += sign
            assert c == u, "relator does not map to the identity"
    return matrix


# --------------------------------------------------- Smith normal form

@dataclass(frozen=True)
class SmithDecomposition:
    invariant_factors: tuple[int, ...]
    rank: int
    left: np.ndarray
    right: np.ndarray
    diagonal: np.ndarray


def integer_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    M = [[int(v) for v in row] for row in matrix]
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def _entry_max(x: np.ndarray) -> int:
    if x.size == 0:
        return 0
    if x.dtype == object:
        return max(abs(int(v)) for v in x.flat)
    return int(np.abs(x).max())


def _exact_matmul(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """X @ Y exactly: float64 (BLAS) when every intermediate integer stays
    below 2^53, int64 when below 2^63, arbitrary precision otherwise."""
    bound = _entry_max(X) * _entry_max(Y) * max(X.shape[1], 1)
    if bound < 2 ** 53:
        product = X.astype(np.float64) @ Y.astype(np.float64)
        return product.astype(np.int64)
    if bound < 2 ** 63 and X.dtype != object and Y.dtype != object:
        return X.astype(np.int64) @ Y.astype(np.int64)
    return X.astype(object) @ Y.astype(object)


def _product_check(L: np.ndarray, A: np.ndarray, R: np.ndarray) -> np.ndarray:
    return _exact_matmul(_exact_matmul(L, A), R)


def _pivot_position(M: np.ndarray, k: int) -> tuple[int, int] | None:
    """Smallest nonzero |entry| in M[k:, k:], ties by row-major position."""
    sub = np.abs(M[k:, k:])
    mask = sub != 0
    if not mask.any():
        return None
    smallest = sub[mask].min()
    r, c = np.argwhere(mask & (sub == smallest))[0]
    return int(r) + k, int(c) + k


def smith_normal_form(matrix: Sequence[Sequence[int]] | np.ndarray) -> SmithDecomposition:
    """Exact SNF with unimodular transforms: left @ input @ right == diagonal.

    Runs on int64 with an overflow guard; silently upcasts the whole state
    to arbitrary-precision integers if any intermediate approaches 2^31.
    """
    A = np.array(matrix, dtype=object)
    if A.ndim != 2:
        raise ValueError("matrix must be two-dimensional")
    original = A.copy()
    nrows, ncols = A.shape
    if A.size and all(abs(int(v)) < _INT64_GUARD for v in A.flat):
        M = A.astype(np.int64)
        L = np.eye(nrows, dtype=np.int64)
        R = np.eye(ncols, dtype=np.int64)
    else:
        M = A.copy()
        L = np.eye(nrows, dtype=object)
        R = np.eye(ncols, dtype=object)

    def upcast_if_needed():
        nonlocal M, L, R
        if M.dtype == object:
            return
        if (
            np.abs(M).max(initial=0) >= _INT64_GUARD
            or np.abs(L).max(initial=0) >= _INT64_GUARD
            or np.abs(R).max(initial=0) >= _INT64_GUARD
        ):
            M = M.astype(object)
            L = L.astype(object)
            R = R.astype(object)

    def eliminate(k: int) -> bool:
        """Clear row and column k; False when M[k:, k:] is all zero."""
        nonlocal M, L, R
        while True:
            pos = _pivot_position(M, k)
            if pos is None:
                return False
            i, j = pos
            if i != k:
                M[[k, i]] = M[[i, k]]
                L[[k, i]] = L[[i, k]]
            if j != k:
                M[:, [k, j]] = M[:, [j, k]]
                R[:, [k, j]] = R[:, [j, k]]
            if M[k, k] < 0:
                M[k] = -M[k]
                L[k] = -L[k]
            pivot = M[k, k]
            upcast_if_needed()
            changed = False
            q = M[k + 1:, k] // pivot
            if np.any(q != 0):
                M[k + 1:, :] -= q[:, None] * M[k, :]
                L[k + 1:, :] -= q[:, None] * L[k, :]
                changed = True
            if np.any(M[k + 1:, k] != 0):
                continue
            upcast_if_needed()
            q = M[k, k + 1:] // pivot
            if np.any(q != 0):
                M[:, k + 1:] -= M[:, k:k + 1] * q[None, :]
                R[:, k + 1:] -= R[:, k:k + 1] * q[None, :]
                changed = True
            if np.any(M[k, k + 1:] != 0):
                continue
            return True

    rank = 0
    for k in range(min(nrows, ncols)):
        if not eliminate(k):
            break
        rank += 1

    # Enforce the divisibility chain d_1 | d_2 | ... with tracked operations.
    done = False
    while not done:
        done = True
        for i in range(rank - 1):
            if M[i + 1, i + 1] % M[i, i]:
                M[:, i] += M[:, i + 1]
                R[:, i] += R[:, i + 1]
                upcast_if_needed()
                eliminate(i)
                done = False
                break
    for i in range(rank):
        if M[i, i] < 0:  # gcd steps can leave a sign behind the pivot
            M[i] = -M[i]
            L[i] = -L[i]

    factors = tuple(int(M[i, i]) for i in range(rank))
    assert all(d > 0 for d in factors)
    assert all(factors[i + 1] % factors[i] == 0 for i in range(rank - 1))
    assert np.array_equal(_product_check(L, original, R), M.astype(object)), (
        "transform check failed"
    )
    return SmithDecomposition(
        invariant_factors=factors,
        rank=rank,
        left=L,
        right=R,
        diagonal=M,
    )


# ------------------------------------------------------------- pipeline

@dataclass(frozen=True)
class HomologyInvariants:
    free_rank: int
    torsion: tuple[int, ...]

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError("torsion coefficients must be >= 2")
            if i and d % self.torsion[i - 1]:
                raise ValueError("torsion coefficients must form a chain")

    @property
    def first_betti(self) -> int:
        return self.free_rank

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def first_homology(p: Presentation, hom: Homomorphism) -> HomologyInvariants:
    """H_1 of the kernel of hom as an abstract abelian group."""
    t = schreier_transversal(hom)
    matrix = abelianized_relator_matrix(p, hom, t)
    snf = smith_normal_form(matrix)
    return HomologyInvariants(
        free_rank=matrix.shape[1] - snf.rank,
        torsion=tuple(d for d in snf.invariant_factors if d > 1),
    )


@lru_cache(maxsize=None)
def orbifold_presentation(b: int, n: int) -> Presentation:
    """The braid relation system together with the branching relator A12^n."""
    base = braid_presentation(b)
    a12 = Word.gen(len(base.generators) - 1)
    return Presentation(base.generators, base.relators + (a12 ** n,))


def h1_of_surface(
    G: FiniteGroup, s: DDKStructure
) -> tuple[HomologyInvariants, bool]:
    """(H_1 of the covering surface, maximality flag free_rank == 4b)."""
    ok, diag = verify_structure(G, s.elements, s.stype)
    if not ok:
        raise ValueError(f"not a structure: {diag}")
    if not k_subgroups(s).strong:
        raise ValueError("structure is not strong: base genera would differ")
    p = orbifold_presentation(s.stype.b, s.stype.n)
    hom = Homomorphism(p, G, s.elements)
    invariants = first_homology(p, hom)
    return invariants, invariants.free_rank == 4 * s.stype.b
