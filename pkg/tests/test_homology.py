import math
import random
from itertools import combinations

import numpy as np
import pytest
from sympy import Matrix

from ddks.group_core import (
    Homomorphism,
    Presentation,
    Word,
    parse_presentation,
    realize,
    realize_label,
)
from ddks.homology import (
    HomologyInvariants,
    abelianized_relator_matrix,
    first_homology,
    h1_of_surface,
    orbifold_presentation,
    schreier_transversal,
    smith_normal_form,
)
from ddks.invariants import fibration_data, with_homology
from ddks.structures import DDKStructure, StructureType, example_structure


@pytest.fixture(scope="module")
def trivial_group():
    return realize(parse_presentation("gens: e\nrel: e"))


@pytest.fixture(scope="module")
def orbifold_hom():
    g = realize_label("G(32,49)")
    p = orbifold_presentation(2, 2)
    return g, p, Homomorphism(p, g, example_structure(g).elements)


# ----------------------------------------------------------- transversal

def test_transversal_trivial_target(trivial_group):
    p = Presentation(("x",), ())
    hom = Homomorphism(p, trivial_group, (0,))
    t = schreier_transversal(hom)
    assert t.representative_words == (Word.identity(),)


def test_transversal_free_onto_z2():
    z2 = realize(parse_presentation("gens: y\nrel: y^2"))
    hom = Homomorphism(Presentation(("x",), ()), z2, (1,))
    t = schreier_transversal(hom)
    assert t.representative_words == (Word.identity(), Word.gen(0))


def test_transversal_rejects_non_surjective():
    z4 = realize(parse_presentation("gens: y\nrel: y^4"))
    square = z4.mul(1, 1)
    hom = Homomorphism(parse_presentation("gens: x\nrel: x^2"), z4, (square,))
    with pytest.raises(ValueError, match="surjective"):
        schreier_transversal(hom)


def test_transversal_is_shortest_and_prefix_closed(orbifold_hom):
    g, p, hom = orbifold_hom
    t = schreier_transversal(hom)
    assert len(t) == 32
    assert t.representative_words[0].is_identity

    # independent BFS distances over generator and inverse edges
    dist = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for img in hom.images:
                for v in (g.mul(u, img), g.mul(u, g.inverse[img])):
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
        frontier = nxt
    for u, rep in enumerate(t.representative_words):
        assert len(rep) == dist[u]
        for cut in range(len(rep)):
            prefix = Word(rep.letters[:cut])
            assert prefix in t.representative_words


# -------------------------------------------------------- relator matrix

def test_orbifold_matrix_dimensions(orbifold_hom):
    g, p, hom = orbifold_hom
    matrix = abelianized_relator_matrix(p, hom, schreier_transversal(hom))
    assert matrix.shape == (32 * 23, 32 * 9 - 31) == (736, 257)
    longest = max(len(rel) for rel in p.relators)
    assert int(np.abs(matrix).max()) <= longest


def test_trivial_target_gives_plain_abelianization(trivial_group):
    p = parse_presentation("gens: a b\nrel: a^2 b^-3\nrel: [a,b]")
    hom = Homomorphism(p, trivial_group, (0, 0))
    matrix = abelianized_relator_matrix(p, hom, schreier_transversal(hom))
    assert matrix.tolist() == [[2, -3], [0, 0]]


def test_genus2_onto_trivial_single_zero_row(trivial_group):
    p = parse_presentation("gens: a1 b1 a2 b2\nrel: [a1,b1] [a2,b2]")
    hom = Homomorphism(p, trivial_group, (0,) * 4)
    matrix = abelianized_relator_matrix(p, hom, schreier_transversal(hom))
    assert matrix.shape == (1, 4)
    assert not matrix.any()


def test_index_two_rewriting_by_hand():
    # Z4 -> Z2: kernel Z2; both rewritten rows give twice the lone column
    z2 = realize(parse_presentation("gens: y\nrel: y^2"))
    p = parse_presentation("gens: x\nrel: x^4")
    hom = Homomorphism(p, z2, (1,))
    matrix = abelianized_relator_matrix(p, hom, schreier_transversal(hom))
    assert matrix.tolist() == [[2], [2]]
    assert first_homology(p, hom) == HomologyInvariants(0, (2,))


# ----------------------------------------------------- Smith normal form

def test_snf_examples():
    snf = smith_normal_form([[2, 0], [0, 3]])
    assert snf.invariant_factors == (1, 6) and snf.rank == 2
    snf = smith_normal_form([[1, 0], [0, 0]])
    assert snf.invariant_factors == (1,) and snf.rank == 1
    assert smith_normal_form([[-2, 0], [0, 3]]).invariant_factors == (1, 6)
    assert smith_normal_form([[6, 0, 0], [0, 4, 0], [0, 0, 10]]).invariant_factors == (2, 2, 60)
    assert smith_normal_form([[0, 0], [0, 0]]).rank == 0
    assert smith_normal_form([[5]]).invariant_factors == (5,)


def test_snf_transforms_reassemble():
    rng = random.Random(7)
    for _ in range(10):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        A = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
        snf = smith_normal_form(A)
        product = (
            snf.left.astype(object) @ np.array(A, dtype=object) @ snf.right.astype(object)
        )
        assert np.array_equal(product, snf.diagonal.astype(object))
        for i in range(snf.rank - 1):
            assert snf.invariant_factors[i + 1] % snf.invariant_factors[i] == 0


def test_snf_deterministic():
    A = [[3, 1, 4], [1, 5, 9], [2, 6, 5]]
    first = smith_normal_form(A)
    second = smith_normal_form(A)
    assert np.array_equal(first.left, second.left)
    assert np.array_equal(first.right, second.right)
    assert np.array_equal(first.diagonal, second.diagonal)


def test_snf_huge_entries_stay_exact():
    snf = smith_normal_form([[2 ** 40, 1], [1, 2 ** 40]])
    assert snf.invariant_factors == (1, 2 ** 80 - 1)


def _minor_gcd(A: list[list[int]], k: int) -> int:
    rows, cols = len(A), len(A[0])
    g = 0
    for rsel in combinations(range(rows), k):
        for csel in combinations(range(cols), k):
            det = Matrix([[A[r][c] for c in csel] for r in rsel]).det()
            g = math.gcd(g, int(det))
    return g


@pytest.mark.parametrize("size", [2, 3, 4, 6])
def test_snf_matches_gcd_of_minors(size):
    rng = random.Random(100 + size)
    for _ in range(8):
        A = [[rng.randint(-9, 9) for _ in range(size)] for _ in range(size)]
        snf = smith_normal_form(A)
        product = 1
        for k, d in enumerate(snf.invariant_factors, start=1):
            product *= d
            assert product == _minor_gcd(A, k)
        if snf.rank < size:
            assert _minor_gcd(A, snf.rank + 1) == 0


# --------------------------------------------------------------- pipeline

def test_first_homology_small_cases(trivial_group):
    surf = parse_presentation("gens: a1 b1 a2 b2\nrel: [a1,b1] [a2,b2]")
    hom = Homomorphism(surf, trivial_group, (0,) * 4)
    assert first_homology(surf, hom) == HomologyInvariants(4, ())

    z4 = parse_presentation("gens: x\nrel: x^4")
    hom = Homomorphism(z4, trivial_group, (0,))
    assert first_homology(z4, hom) == HomologyInvariants(0, (4,))


def test_orbifold_onto_trivial(trivial_group):
    # the branching generator dies integrally: its exponent sum in the two
    # long relators is -1 / +1, so no torsion survives at index one
    p = orbifold_presentation(2, 2)
    hom = Homomorphism(p, trivial_group, (0,) * 9)
    assert first_homology(p, hom) == HomologyInvariants(8, ())


def test_orbifold_presentation_shape():
    p = orbifold_presentation(2, 2)
    assert len(p.generators) == 9
    assert len(p.relators) == 23
    assert p.relators[-1] == Word.gen(8) ** 2
    assert orbifold_presentation(2, 3).relators[-1] == Word.gen(8) ** 3


def test_invariants_chain_validation():
    with pytest.raises(ValueError, match="chain"):
        HomologyInvariants(0, (2, 3))
    with pytest.raises(ValueError, match=">= 2"):
        HomologyInvariants(0, (1,))
    assert HomologyInvariants(3, (2, 4)).to_dict() == {
        "free_rank": 3,
        "torsion": [2, 4],
    }
    assert HomologyInvariants(5, ()).first_betti == 5


# -------------------------------------------------------- surface result

@pytest.mark.parametrize("label", ["G(32,49)", "G(32,50)"])
def test_surface_homology_of_example(label):
    g = realize_label(label)
    inv, maximal = h1_of_surface(g, example_structure(g))
    assert inv == HomologyInvariants(8, (2, 2, 2, 2))
    assert maximal


def test_surface_homology_stable_across_structures(rows_cache):
    rng = random.Random(5)
    for label in ("G(32,49)", "G(32,50)"):
        g = realize_label(label)
        rows = rows_cache.backtrack(label)
        for _ in range(3):
            row = rows[rng.randrange(len(rows))]
            s = DDKStructure(g, StructureType(2, 2), tuple(int(v) for v in row))
            inv, maximal = h1_of_surface(g, s)
            assert inv == HomologyInvariants(8, (2, 2, 2, 2))
            assert maximal


def test_surface_homology_rejects_non_structures():
    g = realize_label("G(32,49)")
    broken = DDKStructure(g, StructureType(2, 2), (0,) * 9)
    with pytest.raises(ValueError, match="not a structure"):
        h1_of_surface(g, broken)


def test_betti_number_feeds_hodge_numbers():
    g = realize_label("G(32,49)")
    s = example_structure(g)
    inv, _ = h1_of_surface(g, s)
    report = with_homology(fibration_data(g, s), inv.first_betti)
    assert (report.q_irr, report.p_g, report.maximal) == (4, 47, True)
