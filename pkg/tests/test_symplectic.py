import numpy as np
import pytest

from ddks.group_core import parse_presentation, realize, realize_label
from ddks.structures import example_structure
from ddks.symplectic import (
    ReducedStructure,
    arf_invariant,
    aut_order,
    enumerate_reduced_structures,
    enumerate_symplectic_bases,
    form_type,
    induced_space,
    lift_reduced,
    orthogonal_order,
    reduce_structure,
    sp_order,
    verify_reduced,
)


@pytest.fixture(scope="module")
def H5():
    return realize_label("G(32,49)")


@pytest.fixture(scope="module")
def G5():
    return realize_label("G(32,50)")


@pytest.fixture(scope="module")
def spaceH(H5):
    return induced_space(H5)


@pytest.fixture(scope="module")
def spaceG(G5):
    return induced_space(G5)


# ------------------------------------------------------------ the space

def test_space_rejects_non_extra_special():
    s4 = realize_label("S4")
    with pytest.raises(ValueError, match="Z\\(G\\)"):
        induced_space(s4)
    z4 = realize(parse_presentation("gens: x\nrel: x^4"))
    with pytest.raises(ValueError):
        induced_space(z4)
    # center of order 2 but G/Z not elementary abelian
    d16 = realize(
        parse_presentation("gens: r s\nrel: r^8\nrel: s^2\nrel: [s,r] r^-2")
    )
    assert d16.order == 16
    with pytest.raises(ValueError, match="elementary abelian"):
        induced_space(d16)


def test_space_shape(spaceH, H5):
    assert spaceH.dim == 4 and spaceH.b == 2
    assert H5.element_order[spaceH.z_element] == 2
    # projection is 2-to-1 and the section inverts it
    fibers = {}
    for x in H5.elements():
        fibers.setdefault(spaceH.projection(x), []).append(x)
    assert len(fibers) == 16
    assert all(len(f) == 2 for f in fibers.values())
    for v in spaceH.vectors():
        assert spaceH.projection(spaceH.section(v)) == v
        assert spaceH.section(v) == min(fibers[v])


def test_gram_matrix_block_diagonal(spaceH, spaceG):
    expected = [
        [0, 1, 0, 0],
        [1, 0, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
    ]
    assert spaceH.gram == expected
    assert spaceG.gram == expected


def test_pairing_from_commutators_and_lift_independence(spaceH, H5):
    z = spaceH.z_element
    for x in range(0, 32, 3):
        for y in range(0, 32, 5):
            expected = 0 if H5.commutator(x, y) == 0 else 1
            u, v = spaceH.projection(x), spaceH.projection(y)
            assert spaceH.pair(u, v) == expected
            # the pairing cannot see which lift was used
            assert (
                spaceH.projection(H5.mul(x, z)) == u
                and spaceH.projection(H5.mul(y, z)) == v
            )


def test_parallelogram_law(spaceH, spaceG):
    for space in (spaceH, spaceG):
        for u in space.vectors():
            for v in space.vectors():
                assert (
                    space.q(u ^ v)
                    == (space.q(u) + space.q(v) + space.pair(u, v)) % 2
                )


def test_quadratic_normal_forms(spaceH, spaceG):
    for v in range(16):
        xi1, psi1, xi2, psi2 = v & 1, (v >> 1) & 1, (v >> 2) & 1, (v >> 3) & 1
        assert spaceH.q(v) == (xi1 * psi1 + xi2 * psi2) % 2
        assert spaceG.q(v) == (xi1 * psi1 + xi2 * psi2 + xi2 + psi2) % 2


def test_form_type_and_arf(spaceH, spaceG):
    assert form_type(spaceH) == 1
    assert sum(1 for v in spaceH.vectors() if spaceH.q(v) == 0) == 10
    assert form_type(spaceG) == -1
    assert sum(1 for v in spaceG.vectors() if spaceG.q(v) == 0) == 6
    assert arf_invariant(spaceH) == 0
    assert arf_invariant(spaceG) == 1


# --------------------------------------------------------- group orders

def test_closed_form_orders():
    assert sp_order(1) == 6
    assert sp_order(2) == 720
    assert orthogonal_order(2, 1) == 72
    assert orthogonal_order(2, -1) == 120
    assert aut_order(2, 1) == 1152
    assert aut_order(2, -1) == 1920
    assert aut_order(2, 1) == 16 * orthogonal_order(2, 1)
    assert aut_order(2, -1) == 16 * orthogonal_order(2, -1)
    with pytest.raises(ValueError):
        orthogonal_order(2, 0)
    with pytest.raises(ValueError):
        sp_order(0)


def test_symplectic_bases(spaceH):
    bases = list(enumerate_symplectic_bases(spaceH))
    assert len(bases) == sp_order(2) == 720
    assert len(set(bases)) == 720
    assert (1, 2, 4, 8) in bases
    for e1, f1, e2, f2 in bases[::37]:
        assert spaceH.pair(e1, f1) == 1 and spaceH.pair(e2, f2) == 1
        assert spaceH.pair(e1, e2) == 0 and spaceH.pair(e1, f2) == 0
        assert spaceH.pair(f1, e2) == 0 and spaceH.pair(f1, f2) == 0


# ---------------------------------------------------- reduced structures

def staged_filter_reduced(space) -> set[tuple[int, ...]]:
    """Independent enumeration of all reduced structures: nested loops over
    V with each pairing constraint applied as soon as possible."""
    pair = space.pair
    out = set()
    vecs = range(16)
    for r11 in vecs:
        for t11 in vecs:
            for r21 in vecs:
                if pair(r11, r21) != 0 or pair(t11, r21) != 1:
                    continue
                for t21 in vecs:
                    if pair(r11, t21) != 1 or pair(t11, t21) != 0:
                        continue
                    for r22 in vecs:
                        if pair(r11, r22) != 0 or pair(t11, r22) != 0:
                            continue
                        for t22 in vecs:
                            if pair(r11, t22) != 0 or pair(t11, t22) != 0:
                                continue
                            if (pair(r21, t21) + pair(r22, t22)) % 2 != 1:
                                continue
                            for r12 in vecs:
                                if (
                                    pair(r12, t21) != 0
                                    or pair(r12, r21) != 0
                                    or pair(r12, r22) != 0
                                    or pair(r12, t22) != 1
                                ):
                                    continue
                                for t12 in vecs:
                                    if (
                                        pair(t12, r21) != 0
                                        or pair(t12, t21) != 0
                                        or pair(t12, r22) != 1
                                        or pair(t12, t22) != 0
                                    ):
                                        continue
                                    if (pair(r12, t12) + pair(r11, t11)) % 2 != 1:
                                        continue
                                    tup = (r11, t11, r12, t12, r21, t21, r22, t22)
                                    ok, _ = verify_reduced(space, tup)
                                    if ok:
                                        out.add(tup)
    return out


@pytest.mark.parametrize("fixture", ["spaceH", "spaceG"])
def test_reduced_structures_against_staged_filter(fixture, request):
    space = request.getfixturevalue(fixture)
    produced = list(enumerate_reduced_structures(space))
    tuples = [r.vectors for r in produced]
    assert len(tuples) == 8640
    assert len(set(tuples)) == 8640
    by_case = {"a": 0, "b": 0}
    for r in produced:
        by_case[r.case_tag] += 1
    assert by_case == {"a": 4320, "b": 4320}
    assert set(tuples) == staged_filter_reduced(space)


def test_reduced_case_patterns_and_isotropy(spaceH):
    seen_patterns = set()
    for r in enumerate_reduced_structures(spaceH):
        v = r.vectors
        pattern = (
            spaceH.pair(v[2], v[3]),  # (r12, t12)
            spaceH.pair(v[0], v[1]),  # (r11, t11)
            spaceH.pair(v[4], v[5]),  # (r21, t21)
            spaceH.pair(v[6], v[7]),  # (r22, t22)
        )
        seen_patterns.add(pattern)
    # cases (c) and (d) never occur
    assert seen_patterns == {(0, 1, 0, 1), (1, 0, 1, 0)}
    # case (a): the non-basis quadruple spans a 2-dim isotropic subspace
    from ddks.symplectic import _span_dim

    for r in enumerate_reduced_structures(spaceH):
        if r.case_tag != "a":
            continue
        w = [r.vectors[i] for i in (2, 3, 4, 5)]
        assert _span_dim(spaceH, w) == 2
        for u in w:
            for v in w:
                assert spaceH.pair(u, v) == 0
        break


def test_verify_reduced_diagnostics(spaceH):
    good = next(enumerate_reduced_structures(spaceH)).vectors
    ok, diag = verify_reduced(spaceH, good)
    assert ok and diag is None
    bad = list(good)
    bad[0] = good[0] ^ good[1]
    ok, diag = verify_reduced(spaceH, tuple(bad))
    assert not ok
    with pytest.raises(ValueError):
        verify_reduced(spaceH, good[:5])
    with pytest.raises(ValueError):
        ReducedStructure(good, "c")


# ---------------------------------------------------------------- lifts

def test_lift_reduced_all_verify(spaceH, H5):
    r = next(enumerate_reduced_structures(spaceH))
    lifts = list(lift_reduced(spaceH, r, H5))
    assert len(lifts) == 256
    assert len({s.elements for s in lifts}) == 256
    for s in lifts[::51]:
        assert reduce_structure(spaceH, s).vectors == r.vectors


def test_example_appears_among_lifts_of_its_projection(spaceH, H5):
    s = example_structure(H5)
    r = reduce_structure(spaceH, s)
    assert s.elements in {t.elements for t in lift_reduced(spaceH, r, H5)}


def test_lift_rejects_foreign_group(spaceH, G5):
    r = next(enumerate_reduced_structures(spaceH))
    with pytest.raises(ValueError, match="not built from"):
        next(lift_reduced(spaceH, r, G5))


# ------------------------------------------- the central cross-validation

@pytest.mark.parametrize("label", ["G(32,49)", "G(32,50)"])
def test_symplectic_route_matches_backtracking(label, rows_cache):
    via_lifts = rows_cache.symplectic(label)
    assert via_lifts.shape == (2211840, 9)
    via_backtracking = rows_cache.backtrack(label)
    assert np.array_equal(via_lifts, via_backtracking)
