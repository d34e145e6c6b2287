import numpy as np
import pytest

from ddks.group_core import (
    get_presentation,
    parse_presentation,
    realize,
    realize_label,
)
from ddks.automorphisms import (
    FreenessError,
    act,
    automorphism_group,
    induced_symplectic_map,
    inner_automorphisms,
    orbit_count,
    orbit_of,
    orbits_via_unionfind,
    out_order,
)
from ddks.structures import example_structure
from ddks.symplectic import aut_order, induced_space, orthogonal_order


@pytest.fixture(scope="module")
def H5():
    return realize_label("G(32,49)")


@pytest.fixture(scope="module")
def G5():
    return realize_label("G(32,50)")


@pytest.fixture(scope="module")
def autsH(H5):
    return automorphism_group(H5, get_presentation("G(32,49)"))


@pytest.fixture(scope="module")
def autsG(G5):
    return automorphism_group(G5, get_presentation("G(32,50)"))


# ------------------------------------------------------------ aut groups

def test_aut_orders_match_closed_formulas(autsH, autsG):
    assert len(autsH) == 1152 == aut_order(2, 1)
    assert len(autsG) == 1920 == aut_order(2, -1)


def test_s4_is_complete():
    g = realize_label("S4")
    auts = automorphism_group(g, get_presentation("S4"))
    assert len(auts) == 24
    assert len(inner_automorphisms(g)) == 24
    assert out_order(g, get_presentation("S4")) == 1


def test_inner_and_out(H5, G5, autsH, autsG):
    assert len(inner_automorphisms(H5)) == 16
    assert len(inner_automorphisms(G5)) == 16
    assert out_order(H5, get_presentation("G(32,49)")) == 72 == orthogonal_order(2, 1)
    assert out_order(G5, get_presentation("G(32,50)")) == 120 == orthogonal_order(2, -1)


def test_inner_of_abelian_is_trivial():
    z6 = realize(parse_presentation("gens: x\nrel: x^6"))
    inner = inner_automorphisms(z6)
    assert len(inner) == 1 and inner[0].is_identity


def test_automorphisms_are_multiplicative(H5, autsH):
    cayley = np.array(H5.cayley, dtype=np.int64)
    for a in autsH:
        perm = np.frombuffer(a.permutation, dtype=np.uint8).astype(np.int64)
        assert perm[0] == 0
        # phi(xy) = phi(x) phi(y) for all 1024 pairs
        assert np.array_equal(perm[cayley], cayley[perm][:, perm])


def test_automorphisms_preserve_element_orders(H5, autsH):
    orders = H5.element_order
    for a in autsH[::97]:
        for x in H5.elements():
            assert orders[a(x)] == orders[x]


def test_compose_and_inverse(autsH):
    a, b = autsH[3], autsH[1101]
    c = a.compose(b)
    assert all(c(x) == a(b(x)) for x in range(32))
    assert a.compose(a.inverse()).is_identity
    assert a.inverse().compose(a).is_identity


def test_inner_are_among_all_automorphisms(H5, autsH):
    all_perms = {a.permutation for a in autsH}
    for a in inner_automorphisms(H5):
        assert a.permutation in all_perms


def test_cap_rejected():
    src = "gens: a b\nrel: a^8\nrel: b^8\nrel: [a,b]"
    g = realize(parse_presentation(src))
    assert g.order == 64
    with pytest.raises(ValueError, match="cap"):
        automorphism_group(g, parse_presentation(src))


# -------------------------------------------------- action on structures

def test_act_identity_and_images(H5, autsH):
    s = example_structure(H5)
    identity = next(a for a in autsH if a.is_identity)
    assert act(identity, s).elements == s.elements
    for a in autsH[::149]:
        image = act(a, s)  # re-verified inside
        assert image.ambient is H5


def test_orbit_of_example_has_aut_size(H5, autsH):
    s = example_structure(H5)
    orbit = orbit_of(s, autsH)
    assert len(orbit) == len(autsH) == 1152


def test_orbit_counts(H5, G5, autsH, autsG, rows_cache):
    rows49 = rows_cache.backtrack("G(32,49)")
    rows50 = rows_cache.backtrack("G(32,50)")
    assert orbit_count(H5, rows49, autsH) == 1920
    assert orbit_count(G5, rows50, autsG) == 1152


def test_orbit_count_freeness_violation(H5, autsH):
    fixed_by_everything = np.zeros((1, 9), dtype=np.uint8)
    with pytest.raises(FreenessError):
        orbit_count(H5, fixed_by_everything, autsH, freeness="full")
    with pytest.raises(ValueError, match="freeness"):
        orbit_count(H5, fixed_by_everything, autsH, freeness="maybe")


def test_union_find_on_known_orbits(H5, autsH, rows_cache):
    rows = rows_cache.backtrack("G(32,49)")
    seeds = [rows[0], rows[len(rows) // 2], rows[-1]]
    tables = [a.permutation for a in autsH]
    closed = set()
    for seed in seeds:
        rb = seed.tobytes()
        for t in tables:
            closed.add(rb.translate(t + bytes(range(len(t), 256))))
    arr = np.frombuffer(b"".join(sorted(closed)), dtype=np.uint8).reshape(-1, 9)
    n_orbits = orbits_via_unionfind(arr, autsH)
    assert len(arr) % 1152 == 0
    assert n_orbits == len(arr) // 1152
    with pytest.raises(ValueError, match="not closed"):
        orbits_via_unionfind(arr[:5], autsH)


# ------------------------------------------------- induced maps on V

@pytest.mark.parametrize("fixture", ["H", "G"])
def test_induced_maps_preserve_forms(fixture, H5, G5, autsH, autsG):
    G, auts = (H5, autsH) if fixture == "H" else (G5, autsG)
    space = induced_space(G)
    for a in auts:
        table = induced_symplectic_map(space, a)
        for u in space.vectors():
            assert space.q(table[u]) == space.q(u)
            for v in space.vectors():
                if space.pair(table[u], table[v]) != space.pair(u, v):
                    raise AssertionError("pairing not preserved")


def test_induced_map_of_inner_is_identity(H5):
    space = induced_space(H5)
    for a in inner_automorphisms(H5):
        table = induced_symplectic_map(space, a)
        assert table == list(space.vectors())
