import pytest

from ddks.group_core import (
    FiniteGroup,
    Homomorphism,
    Word,
    parse_presentation,
    realize,
    realize_label,
)


def klein_four():
    return realize(parse_presentation("gens: x y\nrel: x^2\nrel: y^2\nrel: [x,y]"))


def cyclic(n):
    return realize(parse_presentation(f"gens: x\nrel: x^{n}"))


def test_identity_and_inverse_invariants():
    g = realize_label("G(32,49)")
    for x in g.elements():
        assert g.mul(0, x) == x == g.mul(x, 0)
        assert g.mul(x, g.inv(x)) == 0
        assert g.element_order[x] >= 1
        assert g.power(x, g.element_order[x]) == 0


def test_latin_square_validation():
    with pytest.raises(ValueError, match="Latin"):
        FiniteGroup([[0, 1], [0, 1]])


def test_identity_position_validation():
    # Z2 table written with the identity at index 1
    with pytest.raises(ValueError, match="identity"):
        FiniteGroup([[1, 0], [0, 1]])


def test_associativity_validation():
    # a Latin square with two-sided identity that is not a group: smallest
    # examples live at order 5
    q = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(ValueError, match="associative"):
        FiniteGroup(q)


def test_power_and_commutator():
    g = realize_label("S4")
    x, y = g.generator_elements
    assert g.power(y, -1) == g.inv(y)
    assert g.power(y, 5) == y
    assert g.commutator(x, x) == 0
    # conjugation convention: conjugate(x, g) = g x g^-1
    assert g.conjugate(x, y) == g.mul(g.mul(y, x), g.inv(y))


def test_evaluate_word():
    g = realize_label("G(32,49)")
    r1, t1, r2, t2, z = g.generator_elements
    w = parse_presentation("gens: r1 t1 r2 t2 z\nrel: [r1, t1]").relators[0]
    assert g.evaluate_word(w, g.generator_elements) == z
    w2 = parse_presentation("gens: r1 t1 r2 t2 z\nrel: [r1, t2]").relators[0]
    assert g.evaluate_word(w2, g.generator_elements) == 0
    assert g.evaluate_word(Word(()), g.generator_elements) == 0
    with pytest.raises(IndexError):
        g.evaluate_word(Word((6,)), g.generator_elements)


def test_center_and_centralizer():
    g = realize_label("G(32,49)")
    z = g.generator_elements[4]
    assert tuple(g.center()) == (0, z)
    # center elements commute with everything, so their centralizer is G
    assert len(g.centralizer(z)) == 32
    s4 = realize_label("S4")
    assert len(s4.center()) == 1


def test_centralizer_in_sl2f3_is_cyclic_6():
    g = realize_label("G(24,3)")
    x = g.generator_elements[0]
    x2 = g.mul(x, x)
    cent = g.centralizer(x2)
    assert len(cent) == 6
    assert cent.is_abelian()
    assert max(g.element_order[c] for c in cent) == 6  # cyclic of order 6


def test_subgroup_generated():
    g = realize_label("S4")
    assert tuple(g.subgroup_generated({0})) == (0,)
    assert len(g.subgroup_generated(g.generator_elements)) == 24
    y = g.generator_elements[1]
    assert len(g.subgroup_generated({y})) == 4


def test_normal_closure_of_3cycle_is_a4():
    g = realize_label("S4")
    three_cycles = [x for x in g.elements() if g.element_order[x] == 3]
    ncl = g.normal_closure({three_cycles[0]})
    assert len(ncl) == 12
    assert ncl.is_normal()


def test_derived_subgroups():
    assert len(klein_four().derived_subgroup()) == 1
    assert len(realize_label("S4").derived_subgroup()) == 12
    g = realize_label("G(32,49)")
    assert tuple(g.derived_subgroup()) == tuple(g.center())


def test_socle():
    s4 = realize_label("S4")
    soc = s4.socle()
    assert len(soc) == 4
    assert sorted(s4.element_order[x] for x in soc) == [1, 2, 2, 2]  # V4
    assert s4.is_monolithic()

    z6 = cyclic(6)
    assert tuple(z6.socle()) == (0,)
    assert not z6.is_monolithic()

    with pytest.raises(ValueError):
        cyclic(1).socle()


def test_quotient_by_center():
    g = realize_label("G(32,49)")
    q, proj = g.quotient(g.center())
    assert q.order == 16
    assert q.is_abelian
    assert all(q.element_order[x] <= 2 for x in q.elements())
    assert proj[0] == 0
    for a in g.elements():
        for b in g.elements():
            assert proj[g.mul(a, b)] == q.mul(proj[a], proj[b])


def test_quotient_rejects_bad_input():
    g = realize_label("S4")
    with pytest.raises(ValueError, match="subgroup"):
        g.quotient([0, 1, 2])  # not closed in general
    x = g.generator_elements[0]
    sub = g.subgroup_generated({x})
    with pytest.raises(ValueError, match="normal"):
        g.quotient(sub)


def test_normal_subgroups_of_s4():
    g = realize_label("S4")
    sizes = sorted(len(n) for n in g.normal_subgroups())
    assert sizes == [1, 4, 12, 24]


def test_nilpotency_class():
    assert realize_label("G(32,49)").nilpotency_class() == 2
    assert realize_label("S4").nilpotency_class() is None
    assert cyclic(6).nilpotency_class() == 1
    assert cyclic(1).nilpotency_class() == 0


def test_homomorphism_validation():
    p = parse_presentation("gens: x\nrel: x^2")
    z4 = cyclic(4)
    x = z4.generator_elements[0]
    with pytest.raises(ValueError, match="not satisfied"):
        Homomorphism(p, z4, (x,))
    h = Homomorphism(p, z4, (z4.mul(x, x),))
    assert not h.is_surjective()
    assert len(h.image_elements()) == 2


def test_is_cct():
    with pytest.raises(ValueError, match="abelian"):
        klein_four().is_cct()
    assert realize_label("G(24,6)").is_cct()
    assert not realize_label("S4").is_cct()
