import pytest

from smallcancel.groups import (
    GroupError,
    GroupTable,
    Homomorphism,
    SimpleFactorSpec,
    alternating_group,
    cyclic_group,
    default_host,
    find_embedding,
    is_simple,
    normal_closure,
    parse_cycles,
    subgroup_generated,
    validate_homomorphism,
)


def test_cyclic_tables():
    g = cyclic_group(6)
    assert g.order == 6
    assert g.elements[:3] == ("e", "g", "g^2")
    assert g.op(4, 5) == 3
    assert g.inv[2] == 4
    assert g.element_order(2) == 3
    assert g.power(1, -1) == 5


def test_rejects_bad_tables():
    with pytest.raises(GroupError, match="identity"):
        GroupTable("x", ("a", "e"), ((1, 0), (0, 1)))
    with pytest.raises(GroupError, match="not 2x2"):
        GroupTable("x", ("e", "a"), ((0, 1),))
    with pytest.raises(GroupError, match="unique"):
        GroupTable("x", ("e", "e"), ((0, 1), (1, 0)))
    # a Latin square with identity that is not associative (order 5 loop)
    loop = ((0, 1, 2, 3, 4), (1, 0, 3, 4, 2), (2, 4, 0, 1, 3), (3, 2, 4, 0, 1), (4, 3, 1, 2, 0))
    with pytest.raises(GroupError, match="associative"):
        GroupTable("loop", tuple("eabcd"), loop)


def test_from_names():
    g = GroupTable.from_names("K", ["e", "x"], [["e", "x"], ["x", "e"]])
    assert g.index("x") == 1 and g.inv[1] == 1
    with pytest.raises(GroupError, match="unknown element"):
        GroupTable.from_names("K", ["e", "x"], [["e", "x"], ["x", "y"]])


def test_alternating_orders_and_names():
    a5 = alternating_group(5)
    assert a5.order == 60
    assert a5.elements[0] == "e"
    assert "(12)(34)" in a5.elements and "(12345)" in a5.elements
    assert alternating_group(4).order == 12
    assert parse_cycles("(123)(45)", 5) == (1, 2, 0, 4, 3)


def test_product_is_left_to_right():
    a5 = alternating_group(5)
    x, y = a5.index("(123)"), a5.index("(12)(34)")
    z = a5.op(x, y)
    # apply (123) first: 1 -> 2 -> 1, 2 -> 3 -> 4, 3 -> 1 -> 2, 4 -> 4 -> 3
    assert a5.elements[z] == "(243)"


def test_simplicity():
    assert is_simple(alternating_group(5))
    assert is_simple(cyclic_group(5))
    assert not is_simple(alternating_group(4))
    assert not is_simple(cyclic_group(6))
    assert not is_simple(cyclic_group(1))


def test_closures():
    a4 = alternating_group(4)
    v4 = normal_closure(a4, ["(12)(34)"])
    assert len(v4) == 4
    assert len(subgroup_generated(a4, ["(123)"])) == 3
    assert len(subgroup_generated(alternating_group(5), ["(12345)", "(12)(34)"])) == 60


def test_homomorphisms():
    a5 = alternating_group(5)
    c3 = cyclic_group(3, "y")
    h = Homomorphism.from_names(c3, a5, {"y": "(123)"})
    rep = validate_homomorphism(h)
    assert rep.is_hom and rep.is_injective
    with pytest.raises(GroupError):
        Homomorphism.from_names(c3, a5, {"y": "(12)(34)"})   # order 2 cannot host y
    bad = Homomorphism(c3, a5, (0, a5.index("(123)"), a5.index("(123)")))
    assert not validate_homomorphism(bad).is_hom


def test_find_embedding():
    a5 = alternating_group(5)
    for g in (cyclic_group(2), cyclic_group(3), cyclic_group(5), alternating_group(4)):
        emb = find_embedding(g, a5)
        assert emb is not None and validate_homomorphism(emb).is_injective
    assert find_embedding(cyclic_group(4), a5) is None
    assert find_embedding(cyclic_group(6), a5) is None


def test_host_problems():
    assert default_host().problems() == []
    c6 = cyclic_group(6)
    assert any("not simple" in p for p in SimpleFactorSpec(c6, (1, 1)).problems())
    a5 = alternating_group(5)
    spec = SimpleFactorSpec(a5, (a5.index("(123)"), a5.index("(132)")))
    assert any("not generated" in p for p in spec.problems())


def test_conjugacy_classes_partition():
    a5 = alternating_group(5)
    sizes = sorted({len(a5.conjugacy_class(x)) for x in range(60)})
    assert sizes == [1, 12, 15, 20]
