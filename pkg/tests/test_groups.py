import numpy as np
import pytest

from heatcount.errors import ParseError, ResourceError
from heatcount.groups import build_group, centralizer_order, direct_product

from conftest import TEST_GROUPS


@pytest.mark.parametrize("spec, order, sizes", [
    ("cyclic:6", 6, [1] * 6),
    ("symmetric:3", 6, [1, 2, 3]),
    ("symmetric:4", 24, [1, 3, 6, 6, 8]),
    ("alternating:4", 12, [1, 3, 4, 4]),
    ("dihedral:4", 8, [1, 1, 2, 2, 2]),
    ("quaternion8", 8, [1, 1, 2, 2, 2]),
    ("symmetric:5", 120, [1, 10, 15, 20, 20, 24, 30]),
])
def test_class_sizes(spec, order, sizes):
    g = build_group(spec)
    assert g.order == order
    assert sorted(g.class_sizes.tolist()) == sizes
    assert g.classes[0].members == (0,)


@pytest.mark.parametrize("spec", TEST_GROUPS)
def test_group_axioms(spec):
    g = build_group(spec)
    assert g.check_associativity()
    n = g.order
    for a in range(n):
        assert g.multiply(a, 0) == a == g.multiply(0, a)
        assert g.multiply(a, g.inverse(a)) == 0


@pytest.mark.parametrize("spec", TEST_GROUPS)
def test_classes_are_conjugation_orbits(spec):
    g = build_group(spec)
    for cls in g.classes:
        x = cls.representative
        orbit = {g.multiply(g.multiply(y, x), g.inverse(y)) for y in range(g.order)}
        assert orbit == set(cls.members)
        assert cls.size * centralizer_order(g, x) == g.order


def test_abelian_flags():
    assert build_group("cyclic:5").is_abelian
    assert not build_group("quaternion8").is_abelian
    assert not build_group("dihedral:4").is_abelian


def test_quaternion_has_one_involution():
    g = build_group("quaternion8")
    sq = [g.multiply(x, x) for x in range(g.order)]
    assert sum(1 for x in range(1, g.order) if sq[x] == 0) == 1


def test_perm_and_product_specs():
    g = build_group("perm:[(1,2),(1,2,3)]")
    s3 = build_group("symmetric:3")
    assert g.order == 6
    assert sorted(g.class_sizes.tolist()) == sorted(s3.class_sizes.tolist())
    p = build_group("product:cyclic:2|cyclic:3")
    assert p.order == 6 and p.is_abelian
    assert direct_product(build_group("cyclic:2"), build_group("symmetric:3")).order == 12


def test_cyclic_subgroups_of_s3():
    orders = sorted(h.order for h in build_group("symmetric:3").cyclic_subgroups())
    assert orders == [1, 2, 2, 2, 3]


def test_large_group_without_dense_table():
    g = build_group("symmetric:7")
    assert g.order == 5040 and g.table is None
    rng = np.random.default_rng(1)
    a, b, c = rng.integers(0, g.order, size=(3, 50))
    left = g.multiply_many(g.multiply_many(a, b), c)
    right = g.multiply_many(a, g.multiply_many(b, c))
    assert np.array_equal(left, right)
    assert len(g.classes) == 15


@pytest.mark.parametrize("spec", ["bogus:3", "cyclic:x", "perm:[(1,1)]", "perm:[(0,1)]", "cyclic:0"])
def test_bad_specs(spec):
    with pytest.raises(ParseError):
        build_group(spec)


def test_order_cap():
    with pytest.raises(ResourceError):
        build_group("symmetric:8")
