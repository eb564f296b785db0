import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heatcount import counting as cnt
from heatcount.errors import ParseError, ResourceError

from conftest import TEST_GROUPS, group_and_table


def _cls(g, size):
    """First class of the given size other than the identity."""
    return next(c for c in g.classes[1:] if c.size == size)


# ----------------------------------------------------------------------
# documented values

def test_surface_examples():
    g, t = group_and_table("cyclic:4")
    assert cnt.count_surface(t, 1).count == 16
    g, t = group_and_table("symmetric:3")
    trans, three = _cls(g, 3), _cls(g, 2)
    assert cnt.count_surface(t, 1).count == 18
    assert cnt.count_surface(t, 1, [three]).count == 18
    assert cnt.count_surface(t, 0, [trans, trans]).count == 3


def test_pushforward_s3():
    g, t = group_and_table("symmetric:3")
    fn, results = cnt.pushforward_class_function(t, 1)
    by_size = {c.size: int(v) for c, v in zip(g.classes, fn.values)}
    assert by_size == {1: 18, 2: 9, 3: 0}
    assert all(r.residue < 1e-6 for r in results)


def test_pushforward_total_mass(gt):
    g, t = gt
    for classes in ([], [g.classes[-1]]):
        fn, _ = cnt.pushforward_class_function(t, 1, classes)
        domain = g.order ** 2 * int(np.prod([c.size for c in classes]))
        assert int(np.sum(g.class_sizes * fn.values)) == domain


def test_pushforward_abelian():
    g, t = group_and_table("cyclic:6")
    fn, _ = cnt.pushforward_class_function(t, 1)
    assert fn.values.tolist() == [36] + [0] * 5


def test_n_commutator_examples():
    g, t = group_and_table("symmetric:3")
    assert [cnt.count_n_commutator(t, 1, w).count for w in range(6)] == [1] * 6
    assert cnt.count_n_commutator(t, 2).count == 18
    assert cnt.count_n_commutator(t, 3).count == 162


def test_subgroup_examples():
    g, t = group_and_table("symmetric:3")
    trivial = g.subgroup([])
    assert cnt.count_conjugate_subgroup_product(t, [trivial]).count == 6
    h = g.subgroup([g.classes[1].representative])
    assert h.order == 2
    assert cnt.count_conjugate_subgroup_product(t, [h, h]).count == 48
    g2, t2 = group_and_table("cyclic:2")
    whole = g2.subgroup([1])
    assert cnt.count_conjugate_subgroup_product(t2, [whole, whole]).count == 8


def test_square_examples():
    _, t = group_and_table("cyclic:2")
    assert cnt.count_with_square(t, 0).count == 2
    _, t = group_and_table("symmetric:3")
    assert cnt.count_with_square(t, 0).count == 4
    assert cnt.count_with_square(t, 1).count == 90


def test_klein_cyclic2_genus0():
    # w z w^-1 z = z^2 = e holds for all 4 pairs of cyclic:2
    g, t = group_and_table("cyclic:2")
    assert cnt.count_klein(t, 0).count == 4
    assert cnt.brute_force_count(g, cnt.klein_word(0)) == 4


def test_brute_force_examples():
    g, _ = group_and_table("symmetric:3")
    assert cnt.brute_force_count(g, cnt.parse_word("x1*y1*inv(x1)*inv(y1) => 0")) == 18
    three = _cls(g, 2)
    a, b = three.members
    assert cnt.brute_force_count(g, cnt.parse_word(f"x1*c:{a}*inv(x1) => {b}")) == 3
    ab, _ = group_and_table("cyclic:5")
    assert cnt.brute_force_count(ab, cnt.parse_word("x1*y1*inv(x1)*inv(y1) => 2")) == 0


# ----------------------------------------------------------------------
# oracle agreement beyond the acceptance grid

@pytest.mark.parametrize("spec", TEST_GROUPS)
def test_surface_targets_match_oracle(spec):
    g, t = group_and_table(spec)
    for target in sorted({c.representative for c in g.classes}):
        fast = cnt.count_surface(t, 1, [], target).count
        assert fast == cnt.brute_force_count(g, cnt.surface_word(1, [], target))


@pytest.mark.parametrize("spec", TEST_GROUPS)
def test_n_commutator_targets_match_oracle(spec):
    g, t = group_and_table(spec)
    for c in g.classes:
        w = c.representative
        assert cnt.count_n_commutator(t, 2, w).count == cnt.brute_force_count(g, cnt.n_commutator_word(2, w))


@pytest.mark.parametrize("spec", TEST_GROUPS)
def test_klein_character_form_matches_contract(spec):
    _, t = group_and_table(spec)
    for g in range(3):
        assert cnt.count_klein_characters(t, g).count == cnt.count_klein(t, g).count


def test_conjugation_invariance():
    g, t = group_and_table("symmetric:4")
    for c in g.classes:
        values = {cnt.count_surface(t, 1, [], x).count for x in c.members}
        assert len(values) == 1


# ----------------------------------------------------------------------
# weighted counts

def test_weighted_trivial_equals_count(gt):
    g, t = gt
    assert cnt.weighted_count(t, 1, [], [(1, 0)]) == pytest.approx(cnt.count_surface(t, 1).count)


@pytest.mark.parametrize("spec", ["symmetric:3", "quaternion8", "cyclic:4", "alternating:4"])
def test_weighted_matches_oracle(spec):
    g, t = group_and_table(spec)
    for lam in range(len(t)):
        fast = cnt.weighted_count(t, 1, [], [(1, lam)])
        slow = cnt.brute_force_weighted(t, 1, [], [(1, lam)])
        assert abs(fast - slow) < 1e-6
    if len(t) > 2:
        w = [(1, 1), (1, len(t) - 1)]
        assert abs(cnt.weighted_count(t, 1, [], w) - cnt.brute_force_weighted(t, 1, [], w)) < 1e-6


def test_weighted_abelian_nontrivial_vanishes():
    _, t = group_and_table("cyclic:5")
    for lam in range(1, 5):
        assert abs(cnt.weighted_count(t, 1, [], [(1, lam)])) < 1e-9


def test_weighted_two_handles():
    _, t = group_and_table("symmetric:3")
    w = [(1, "2a"), (2, "1b")]
    assert abs(cnt.weighted_count(t, 2, [], w) - cnt.brute_force_weighted(t, 2, [], w)) < 1e-6


# ----------------------------------------------------------------------
# word grammar and oracle plumbing

def test_parse_word_domains():
    eq = cnt.parse_word("x1*z1@3*u1@H2*inv(x1)*c:4 => 5")
    assert eq.domains == {"x1": "free", "z1": ("class", 3), "u1": ("subgroup", 2)}
    assert eq.target == 5
    assert eq.letters[3].inverse


@pytest.mark.parametrize("text", ["x1**y1", "x1 => a", "c:q", "x1@3*x1@4"])
def test_parse_word_errors(text):
    with pytest.raises(ParseError):
        cnt.parse_word(text)


def test_resource_cap():
    g, _ = group_and_table("symmetric:4")
    with pytest.raises(ResourceError):
        cnt.brute_force_count(g, cnt.surface_word(3), max_evaluations=10**6)


def test_threads_do_not_change_counts():
    g, _ = group_and_table("symmetric:4")
    eq = cnt.n_commutator_word(3)
    assert cnt.brute_force_count(g, eq, chunk=1000, threads=4) == cnt.brute_force_count(g, eq)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["x1", "x2", "y1", "c:1", "c:2"]), st.booleans()),
                min_size=1, max_size=5),
       st.sampled_from(["symmetric:3", "quaternion8"]))
def test_oracle_matches_naive_loop(letters, spec):
    g, _ = group_and_table(spec)
    word = "*".join(f"inv({s})" if inv else s for s, inv in letters)
    eq = cnt.parse_word(word + " => 0")
    names = eq.variables
    naive = 0
    for values in itertools.product(range(g.order), repeat=len(names)):
        env = dict(zip(names, values))
        acc = 0
        for s, inv in letters:
            x = int(s[2:]) if s.startswith("c:") else env[s]
            acc = g.multiply(acc, g.inverse(x) if inv else x)
        naive += acc == 0
    assert cnt.brute_force_count(g, eq) == naive
