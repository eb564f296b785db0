import numpy as np
import pytest

from heatcount.lie import montecarlo as mc


def test_histogram_total_and_determinism():
    a = mc.mc_commutator_histogram(11, 50_000, 20, threads=1)
    b = mc.mc_commutator_histogram(11, 50_000, 20, threads=4)
    c = mc.mc_commutator_histogram(12, 50_000, 20, threads=1)
    assert a.counts.sum() == 50_000
    assert np.array_equal(a.counts, b.counts)
    assert not np.array_equal(a.counts, c.counts)


def test_haar_samples_are_unit_quaternions():
    q = mc.haar_su2(np.random.default_rng(0), 1000)
    assert np.allclose(np.linalg.norm(q, axis=1), 1)


def test_quaternion_product_is_associative_and_normed():
    rng = np.random.default_rng(1)
    p, q, r = (mc.haar_su2(rng, 100) for _ in range(3))
    left = mc.quaternion_multiply(mc.quaternion_multiply(p, q), r)
    right = mc.quaternion_multiply(p, mc.quaternion_multiply(q, r))
    assert np.allclose(left, right)
    assert np.allclose(np.linalg.norm(mc.quaternion_multiply(p, q), axis=1), 1)


def test_identity_map_follows_weyl_measure():
    h = mc.mc_commutator_histogram(5, 200_000, 25, map="identity")
    lo, hi = h.edges[:-1], h.edges[1:]
    # (2/pi) sin^2 integrates to (theta - sin theta cos theta) / pi
    exact = ((hi - np.sin(hi) * np.cos(hi)) - (lo - np.sin(lo) * np.cos(lo))) / np.pi
    assert np.allclose(mc.expected_bin_probabilities(h.edges, "identity"), exact, atol=1e-12)
    sigma = np.sqrt(h.samples * exact * (1 - exact))
    assert np.all(np.abs(h.counts - h.samples * exact) <= 3 * sigma + 1)


def test_commutator_expectation_matches_closed_form():
    # (pi - theta) sin(theta) / pi is the g = 1 commutator law of theta
    edges = np.linspace(0, np.pi, 11)
    p = mc.expected_bin_probabilities(edges, "commutator", t=0.002)
    lo, hi = edges[:-1], edges[1:]
    antider = lambda x: (-(np.pi - x) * np.cos(x) - np.sin(x)) / np.pi
    exact = antider(hi) - antider(lo)
    assert np.sum(exact) == pytest.approx(1.0)
    assert np.max(np.abs(p - exact)) < 2e-3


def test_commutator_histogram_close_to_series():
    h = mc.mc_commutator_histogram(2, 200_000, 50)
    p = mc.expected_bin_probabilities(h.edges)
    assert mc.total_variation(h.frequencies, p) < 0.05


def test_preconditions():
    with pytest.raises(ValueError):
        mc.mc_commutator_histogram(0, 100, 10)
    with pytest.raises(ValueError):
        mc.mc_commutator_histogram(0, 10_000, 10, map="square")
