import math

import numpy as np
import pytest
from scipy.stats import unitary_group

from heatcount.errors import DivergenceError, ParseError, SingularityWarning, SingularPointError
from heatcount.lie import series as S
from heatcount.lie.roots import (TorusPoint, casimir, character_matrix, dominant_weights,
                                 parse_torus_point, root_system, weight_multiplicities,
                                 weyl_character, weyl_denominator, weyl_dimension,
                                 zero_weight_multiplicity)
from heatcount.lie.montecarlo import haar_su2, quaternion_multiply, rotation_angle

A1, A2 = root_system("A1"), root_system("A2")


def a1(theta):
    return TorusPoint("A1", (theta,))


# ----------------------------------------------------------------------
# root data

def test_root_data():
    assert len(A1.weyl_group) == 2 and len(A2.weyl_group) == 6
    assert np.allclose(A2.rho, 0.5 * A2.positive_roots.sum(axis=0))
    assert np.all(np.linalg.eigvalsh(A2.gram) > 0)
    # long roots have squared length 2
    for alpha in A2.positive_roots:
        assert A2.inner(alpha, alpha) == pytest.approx(2.0)
    assert A1.inner(A1.positive_roots[0], A1.positive_roots[0]) == pytest.approx(2.0)


def test_dominant_weights_a1():
    assert [w.coords for w in dominant_weights(A1, 0.0)] == [(0,)]
    assert [w.coords for w in dominant_weights(A1, 4.0)] == [(0,), (1,), (2,)]


@pytest.mark.parametrize("cutoff", [1.0, 7.5, 40.0, 333.3])
def test_dominant_weights_a2_count(cutoff):
    brute = 0
    for a in range(100):
        for b in range(100):
            if casimir(A2, (a, b)) <= cutoff:
                brute += 1
    assert len(dominant_weights(A2, cutoff)) == brute


def test_casimir_properties():
    assert casimir(A1, (3,)) == pytest.approx((9 + 6) / 2)
    for rs in (A1, A2):
        ws = dominant_weights(rs, 50.0)
        assert ws.casimirs[0] == 0 and np.all(ws.casimirs[1:] > 0)
    for a in range(6):
        assert casimir(A2, (a + 1, 2)) > casimir(A2, (a, 2))
        assert casimir(A2, (2, a + 1)) > casimir(A2, (2, a))


def test_dimensions():
    assert [weyl_dimension(A1, (n,)) for n in range(5)] == [1, 2, 3, 4, 5]
    assert weyl_dimension(A2, (1, 0)) == 3
    assert weyl_dimension(A2, (1, 1)) == 8
    assert weyl_dimension(A2, (2, 0)) == 6
    # multiplicities from the weight system add up to the dimension
    for lam in [(0, 0), (1, 1), (2, 1), (3, 0), (2, 2)]:
        assert sum(weight_multiplicities(A2, lam).values()) == weyl_dimension(A2, lam)


# ----------------------------------------------------------------------
# characters

@pytest.mark.parametrize("theta", [0.3, 1.0, 2.2, 3.0])
def test_a1_character_closed_form(theta):
    for n in range(8):
        assert weyl_character(A1, (n,), a1(theta)) == pytest.approx(
            math.sin((n + 1) * theta) / math.sin(theta))


def test_identity_limit_is_dimension():
    for rs, e in ((A1, a1(0.0)), (A2, TorusPoint("A2", (0.0, 0.0)))):
        for w in dominant_weights(rs, 50.0):
            assert weyl_character(rs, w.coords, e) == pytest.approx(w.dimension)


def test_singular_point_raises():
    with pytest.raises(SingularPointError):
        weyl_character(A1, (2,), a1(math.pi))
    with pytest.raises(SingularPointError):
        weyl_character(A2, (1, 0), TorusPoint("A2", (1.0, 2.0)))  # eigenvalue angles (1, 1, -2)


def test_a2_fundamental_is_trace():
    rng = np.random.default_rng(7)
    for _ in range(5):
        t1, t2 = rng.uniform(0, 2 * np.pi, size=2)
        phases = np.exp(1j * np.array([t1, t2 - t1, -t2]))
        u = unitary_group.rvs(3, random_state=rng)
        m = u @ np.diag(phases) @ u.conj().T
        x = TorusPoint("A2", (t1, t2))
        assert weyl_character(A2, (1, 0), x) == pytest.approx(np.trace(m))
        assert weyl_character(A2, (0, 1), x) == pytest.approx(np.conj(np.trace(m)))
        # adjoint = |trace|^2 - 1
        assert weyl_character(A2, (1, 1), x) == pytest.approx(abs(np.trace(m)) ** 2 - 1)


def test_schur_orthogonality_a1():
    nodes, w = np.polynomial.legendre.leggauss(512)
    theta = (nodes + 1) * np.pi / 2
    measure = w * np.pi / 2 * (2 / np.pi) * np.sin(theta) ** 2
    chi = np.array([np.sin((n + 1) * theta) / np.sin(theta) for n in range(20)])
    gram = (chi * measure) @ chi.T
    assert np.max(np.abs(gram - np.eye(20))) < 1e-6


def test_schur_orthogonality_a2():
    n = 72
    t = 2 * np.pi * np.arange(n) / n
    t1, t2 = np.meshgrid(t, t, indexing="ij")
    angles = np.stack([t1.ravel(), t2.ravel()], axis=1)
    ws = dominant_weights(A2, 12.0)
    chi = character_matrix(A2, ws, angles)
    measure = np.abs(weyl_denominator(A2, angles)) ** 2 / 6 / len(angles)
    gram = (chi * measure) @ chi.conj().T
    assert np.max(np.abs(gram - np.eye(len(ws)))) < 1e-4


def test_zero_weight_multiplicity():
    assert [zero_weight_multiplicity(A1, (n,)) for n in range(6)] == [1, 0, 1, 0, 1, 0]
    assert zero_weight_multiplicity(A2, (1, 1)) == 2
    assert zero_weight_multiplicity(A2, (1, 0)) == 0
    for lam in [(2, 2), (3, 0), (4, 1), (3, 3), (5, 2)]:
        assert zero_weight_multiplicity(A2, lam) == weight_multiplicities(A2, lam).get((0, 0), 0)


def test_torus_point_text():
    x = parse_torus_point("A2:t1=0.25,t2=-1.5")
    assert x.angles == (0.25, -1.5)
    assert parse_torus_point(str(x)) == x
    assert parse_torus_point("A1:theta=1.0").is_regular()
    assert not parse_torus_point("A1:theta=0").is_regular()
    with pytest.raises(ParseError):
        parse_torus_point("A3:theta=1")


# ----------------------------------------------------------------------
# series

@pytest.mark.parametrize("s, exact", [(2, math.pi ** 2 / 6), (4, math.pi ** 4 / 90), (3, 1.2020569031595942)])
def test_zeta_a1(s, exact):
    r = S.witten_zeta_partial(A1, s, 1e-6)
    assert r.tail_bound <= 1e-6
    assert 0 <= exact - r.value <= r.tail_bound


def test_zeta_a1_monotone_in_cutoff():
    values = [S.witten_zeta_partial(A1, 2, None, cutoff=c) for c in (10, 100, 1000, 10000)]
    for lo, hi in zip(values, values[1:]):
        assert lo.value <= hi.value <= lo.value + lo.tail_bound


def test_zeta_a2_two_cutoffs():
    small = S.witten_zeta_partial(A2, 2, None, cutoff=11200.0)
    large = S.witten_zeta_partial(A2, 2, None, cutoff=1.11e6)
    assert 5e3 < small.terms_used < 2e4 and 5e5 < large.terms_used < 2e6
    assert small.value <= large.value <= small.value + small.tail_bound
    # Tornheim's sum gives 4 pi^6 / 2835
    assert 0 <= 4 * math.pi ** 6 / 2835 - large.value <= large.tail_bound


def test_zeta_below_abscissa():
    with pytest.raises(DivergenceError):
        S.witten_zeta_partial(A1, 1.5)
    with pytest.raises(DivergenceError):
        S.witten_zeta_partial(A2, 1.1)


def test_tail_bound_honest_on_doubling():
    for rs, fn in ((A1, lambda: S.commutator_density(A1, a1(1.3), 1, 0.05, None, cutoff=30.0)),
                   (A2, lambda: S.moduli_volume_series(A2, 2, [], 0.0, None, cutoff=200.0))):
        coarse = fn()
        fine = (S.commutator_density(A1, a1(1.3), 1, 0.05, None, cutoff=3000.0) if rs is A1
                else S.moduli_volume_series(A2, 2, [], 0.0, None, cutoff=20000.0))
        assert abs(fine.value - coarse.value) <= coarse.tail_bound


def test_volume_genus2_no_points_is_zeta():
    r = S.moduli_volume_series(A1, 2, [], 0.0, 1e-6)
    assert abs(r.value - math.pi ** 2 / 6) <= r.tail_bound + 1e-12


def test_volume_one_point_direct_sum():
    r = S.moduli_volume_series(A1, 2, [a1(math.pi / 2)], 0.0, 1e-9)
    m = np.arange(1, 10 ** 6 + 1, dtype=float)
    direct = math.fsum((np.sin(m * np.pi / 2) / m ** 3)[::-1])
    assert abs(r.value - direct) < 1e-9
    assert r.value == pytest.approx(math.pi ** 3 / 32, abs=1e-9)
    assert r.details["complex_dimension"] == 4
    assert r.details["j"] == [pytest.approx(2.0)]


def test_volume_central_point_warns():
    with pytest.warns(SingularityWarning):
        r = S.moduli_volume_series(A1, 2, [a1(0.0)], 0.0, 1e-4)
    assert r.details["j"] == [0.0] and r.details["prefactor"] is None
    # j(c) shrinks to zero as c approaches the centre
    js = [S.marked_point_data(A1, a1(th))["j"] for th in (0.1, 0.01, 0.001)]
    assert js == sorted(js, reverse=True) and js[-1] < 0.01


def test_volume_divergent_exponent():
    with pytest.raises(DivergenceError):
        S.moduli_volume_series(A1, 1, [], 0.0)
    r = S.moduli_volume_series(A1, 1, [], 0.5, 1e-8)
    assert r.value == pytest.approx(sum(math.exp(-0.5 * (n * n + 2 * n) / 2) for n in range(60)))


def test_commutator_density_identity_genus2():
    r = S.commutator_density(A1, a1(0.0), 2, 0.0, 1e-5)
    assert abs(r.value - math.pi ** 2 / 6) <= r.tail_bound + 1e-12


def test_commutator_density_genus1_refuses_t0():
    with pytest.raises(DivergenceError):
        S.commutator_density(A1, a1(1.0), 1, 0.0)


def test_commutator_density_two_scales():
    a = S.commutator_density(A1, a1(math.pi / 2), 1, 0.005).value
    b = S.commutator_density(A1, a1(math.pi / 2), 1, 0.002).value
    assert abs(a - b) / abs(b) < 0.01
    # limit (pi - theta) / (2 sin theta) of the genus-one series
    assert b == pytest.approx(math.pi / 4, rel=0.01)


@pytest.mark.parametrize("x", [a1(0.7), TorusPoint("A2", (0.4, 1.9))])
def test_commutator_density_inverse_symmetric(x):
    rs = root_system(x.tag)
    assert S.commutator_density(rs, x, 2, 0.0, 1e-6).value == pytest.approx(
        S.commutator_density(rs, x.inverse(), 2, 0.0, 1e-6).value, abs=1e-9)


def test_subgroup_density_full_group():
    r = S.subgroup_pushforward_density(A2, ["full-group", "torus"], TorusPoint("A2", (0.3, 1.1)), 0.1)
    assert r.value == 1.0


def test_subgroup_density_torus_conjugates():
    # conjugates of a uniform torus element: density 1 / (2 sin^2 theta) w.r.t. Haar
    for theta in (0.8, 1.5, 2.4):
        r = S.subgroup_pushforward_density(A1, ["torus"], a1(theta), 1e-4, 1e-8)
        assert r.value == pytest.approx(1 / (2 * math.sin(theta) ** 2), rel=1e-2)


def test_subgroup_density_trivial_slot_is_neutral():
    x = a1(1.0)
    both = S.subgroup_pushforward_density(A1, ["trivial", "torus"], x, 0.05, 1e-10)
    one = S.subgroup_pushforward_density(A1, ["torus"], x, 0.05, 1e-10)
    assert both.value == pytest.approx(one.value, abs=1e-9)
    direct = sum(zero_weight_multiplicity(A1, (n,)) * math.sin((n + 1) * 1.0) / math.sin(1.0)
                 * math.exp(-0.05 * (n * n + 2 * n) / 2) for n in range(400))
    assert one.value == pytest.approx(direct, abs=1e-9)


def test_n_commutator_reduces_to_genus_one():
    for theta in (0.4, 1.2, 2.7):
        q2 = S.lie_n_commutator_density(A1, 2, a1(theta), 0.01)
        f = S.commutator_density(A1, a1(theta), 1, 0.01, 1e-10).value
        assert abs(q2 - f) < 1e-3


def test_schur_step_per_weight():
    # int chi(g) chi(g^-1 w^-1) dg = chi(w^-1) / d, by Haar sampling on SU(2)
    rng = np.random.default_rng(3)
    g = haar_su2(rng, 200_000)
    for n in range(5):
        theta_w = rng.uniform(0.1, 3.0)
        w_inv = np.tile([math.cos(theta_w), -math.sin(theta_w), 0.0, 0.0], (len(g), 1))
        h = quaternion_multiply(g * [1, -1, -1, -1], w_inv)
        chi = lambda th: np.sin((n + 1) * th) / np.sin(th)
        estimate = np.mean(chi(rotation_angle(g)) * chi(rotation_angle(h)))
        expected = math.sin((n + 1) * theta_w) / math.sin(theta_w) / (n + 1)
        assert abs(estimate - expected) < 0.05


def test_n_commutator_three_is_stable():
    v = S.lie_n_commutator_density(A1, 3, a1(0.0), 0.01, points=256)
    assert v > 0 and math.isfinite(v)
    assert v == pytest.approx(S.lie_n_commutator_density(A1, 3, a1(0.0), 0.01, points=512), abs=1e-6)


def test_n_commutator_preconditions():
    with pytest.raises(ValueError):
        S.lie_n_commutator_density(A1, 2, a1(1.0), 0.01, points=100)
    with pytest.raises(Exception):
        S.lie_n_commutator_density(A2, 2, TorusPoint("A2", (1.0, 2.0)), 0.01)


def test_vanishing():
    rep = S.vanishing_limit(A1, a1(1.0), [0.5, 0.1, 0.02])
    mags = [abs(v) for v in rep.values]
    assert mags[0] > mags[1] > mags[2] and mags[2] < 1e-3 and rep.vanishing
    at_e = S.vanishing_limit(A1, a1(0.0), [0.5, 0.1, 0.02])
    assert at_e.values == sorted(at_e.values) and not at_e.vanishing
    big = S.vanishing_limit(A1, a1(1.0), [40.0])
    assert big.values[0] == pytest.approx(1.0, abs=1e-12)
