"""Truncated sums over dominant weights with certified tail bounds.

Every series here has the shape ``sum_lambda c(lambda) exp(-t p(lambda))``
where ``|c(lambda)| <= K d_lambda^a``.  The cutoff on the Casimir value is
chosen so that a rigorous integral-comparison bound on the discarded
terms is below the requested tolerance.

Densities are taken with respect to normalized Haar measure, so each
returned value is the bare sum over irreps.  The Riemannian prefactors
(powers of the group volume, centralizer volumes, ``j(c)``) are computed
under the basic normalization and reported separately.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import special

from ..errors import ConsistencyError, DivergenceError, DomainError, ResourceError, SingularityWarning
from .roots import (MAX_WEIGHTS, RootSystemData, TorusPoint, WeightList, character_matrix,
                    dominant_weights, weyl_denominator, zero_weight_multiplicity)

__all__ = [
    "SeriesResult",
    "VanishingReport",
    "witten_zeta_partial",
    "moduli_volume_series",
    "marked_point_data",
    "commutator_density",
    "commutator_density_values",
    "subgroup_pushforward_density",
    "lie_n_commutator_density",
    "vanishing_limit",
    "series_with_cutoff",
]

SLOT_KINDS = ("torus", "full-group", "trivial")


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    tail_bound: float
    cutoff: float
    conditionally_convergent: bool = False
    details: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        out = {
            "value": self.value,
            "terms_used": self.terms_used,
            "tail_bound": self.tail_bound,
            "cutoff": self.cutoff,
            "conditionally_convergent": self.conditionally_convergent,
        }
        out.update(self.details)
        return out


# ----------------------------------------------------------------------
# tail bounds: sum over {p(lambda) > P} of K d^a exp(-t p)

def _upper_gamma_integral(b: float, t: float, x0: float) -> float:
    """``int_{x0}^inf x^b exp(-t x^2 / 2) dx`` for ``b > -1``."""
    s = (b + 1) / 2
    return 0.5 * (2 / t) ** s * special.gamma(s) * special.gammaincc(s, t * x0 * x0 / 2)


def _tail_a1(top_m: int, a: float, t: float) -> float:
    """Bound on ``sum_{m > top_m} m^a exp(-t (m^2 - 1)/2)``; ``m = d``."""
    M = float(top_m)
    if t == 0:
        if a >= -1:
            return math.inf
        return M ** (a + 1) / (-a - 1)
    if M < math.sqrt(max(a, 0.0) / t):
        return math.inf      # summand not yet decreasing
    if a <= 0:
        gauss = math.sqrt(math.pi / (2 * t)) * special.erfc(M * math.sqrt(t / 2))
        return M ** a * math.exp(t / 2) * gauss
    return math.exp(t / 2) * _upper_gamma_integral(a, t, M)


def _zeta(s: float) -> float:
    return float(special.zeta(s, 1))


def _tail_a2(k1: int, a: float, t: float) -> float:
    """Bound on the A2 tail over weights with ``m + n >= k1`` (``m, n >= 1``).

    Uses ``d = m n (m + n) / 2``, ``p >= (m + n)^2 / 2 - 2`` and that
    exactly ``k - 1`` pairs have ``m + n = k``.
    """
    x0 = float(k1 - 1)
    if x0 < 1:
        return math.inf
    if t == 0:
        sigma = -a
        if sigma <= 1:
            return math.inf
        # sum_{m+n=k} (m(k-m))^-sigma <= 2 zeta(sigma) (k/2)^-sigma
        return 2 ** (1 + 2 * sigma) * _zeta(sigma) * x0 ** (1 - 2 * sigma) / (2 * sigma - 1)
    b = 1 + 3 * max(a, 0.0)
    if x0 < math.sqrt(b / t):
        return math.inf
    scale = 8.0 ** (-max(a, 0.0)) * math.exp(2 * t)
    return scale * _upper_gamma_integral(b, t, x0)


def _plan_cutoff(rs: RootSystemData, a: float, K: float, t: float, tol: float,
                 max_weights: int = MAX_WEIGHTS) -> tuple[float, float]:
    """Smallest Casimir cutoff (on a doubling grid) whose tail bound is <= tol."""
    if K == 0:
        return 0.0, 0.0
    level = 2
    while True:
        if rs.rank == 1:
            top_m = level
            cutoff = (top_m * top_m - 1) / 2
            bound = K * _tail_a1(top_m, a, t)
            size = top_m
        else:
            k1 = level
            cutoff = (k1 - 1) ** 2 / 1.5 - 2
            bound = K * _tail_a2(k1, a, t)
            size = 0.3 * (k1 - 1) ** 2
        if bound <= tol:
            return max(cutoff, 0.0), bound
        if size > max_weights:
            raise ResourceError(f"tolerance {tol:g} needs more than {max_weights} weights")
        level = int(level * 1.25) + 1


def _tail_at_cutoff(rs: RootSystemData, a: float, K: float, t: float, cutoff: float) -> float:
    if rs.rank == 1:
        top_m = int(math.floor(math.sqrt(2 * cutoff + 1)))
        return K * _tail_a1(top_m, a, t)
    k1 = int(math.floor(math.sqrt(1.5 * (cutoff + 2)))) + 1
    return K * _tail_a2(k1, a, t)


def _check_convergent(rs: RootSystemData, a: float, t: float, what: str) -> None:
    if t == 0 and a >= -1:
        raise DivergenceError(
            f"{what} is not absolutely convergent at t = 0 (terms grow like d^{a:g}); use t > 0")


def _run_series(rs: RootSystemData, coefficient: Callable[[WeightList], np.ndarray],
                a: float, K: float, t: float, tol: float | None,
                cutoff: float | None, what: str, max_weights: int = MAX_WEIGHTS):
    """Sum ``coefficient(weights) * exp(-t p)`` over a planned cutoff.

    ``coefficient`` may return shape (N,) or (N, P) for P points at once.
    """
    if t < 0:
        raise DomainError("t must be nonnegative")
    _check_convergent(rs, a, t, what)
    if cutoff is None:
        if tol is None or tol <= 0:
            raise ValueError("a positive tolerance or an explicit cutoff is required")
        cutoff, _ = _plan_cutoff(rs, a, K, t, tol, max_weights)
    tail = _tail_at_cutoff(rs, a, K, t, cutoff) if K else 0.0
    if tol is not None and not tail <= tol:
        raise ResourceError(f"tail bound {tail:g} exceeds the tolerance {tol:g} at cutoff {cutoff:g}")
    weights = dominant_weights(rs, cutoff, max_weights)
    coeffs = np.asarray(coefficient(weights))
    damp = np.exp(-t * weights.casimirs)
    terms = coeffs * (damp if coeffs.ndim == 1 else damp[:, None])
    value = terms.sum(axis=0)
    if np.max(np.abs(np.imag(value))) > max(1e-9, 10 * tail):
        raise ConsistencyError(f"{what} has a non-negligible imaginary part")
    return np.real(value), len(weights), float(tail), float(cutoff)


def series_with_cutoff(rs, coefficient, a, K, t, tol=None, cutoff=None, what="series") -> SeriesResult:
    value, n, tail, cut = _run_series(rs, coefficient, a, K, t, tol, cutoff, what)
    return SeriesResult(float(value), n, tail, cut)


# ----------------------------------------------------------------------
# per-point character bounds

def _point_bound(rs: RootSystemData, x: TorusPoint) -> tuple[float, float]:
    """(K, extra exponent) with ``|chi_lambda(x)| <= K d^extra``."""
    den = abs(weyl_denominator(rs, x.array))
    if den > 1e-6:
        return len(rs.weyl_group) / den, 0.0
    return 1.0, 1.0


def _check_point(rs: RootSystemData, x: TorusPoint) -> None:
    if x.tag != rs.tag:
        raise ValueError(f"torus point {x} does not belong to {rs.tag}")


# ----------------------------------------------------------------------
# Witten zeta

def witten_zeta_partial(rs: RootSystemData, s: float, tol: float | None = 1e-6,
                        cutoff: float | None = None) -> SeriesResult:
    """``sum_lambda d_lambda^-s`` with a one-sided certificate.

    ``value <= true value <= value + tail_bound``.  For A1 the value adds
    ``int_{M+1}^inf x^-s dx`` to the partial sum over ``d <= M`` and the
    bound is ``int_{M+1/2}^{M+1} x^-s dx`` (convexity of ``x^-s``); for A2
    the value is the plain partial sum.
    """
    if rs.rank == 1:
        if s < 2:
            raise DivergenceError("use s >= 2 for A1")
        if cutoff is None:
            M = 1
            while _a1_zeta_gap(M, s) > tol:
                M = max(M + 1, int(M * 1.5))
            # shrink back to the smallest sufficient M
            lo = max(1, int(M / 1.5) - 1)
            while lo < M and _a1_zeta_gap(lo, s) > tol:
                lo += 1
            M = lo
        else:
            M = int(math.floor(math.sqrt(2 * cutoff + 1) + 1e-9))
        m = np.arange(1, M + 1, dtype=float)
        partial = math.fsum((m ** -s)[::-1])
        value = partial + (M + 1) ** (1 - s) / (s - 1)
        return SeriesResult(value, M, _a1_zeta_gap(M, s), (M * M - 1) / 2)
    if s < 1.2:
        raise DivergenceError("use s >= 1.2 for A2")
    return series_with_cutoff(rs, lambda w: w.dimensions ** -s, -s, 1.0, 0.0, tol, cutoff,
                              "Witten zeta")


def _a1_zeta_gap(M: int, s: float) -> float:
    return ((M + 0.5) ** (1 - s) - (M + 1) ** (1 - s)) / (s - 1)


# ----------------------------------------------------------------------
# moduli-space volumes

def marked_point_data(rs: RootSystemData, c: TorusPoint) -> dict:
    """``|det(I - Ad c)|^(1/2)`` from root data, and genericity of ``c``."""
    phases = rs.roots.astype(float) @ c.array
    factors = np.abs(1 - np.exp(1j * phases))
    vanishing = factors < 1e-12
    # zero exactly when some root vanishes, i.e. the centralizer exceeds the torus
    j = 0.0 if vanishing.any() else float(np.prod(np.sqrt(factors)))
    return {"j": j, "generic": not vanishing.any(), "central": bool(vanishing.all())}


def moduli_volume_series(rs: RootSystemData, genus: int, points: Sequence[TorusPoint],
                         t: float = 0.0, tol: float = 1e-8, cutoff: float | None = None) -> SeriesResult:
    """``sum_lambda prod_j chi_lambda(c_j) / d^(2g+n-2) exp(-t p)``.

    ``details`` carries the geometric prefactor
    ``|Z(G)| |G|^(2g+n-2) |j(c)| / ((2 pi)^(2 N_c) prod |Z_cj|)`` and the
    resulting volume, or ``None`` for both when a marked point is not
    generic (its centralizer is then larger than the torus).
    """
    for c in points:
        _check_point(rs, c)
    n = len(points)
    exponent = 2 * genus + n - 2
    if genus < 0:
        raise ValueError("genus must be >= 0")
    if t == 0 and exponent < 2:
        raise DivergenceError(f"2g + n - 2 = {exponent} < 2 diverges at t = 0")
    K, a = 1.0, -float(exponent)
    for c in points:
        k, extra = _point_bound(rs, c)
        K, a = K * k, a + extra
    angles = np.array([c.array for c in points]) if points else np.zeros((0, rs.rank))

    def coefficient(w: WeightList) -> np.ndarray:
        prod = np.ones(len(w), dtype=complex)
        if n:
            prod = np.prod(character_matrix(rs, w, angles), axis=1)
        return prod / w.dimensions ** exponent

    data = [marked_point_data(rs, c) for c in points]
    generic = all(d["generic"] for d in data)
    if not generic:
        warnings.warn("a marked point is not generic; the volume prefactor is not reported",
                      SingularityWarning, stacklevel=2)
    value, used, tail, cut = _run_series(rs, coefficient, a, K, t, tol, cutoff, "volume series")
    if generic:
        j = math.prod(d["j"] for d in data)
        n_c = (genus - 1) * rs.group_dimension + n * len(rs.positive_roots)
        prefactor = (rs.center_order * rs.group_volume ** exponent * j
                     / ((2 * math.pi) ** (2 * n_c) * rs.torus_volume ** n))
        volume = prefactor * float(value)
    else:
        prefactor = volume = n_c = None
    details = {"prefactor": prefactor, "volume": volume, "complex_dimension": n_c,
               "j": [d["j"] for d in data]}
    return SeriesResult(float(value), used, tail, cut, details=details)


# ----------------------------------------------------------------------
# push-forward densities (w.r.t. normalized Haar measure)

def commutator_density_values(rs: RootSystemData, angles, genus: int, t: float,
                              tol: float = 1e-10, cutoff: float | None = None):
    """Vectorised :func:`commutator_density` at many points (angles shape (P, r))."""
    angles = np.atleast_2d(np.asarray(angles, dtype=float))
    if genus < 1:
        raise ValueError("genus must be >= 1")
    den = np.abs(weyl_denominator(rs, angles))
    den = np.atleast_1d(den)
    if np.all(den > 1e-6):
        K, a = len(rs.weyl_group) / float(den.min()), -(2.0 * genus - 1)
    else:
        K, a = 1.0, 2.0 - 2 * genus

    def coefficient(w):
        chi = character_matrix(rs, w, -angles)
        return chi / (w.dimensions ** (2 * genus - 1))[:, None]

    return _run_series(rs, coefficient, a, K, t, tol, cutoff, "commutator density")


def commutator_density(rs: RootSystemData, x: TorusPoint, genus: int, t: float,
                       tol: float = 1e-8, cutoff: float | None = None) -> SeriesResult:
    """Density of the product-of-commutators push-forward at ``x``.

    ``F(x) = sum_lambda chi_lambda(x^-1) / d^(2g-1) exp(-t p)`` relative to
    normalized Haar measure; the Riemannian density is ``|G|^(2g-1) F``.
    """
    _check_point(rs, x)
    value, used, tail, cut = commutator_density_values(rs, x.array[None, :], genus, t, tol, cutoff)
    details = {"riemannian_prefactor": rs.group_volume ** (2 * genus - 1)}
    return SeriesResult(float(value[0]), used, tail, cut, details=details)


def subgroup_pushforward_density(rs: RootSystemData, slots: Sequence[str], x: TorusPoint,
                                 t: float, tol: float = 1e-8,
                                 cutoff: float | None = None) -> SeriesResult:
    """Density of ``(x_j, u_j) -> prod x_j u_j x_j^-1`` with ``u_j`` in the slot subgroups.

    ``F(x) = sum_lambda chi_lambda(x^-1) prod_j s_j(lambda) / d^(n-1) exp(-t p)``
    where ``s_j`` is the normalized integral of ``chi_lambda`` over slot ``j``.

    Each slot is ``"torus"``, ``"full-group"`` or ``"trivial"``; the
    normalized integral of ``chi_lambda`` over it is the zero-weight
    multiplicity, ``delta_{lambda,0}`` or ``d_lambda`` respectively.
    """
    _check_point(rs, x)
    n = len(slots)
    if n < 1:
        raise ValueError("at least one slot is required")
    bad = [s for s in slots if s not in SLOT_KINDS]
    if bad:
        raise ValueError(f"unknown slot kinds {bad}; use {SLOT_KINDS}")
    if "full-group" in slots:
        # only the trivial representation survives
        return SeriesResult(1.0, 1, 0.0, 0.0)
    K, a = _point_bound(rs, x)
    a -= n - 1
    for s in slots:
        if s == "trivial":
            a += 1
        elif rs.rank == 2:
            a += 1 / 3      # zero-weight multiplicity <= min(a, b) + 1 <= d^(1/3)

    def coefficient(w):
        prod = np.ones(len(w))
        for s in slots:
            if s == "trivial":
                prod = prod * w.dimensions
            else:
                prod = prod * np.array([zero_weight_multiplicity(rs, lam) for lam in w.coords])
        chi = character_matrix(rs, w, -x.array[None, :])[:, 0]
        return prod * chi / w.dimensions ** (n - 1)

    return series_with_cutoff(rs, coefficient, a, K, t, tol, cutoff, "subgroup push-forward density")


# ----------------------------------------------------------------------
# n-fold commutator on SU(2)

def _a1_truncation(t: float, rel: float = 1e-14) -> WeightList:
    rs_cut = -math.log(rel) / t
    from .roots import root_system
    return dominant_weights(root_system("A1"), rs_cut)


def _ncomm_at(weights: WeightList, t: float, n: int, theta_eval: np.ndarray,
              points: int) -> np.ndarray:
    nodes, w = np.polynomial.legendre.leggauss(points)
    theta = (nodes + 1) * np.pi / 2
    haar = w * (np.pi / 2) * (2 / np.pi) * np.sin(theta) ** 2
    m = weights.coords[:, 0][:, None] + 1.0
    chi_nodes = np.sin(m * theta) / np.sin(theta)
    damp = np.exp(-t * weights.casimirs)
    d = weights.dimensions
    q = np.ones_like(theta)
    for _ in range(2, n):
        integrals = (chi_nodes ** 2 * haar) @ q
        q = (damp * integrals / d) @ chi_nodes
    integrals = (chi_nodes ** 2 * haar) @ q
    s = np.sin(theta_eval)
    safe = np.abs(s) > 1e-8
    chi_eval = np.where(safe, np.sin(m * theta_eval) / np.where(safe, s, 1.0),
                        m * np.sign(np.cos(theta_eval)) ** (m - 1))
    return (damp * integrals / d) @ chi_eval


def lie_n_commutator_density(rs: RootSystemData, n: int, x: TorusPoint, t: float,
                             points: int = 256, tol: float = 1e-6) -> float:
    """``Q_n(x)`` for the map ``[x_1, [x_2, ..., x_n]]`` on SU(2).

    Applies ``Q_n(w) = sum_lambda e^{-tp} chi(w^-1)/d int |chi|^2 Q_{n-1}``
    with ``Q_1 = 1``, integrating class functions against the Weyl measure
    ``(2/pi) sin^2(theta) d theta`` by Gauss-Legendre quadrature.  The
    result is recomputed with twice the nodes and must agree to ``tol``.
    """
    if rs.tag != "A1":
        raise DomainError("the n-commutator density is implemented for A1 only")
    _check_point(rs, x)
    if n not in (2, 3):
        raise ValueError("n must be 2 or 3")
    if t <= 0:
        raise DomainError("t must be positive")
    if points < 200:
        raise ValueError("at least 200 quadrature points are required")
    weights = _a1_truncation(t)
    theta = np.array([x.angles[0]])
    coarse = float(_ncomm_at(weights, t, n, theta, points)[0])
    fine = float(_ncomm_at(weights, t, n, theta, 2 * points)[0])
    if abs(coarse - fine) > tol:
        raise ConsistencyError(
            f"quadrature not resolved: {coarse!r} vs {fine!r} with {points} and {2 * points} nodes")
    return fine


# ----------------------------------------------------------------------
# vanishing of the heat kernel away from the identity

@dataclass(frozen=True)
class VanishingReport:
    ts: tuple[float, ...]
    results: tuple[SeriesResult, ...]
    vanishing: bool

    @property
    def values(self) -> list[float]:
        return [r.value for r in self.results]


def vanishing_limit(rs: RootSystemData, c: TorusPoint, ts: Sequence[float],
                    tol: float = 1e-10) -> VanishingReport:
    """``H(t, c, e) = sum_lambda d chi(c) e^{-tp}`` along decreasing ``t``.

    ``vanishing`` is set when the magnitudes strictly decrease; at
    ``c = e`` they grow instead (the kernel concentrates).
    """
    _check_point(rs, c)
    ts = tuple(float(t) for t in ts)
    if any(t <= 0 for t in ts):
        raise DomainError("t must be positive")
    K, a = _point_bound(rs, c)
    a += 1
    results = []
    for t in ts:
        def coefficient(w):
            return w.dimensions * character_matrix(rs, w, c.array[None, :])[:, 0]
        results.append(series_with_cutoff(rs, coefficient, a, K, t, tol, None, "heat kernel"))
    mags = [abs(r.value) for r in results]
    decreasing = all(b < a_ for a_, b in zip(mags, mags[1:]))
    return VanishingReport(ts, tuple(results), decreasing and not c.is_identity())
