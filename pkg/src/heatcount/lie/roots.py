"""Root data, dominant weights and characters for A1 = SU(2) and A2 = SU(3).

Weights are written in the fundamental-weight basis.  The inner product
is the basic one (roots have squared length 2), so the Gram matrix of the
fundamental weights is the inverse Cartan matrix.

A torus point ``exp(C)`` is given by its angles ``t_i = <omega_i, C>``;
the phase of a weight ``mu`` there is ``sum_i mu_i t_i``.  For SU(2)
``t_1 = theta`` is the eigenvalue angle of ``diag(e^{i theta}, e^{-i theta})``;
for SU(3) the eigenvalue angles are ``(t1, t2 - t1, -t2)``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import ConsistencyError, ParseError, ResourceError, SingularPointError

__all__ = [
    "MAX_WEIGHTS",
    "RootSystemData",
    "DominantWeight",
    "TorusPoint",
    "WeightList",
    "root_system",
    "casimir",
    "dominant_weights",
    "weyl_dimension",
    "weyl_denominator",
    "weyl_character",
    "weight_multiplicities",
    "zero_weight_multiplicity",
    "character_from_weights",
    "character_matrix",
    "parse_torus_point",
]

MAX_WEIGHTS = 10**7
REGULAR_TOL = 1e-12
IDENTITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class RootSystemData:
    tag: str
    rank: int
    positive_roots: np.ndarray       # rows, fundamental-weight coordinates
    simple_roots: np.ndarray
    gram: np.ndarray                 # <omega_i, omega_j>
    weyl_group: tuple[tuple[np.ndarray, int], ...]   # (matrix on weight coords, det)
    # Riemannian data under the same normalization, reported with volumes
    group_dimension: int
    center_order: int
    group_volume: float
    torus_volume: float

    @property
    def rho(self) -> np.ndarray:
        return self.positive_roots.sum(axis=0) / 2

    @property
    def roots(self) -> np.ndarray:
        return np.vstack([self.positive_roots, -self.positive_roots])

    def inner(self, a, b) -> np.ndarray:
        return np.einsum("...i,ij,...j->...", np.asarray(a, float), self.gram, np.asarray(b, float))

    def __repr__(self) -> str:
        return f"<RootSystemData {self.tag}>"


def _weyl_group(simple: np.ndarray) -> tuple[tuple[np.ndarray, int], ...]:
    r = simple.shape[0]
    reflections = []
    for i in range(r):
        s = np.eye(r, dtype=np.int64)
        s[:, i] -= simple[i]          # s_i(lam) = lam - lam_i alpha_i
        reflections.append(s)
    elements = {np.eye(r, dtype=np.int64).tobytes(): (np.eye(r, dtype=np.int64), 1)}
    frontier = list(elements.values())
    while frontier:
        new = []
        for m, sign in frontier:
            for s in reflections:
                w = s @ m
                key = w.tobytes()
                if key not in elements:
                    elements[key] = (w, -sign)
                    new.append((w, -sign))
        frontier = new
    return tuple(elements.values())


@lru_cache(maxsize=None)
def root_system(tag: str) -> RootSystemData:
    """Root data for ``"A1"`` or ``"A2"``."""
    if tag == "A1":
        simple = np.array([[2]])
        positive = simple
        gram = np.array([[0.5]])
        volume = 4 * math.sqrt(2) * math.pi ** 2
        torus = 2 * math.pi * math.sqrt(2)
        dim, center = 3, 2
    elif tag == "A2":
        simple = np.array([[2, -1], [-1, 2]])
        positive = np.array([[2, -1], [-1, 2], [1, 1]])
        gram = np.array([[2.0, 1.0], [1.0, 2.0]]) / 3
        volume = math.sqrt(3) * (2 * math.pi) ** 5 / 2
        torus = (2 * math.pi) ** 2 * math.sqrt(3)
        dim, center = 8, 3
    else:
        raise ParseError(f"unsupported root system {tag!r}; use A1 or A2")
    return RootSystemData(tag, simple.shape[0], positive, simple, gram, _weyl_group(simple),
                          dim, center, volume, torus)


def casimir(rs: RootSystemData, lam) -> np.ndarray:
    """``|lam + rho|^2 - |rho|^2``."""
    lam = np.asarray(lam, dtype=float)
    return rs.inner(lam + rs.rho, lam + rs.rho) - rs.inner(rs.rho, rs.rho)


def _dimension_raw(rs: RootSystemData, lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    shifted = lam + rs.rho
    num = np.ones(lam.shape[:-1])
    den = 1.0
    for alpha in rs.positive_roots:
        num = num * rs.inner(shifted, alpha)
        den *= float(rs.inner(rs.rho, alpha))
    return num / den


def weyl_dimension(rs: RootSystemData, lam) -> int:
    """``prod_{alpha > 0} <lam + rho, alpha> / <rho, alpha>``."""
    raw = float(_dimension_raw(rs, lam))
    d = round(raw)
    if abs(raw - d) >= 1e-9 or d < 1:
        raise ConsistencyError(f"Weyl dimension {raw!r} is not a positive integer")
    return int(d)


@dataclass(frozen=True)
class DominantWeight:
    coords: tuple[int, ...]
    dimension: int
    casimir: float


@dataclass(frozen=True)
class WeightList:
    """Dominant weights in Casimir order, as parallel arrays."""
    coords: np.ndarray      # (N, rank) int
    dimensions: np.ndarray  # (N,) float, exact integers
    casimirs: np.ndarray    # (N,)

    def __len__(self) -> int:
        return len(self.casimirs)

    def __iter__(self):
        for c, d, p in zip(self.coords, self.dimensions, self.casimirs):
            yield DominantWeight(tuple(int(v) for v in c), int(d), float(p))


def dominant_weights(rs: RootSystemData, casimir_cutoff: float,
                     max_weights: int = MAX_WEIGHTS) -> WeightList:
    """All dominant weights with Casimir value at most ``casimir_cutoff``."""
    if casimir_cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    slack = 1e-9 * max(1.0, casimir_cutoff)
    if rs.rank == 1:
        # p(n) = (n^2 + 2n) / 2
        top = int(math.floor(-1 + math.sqrt(1 + 2 * casimir_cutoff + 2 * slack)))
        if top + 1 > max_weights:
            raise ResourceError(f"more than {max_weights} weights below the cutoff")
        coords = np.arange(top + 1, dtype=np.int64)[:, None]
    else:
        # p >= (|lam|^2 in the basis) >= (a^2 + b^2) / 3 bounds each coordinate
        bound = int(math.floor(math.sqrt(3 * (casimir_cutoff + slack)))) + 1
        estimate = 0.5 * math.pi * bound * bound
        if estimate > 4 * max_weights:
            raise ResourceError(f"more than {max_weights} weights below the cutoff")
        a, b = np.meshgrid(np.arange(bound + 1), np.arange(bound + 1), indexing="ij")
        coords = np.stack([a.ravel(), b.ravel()], axis=1)
        p = casimir(rs, coords)
        coords = coords[p <= casimir_cutoff + slack]
        if len(coords) > max_weights:
            raise ResourceError(f"more than {max_weights} weights below the cutoff")
    p = casimir(rs, coords)
    keep = p <= casimir_cutoff + slack
    coords, p = coords[keep], p[keep]
    order = np.lexsort(tuple(coords[:, i] for i in reversed(range(rs.rank))) + (np.round(p, 9),))
    coords, p = coords[order], p[order]
    dims = np.rint(_dimension_raw(rs, coords))
    return WeightList(coords, dims, p)


# ----------------------------------------------------------------------
# torus points and characters

@dataclass(frozen=True)
class TorusPoint:
    tag: str
    angles: tuple[float, ...]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.angles, dtype=float)

    def inverse(self) -> "TorusPoint":
        return TorusPoint(self.tag, tuple(-a for a in self.angles))

    def is_identity(self, tol: float = IDENTITY_TOL) -> bool:
        wrapped = np.angle(np.exp(1j * self.array))
        return bool(np.all(np.abs(wrapped) < tol))

    def is_regular(self) -> bool:
        rs = root_system(self.tag)
        return bool(abs(weyl_denominator(rs, self.array)) > REGULAR_TOL)

    def __str__(self) -> str:
        if self.tag == "A1":
            return f"A1:theta={self.angles[0]!r}"
        return f"A2:t1={self.angles[0]!r},t2={self.angles[1]!r}"


_POINT_RE = {
    "A1": re.compile(r"^A1:theta=([^,]+)$"),
    "A2": re.compile(r"^A2:t1=([^,]+),t2=([^,]+)$"),
}


def parse_torus_point(text: str) -> TorusPoint:
    """``A1:theta=<radians>`` or ``A2:t1=<r>,t2=<r>``."""
    text = text.strip().replace(" ", "")
    for tag, pattern in _POINT_RE.items():
        m = pattern.match(text)
        if m:
            try:
                return TorusPoint(tag, tuple(float(v) for v in m.groups()))
            except ValueError:
                break
    raise ParseError(f"malformed torus point {text!r}")


def _alternating_sum(rs: RootSystemData, weight, angles: np.ndarray) -> np.ndarray:
    """``sum_w det(w) exp(i <w(weight), C>)``; weight (..., r), angles (P, r)."""
    weight = np.asarray(weight, dtype=float)
    total = 0
    for w, sign in rs.weyl_group:
        image = weight @ w.T
        total = total + sign * np.exp(1j * (image @ angles.T))
    return total


def weyl_denominator(rs: RootSystemData, angles) -> complex | np.ndarray:
    angles = np.atleast_2d(np.asarray(angles, dtype=float))
    den = _alternating_sum(rs, rs.rho, angles)
    return den[0] if den.shape == (1,) else den


def weyl_character(rs: RootSystemData, lam, x: TorusPoint) -> complex:
    """Weyl character formula at a regular torus point (identity via the limit)."""
    if x.tag != rs.tag:
        raise ValueError(f"torus point {x} does not belong to {rs.tag}")
    if x.is_identity():
        return complex(weyl_dimension(rs, lam))
    angles = x.array[None, :]
    den = _alternating_sum(rs, rs.rho, angles)[0]
    if abs(den) <= REGULAR_TOL:
        raise SingularPointError(f"{x} is singular; the Weyl formula is undefined there")
    num = _alternating_sum(rs, np.asarray(lam, float) + rs.rho, angles)[0]
    return complex(num / den)


@lru_cache(maxsize=4096)
def _multiplicities_cached(tag: str, lam: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    if tag == "A1":
        (n,) = lam
        return tuple(((n - 2 * k,), 1) for k in range(n + 1))
    # SU(3): semistandard tableaux of shape (a+b, b) in letters 1, 2, 3
    a, b = lam
    counts: dict[tuple[int, int], int] = {}
    row1 = a + b
    for p in range(row1 + 1):
        for q in range(row1 - p + 1):
            r = row1 - p - q
            if p + q < b:
                continue
            for s in range(min(p, b) + 1):
                u = b - s
                c1, c2, c3 = p, q + s, r + u
                key = (c1 - c2, c2 - c3)
                counts[key] = counts.get(key, 0) + 1
    return tuple(sorted(counts.items()))


def weight_multiplicities(rs: RootSystemData, lam) -> dict[tuple[int, ...], int]:
    """Weight system of the irrep ``lam``: weight (fundamental coords) -> multiplicity."""
    lam = tuple(int(v) for v in lam)
    if len(lam) != rs.rank or min(lam) < 0:
        raise ValueError(f"{lam} is not a dominant weight of {rs.tag}")
    return dict(_multiplicities_cached(rs.tag, lam))


def zero_weight_multiplicity(rs: RootSystemData, lam) -> int:
    """Dimension of the zero-weight space.

    For SU(3) this counts tableaux of content ``(k, k, k)`` directly: with
    ``p = k`` ones in the first row, the tableau is fixed by the number
    ``s`` of twos in the second row, and the column conditions leave
    ``max(0, b - k) <= s <= min(k, b, 2k - b)``.
    """
    lam = tuple(int(v) for v in lam)
    if rs.rank == 1:
        return 1 if lam[0] % 2 == 0 else 0
    a, b = lam
    if (a + 2 * b) % 3:
        return 0
    k = (a + 2 * b) // 3
    lo, hi = max(0, b - k), min(k, b, 2 * k - b)
    return max(0, hi - lo + 1)


def character_from_weights(rs: RootSystemData, lam, angles) -> np.ndarray:
    """``sum_mu mult(mu) exp(i <mu, C>)``; valid at every torus point."""
    angles = np.atleast_2d(np.asarray(angles, dtype=float))
    mults = weight_multiplicities(rs, lam)
    weights = np.array(list(mults), dtype=float)
    m = np.array(list(mults.values()), dtype=float)
    return m @ np.exp(1j * (weights @ angles.T))


def character_matrix(rs: RootSystemData, weights: WeightList, angles) -> np.ndarray:
    """Characters of every listed weight at every point, shape (N, P).

    Uses the Weyl formula at regular points, and the weight system at
    singular ones.
    """
    angles = np.atleast_2d(np.asarray(angles, dtype=float))
    coords = weights.coords.astype(float)
    if rs.rank == 1:
        theta = angles[:, 0]
        m = coords[:, 0][:, None] + 1
        s = np.sin(theta)
        regular = np.abs(s) > 1e-8
        out = np.empty((len(coords), len(theta)))
        out[:, regular] = np.sin(m * theta[regular]) / s[regular]
        # sin(m theta)/sin(theta) -> m cos(theta)^(m-1) at theta = 0, pi
        sign = np.sign(np.cos(theta[~regular]))
        out[:, ~regular] = m * sign ** (m - 1)
        return out.astype(complex)
    den = _alternating_sum(rs, rs.rho, angles)
    regular = np.abs(den) > 1e-6
    out = np.empty((len(coords), angles.shape[0]), dtype=complex)
    if regular.any():
        num = _alternating_sum(rs, coords + rs.rho, angles[regular])
        out[:, regular] = num / den[regular]
    for j in np.flatnonzero(~regular):
        out[:, j] = [character_from_weights(rs, lam, angles[j])[0] for lam in weights.coords]
    return out
