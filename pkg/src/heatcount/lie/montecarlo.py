"""Monte-Carlo check of SU(2) push-forward densities.

Haar-random elements of SU(2) are unit quaternions, obtained by
normalizing standard Gaussian 4-vectors.  A unit quaternion ``(a, v)`` is
conjugate to ``diag(e^{i theta}, e^{-i theta})`` with ``cos theta = a``.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .roots import root_system
from .series import commutator_density_values

__all__ = [
    "MAPS",
    "Histogram",
    "haar_su2",
    "quaternion_multiply",
    "rotation_angle",
    "mc_commutator_histogram",
    "expected_bin_probabilities",
    "total_variation",
]

MAPS = ("commutator", "identity")
MIN_SAMPLES = 10_000
SHARD = 1 << 16


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    samples: int
    seed: int
    map: str

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.samples

    def to_json(self) -> dict:
        return {"map": self.map, "seed": self.seed, "samples": self.samples,
                "edges": self.edges.tolist(), "counts": self.counts.tolist()}


def haar_su2(rng: np.random.Generator, n: int) -> np.ndarray:
    q = rng.standard_normal((n, 4))
    return q / np.linalg.norm(q, axis=1, keepdims=True)


def quaternion_multiply(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    a1, b1, c1, d1 = p.T
    a2, b2, c2, d2 = q.T
    return np.stack([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ], axis=1)


def _conj(q: np.ndarray) -> np.ndarray:
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def rotation_angle(q: np.ndarray) -> np.ndarray:
    """Class parameter ``theta in [0, pi]`` of unit quaternions."""
    return np.arccos(np.clip(q[:, 0], -1.0, 1.0))


def _shard_angles(seed_seq: np.random.SeedSequence, n: int, kind: str) -> np.ndarray:
    rng = np.random.default_rng(seed_seq)
    x = haar_su2(rng, n)
    if kind == "identity":
        return rotation_angle(x)
    y = haar_su2(rng, n)
    c = quaternion_multiply(quaternion_multiply(x, y), quaternion_multiply(_conj(x), _conj(y)))
    return rotation_angle(c)


def mc_commutator_histogram(seed: int, samples: int, bins: int = 50, map: str = "commutator",
                            threads: int | None = None) -> Histogram:
    """Histogram of ``theta`` for ``f(x, y)`` with ``x, y`` Haar on SU(2).

    Samples are split into fixed-size shards, each with its own child of
    ``SeedSequence(seed)``, so the result depends on ``seed`` only and not
    on ``threads``.
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"at least {MIN_SAMPLES} samples are required")
    if map not in MAPS:
        raise ValueError(f"unknown map {map!r}; use one of {MAPS}")
    if bins < 1:
        raise ValueError("bins must be positive")
    sizes = [SHARD] * (samples // SHARD)
    if samples % SHARD:
        sizes.append(samples % SHARD)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    edges = np.linspace(0.0, np.pi, bins + 1)
    workers = threads or os.cpu_count() or 1

    def work(i: int) -> np.ndarray:
        theta = _shard_angles(children[i], sizes[i], map)
        return np.histogram(theta, bins=edges)[0]

    if workers == 1:
        parts = [work(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, range(len(sizes))))
    counts = np.sum(parts, axis=0).astype(np.int64)
    return Histogram(edges, counts, int(samples), int(seed), map)


def expected_bin_probabilities(edges: np.ndarray, map: str = "commutator", t: float = 0.005,
                               points: int = 16, tol: float = 1e-8) -> np.ndarray:
    """Bin masses of the push-forward law of ``theta``.

    The law is ``F(theta) (2/pi) sin^2(theta) d theta`` where ``F`` is the
    density relative to Haar measure: ``1`` for the identity map, the
    genus-one commutator series at ``t`` otherwise.
    """
    edges = np.asarray(edges, dtype=float)
    nodes, w = np.polynomial.legendre.leggauss(points)
    lo, hi = edges[:-1, None], edges[1:, None]
    theta = (lo + hi) / 2 + (hi - lo) / 2 * nodes
    weights = (hi - lo) / 2 * w * (2 / np.pi) * np.sin(theta) ** 2
    if map == "identity":
        density = np.ones_like(theta)
    elif map == "commutator":
        rs = root_system("A1")
        values, *_ = commutator_density_values(rs, theta.reshape(-1, 1), 1, t, tol)
        density = values.reshape(theta.shape)
    else:
        raise ValueError(f"unknown map {map!r}; use one of {MAPS}")
    return np.sum(density * weights, axis=1)


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.sum(np.abs(np.asarray(p) - np.asarray(q))))
