"""Heat kernels on finite groups.

``H(t, x, y) = (1/|G|) sum_lambda d_lambda chi_lambda(x y^-1) exp(-t p(lambda))``
for a spectral weight ``p`` on the irreps.  At ``t = 0`` column
orthogonality collapses the sum to the delta function, which is why the
``t -> 0`` limit of a summed kernel counts solutions exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import counting
from .characters import CharacterTable
from .errors import ConsistencyError, DomainError
from .groups import ConjugacyClass, FiniteGroup, Subgroup

__all__ = [
    "SpectralWeight",
    "HeatKernelValue",
    "SurfaceFamily",
    "NCommutatorFamily",
    "SubgroupFamily",
    "HeatLimit",
    "cayley_weight",
    "default_generators",
    "heat_kernel",
    "heat_kernel_classes",
    "heat_count_limit",
]

IMAG_TOL = 1e-9


@dataclass(frozen=True)
class SpectralWeight:
    values: np.ndarray
    provenance: str = "user"

    def __post_init__(self):
        if np.any(np.asarray(self.values) < 0):
            raise ValueError("spectral weights must be nonnegative")


@dataclass(frozen=True)
class HeatKernelValue:
    t: float
    values: np.ndarray   # one real value per class of x y^-1


def default_generators(group: FiniteGroup) -> list[int]:
    """Canonical symmetric generating set.

    All transpositions for ``symmetric:n``; otherwise the stored
    generators together with their inverses.
    """
    desc = group.description or ""
    if desc.startswith("symmetric:") and group.order > 1:
        moved = np.count_nonzero(group.perms != np.arange(group.degree), axis=1)
        return [int(i) for i in np.flatnonzero(moved == 2)]
    gens = set(group.generators)
    gens |= {group.inverse(s) for s in gens}
    return sorted(gens)


def cayley_weight(table: CharacterTable, generators: Sequence[int]) -> SpectralWeight:
    """Spectrum of the Cayley-graph Laplacian ``|S| - A`` on each isotypic block.

    ``p(lambda) = |S| (1 - Re sum_{s in S} chi(s) / (|S| d))``.
    """
    grp = table.group
    gens = sorted(set(int(s) for s in generators))
    if not gens or 0 in gens:
        raise DomainError("generating set must be non-empty and exclude the identity")
    if any(grp.inverse(s) not in gens for s in gens):
        raise DomainError("generating set must be closed under inverses")
    if grp.subgroup(gens).order != grp.order:
        raise DomainError("the given set does not generate the group")
    counts = np.bincount(grp.class_of[gens], minlength=len(grp.classes))
    sums = (table.values @ counts).real
    p = len(gens) - sums / table.dimensions
    p[table.trivial] = 0.0
    p = np.where(np.abs(p) < 1e-12, 0.0, p)
    nontrivial = np.delete(p, table.trivial)
    if np.any(nontrivial <= 1e-12):
        raise ConsistencyError("a nontrivial irrep has zero Laplacian eigenvalue")
    return SpectralWeight(p, f"cayley-laplacian:{gens}")


def heat_kernel_classes(table: CharacterTable, weight: SpectralWeight, t: float) -> HeatKernelValue:
    """Kernel value for every class of ``x y^-1``."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    grp = table.group
    if t == 0:
        values = np.zeros(len(grp.classes))
        values[0] = 1.0
        return HeatKernelValue(0.0, values)
    damp = table.dimensions * np.exp(-t * np.asarray(weight.values))
    raw = damp @ table.values / grp.order
    if np.max(np.abs(raw.imag)) > IMAG_TOL:
        raise ConsistencyError("heat kernel has a non-negligible imaginary part")
    return HeatKernelValue(float(t), raw.real.copy())


def heat_kernel(table: CharacterTable, weight: SpectralWeight, t: float, x: int, y: int) -> float:
    grp = table.group
    if t == 0:
        # exact delta, certified by rounding the orthogonality sum
        raw = table.dimensions @ table.values[:, grp.class_of[grp.multiply(x, grp.inverse(y))]]
        delta = round(float(raw.real) / grp.order)
        return float(delta)
    cls = grp.class_of[grp.multiply(x, grp.inverse(y))]
    return float(heat_kernel_classes(table, weight, t).values[cls])


# ----------------------------------------------------------------------
# summed kernels I(t)

@dataclass(frozen=True)
class SurfaceFamily:
    genus: int
    classes: tuple[ConjugacyClass, ...] = ()
    target: int = 0

    def terms(self, table):
        return counting.surface_terms(table, self.genus, self.classes, self.target)


@dataclass(frozen=True)
class NCommutatorFamily:
    n: int
    target: int = 0

    def terms(self, table):
        return counting.n_commutator_terms(table, self.n, self.target)


@dataclass(frozen=True)
class SubgroupFamily:
    subgroups: tuple[Subgroup, ...]

    def terms(self, table):
        return counting.subgroup_terms(table, self.subgroups)


@dataclass(frozen=True)
class HeatLimit:
    ts: tuple[float, ...]
    values: tuple[float, ...]
    exact: int
    spread: float        # C = sum over nontrivial irreps of |term|
    gap: float           # smallest nontrivial p
    top: float           # largest p
    trivial_term: float

    def approach_bound(self, t: float) -> float:
        """Bound on ``|I(t) - exact|``: ``C (1 - exp(-t p_max))``."""
        return self.spread * -np.expm1(-t * self.top)

    def decay_bound(self, t: float) -> float:
        """Bound on ``|I(t) - trivial term|``: ``C exp(-t gap)``."""
        return self.spread * np.exp(-t * self.gap)


def heat_count_limit(table: CharacterTable, weight: SpectralWeight, family,
                     ts: Iterable[float]) -> HeatLimit:
    """Evaluate ``I(t) = sum_h H(t, f(h), target)`` along a sequence of ``t``.

    ``I(t)`` is the character sum of ``family`` with every irrep damped
    by ``exp(-t p(lambda))``; ``I(0)`` is the exact count.
    """
    ts = tuple(float(t) for t in ts)
    if any(t < 0 for t in ts):
        raise DomainError("t must be nonnegative")
    terms = np.asarray(family.terms(table), dtype=complex)
    p = np.asarray(weight.values, dtype=float)
    values = []
    for t in ts:
        raw = np.sum(terms * np.exp(-t * p))
        if abs(raw.imag) > 1e-6:
            raise ConsistencyError("I(t) has a non-negligible imaginary part")
        values.append(float(raw.real))
    exact = counting.CountResult.from_raw(terms.sum()).count
    mask = np.ones(len(p), dtype=bool)
    mask[table.trivial] = False
    return HeatLimit(ts, tuple(values), exact,
                     spread=float(np.abs(terms[mask]).sum()),
                     gap=float(p[mask].min()) if mask.any() else 0.0,
                     top=float(p.max()),
                     trivial_term=float(terms[table.trivial].real))
