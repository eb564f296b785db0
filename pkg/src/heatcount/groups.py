"""Concrete finite groups realised as permutation groups.

Every group is stored as an array of permutations (one row per element,
row 0 the identity).  Groups up to ``DENSE_LIMIT`` elements also carry a
dense multiplication table; larger ones compute products on demand from
the permutation rows and memoise scalar products.

Products follow function composition: ``multiply(a, b)`` is the
permutation ``p -> a(b(p))``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError, ResourceError

__all__ = [
    "DEFAULT_MAX_ORDER",
    "DENSE_LIMIT",
    "ConjugacyClass",
    "FiniteGroup",
    "Subgroup",
    "build_group",
    "centralizer_order",
    "conjugacy_classes",
    "direct_product",
]

DEFAULT_MAX_ORDER = 10_000
DENSE_LIMIT = 4096


@dataclass(frozen=True)
class ConjugacyClass:
    index: int
    representative: int
    members: tuple[int, ...]
    centralizer_order: int

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Subgroup:
    parent: "FiniteGroup" = field(repr=False, compare=False)
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self._member_set

    @cached_property
    def _member_set(self) -> frozenset[int]:
        return frozenset(self.members)


class FiniteGroup:
    """A finite group given by permutation rows.

    Parameters
    ----------
    perms : array of shape (order, degree)
        Element ``i`` is the permutation ``perms[i]`` of ``range(degree)``.
        Row 0 must be the identity and rows must be distinct and closed
        under composition; :func:`from_generators` guarantees both.
    generators : sequence of int
        Element indices generating the group; used for orbit computations.
    description : str, optional
        Free-form provenance text (usually the group spec).
    """

    def __init__(self, perms: np.ndarray, generators: Sequence[int],
                 description: str | None = None):
        perms = np.ascontiguousarray(perms, dtype=np.int32)
        if perms.ndim != 2 or perms.shape[0] == 0:
            raise ValueError("perms must be a non-empty 2-d array")
        if not np.array_equal(perms[0], np.arange(perms.shape[1])):
            raise ValueError("row 0 must be the identity permutation")
        self._perms = perms
        self._perms.setflags(write=False)
        self.generators = tuple(int(g) for g in generators)
        self.description = description
        self._build_lookup()
        self._products: dict[tuple[int, int], int] = {}
        if self.order <= DENSE_LIMIT:
            self._table = self._dense_table()
        else:
            self._table = None

    # ------------------------------------------------------------------
    # construction helpers

    @classmethod
    def from_generators(cls, generators: Iterable[Sequence[int]], degree: int,
                        description: str | None = None,
                        max_order: int = DEFAULT_MAX_ORDER) -> "FiniteGroup":
        """Close a list of permutations (as image tuples) under composition."""
        gens = [tuple(int(v) for v in g) for g in generators]
        for g in gens:
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise ParseError(f"not a permutation of {degree} points: {g}")
        identity = tuple(range(degree))
        gens = [g for g in dict.fromkeys(gens) if g != identity]
        elements = [identity]
        index = {identity: 0}
        frontier = [identity]
        while frontier:
            new = []
            for x in frontier:
                for s in gens:
                    y = tuple(x[p] for p in s)
                    if y not in index:
                        index[y] = len(elements)
                        elements.append(y)
                        new.append(y)
                        if len(elements) > max_order:
                            raise ResourceError(
                                f"group order exceeds the cap of {max_order}")
            frontier = new
        perms = np.array(elements, dtype=np.int32).reshape(len(elements), degree)
        return cls(perms, [index[g] for g in gens], description)

    def _build_lookup(self) -> None:
        # a base: points whose images determine the element uniquely
        perms, n = self._perms, self.order
        base: list[int] = []
        distinct = 1
        for p in range(self.degree):
            if distinct == n:
                break
            trial = base + [p]
            count = len(np.unique(perms[:, trial], axis=0))
            if count > distinct:
                base, distinct = trial, count
        self._base = np.array(base, dtype=np.intp)
        radix = max(self.degree, 2)
        if len(base) * math.log2(radix) < 62:
            self._weights = radix ** np.arange(len(base), dtype=np.int64)
            keys = self._encode(perms)
            self._order_idx = np.argsort(keys, kind="stable")
            self._sorted_keys = keys[self._order_idx]
            self._row_index = None
        else:
            self._weights = None
            self._row_index = {row.tobytes(): i for i, row in enumerate(perms)}

    def _encode(self, rows: np.ndarray) -> np.ndarray:
        return rows[..., self._base].astype(np.int64) @ self._weights

    def index_of(self, rows: np.ndarray) -> np.ndarray:
        """Element indices of the given permutation rows (shape (..., degree))."""
        rows = np.asarray(rows, dtype=np.int32)
        if self._weights is None:
            flat = rows.reshape(-1, self.degree)
            out = np.array([self._row_index[r.tobytes()] for r in flat], dtype=np.intp)
            return out.reshape(rows.shape[:-1])
        if len(self._base) == 0:
            return np.zeros(rows.shape[:-1], dtype=np.intp)
        keys = self._encode(rows)
        pos = np.searchsorted(self._sorted_keys, keys)
        return self._order_idx[pos]

    def _dense_table(self) -> np.ndarray:
        perms, n = self._perms, self.order
        table = np.empty((n, n), dtype=np.int32)
        for a in range(n):
            table[a] = self.index_of(perms[a][perms])
        table.setflags(write=False)
        return table

    # ------------------------------------------------------------------
    # basic structure

    @property
    def order(self) -> int:
        return self._perms.shape[0]

    def __len__(self) -> int:
        return self.order

    @property
    def degree(self) -> int:
        return self._perms.shape[1]

    @property
    def perms(self) -> np.ndarray:
        return self._perms

    @property
    def table(self) -> np.ndarray | None:
        """Dense multiplication table, or None above ``DENSE_LIMIT``."""
        return self._table

    identity = 0

    def multiply(self, a: int, b: int) -> int:
        if self._table is not None:
            return int(self._table[a, b])
        key = (a, b)
        if key not in self._products:
            row = self._perms[a][self._perms[b]]
            self._products[key] = int(self.index_of(row))
        return self._products[key]

    def multiply_many(self, a, b) -> np.ndarray:
        """Vectorised product of two broadcastable index arrays."""
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.intp),
                                   np.asarray(b, dtype=np.intp))
        if self._table is not None:
            flat = self._table.reshape(-1)
            return np.take(flat, a * self.order + b).astype(np.intp)
        out = np.empty(a.shape, dtype=np.intp)
        fa, fb, fo = a.ravel(), b.ravel(), out.reshape(-1)
        step = 1 << 16
        for lo in range(0, fa.size, step):
            pa = self._perms[fa[lo:lo + step]]
            pb = self._perms[fb[lo:lo + step]]
            fo[lo:lo + step] = self.index_of(np.take_along_axis(pa, pb, axis=1))
        return out

    @cached_property
    def inverses(self) -> np.ndarray:
        inv = self.index_of(np.argsort(self._perms, axis=1))
        inv = np.asarray(inv, dtype=np.intp)
        inv.setflags(write=False)
        return inv

    def inverse(self, a: int) -> int:
        return int(self.inverses[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse(a), -k
        result = 0
        for _ in range(k):
            result = self.multiply(result, a)
        return result

    def commutator(self, a: int, b: int) -> int:
        ab = self.multiply(a, b)
        return self.multiply(ab, self.multiply(self.inverse(a), self.inverse(b)))

    @cached_property
    def is_abelian(self) -> bool:
        return all(self.multiply(s, t) == self.multiply(t, s)
                   for s in self.generators for t in self.generators)

    # ------------------------------------------------------------------
    # conjugacy

    @cached_property
    def _class_data(self) -> tuple[tuple[ConjugacyClass, ...], np.ndarray]:
        n = self.order
        everything = np.arange(n)
        maps = []
        for s in self.generators:
            left = self.multiply_many(s, everything)
            maps.append(self.multiply_many(left, self.inverse(s)))
        class_of = np.full(n, -1, dtype=np.intp)
        classes = []
        for start in range(n):
            if class_of[start] >= 0:
                continue
            k = len(classes)
            class_of[start] = k
            orbit = [start]
            stack = [start]
            while stack:
                x = stack.pop()
                for m in maps:
                    y = int(m[x])
                    if class_of[y] < 0:
                        class_of[y] = k
                        orbit.append(y)
                        stack.append(y)
            members = tuple(sorted(orbit))
            classes.append(ConjugacyClass(k, members[0], members, n // len(members)))
        class_of.setflags(write=False)
        return tuple(classes), class_of

    @property
    def classes(self) -> tuple[ConjugacyClass, ...]:
        return self._class_data[0]

    @property
    def class_of(self) -> np.ndarray:
        """Class index of every element."""
        return self._class_data[1]

    def class_containing(self, x: int) -> ConjugacyClass:
        return self.classes[int(self.class_of[x])]

    @cached_property
    def class_sizes(self) -> np.ndarray:
        return np.array([c.size for c in self.classes], dtype=np.int64)

    @cached_property
    def inverse_class(self) -> np.ndarray:
        """Index of the class containing the inverses of each class."""
        return np.array([self.class_of[self.inverses[c.representative]]
                         for c in self.classes], dtype=np.intp)

    @cached_property
    def square_class(self) -> np.ndarray:
        """Index of the class containing the squares of each class."""
        return np.array([self.class_of[self.multiply(c.representative, c.representative)]
                         for c in self.classes], dtype=np.intp)

    # ------------------------------------------------------------------
    # subgroups

    def subgroup(self, generators: Iterable[int]) -> Subgroup:
        gens = [int(g) for g in generators]
        for g in gens:
            if not 0 <= g < self.order:
                raise ValueError(f"element index {g} out of range")
        members = {0}
        frontier = [0]
        while frontier:
            new = []
            for x in frontier:
                for s in gens:
                    y = self.multiply(x, s)
                    if y not in members:
                        members.add(y)
                        new.append(y)
            frontier = new
        return Subgroup(self, tuple(sorted(members)))

    def cyclic_subgroups(self) -> list[Subgroup]:
        """All distinct cyclic subgroups, ordered by (order, members)."""
        seen = {}
        for x in range(self.order):
            h = self.subgroup([x])
            seen.setdefault(h.members, h)
        return sorted(seen.values(), key=lambda h: (h.order, h.members))

    def check_associativity(self, samples: int = 10_000, seed: int = 0) -> bool:
        """Exhaustive for order <= 64, else on random triples."""
        n = self.order
        if n <= 64:
            a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
        else:
            rng = np.random.default_rng(seed)
            a, b, c = rng.integers(0, n, size=(3, samples))
        left = self.multiply_many(self.multiply_many(a, b), c)
        right = self.multiply_many(a, self.multiply_many(b, c))
        return bool(np.array_equal(left, right))

    def __repr__(self) -> str:
        desc = f" {self.description!r}" if self.description else ""
        return f"<FiniteGroup{desc} order={self.order}>"


def conjugacy_classes(group: FiniteGroup) -> list[ConjugacyClass]:
    return list(group.classes)


def centralizer_order(group: FiniteGroup, c: int) -> int:
    return group.class_containing(c).centralizer_order


def direct_product(a: FiniteGroup, b: FiniteGroup,
                   max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Componentwise product; element ``i * |b| + j`` is ``(a_i, b_j)``."""
    n = a.order * b.order
    if n > max_order:
        raise ResourceError(f"product order {n} exceeds the cap of {max_order}")
    left = np.repeat(a.perms, b.order, axis=0)
    right = np.tile(b.perms, (a.order, 1)) + a.degree
    perms = np.hstack([left, right])
    gens = [g * b.order for g in a.generators] + list(b.generators)
    desc = None
    if a.description and b.description:
        desc = f"product:{a.description}|{b.description}"
    return FiniteGroup(perms, gens, desc)


# ----------------------------------------------------------------------
# group spec grammar

def _cycle(points: Sequence[int], degree: int) -> tuple[int, ...]:
    img = list(range(degree))
    for i, p in enumerate(points):
        img[p] = points[(i + 1) % len(points)]
    return tuple(img)


def _quaternion8() -> FiniteGroup:
    # units +-1, +-i, +-j, +-k as 4-vectors; regular left action
    basis = np.eye(4, dtype=int)
    units = [s * basis[k] for k in range(4) for s in (1, -1)]

    def qmul(p, q):
        a1, b1, c1, d1 = p
        a2, b2, c2, d2 = q
        return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)

    pos = {tuple(u): i for i, u in enumerate(units)}
    gens = [tuple(pos[qmul(units[g], u)] for u in units) for g in (2, 4)]
    return FiniteGroup.from_generators(gens, 8, "quaternion8")


def _named(name: str, n: int, max_order: int) -> FiniteGroup:
    desc = f"{name}:{n}"
    if n < 1:
        raise ParseError(f"{desc}: n must be positive")
    orders = {
        "symmetric": lambda: math.factorial(n),
        "alternating": lambda: max(math.factorial(n) // 2, 1),
        "cyclic": lambda: n,
        "dihedral": lambda: 2 * n,
    }
    if orders[name]() > max_order:
        raise ResourceError(f"{desc} has order {orders[name]()} above the cap of {max_order}")
    if name == "cyclic":
        return FiniteGroup.from_generators([_cycle(range(n), n)], n, desc, max_order)
    if name == "symmetric":
        gens = [_cycle([0, 1], n), _cycle(range(n), n)] if n > 1 else []
        return FiniteGroup.from_generators(gens, n, desc, max_order)
    if name == "alternating":
        gens = [_cycle([0, 1, k], n) for k in range(2, n)]
        return FiniteGroup.from_generators(gens, n, desc, max_order)
    # dihedral of order 2n
    if n == 1:
        return FiniteGroup.from_generators([_cycle([0, 1], 2)], 2, desc, max_order)
    if n == 2:
        gens = [_cycle([0, 1], 4), _cycle([2, 3], 4)]
        return FiniteGroup.from_generators(gens, 4, desc, max_order)
    reflection = tuple((-i) % n for i in range(n))
    return FiniteGroup.from_generators([_cycle(range(n), n), reflection], n, desc, max_order)


_NAMED_RE = re.compile(r"^(symmetric|alternating|cyclic|dihedral):(\d+)$")
_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _parse_perm_spec(body: str, spec: str, max_order: int) -> FiniteGroup:
    body = body.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ParseError(f"perm spec must be bracketed: {spec!r}")
    inner = body[1:-1].strip()
    gens_text = [g.strip() for g in _split_top(inner, ",")] if inner else []
    cycles_per_gen = []
    degree = 1
    for g in gens_text:
        if not g or _CYCLE_RE.sub("", g).strip():
            raise ParseError(f"malformed generator {g!r} in {spec!r}")
        cycles = []
        for c in _CYCLE_RE.findall(g):
            try:
                pts = [int(v) for v in c.split(",")] if c.strip() else []
            except ValueError:
                raise ParseError(f"non-integer point in cycle ({c}) of {spec!r}") from None
            if any(p < 1 for p in pts) or len(set(pts)) != len(pts):
                raise ParseError(f"invalid cycle ({c}) in {spec!r}")
            cycles.append([p - 1 for p in pts])
            degree = max([degree] + pts)
        cycles_per_gen.append(cycles)
    gens = []
    for cycles in cycles_per_gen:
        img = list(range(degree))
        for cyc in reversed(cycles):
            # rightmost cycle acts first
            step = _cycle(cyc, degree)
            img = [step[p] for p in img]
        gens.append(tuple(img))
    return FiniteGroup.from_generators(gens, degree, spec, max_order)


def build_group(spec: str, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Build a group from its text spec.

    Grammar: ``symmetric:<n>``, ``alternating:<n>``, ``cyclic:<n>``,
    ``dihedral:<n>`` (order 2n), ``quaternion8``, ``perm:[<cycles>,...]``
    with cycles ``(a,b,...)`` on points 1..k, and
    ``product:<spec>|<spec>[|<spec>...]``.

    Examples
    --------
    >>> build_group("symmetric:3").order
    6
    >>> len(build_group("perm:[(1,2),(1,2,3)]").classes)
    3
    """
    spec = spec.strip()
    if spec.startswith("product:"):
        factors = [f.strip() for f in _split_top(spec[len("product:"):], "|")]
        if len(factors) < 2 or not all(factors):
            raise ParseError(f"product needs at least two factors: {spec!r}")
        groups = [build_group(f, max_order) for f in factors]
        result = groups[0]
        for g in groups[1:]:
            result = direct_product(result, g, max_order)
        result.description = spec
        return result
    if spec == "quaternion8":
        if max_order < 8:
            raise ResourceError(f"quaternion8 exceeds the cap of {max_order}")
        return _quaternion8()
    if spec.startswith("perm:"):
        return _parse_perm_spec(spec[len("perm:"):], spec, max_order)
    m = _NAMED_RE.match(spec)
    if not m:
        raise ParseError(f"unrecognised group spec {spec!r}")
    return _named(m.group(1), int(m.group(2)), max_order)
