"""Character tables via the class-algebra eigenvector method.

The class sums ``K_i`` of a finite group span the centre of its group
algebra, with ``K_i K_j = sum_k c_ijk K_k``.  Each irreducible character
gives a central character ``omega(K_i) = |C_i| chi(g_i) / d`` and the
vector ``(omega(K_k))_k`` is a common eigenvector of the matrices
``(M_i)_jk = c_ijk``.  A random real combination of the ``M_i`` has simple
spectrum with probability one, so its eigenvectors are exactly the
central characters.  Everything produced here is certified afterwards by
the orthogonality relations.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, DegeneracyError, ParseError
from .groups import FiniteGroup, Subgroup

__all__ = [
    "ORTHO_TOL",
    "ROUND_TOL",
    "CharacterTable",
    "ClassFunction",
    "character_table",
    "frobenius_schur",
    "subgroup_character_sum",
    "tensor_decompose",
    "round_certified",
    "read_csv",
    "write_csv",
]

ORTHO_TOL = 1e-9
ROUND_TOL = 1e-6
EIGEN_GAP = 1e-8
DEFAULT_ATTEMPTS = 8


def round_certified(value: complex, what: str = "value", tol: float = ROUND_TOL) -> tuple[int, float]:
    """Round to the nearest integer, raising if the residue reaches ``tol``."""
    value = complex(value)
    nearest = round(value.real)
    residue = abs(value - nearest)
    if not residue < tol:
        raise ConsistencyError(f"{what} = {value!r} is not within {tol} of an integer")
    return int(nearest), float(residue)


@dataclass(frozen=True)
class ClassFunction:
    group: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != len(self.group.classes):
            raise ValueError("one value per conjugacy class is required")

    def __call__(self, x: int) -> complex:
        return complex(self.values[self.group.class_of[x]])

    def inner(self, other: "ClassFunction") -> complex:
        """Hermitian inner product ``(1/|G|) sum_x f(x) conj(g(x))``."""
        sizes = self.group.class_sizes
        return complex(np.sum(sizes * self.values * np.conj(other.values)) / self.group.order)


class CharacterTable:
    """Irreducible characters of ``group``, one row per irrep.

    Rows are ordered by dimension, then by rounded values in decreasing
    lexicographic order, which puts the trivial character first.
    """

    def __init__(self, group: FiniteGroup, values: np.ndarray,
                 labels: Sequence[str] | None = None, certify: bool = True):
        values = np.asarray(values, dtype=complex)
        dims = np.rint(values[:, 0].real).astype(np.int64)
        order = sorted(range(len(dims)), key=lambda i: (dims[i], _desc_key(values[i])))
        self.group = group
        self.values = values[order]
        self.values.setflags(write=False)
        self.dimensions = dims[order]
        self.dimensions.setflags(write=False)
        self.labels = list(labels) if labels is not None else _make_labels(self.dimensions)
        if certify:
            self.certify()

    def __len__(self) -> int:
        return len(self.dimensions)

    def index(self, irrep: int | str) -> int:
        if isinstance(irrep, str):
            try:
                return self.labels.index(irrep)
            except ValueError:
                raise KeyError(f"no irrep labelled {irrep!r}") from None
        if not 0 <= irrep < len(self):
            raise KeyError(f"irrep index {irrep} out of range")
        return int(irrep)

    def character(self, irrep: int | str) -> ClassFunction:
        return ClassFunction(self.group, self.values[self.index(irrep)])

    def value(self, irrep: int | str, x: int) -> complex:
        return complex(self.values[self.index(irrep), self.group.class_of[x]])

    @cached_property
    def indicators(self) -> np.ndarray:
        return np.array([frobenius_schur(self, i) for i in range(len(self))], dtype=np.int64)

    @cached_property
    def trivial(self) -> int:
        ones = np.all(np.abs(self.values - 1) < ROUND_TOL, axis=1)
        return int(np.flatnonzero(ones)[0])

    def certify(self, tol: float = ORTHO_TOL) -> None:
        """Raise :class:`ConsistencyError` unless every table invariant holds."""
        g = self.group
        n, k = g.order, len(g.classes)
        if self.values.shape != (k, k):
            raise ConsistencyError(f"table shape {self.values.shape} != ({k}, {k})")
        if int(np.sum(self.dimensions ** 2)) != n:
            raise ConsistencyError("sum of squared dimensions differs from |G|")
        if np.any(self.values[:, 0] != self.dimensions):
            raise ConsistencyError("chi(e) differs from the dimension")
        sizes = g.class_sizes
        rows = (self.values * sizes) @ self.values.conj().T / n
        if np.max(np.abs(rows - np.eye(k))) > tol:
            raise ConsistencyError("row orthogonality fails")
        cols = self.values.T @ self.values.conj()
        if np.max(np.abs(cols - np.diag(n / sizes))) > tol:
            raise ConsistencyError("column orthogonality fails")

    def __repr__(self) -> str:
        return f"<CharacterTable of {self.group!r}: dims {self.dimensions.tolist()}>"


def _desc_key(row: np.ndarray) -> tuple:
    key = []
    for v in row:
        key.append(-round(float(v.real), 6) + 0.0)
        key.append(-round(float(v.imag), 6) + 0.0)
    return tuple(key)


def _make_labels(dims: np.ndarray) -> list[str]:
    labels, seen = [], {}
    for d in dims:
        i = seen.get(int(d), 0)
        seen[int(d)] = i + 1
        suffix = ""
        while True:
            suffix = chr(ord("a") + i % 26) + suffix
            i = i // 26 - 1
            if i < 0:
                break
        labels.append(f"{d}{suffix}")
    return labels


def class_structure_constants(group: FiniteGroup) -> np.ndarray:
    """``c[i, j, k] = #{(x, y) in C_i x C_j : xy = g_k}``."""
    k = len(group.classes)
    class_of = group.class_of
    everything = np.arange(group.order)
    inv = group.inverses
    c = np.zeros((k, k, k), dtype=np.int64)
    for kk, cls in enumerate(group.classes):
        y = group.multiply_many(inv, cls.representative)
        np.add.at(c[:, :, kk], (class_of[everything], class_of[y]), 1)
    return c


def _snap(values: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    # values that are Gaussian integers up to noise are made exact
    out = np.array(values, dtype=complex)
    re, im = np.rint(values.real), np.rint(values.imag)
    close_re = np.abs(values.real - re) < tol
    close_im = np.abs(values.imag - im) < tol
    out.real[close_re] = re[close_re]
    out.imag[close_im] = im[close_im]
    return out


def character_table(group: FiniteGroup, seed: int = 0,
                    attempts: int = DEFAULT_ATTEMPTS) -> CharacterTable:
    """Compute and certify the character table of ``group``.

    Raises
    ------
    DegeneracyError
        If no random combination of class matrices had a simple spectrum
        within ``attempts`` tries, or no attempt passed certification.
    """
    n, k = group.order, len(group.classes)
    sizes = group.class_sizes.astype(float)
    consts = class_structure_constants(group).astype(float)
    rng = np.random.default_rng(seed)
    last_error = "no attempts made"
    for _ in range(attempts):
        coeffs = rng.standard_normal(k)
        m = np.einsum("i,ijk->jk", coeffs, consts)
        eigvals, eigvecs = np.linalg.eig(m)
        scale = max(1.0, float(np.max(np.abs(eigvals))))
        gaps = np.abs(eigvals[:, None] - eigvals[None, :]) + np.eye(k) * scale
        if k > 1 and np.min(gaps) < EIGEN_GAP * scale:
            last_error = "eigenvalue collision"
            continue
        omega = (eigvecs / eigvecs[0]).T
        norms = np.sum(np.abs(omega) ** 2 / sizes, axis=1)
        dims = np.sqrt(n / norms)
        if np.max(np.abs(dims - np.rint(dims))) > ROUND_TOL:
            last_error = "non-integral dimension"
            continue
        dims = np.rint(dims)
        values = _snap(dims[:, None] * omega / sizes)
        values[:, 0] = dims
        try:
            return CharacterTable(group, values)
        except ConsistencyError as exc:
            last_error = str(exc)
    raise DegeneracyError(f"character table failed after {attempts} attempts: {last_error}")


def frobenius_schur(table: CharacterTable, irrep: int | str) -> int:
    """Indicator ``(1/|G|) sum_x chi(x^2)``: 1 real, -1 quaternionic, 0 complex."""
    i = table.index(irrep)
    g = table.group
    raw = np.sum(g.class_sizes * table.values[i, g.square_class]) / g.order
    value, _ = round_certified(raw, "Frobenius-Schur indicator")
    return value


def tensor_decompose(table: CharacterTable, mu: int | str, lam: int | str) -> np.ndarray:
    """Multiplicity of every irrep in ``mu (x) lam``."""
    g = table.group
    prod = table.values[table.index(mu)] * table.values[table.index(lam)]
    raw = (table.values.conj() * (g.class_sizes * prod)).sum(axis=1) / g.order
    mult = np.array([round_certified(v, "tensor multiplicity")[0] for v in raw], dtype=np.int64)
    if np.any(mult < 0):
        raise ConsistencyError("negative tensor multiplicity")
    return mult


def subgroup_character_sum(table: CharacterTable, subgroup: Subgroup, irrep: int | str) -> complex:
    """``sum_{z in H} chi(z)``; always ``|H|`` times an integer."""
    g = table.group
    counts = np.bincount(g.class_of[list(subgroup.members)], minlength=len(g.classes))
    return complex(np.sum(counts * table.values[table.index(irrep)]))


# ----------------------------------------------------------------------
# CSV exchange

def _fmt(v: complex) -> str:
    # adding 0.0 turns -0.0 into 0.0
    return f"{v.real + 0.0:.12g}:{v.imag + 0.0:.12g}"


def write_csv(table: CharacterTable, stream) -> None:
    """Header ``label,d,<rep>:<size>,...``, then ``label,d,re:im,...`` rows."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["label", "d"] + [f"{c.representative}:{c.size}" for c in table.group.classes])
    for label, d, row in zip(table.labels, table.dimensions, table.values):
        w.writerow([label, int(d)] + [_fmt(complex(v)) for v in row])


def to_csv(table: CharacterTable) -> str:
    buf = io.StringIO()
    write_csv(table, buf)
    return buf.getvalue()


def read_csv(group: FiniteGroup, stream) -> CharacterTable:
    """Parse a table written by :func:`write_csv` and re-certify it."""
    rows = [r for r in csv.reader(stream) if r]
    if not rows or rows[0][:2] != ["label", "d"]:
        raise ParseError("character CSV must start with a 'label,d,...' header")
    header = rows[0][2:]
    expected = [f"{c.representative}:{c.size}" for c in group.classes]
    if header != expected:
        raise ParseError(f"class header {header} does not match the group's classes {expected}")
    labels, values = [], []
    for r in rows[1:]:
        if len(r) != len(header) + 2:
            raise ParseError(f"row {r[:1]} has {len(r)} fields, expected {len(header) + 2}")
        labels.append(r[0])
        try:
            parsed = [complex(float(a), float(b)) for a, b in (v.split(":") for v in r[2:])]
            d = int(r[1])
        except ValueError as exc:
            raise ParseError(f"bad value in row {r[0]!r}: {exc}") from None
        if abs(parsed[0] - d) > ROUND_TOL:
            raise ConsistencyError(f"row {r[0]!r}: chi(e) disagrees with d")
        parsed[0] = complex(d)
        values.append(parsed)
    values = _snap(np.array(values, dtype=complex))
    table = CharacterTable(group, values, certify=False)
    # keep imported labels in the table's canonical order
    by_row = {tuple(np.round(v, 9)): lab for v, lab in zip(values, labels)}
    table.labels = [by_row[tuple(np.round(v, 9))] for v in table.values]
    table.certify()
    return table
