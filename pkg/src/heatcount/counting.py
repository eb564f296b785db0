"""Solution counts for equations in finite groups.

Every fast count is a sum over irreducible characters.  The functions
named ``*_terms`` return the per-irrep summands so that the heat-kernel
module can damp each one by ``exp(-t p(lambda))``; the public ``count_*``
functions add them up and round with a certified residue.

:func:`brute_force_count` is the independent oracle: it enumerates every
assignment of a :class:`WordEquation` and shares no code with the
character formulas.
"""
from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .characters import (CharacterTable, ClassFunction, ROUND_TOL, round_certified,
                         tensor_decompose, subgroup_character_sum)
from .errors import ConsistencyError, ParseError, ResourceError
from .groups import ConjugacyClass, FiniteGroup, Subgroup

__all__ = [
    "DEFAULT_MAX_EVALUATIONS",
    "CountResult",
    "Letter",
    "WordEquation",
    "parse_word",
    "brute_force_count",
    "brute_force_weighted",
    "count_surface",
    "pushforward_class_function",
    "count_n_commutator",
    "n_commutator_class_function",
    "count_conjugate_subgroup_product",
    "count_with_square",
    "count_klein",
    "count_klein_characters",
    "weighted_count",
    "surface_word",
    "n_commutator_word",
    "subgroup_word",
    "square_word",
    "klein_word",
]

DEFAULT_MAX_EVALUATIONS = 10**8


@dataclass(frozen=True)
class CountResult:
    count: int
    raw_value: float
    residue: float

    @classmethod
    def from_raw(cls, raw: complex, what: str = "count") -> "CountResult":
        count, residue = round_certified(raw, what)
        if count < 0:
            raise ConsistencyError(f"{what} rounded to a negative number: {raw!r}")
        return cls(count, float(complex(raw).real), residue)

    def __int__(self) -> int:
        return self.count


# ----------------------------------------------------------------------
# word equations and the exhaustive oracle

@dataclass(frozen=True)
class Letter:
    kind: str            # "var" or "const"
    ref: str | int       # variable name or element index
    inverse: bool = False


@dataclass(frozen=True)
class WordEquation:
    """A word in variables and constants, set equal to ``target``.

    ``domains`` maps each variable to ``"free"``, ``("class", rep)`` or
    ``("subgroup", i)`` where ``i`` is 1-based into the subgroup list
    supplied at evaluation time.
    """
    letters: tuple[Letter, ...]
    domains: dict = field(default_factory=dict)
    target: int = 0

    @property
    def variables(self) -> list[str]:
        return list(self.domains)


_VAR_RE = re.compile(r"^([A-Za-z_]\w*)(?:@(H?)(\d+))?$")


def _parse_letter(text: str, domains: dict, word: str) -> Letter:
    text = text.strip()
    if text.startswith("inv(") and text.endswith(")"):
        inner = _parse_letter(text[4:-1], domains, word)
        return Letter(inner.kind, inner.ref, not inner.inverse)
    if text.startswith("c:"):
        try:
            return Letter("const", int(text[2:]))
        except ValueError:
            raise ParseError(f"bad constant {text!r} in {word!r}") from None
    m = _VAR_RE.match(text)
    if not m:
        raise ParseError(f"bad letter {text!r} in {word!r}")
    name, is_sub, num = m.groups()
    if num is None:
        dom = None
    elif is_sub:
        dom = ("subgroup", int(num))
    else:
        dom = ("class", int(num))
    prev = domains.get(name)
    if dom is not None:
        if prev not in (None, "free", dom):
            raise ParseError(f"variable {name} declared with two domains in {word!r}")
        domains[name] = dom
    elif prev is None:
        domains[name] = "free"
    return Letter("var", name)


def parse_word(text: str) -> WordEquation:
    """Parse ``letter*letter*... [=> target]``.

    Letters: free variables (``x1``, ``y2``, ...), class-constrained
    variables ``z1@<class-rep>``, subgroup-constrained ``u1@H<i>``,
    constants ``c:<index>`` and ``inv(<letter>)``.  The domain annotation
    may appear on any occurrence of the variable.

    >>> eq = parse_word("x1*y1*inv(x1)*inv(y1) => 0")
    >>> eq.variables, eq.target
    (['x1', 'y1'], 0)
    """
    body, _, target = text.partition("=>")
    domains: dict = {}
    body = body.strip()
    letters = []
    if body and body != "e":
        letters = [_parse_letter(t, domains, text) for t in body.split("*")]
    # a name used bare before its annotation keeps the annotation
    try:
        tgt = int(target) if target.strip() else 0
    except ValueError:
        raise ParseError(f"bad target in {text!r}") from None
    return WordEquation(tuple(letters), domains, tgt)


def _domain_arrays(group: FiniteGroup, eq: WordEquation,
                   subgroups: Sequence[Subgroup]) -> dict[str, np.ndarray]:
    out = {}
    for name, dom in eq.domains.items():
        if dom == "free":
            out[name] = np.arange(group.order)
        elif dom[0] == "class":
            if not 0 <= dom[1] < group.order:
                raise ValueError(f"class representative {dom[1]} out of range")
            out[name] = np.array(group.class_containing(dom[1]).members)
        else:
            if not 1 <= dom[1] <= len(subgroups):
                raise ValueError(f"{name} refers to H{dom[1]} but {len(subgroups)} subgroups were given")
            out[name] = np.array(subgroups[dom[1] - 1].members)
    return out


def _search_space(sizes: Sequence[int]) -> int:
    total = 1
    for s in sizes:
        total *= int(s)
    return total


def _enumerate_values(group: FiniteGroup, eq: WordEquation, doms: dict,
                      lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Word values for flat assignment indices ``lo..hi`` plus the digits."""
    names = list(doms)
    shape = tuple(len(doms[v]) for v in names)
    digits = np.unravel_index(np.arange(lo, hi), shape) if names else ()
    values = {v: doms[v][d] for v, d in zip(names, digits)}
    acc = np.zeros(hi - lo, dtype=np.intp)
    inv = group.inverses
    for letter in eq.letters:
        if letter.kind == "const":
            if not 0 <= letter.ref < group.order:
                raise ValueError(f"constant {letter.ref} out of range")
            x = np.intp(letter.ref)
        else:
            x = values[letter.ref]
        if letter.inverse:
            x = inv[x]
        acc = group.multiply_many(acc, x)
    return acc, values


def _chunks(total: int, size: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


def brute_force_count(group: FiniteGroup, eq: WordEquation,
                      subgroups: Sequence[Subgroup] = (),
                      max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
                      threads: int = 1, chunk: int = 1 << 20) -> int:
    """Exact solution count by evaluating the word on every assignment."""
    if not 0 <= eq.target < group.order:
        raise ValueError(f"target {eq.target} out of range")
    doms = _domain_arrays(group, eq, subgroups)
    total = _search_space(len(d) for d in doms.values())
    if total > max_evaluations:
        raise ResourceError(f"search space {total} exceeds the cap of {max_evaluations}")

    def work(bounds):
        acc, _ = _enumerate_values(group, eq, doms, *bounds)
        return int(np.count_nonzero(acc == eq.target))

    parts = _chunks(total, chunk)
    if threads > 1 and len(parts) > 1:
        with ThreadPoolExecutor(threads) as pool:
            return sum(pool.map(work, parts))
    return sum(map(work, parts))


# ----------------------------------------------------------------------
# word builders for the standard families

def _inverse_word(word: list[str]) -> list[str]:
    out = []
    for w in reversed(word):
        out.append(w[4:-1] if w.startswith("inv(") else f"inv({w})")
    return out


def _commutator(a: list[str], b: list[str]) -> list[str]:
    return a + b + _inverse_word(a) + _inverse_word(b)


def surface_word(g: int, classes: Sequence[ConjugacyClass] = (), target: int = 0) -> WordEquation:
    letters = []
    for j in range(1, g + 1):
        letters += _commutator([f"x{j}"], [f"y{j}"])
    letters += [f"z{j}@{c.representative}" for j, c in enumerate(classes, 1)]
    return parse_word(f"{'*'.join(letters)} => {target}")


def n_commutator_word(n: int, target: int = 0) -> WordEquation:
    word = [f"x{n}"]
    for j in range(n - 1, 0, -1):
        word = _commutator([f"x{j}"], word)
    # x1..x_{n} all free, even when n = 1
    return parse_word(f"{'*'.join(word)} => {target}")


def subgroup_word(n: int, target: int = 0) -> WordEquation:
    letters = []
    for j in range(1, n + 1):
        letters += [f"x{j}", f"u{j}@H{j}", f"inv(x{j})"]
    return parse_word(f"{'*'.join(letters)} => {target}")


def square_word(g: int) -> WordEquation:
    letters = []
    for j in range(1, g + 1):
        letters += _commutator([f"x{j}"], [f"y{j}"])
    return parse_word("*".join(letters + ["z", "z"]))


def klein_word(g: int) -> WordEquation:
    letters = []
    for j in range(1, g + 1):
        letters += _commutator([f"x{j}"], [f"y{j}"])
    return parse_word("*".join(letters + ["w", "z", "inv(w)", "z"]))


# ----------------------------------------------------------------------
# character formulas

def _class_indices(table: CharacterTable, classes: Sequence[ConjugacyClass | int]) -> list[int]:
    out = []
    for c in classes:
        out.append(c.index if isinstance(c, ConjugacyClass) else int(c))
    return out


def surface_terms(table: CharacterTable, g: int,
                  classes: Sequence[ConjugacyClass] = (), target: int = 0) -> np.ndarray:
    """Per-irrep summands of the number of solutions of
    ``prod [x_j, y_j] prod z_j = target`` with ``z_j`` in the given classes.

    Each summand is ``|G|^(2g-1) prod|O_j| prod chi(c_j) chi(target^-1) / d^(2g+n-1)``.
    """
    if g < 0 or 2 * g + len(classes) < 1:
        raise ValueError("need g >= 0 and 2g + n >= 1")
    grp = table.group
    idx = _class_indices(table, classes)
    n = len(idx)
    d = table.dimensions.astype(float)
    chi = table.values
    prod = np.ones(len(table), dtype=complex)
    for k in idx:
        prod *= chi[:, k]
    sizes = np.prod([float(grp.classes[k].size) for k in idx]) if idx else 1.0
    t_inv = grp.class_of[grp.inverses[target]]
    return float(grp.order) ** (2 * g - 1) * sizes * prod * chi[:, t_inv] / d ** (2 * g + n - 1)


def count_surface(table: CharacterTable, g: int,
                  classes: Sequence[ConjugacyClass] = (), target: int = 0) -> CountResult:
    """Solutions of ``prod_j [x_j, y_j] prod_j z_j = target``, ``z_j`` in ``O_{c_j}``.

    For ``target = e`` this is the classical Frobenius-type formula
    ``|G|^(2g+n-1) / prod|Z_j| * sum_lambda prod chi(c_j) / d^(2g+n-2)``.
    """
    return CountResult.from_raw(surface_terms(table, g, classes, target).sum(), "surface count")


def pushforward_class_function(table: CharacterTable, g: int,
                               classes: Sequence[ConjugacyClass] = ()) -> tuple[ClassFunction, list[CountResult]]:
    """Number of preimages ``N(x)`` of each class under the surface map.

    Returns the class function of counts and the per-class
    :class:`CountResult` certificates.
    """
    grp = table.group
    results = [count_surface(table, g, classes, c.representative) for c in grp.classes]
    values = np.array([r.count for r in results], dtype=float)
    return ClassFunction(grp, values), results


def n_commutator_terms(table: CharacterTable, n: int, target: int = 0) -> np.ndarray:
    """Per-irrep summands of ``Q_n(target)``; lower levels are exact integers."""
    if n < 1:
        raise ValueError("n must be >= 1")
    grp = table.group
    if n == 1:
        terms = np.zeros(len(table), dtype=complex)
        terms[table.trivial] = 1.0
        return terms
    q_prev = n_commutator_class_function(table, n - 1).values
    return _ncomm_level(table, q_prev, target)


def _ncomm_level(table: CharacterTable, q_prev: np.ndarray, target: int) -> np.ndarray:
    grp = table.group
    chi = table.values
    d = table.dimensions.astype(float)
    weight = (np.abs(chi) ** 2 * grp.class_sizes) @ q_prev
    t_inv = grp.class_of[grp.inverses[target]]
    return chi[:, t_inv] / d * weight


def n_commutator_class_function(table: CharacterTable, n: int) -> ClassFunction:
    """``Q_n`` on every class, each level rounded with a certified residue."""
    grp = table.group
    q = np.ones(len(grp.classes))
    for _ in range(2, n + 1):
        nxt = []
        for c in grp.classes:
            raw = _ncomm_level(table, q, c.representative).sum()
            nxt.append(CountResult.from_raw(raw, "n-commutator count").count)
        q = np.array(nxt, dtype=float)
    return ClassFunction(grp, q)


def count_n_commutator(table: CharacterTable, n: int, target: int = 0) -> CountResult:
    """``#{(x_1..x_n) : [x_1, [x_2, [..., x_n]]] = target}``.

    Uses the recursion ``Q_n(w) = sum_lambda sum_g chi(g) chi(g^-1 w^-1) Q_{n-1}(g)``
    with ``Q_1 = 1``, reduced to a sum over classes.
    """
    return CountResult.from_raw(n_commutator_terms(table, n, target).sum(), "n-commutator count")


def subgroup_terms(table: CharacterTable, subgroups: Sequence[Subgroup]) -> np.ndarray:
    n = len(subgroups)
    if n < 1:
        raise ValueError("at least one subgroup is required")
    grp = table.group
    d = table.dimensions.astype(float)
    prod = np.ones(len(table), dtype=complex)
    for h in subgroups:
        prod *= np.array([subgroup_character_sum(table, h, i) for i in range(len(table))])
    return float(grp.order) ** (n - 1) * prod / d ** (n - 2)


def count_conjugate_subgroup_product(table: CharacterTable,
                                     subgroups: Sequence[Subgroup]) -> CountResult:
    """``#{(x_j; z_j) in G^n x prod H_j : prod x_j z_j x_j^-1 = e}``."""
    return CountResult.from_raw(subgroup_terms(table, subgroups).sum(), "subgroup product count")


def square_terms(table: CharacterTable, g: int) -> np.ndarray:
    if g < 0:
        raise ValueError("g must be >= 0")
    d = table.dimensions.astype(float)
    return float(table.group.order) ** (2 * g) * table.indicators / d ** (2 * g - 1)


def count_with_square(table: CharacterTable, g: int) -> CountResult:
    """``#{(x_j, y_j; z) : prod [x_j, y_j] z^2 = e}`` via Frobenius-Schur indicators."""
    return CountResult.from_raw(square_terms(table, g).sum(), "square count")


def count_klein(table: CharacterTable, g: int) -> CountResult:
    """``#{(x_j, y_j; w, z) : prod [x_j, y_j] w z w^-1 z = e}``.

    Sums the commutator push-forward ``N`` over the targets
    ``(w z w^-1 z)^-1``.  Conjugating ``(w, z)`` simultaneously preserves
    the class of ``w z w^-1 z``, so only one ``z`` per class is needed.
    """
    if g < 0:
        raise ValueError("g must be >= 0")
    grp = table.group
    if g == 0:
        raw_n = np.zeros(len(grp.classes))
        raw_n[0] = 1.0
    else:
        raw_n = np.array([surface_terms(table, g, (), c.representative).sum().real
                          for c in grp.classes])
        for v in raw_n:
            round_certified(v, "commutator push-forward")
    everything = np.arange(grp.order)
    inv = grp.inverses
    raw = 0.0
    for c in grp.classes:
        z = c.representative
        wz = grp.multiply_many(everything, z)
        word = grp.multiply_many(grp.multiply_many(wz, inv[everything]), z)
        hist = np.bincount(grp.class_of[inv[word]], minlength=len(grp.classes))
        raw += c.size * float(hist @ raw_n)
    return CountResult.from_raw(raw, "Klein count")


def count_klein_characters(table: CharacterTable, g: int) -> CountResult:
    """Character form ``|G|^(2g+1) sum_lambda nu(lambda)^2 / d^(2g)`` of :func:`count_klein`.

    Only self-dual irreps contribute because
    ``sum_z chi(a z) chi(z) = |G| chi(a) / d`` exactly when ``chi`` is real.
    Certified against :func:`count_klein` in the test-suite.
    """
    d = table.dimensions.astype(float)
    nu2 = table.indicators.astype(float) ** 2
    raw = float(table.group.order) ** (2 * g + 1) * np.sum(nu2 / d ** (2 * g))
    return CountResult.from_raw(raw, "Klein count")


def _weight_coefficients(table: CharacterTable, irreps: Sequence[int | str]) -> np.ndarray:
    """Multiplicity of ``lambda`` in ``(prod_mu chi_mu) (x) lambda`` for each ``lambda``."""
    if len(irreps) == 1:
        mu = table.index(irreps[0])
        return np.array([tensor_decompose(table, mu, lam)[lam] for lam in range(len(table))],
                        dtype=float)
    grp = table.group
    phi = np.ones(len(grp.classes), dtype=complex)
    for mu in irreps:
        phi *= table.values[table.index(mu)]
    raw = (grp.class_sizes * phi * np.abs(table.values) ** 2).sum(axis=1) / grp.order
    return np.array([round_certified(v, "tensor multiplicity")[0] for v in raw], dtype=float)


def weighted_terms(table: CharacterTable, g: int, classes: Sequence[ConjugacyClass],
                   weights: Sequence[tuple[int, int | str]]) -> np.ndarray:
    grp = table.group
    per_coord: dict[int, list] = {}
    for coord, irrep in weights:
        if not 1 <= coord <= g:
            raise ValueError(f"weighted coordinate x{coord} is not one of x1..x{g}")
        per_coord.setdefault(coord, []).append(irrep)
    coeff = np.ones(len(table))
    for irreps in per_coord.values():
        coeff *= _weight_coefficients(table, irreps)
    return coeff * surface_terms(table, g, classes, 0)


def weighted_count(table: CharacterTable, g: int, classes: Sequence[ConjugacyClass],
                   weights: Sequence[tuple[int, int | str]]) -> complex:
    """Sum over solutions of the surface equation of ``prod chi_mu_j(x_j^-1)``.

    ``weights`` pairs a 1-based free-variable index ``j`` (for ``x_j``)
    with an irrep.  Integrating out ``y_j`` and then ``x_j`` turns each
    weighted handle into the multiplicity of ``lambda`` in
    ``mu_j (x) lambda``.
    """
    return complex(weighted_terms(table, g, classes, weights).sum())


def brute_force_weighted(table: CharacterTable, g: int, classes: Sequence[ConjugacyClass],
                         weights: Sequence[tuple[int, int | str]],
                         max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> complex:
    """Oracle for :func:`weighted_count` by exhaustive enumeration."""
    grp = table.group
    eq = surface_word(g, classes)
    doms = _domain_arrays(grp, eq, ())
    total = _search_space(len(v) for v in doms.values())
    if total > max_evaluations:
        raise ResourceError(f"search space {total} exceeds the cap of {max_evaluations}")
    result = 0j
    for lo, hi in _chunks(total, 1 << 20):
        acc, values = _enumerate_values(grp, eq, doms, lo, hi)
        hit = acc == eq.target
        w = np.ones(int(hit.sum()), dtype=complex)
        for coord, irrep in weights:
            x = values[f"x{coord}"][hit]
            w *= table.values[table.index(irrep), grp.class_of[grp.inverses[x]]]
        result += w.sum()
    return complex(result)
