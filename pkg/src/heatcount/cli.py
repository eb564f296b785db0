"""Command-line front end.

Every subcommand parses its arguments, calls one library routine and
prints the result.  Exit status: 0 success, 1 domain error, 2 usage
error, 3 consistency error; failures also print a JSON object on stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from typing import Any, Sequence

import numpy as np

from . import characters, counting, heat
from .errors import HeatCountError, ParseError, UsageError
from .groups import build_group
from .lie import montecarlo, roots, series

__all__ = ["main", "run", "build_parser"]


# ----------------------------------------------------------------------
# output

def _real(x: float) -> float | int | None:
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.12g}") + 0.0


def _clean(obj: Any) -> Any:
    """Make ``obj`` JSON-ready: integers stay integers, reals get 12 digits."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _real(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _real(obj.real), "im": _real(obj.imag)}
    return obj


def _fmt_cell(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        re, im = v["re"], v["im"]
        if im == 0:
            return f"{re:.12g}"
        return f"{re:.12g}{im:+.12g}i"
    if isinstance(v, list):
        return ",".join(_fmt_cell(x) for x in v)
    if v is None:
        return "-"
    return str(v)


def _table(rows: list[list[Any]]) -> str:
    cells = [[_fmt_cell(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells if i < len(r)) for i in range(max(map(len, cells)))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells)


def _emit(payload: dict, fmt: str, rows: list[list[Any]] | None = None) -> None:
    payload = _clean(payload)
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True))
        return
    if rows is None:
        rows = [[k, v] for k, v in payload.items()]
    print(_table(_clean(rows)))


# ----------------------------------------------------------------------
# argument helpers

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ParseError(f"expected comma-separated numbers, got {text!r}") from None


def _group_and_table(args):
    group = build_group(args.group)
    return group, characters.character_table(group, seed=args.seed)


def _classes(group, text: str | None):
    idx = _int_list(text or "")
    for i in idx:
        if not 0 <= i < len(group.classes):
            raise UsageError(f"class index {i} out of range 0..{len(group.classes) - 1}")
    return [group.classes[i] for i in idx]


def _element(group, i: int) -> int:
    if not 0 <= i < group.order:
        raise UsageError(f"element index {i} out of range 0..{group.order - 1}")
    return i


def _subgroups(group, specs: Sequence[str] | None):
    out = []
    for spec in specs or []:
        if spec.strip() == "all":
            out.append(group.subgroup(list(range(group.order))))
        elif spec.strip() in ("", "e"):
            out.append(group.subgroup([]))
        else:
            out.append(group.subgroup([_element(group, i) for i in _int_list(spec)]))
    return out


def _count_payload(result: counting.CountResult, **extra) -> dict:
    return {"count": result.count, "raw_value": result.raw_value, "residue": result.residue, **extra}


def _point(rs, text: str) -> roots.TorusPoint:
    x = roots.parse_torus_point(text)
    if x.tag != rs.tag:
        raise UsageError(f"torus point {text!r} does not match root system {rs.tag}")
    return x


# ----------------------------------------------------------------------
# finite-group subcommands

def cmd_count(args):
    group, table = _group_and_table(args)
    classes = _classes(group, args.classes)
    result = counting.count_surface(table, args.genus, classes, _element(group, args.target))
    _emit(_count_payload(result, group=args.group, genus=args.genus,
                         classes=[c.index for c in classes], target=args.target), args.format)


def cmd_pushforward(args):
    group, table = _group_and_table(args)
    classes = _classes(group, args.classes)
    fn, results = counting.pushforward_class_function(table, args.genus, classes)
    entries = [{"class": c.index, "representative": c.representative, "size": c.size,
                "value": r.count, "residue": r.residue} for c, r in zip(group.classes, results)]
    total = int(sum(c.size * r.count for c, r in zip(group.classes, results)))
    rows = [["class", "representative", "size", "value"]]
    rows += [[e["class"], e["representative"], e["size"], e["value"]] for e in entries]
    _emit({"group": args.group, "genus": args.genus, "classes": entries, "total": total},
          args.format, rows)


def cmd_ncomm(args):
    group, table = _group_and_table(args)
    result = counting.count_n_commutator(table, args.n, _element(group, args.target))
    _emit(_count_payload(result, group=args.group, n=args.n, target=args.target), args.format)


def cmd_subgroups(args):
    group, table = _group_and_table(args)
    subs = _subgroups(group, args.subgroup)
    if not subs:
        raise UsageError("give at least one --subgroup")
    result = counting.count_conjugate_subgroup_product(table, subs)
    _emit(_count_payload(result, group=args.group, subgroup_orders=[h.order for h in subs]),
          args.format)


def cmd_square(args):
    _, table = _group_and_table(args)
    result = counting.count_with_square(table, args.genus)
    _emit(_count_payload(result, group=args.group, genus=args.genus), args.format)


def cmd_klein(args):
    _, table = _group_and_table(args)
    result = counting.count_klein(table, args.genus)
    _emit(_count_payload(result, group=args.group, genus=args.genus), args.format)


def _parse_weight(table, text: str) -> tuple[int, int]:
    coord, sep, irrep = text.partition(":")
    if not sep or not coord.startswith("x"):
        raise ParseError(f"weight must look like x<j>:<irrep>, got {text!r}")
    try:
        j = int(coord[1:])
        lam = table.index(int(irrep) if irrep.isdigit() else irrep)
    except (ValueError, KeyError) as exc:
        raise ParseError(f"bad weight {text!r}: {exc}") from None
    return j, lam


def cmd_weighted(args):
    group, table = _group_and_table(args)
    classes = _classes(group, args.classes)
    weights = [_parse_weight(table, w) for w in args.weight or []]
    value = counting.weighted_count(table, args.genus, classes, weights)
    _emit({"group": args.group, "genus": args.genus, "value": value,
           "weights": [[j, table.labels[lam]] for j, lam in weights]}, args.format)


def cmd_oracle(args):
    group = build_group(args.group)
    eq = counting.parse_word(args.word)
    subs = _subgroups(group, args.subgroup)
    count = counting.brute_force_count(group, eq, subs, threads=args.threads or os.cpu_count() or 1)
    _emit({"group": args.group, "word": args.word, "count": count}, args.format)


def cmd_chartable(args):
    group = build_group(args.group)
    if args.import_path:
        with open(args.import_path, newline="") as fh:
            table = characters.read_csv(group, fh)
    else:
        table = characters.character_table(group, seed=args.seed)
    if args.export_path:
        with open(args.export_path, "w", newline="") as fh:
            characters.write_csv(table, fh)
    classes = [{"representative": c.representative, "size": c.size} for c in group.classes]
    payload = {"group": args.group, "order": group.order, "classes": classes,
               "labels": table.labels, "dimensions": table.dimensions,
               "indicators": table.indicators, "values": table.values}
    rows = [["irrep", "d"] + [f"{c.representative}:{c.size}" for c in group.classes]]
    rows += [[lab, int(d)] + [complex(v) for v in row]
             for lab, d, row in zip(table.labels, table.dimensions, table.values)]
    _emit(payload, args.format, rows)


def cmd_heat(args):
    group, table = _group_and_table(args)
    gens = _int_list(args.generators) if args.generators else heat.default_generators(group)
    weight = heat.cayley_weight(table, gens)
    ts = _float_list(args.ts)
    if args.x is not None:
        y = _element(group, args.y)
        values = [heat.heat_kernel(table, weight, t, _element(group, args.x), y) for t in ts]
        rows = [["t", "H"]] + [[t, v] for t, v in zip(ts, values)]
        _emit({"group": args.group, "weight": weight.values, "x": args.x, "y": args.y,
               "ts": ts, "values": values}, args.format, rows)
        return
    if args.family == "surface":
        family = heat.SurfaceFamily(args.genus, tuple(_classes(group, args.classes)))
    elif args.family == "ncomm":
        family = heat.NCommutatorFamily(args.n)
    else:
        subs = _subgroups(group, args.subgroup)
        if not subs:
            raise UsageError("the subgroups family needs at least one --subgroup")
        family = heat.SubgroupFamily(tuple(subs))
    lim = heat.heat_count_limit(table, weight, family, ts)
    rows = [["t", "I(t)", "approach_bound", "decay_bound"]]
    rows += [[t, v, lim.approach_bound(t), lim.decay_bound(t)] for t, v in zip(lim.ts, lim.values)]
    _emit({"group": args.group, "family": args.family, "weight": weight.values, "ts": lim.ts,
           "values": lim.values, "exact": lim.exact, "spread": lim.spread, "gap": lim.gap,
           "trivial_term": lim.trivial_term,
           "approach_bounds": [lim.approach_bound(t) for t in lim.ts],
           "decay_bounds": [lim.decay_bound(t) for t in lim.ts]}, args.format, rows)


# ----------------------------------------------------------------------
# Lie-group subcommands

def cmd_zeta(args):
    rs = roots.root_system(args.root)
    result = series.witten_zeta_partial(rs, args.s, args.tol, args.cutoff)
    _emit({"root": rs.tag, "s": args.s, **result.to_json()}, args.format)


def cmd_volume(args):
    rs = roots.root_system(args.root)
    points = [_point(rs, p) for p in args.point or []]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = series.moduli_volume_series(rs, args.genus, points, args.t, args.tol, args.cutoff)
    payload = {"root": rs.tag, "genus": args.genus, "points": [str(p) for p in points],
               "t": args.t, **result.to_json()}
    payload["warnings"] = sorted({str(w.message) for w in caught})
    for msg in payload["warnings"]:
        print(json.dumps({"warning": msg}), file=sys.stderr)
    _emit(payload, args.format)


def cmd_density(args):
    rs = roots.root_system(args.root)
    x = _point(rs, args.point)
    if args.kind == "commutator":
        result = series.commutator_density(rs, x, args.genus, args.t, args.tol, args.cutoff)
        payload = result.to_json()
    elif args.kind == "subgroup":
        slots = [s.strip() for s in (args.slots or "").split(",") if s.strip()]
        payload = series.subgroup_pushforward_density(rs, slots, x, args.t, args.tol,
                                                      args.cutoff).to_json()
        payload["slots"] = slots
    else:
        payload = {"value": series.lie_n_commutator_density(rs, args.n, x, args.t,
                                                            args.quadrature, args.tol),
                   "n": args.n, "quadrature": args.quadrature}
    _emit({"root": rs.tag, "kind": args.kind, "point": str(x), "t": args.t, **payload},
          args.format)


def cmd_vanishing(args):
    rs = roots.root_system(args.root)
    x = _point(rs, args.point)
    report = series.vanishing_limit(rs, x, _float_list(args.ts), args.tol)
    rows = [["t", "H", "terms", "tail_bound"]]
    rows += [[t, r.value, r.terms_used, r.tail_bound] for t, r in zip(report.ts, report.results)]
    _emit({"root": rs.tag, "point": str(x), "ts": report.ts, "values": report.values,
           "tail_bounds": [r.tail_bound for r in report.results],
           "vanishing": report.vanishing}, args.format, rows)


def cmd_mc(args):
    hist = montecarlo.mc_commutator_histogram(args.seed, args.samples, args.bins, args.map,
                                              args.threads)
    expected = montecarlo.expected_bin_probabilities(hist.edges, args.map, args.t)
    tv = montecarlo.total_variation(hist.frequencies, expected)
    rows = [["lo", "hi", "count", "frequency", "expected"]]
    rows += [[lo, hi, c, f, e] for lo, hi, c, f, e in
             zip(hist.edges[:-1], hist.edges[1:], hist.counts, hist.frequencies, expected)]
    rows.append(["total_variation", tv])
    _emit({**hist.to_json(), "t": args.t, "expected": expected, "total_variation": tv},
          args.format, rows)


# ----------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None)

    parser = _Parser(prog="heatcount", description="Character-theoretic counting and heat-kernel series.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, allow_abbrev=False)
        p.set_defaults(func=func)
        return p

    def group_arg(p):
        p.add_argument("--group", required=True, help="group spec, e.g. symmetric:3")

    p = add("count", cmd_count, "solutions of prod [x_j, y_j] prod z_j = target")
    group_arg(p)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--classes", default="", help="comma-separated class indices")
    p.add_argument("--target", type=int, default=0)

    p = add("pushforward", cmd_pushforward, "preimage counts of every class")
    group_arg(p)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--classes", default="")

    p = add("ncomm", cmd_ncomm, "solutions of [x_1, [x_2, ... x_n]] = target")
    group_arg(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", type=int, default=0)

    p = add("subgroups", cmd_subgroups, "solutions of prod x_j u_j x_j^-1 = e")
    group_arg(p)
    p.add_argument("--subgroup", action="append",
                   help="generator indices, 'e' or 'all'; repeat per factor")

    p = add("square", cmd_square, "solutions of prod [x_j, y_j] z^2 = e")
    group_arg(p)
    p.add_argument("--genus", type=int, required=True)

    p = add("klein", cmd_klein, "solutions of prod [x_j, y_j] w z w^-1 z = e")
    group_arg(p)
    p.add_argument("--genus", type=int, required=True)

    p = add("weighted", cmd_weighted, "character-weighted surface count")
    group_arg(p)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--classes", default="")
    p.add_argument("--weight", action="append", help="x<j>:<irrep label or index>")

    p = add("oracle", cmd_oracle, "exhaustive count for a word equation")
    group_arg(p)
    p.add_argument("--word", required=True, help="e.g. 'x1*y1*inv(x1)*inv(y1) => 0'")
    p.add_argument("--subgroup", action="append")

    p = add("chartable", cmd_chartable, "certified character table")
    group_arg(p)
    p.add_argument("--export", dest="export_path")
    p.add_argument("--import", dest="import_path")

    p = add("heat", cmd_heat, "heat-kernel values and summed kernels I(t)")
    group_arg(p)
    p.add_argument("--ts", default="1,0.1,0.01,0")
    p.add_argument("--generators", help="comma-separated element indices")
    p.add_argument("--family", choices=("surface", "ncomm", "subgroups"), default="surface")
    p.add_argument("--genus", type=int, default=1)
    p.add_argument("--classes", default="")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--subgroup", action="append")
    p.add_argument("--x", type=int)
    p.add_argument("--y", type=int, default=0)

    def root_arg(p):
        p.add_argument("--root", choices=("A1", "A2"), required=True)

    p = add("zeta", cmd_zeta, "Witten zeta partial sum")
    root_arg(p)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--cutoff", type=float)

    p = add("volume", cmd_volume, "moduli-space volume series")
    root_arg(p)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--point", action="append", help="A1:theta=<r> or A2:t1=<r>,t2=<r>")
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--cutoff", type=float)

    p = add("density", cmd_density, "push-forward density at a torus point")
    root_arg(p)
    p.add_argument("--kind", choices=("commutator", "subgroup", "ncomm"), default="commutator")
    p.add_argument("--point", required=True)
    p.add_argument("--genus", type=int, default=1)
    p.add_argument("--t", type=float, default=0.01)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--cutoff", type=float)
    p.add_argument("--slots", help="comma-separated torus|full-group|trivial")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--quadrature", type=int, default=256)

    p = add("vanishing", cmd_vanishing, "heat kernel H(t, c, e) along decreasing t")
    root_arg(p)
    p.add_argument("--point", required=True)
    p.add_argument("--ts", default="0.5,0.1,0.02")
    p.add_argument("--tol", type=float, default=1e-10)

    p = add("mc", cmd_mc, "Monte-Carlo histogram of SU(2) commutator angles")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--map", choices=montecarlo.MAPS, default="commutator")
    p.add_argument("--t", type=float, default=0.005)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
        return 0
    except HeatCountError as exc:
        err = {"error": exc.kind, "message": str(exc), "exit_status": exc.exit_status}
        status = exc.exit_status
    except (ValueError, KeyError) as exc:
        err = {"error": "usage", "message": str(exc), "exit_status": 2}
        status = 2
    except OSError as exc:
        err = {"error": "io", "message": str(exc), "exit_status": 2}
        status = 2
    except ArithmeticError as exc:
        err = {"error": "consistency", "message": str(exc), "exit_status": 3}
        status = 3
    print(json.dumps(err, sort_keys=True), file=sys.stderr)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
