"""Command-line interface: ``commdom <subcommand> ...``.

Exit status: 0 success, 1 usage error, 2 a verification check failed,
3 ``--require-exact`` was given and the solver ran out of budget.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .cache import ResultCache, cache_key
from .commuting import (
    commuting_graph,
    enhanced_power_graph,
    proper_commuting_graph,
    proper_enhanced_power_graph,
)
from .domination import (
    DominationResult,
    exact_domination_number,
    exact_total_domination_number,
)
from .formulas import (
    gen_dihedral_gamma,
    p4_gamma,
    pgl2_gamma,
    pq_gamma,
    predictions_for_group,
    psl2_gamma_t,
    quaternion_gamma_t,
    ratio_spectrum_witness,
    suzuki_gamma,
)
from .graphs import DEFAULT_MAX_VERTICES, connected_components, load_graph, save_graph, set_max_vertices
from .groups.core import (
    DEFAULT_MAX_ORDER,
    GroupTable,
    GroupValidationError,
    SizeLimitError,
    compute_invariants,
    load_group,
    save_group,
    set_max_order,
)
from .groups.families import FAMILIES, build
from .verify import (
    DEFAULT_SEED,
    corpus_up_to,
    load_corpus,
    run_family_sweep,
    strong_product_property_tests,
)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_INEXACT = 0, 1, 2, 3
GRAPH_KINDS = {
    "commuting": commuting_graph,
    "proper-commuting": proper_commuting_graph,
    "epg": enhanced_power_graph,
    "proper-epg": proper_enhanced_power_graph,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    try:
        return float(raw) if raw else default
    except ValueError:
        raise UsageError(f"{name} must be a number, got {raw!r}") from None


def _env_int(name: str, default: int) -> int:
    return int(_env_float(name, default))


# -- group and graph sources ---------------------------------------------------------------


def _add_source(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("source", nargs="?", help="group file (.json) or descriptor such as 'dihedral(8)'")
    p.add_argument("--family", nargs="+", metavar="ARG", help="family name followed by its parameters")


def _family_descriptor(tokens: Sequence[str]) -> str:
    name, *params = tokens
    if name not in FAMILIES:
        raise UsageError(f"unknown family {name!r}; choose from {', '.join(sorted(FAMILIES))}")
    return f"{name}({','.join(params)})"


def _resolve_group(args) -> tuple[GroupTable, str]:
    """The group plus a cache identity: its descriptor, or the file's content hash."""
    if args.family:
        text = _family_descriptor(args.family)
    elif args.source:
        text = args.source
    else:
        raise UsageError("give a group file, a descriptor, or --family NAME PARAMS")
    path = Path(text)
    if path.suffix == ".json" or path.is_file():
        try:
            g = load_group(path)
        except FileNotFoundError:
            raise UsageError(f"no such group file: {text}") from None
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        return g, f"file:{digest}"
    try:
        g = build(text)
    except (ValueError, TypeError) as exc:
        if isinstance(exc, (SizeLimitError, GroupValidationError)):
            raise
        raise UsageError(f"cannot build {text!r}: {exc}") from None
    return g, g.descriptor


# -- output helpers ----------------------------------------------------------------------


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=False))


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


# -- subcommands ----------------------------------------------------------------------


def cmd_make(args) -> int:
    g = build(_family_descriptor([args.family_name, *args.params]))
    if args.out:
        save_group(g, args.out)
        print(f"wrote {g.descriptor} (order {g.order}) to {args.out}")
    else:
        from .groups.core import group_to_json

        print(json.dumps(group_to_json(g)))
    return EXIT_OK


def cmd_invariants(args, cache: ResultCache) -> int:
    g, ident = _resolve_group(args)
    value, _ = cache.get_or_compute(
        cache_key(ident, "invariants"), lambda: compute_invariants(g).as_dict()
    )
    value = {"descriptor": g.descriptor, **value}
    if args.json:
        _print_json(value)
    else:
        for k, v in value.items():
            if k == "center":
                v = " ".join(g.label(x) for x in v)
            print(f"{k}: {v}")
    return EXIT_OK


def cmd_graph(args) -> int:
    g, _ = _resolve_group(args)
    graph = GRAPH_KINDS[args.kind](g)
    if args.out:
        save_graph(graph, args.out)
    summary = {
        "graph": graph.provenance,
        "vertices": graph.vertex_count,
        "edges": graph.edge_count(),
        "components": len(connected_components(graph)),
        "flags": sorted(graph.flags),
    }
    if args.json:
        _print_json({**summary, **graph.to_json()})
    else:
        for k, v in summary.items():
            print(f"{k}: {v}")
        if args.out:
            print(f"wrote {args.out}")
    return EXIT_OK


def cmd_gamma(args, cache: ResultCache) -> int:
    if args.graph:
        graph = load_graph(args.graph)
        ident = "graph:" + hashlib.sha256(Path(args.graph).read_bytes()).hexdigest()
    else:
        g, gid = _resolve_group(args)
        graph = GRAPH_KINDS[args.kind](g)
        ident = f"{gid}|{args.kind}"
    kind = "gamma_t" if args.total else "gamma"
    solver = exact_total_domination_number if args.total else exact_domination_number

    def compute() -> dict:
        return solver(graph, args.budget).to_json(include_time=True)

    value, _ = cache.get_or_compute(cache_key(ident, kind, args.budget), compute)
    res = DominationResult.from_json(value)
    labels = res.witness_labels(graph)
    if args.json:
        out = {"graph": graph.provenance, "vertices": graph.vertex_count, **res.to_json(include_time=args.show_time)}
        out["witness_labels"] = labels if res.witness is not None else None
        out["witness_ids"] = res.witness_ids(graph) if res.witness is not None else None
        _print_json(out)
    else:
        name = "gamma_t" if args.total else "gamma"
        print(f"graph: {graph.provenance} ({graph.vertex_count} vertices)")
        if res.exact and res.value is None:
            print(f"{name}: none (the graph has an isolated vertex)")
        else:
            print(f"{name}: {res.value if res.exact else 'unknown'}")
        print(f"method: {res.method}")
        if res.lower_bound is not None:
            print(f"bounds: [{res.lower_bound}, {res.upper_bound}]")
        print(f"nodes: {res.node_count}")
        if res.witness is not None:
            print(f"witness: {', '.join(labels)}")
        if args.show_time:
            print(f"time: {res.elapsed:.3f}s")
    if args.require_exact and not res.exact:
        return EXIT_INEXACT
    return EXIT_OK


_NUMERIC_FORMULAS = {
    "suzuki": (1, lambda a: suzuki_gamma(a[0])),
    "p4": (2, lambda a: p4_gamma(a[0], a[1])),
    "order-p4": (2, lambda a: p4_gamma(a[0], a[1])),
    "pq": (2, lambda a: pq_gamma(a[0], a[1])),
    "pgl2": (2, lambda a: pgl2_gamma(a[0], a[1])),
    "psl2": (1, lambda a: [psl2_gamma_t(a[0])]),
    "quaternion": (1, lambda a: [quaternion_gamma_t(a[0])]),
}


def cmd_formula(args) -> int:
    fid = args.formula_id
    if fid in _NUMERIC_FORMULAS:
        arity, fn = _NUMERIC_FORMULAS[fid]
        try:
            nums = [int(x) for x in args.params]
        except ValueError:
            raise UsageError(f"{fid} takes {arity} integer parameter(s)") from None
        if len(nums) != arity:
            raise UsageError(f"{fid} takes {arity} integer parameter(s)")
        preds = fn(nums)
    elif fid == "spectrum":
        if len(args.params) != 1:
            raise UsageError("spectrum takes k")
        spec, ratio = ratio_spectrum_witness(int(args.params[0]))
        out = {"group": spec.descriptor, "ratio": str(ratio)}
        if args.json:
            _print_json(out)
        else:
            print(f"{spec.descriptor}: gamma / |G| = {ratio}")
        return EXIT_OK
    elif fid == "gendihedral":
        if len(args.params) != 1:
            raise UsageError("gendihedral takes the descriptor of the abelian base, e.g. 'abelian(3,3)'")
        preds = [gen_dihedral_gamma(build(args.params[0]))]
    else:
        if args.params and not args.source and not args.family:
            args.source = args.params[0]
        g, _ = _resolve_group(args)
        preds = [p for p in predictions_for_group(g, args.budget) if fid == "all" or p.theorem_id == fid]
        if not preds:
            raise UsageError(f"unknown formula id {fid!r}")
    if args.json:
        _print_json([p.to_json() for p in preds])
    else:
        for p in preds:
            if p.applicable:
                print(f"{p.theorem_id}: {p.kind} = {_fmt(p.value)}")
            else:
                print(f"{p.theorem_id}: not applicable ({p.reason})")
    return EXIT_OK


def _write_report(report, args) -> None:
    if args.json_out:
        Path(args.json_out).write_text(json.dumps(report, indent=1) + "\n", encoding="utf-8")


def _print_sweep(rep) -> None:
    s = rep.summary
    print(f"corpus: {rep.corpus} ({s['groups']} groups)")
    print(f"checks: {s['pass']} pass, {s['fail']} fail, {s['bounds_only']} bounds only, {s['skipped']} not applicable")
    print(f"max gamma/|G|: {rep.max_ratio} at {', '.join(rep.max_ratio_groups)}")
    hits = [k for k, v in rep.spectrum_hits.items() if v]
    print(f"spectrum k/(2k-1) hit for k in: {', '.join(hits)}")
    if rep.coverage_missing:
        print(f"formula ids never applicable: {', '.join(rep.coverage_missing)}")
    for c in rep.failures:
        print(f"FAIL {c.theorem_id} on {c.group_descriptor}: predicted {c.predicted}, computed {c.computed} {c.note}".rstrip())


def cmd_verify(args) -> int:
    name, entries = load_corpus(args.corpus)
    rep = run_family_sweep(entries, args.budget, args.workers, name)
    _print_sweep(rep)
    props = []
    if not args.no_properties:
        for factors, trials in ((2, args.trials), (3, args.trials3)):
            pr = strong_product_property_tests(args.seed, trials, factors, args.budget)
            props.append(pr)
            counts = ", ".join(f"{k} {v}" for k, v in pr.law_counts.items())
            print(f"strong products, {factors} factors, {trials} trials: {len(pr.counterexamples)} counterexamples ({counts})")
            for ce in pr.counterexamples:
                print(f"COUNTEREXAMPLE {ce}")
    if args.csv_out:
        Path(args.csv_out).write_text(rep.to_csv(), encoding="utf-8")
    _write_report({"sweep": rep.to_json(args.show_time), "properties": [p.to_json() for p in props]}, args)
    failed = rep.failures or any(p.counterexamples for p in props)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_sweep(args) -> int:
    name, entries = corpus_up_to(args.max_order, args.corpus)
    rep = run_family_sweep(entries, args.budget, args.workers, name)
    for r in rep.records:
        gt = r.gamma_t if r.gamma_t is not None else ("none" if r.exact else "?")
        print(f"{r.descriptor:45s} order {r.order:4d}  gamma {r.gamma}  gamma_t {gt}  ratio {r.ratio}")
    _print_sweep(rep)
    if args.csv_out:
        Path(args.csv_out).write_text(rep.to_csv(), encoding="utf-8")
    _write_report(rep.to_json(args.show_time), args)
    return EXIT_VERIFY if rep.failures else EXIT_OK


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=float, default=None, help="solver seconds per graph (env COMMDOM_BUDGET, default 60)")
    common.add_argument("--cache-dir", default=None, help="result cache directory (env COMMDOM_CACHE_DIR)")
    common.add_argument("--order-cap", dest="cap_order", type=int, default=None, help="group order cap (env COMMDOM_MAX_ORDER)")
    common.add_argument("--max-vertices", type=int, default=None, help="graph size cap (env COMMDOM_MAX_VERTICES)")
    common.add_argument("--show-time", action="store_true", help="include wall-clock times in the output")

    parser = _Parser(prog="commdom", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("make", parents=[common], help="build a group and write its table")
    p.add_argument("family_name", metavar="family")
    p.add_argument("params", nargs="*")
    p.add_argument("--out")

    p = sub.add_parser("invariants", parents=[common], help="group invariants")
    _add_source(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("graph", parents=[common], help="build a group graph")
    _add_source(p)
    p.add_argument("--kind", choices=sorted(GRAPH_KINDS), default="proper-commuting")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("gamma", parents=[common], help="exact (total) domination number")
    _add_source(p)
    p.add_argument("--graph", help="graph file instead of a group")
    p.add_argument("--kind", choices=sorted(GRAPH_KINDS), default="proper-commuting")
    p.add_argument("--total", action="store_true")
    p.add_argument("--require-exact", action="store_true")
    p.add_argument("--json", action="store_true")

    for name in ("formula", "suzuki-formula"):
        p = sub.add_parser(name, parents=[common], help="evaluate a closed-form prediction")
        if name == "formula":
            p.add_argument("formula_id")
        p.add_argument("params", nargs="*")
        p.add_argument("--family", nargs="+", metavar="ARG")
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="check every formula across a corpus")
    p.add_argument("--corpus", help="corpus manifest (default: the bundled one)")
    p.add_argument("--json", dest="json_out", metavar="FILE")
    p.add_argument("--csv", dest="csv_out", metavar="FILE")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trials", type=int, default=200, help="two-factor strong product trials")
    p.add_argument("--trials3", type=int, default=50, help="three-factor strong product trials")
    p.add_argument("--workers", type=int, default=None, help="worker processes (env COMMDOM_WORKERS)")
    p.add_argument("--no-properties", action="store_true", help="skip the strong product trials")

    p = sub.add_parser("sweep", parents=[common], help="solve every corpus group up to an order")
    p.add_argument("--max-order", dest="max_order", type=int, default=200)
    p.add_argument("--corpus")
    p.add_argument("--json", dest="json_out", metavar="FILE")
    p.add_argument("--csv", dest="csv_out", metavar="FILE")
    p.add_argument("--workers", type=int, default=None)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.budget is None:
            args.budget = _env_float("COMMDOM_BUDGET", 60.0)
        if getattr(args, "workers", 0) is None:
            args.workers = _env_int("COMMDOM_WORKERS", 1)
        cap = args.cap_order if args.cap_order is not None else _env_int("COMMDOM_MAX_ORDER", DEFAULT_MAX_ORDER)
        set_max_order(cap)
        vcap = args.max_vertices if args.max_vertices is not None else _env_int("COMMDOM_MAX_VERTICES", DEFAULT_MAX_VERTICES)
        set_max_vertices(vcap)
        cache = ResultCache.from_env(args.cache_dir)
        if args.command == "suzuki-formula":
            args.formula_id, args.source = "suzuki", None
            return cmd_formula(args)
        handlers = {
            "make": lambda: cmd_make(args),
            "invariants": lambda: cmd_invariants(args, cache),
            "graph": lambda: cmd_graph(args),
            "gamma": lambda: cmd_gamma(args, cache),
            "formula": lambda: cmd_formula(args),
            "verify": lambda: cmd_verify(args),
            "sweep": lambda: cmd_sweep(args),
        }
        if args.command == "formula":
            args.source = None
        return handlers[args.command]()
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"commdom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SizeLimitError, GroupValidationError, ValueError) as exc:
        print(f"commdom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
