"""Check every applicable formula against the exact solver, group by group and across a corpus."""

from __future__ import annotations

import csv
import io
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Optional, Sequence

from .commuting import proper_commuting_graph, proper_enhanced_power_graph
from .domination import (
    DominationResult,
    exact_domination_number,
    exact_total_domination_number,
)
from .formulas import (
    EXACT_GAMMA,
    EXACT_GAMMA_T,
    NONEXISTENCE,
    UPPER,
    FormulaPrediction,
    equality_fingerprint,
    predictions_for_group,
    ratio_spectrum_witness,
)
from .graphs import (
    SimpleGraph,
    complete,
    dominating_vertices,
    proper_graph,
    strong_product_all,
)
from .groups.core import GroupTable, is_ac_group
from .groups.families import build
from .oracles import brute_force_gamma, has_dominating_set_of_size

PASS, FAIL, SKIPPED, BOUNDS_ONLY = "pass", "fail", "skipped", "bounds_only"
STATUSES = (PASS, FAIL, SKIPPED, BOUNDS_ONLY)
DEFAULT_BUDGET = 60.0
DEFAULT_SEED = 20240613

# ids whose bound refers to the total domination number
_TOTAL_BOUNDS = {"total-upper-cyclic-cover", "nilpotent-total-upper"}


def _jsonable(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else str(v)
    return v


@dataclass(frozen=True)
class TheoremCheck:
    theorem_id: str
    group_descriptor: str
    applicable: bool
    reason: str
    predicted: object
    computed: object
    status: str
    note: str = ""
    elapsed: float = 0.0

    def to_json(self, include_time: bool = False) -> dict:
        out = {
            "theorem_id": self.theorem_id,
            "group_descriptor": self.group_descriptor,
            "applicable": self.applicable,
            "reason": self.reason,
            "predicted": _jsonable(self.predicted),
            "computed": _jsonable(self.computed),
            "status": self.status,
            "note": self.note,
        }
        if include_time:
            out["elapsed"] = self.elapsed
        return out

    @classmethod
    def from_json(cls, obj: dict) -> TheoremCheck:
        pred = obj["predicted"]
        if isinstance(pred, str) and "/" in pred:
            try:
                pred = Fraction(pred)
            except ValueError:
                pass
        return cls(
            obj["theorem_id"],
            obj["group_descriptor"],
            obj["applicable"],
            obj["reason"],
            pred,
            obj["computed"],
            obj["status"],
            obj.get("note", ""),
            obj.get("elapsed", 0.0),
        )


@dataclass(frozen=True)
class GroupRecord:
    descriptor: str
    order: int
    center_size: int
    gamma: Optional[int]
    gamma_t: Optional[int]
    gamma_bounds: tuple[int, int]
    gamma_t_bounds: Optional[tuple[int, int]]
    exact: bool
    fingerprint: Optional[str]

    @property
    def ratio(self) -> Optional[Fraction]:
        if self.gamma is None:
            return None
        return Fraction(self.gamma, self.order)

    def to_json(self) -> dict:
        out = asdict(self)
        out["gamma_bounds"] = list(self.gamma_bounds)
        out["gamma_t_bounds"] = list(self.gamma_t_bounds) if self.gamma_t_bounds else None
        out["ratio"] = _jsonable(self.ratio)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> GroupRecord:
        return cls(
            obj["descriptor"],
            obj["order"],
            obj["center_size"],
            obj["gamma"],
            obj["gamma_t"],
            tuple(obj["gamma_bounds"]),
            tuple(obj["gamma_t_bounds"]) if obj["gamma_t_bounds"] else None,
            obj["exact"],
            obj["fingerprint"],
        )


@dataclass(frozen=True)
class GroupOutcome:
    record: Optional[GroupRecord]
    checks: list[TheoremCheck]


# -- one group -----------------------------------------------------------------------


def _compare(pred: FormulaPrediction, res: DominationResult, descriptor: str) -> TheoremCheck:
    def check(status, computed, note=""):
        return TheoremCheck(pred.theorem_id, descriptor, True, pred.reason, pred.value, computed, status, note)

    if pred.kind == NONEXISTENCE:
        if not res.exact:
            return check(BOUNDS_ONLY, None, "total domination search exceeded budget")
        absent = res.value is None
        ok = absent == bool(pred.value)
        note = ""
        if pred.theorem_id == "order2-centralizer-structure":
            ok = ok and pred.detail["verified"]
            note = pred.detail["check"]
        return check(PASS if ok else FAIL, "absent" if absent else res.value, note)

    if pred.kind in (EXACT_GAMMA, EXACT_GAMMA_T):
        if res.exact:
            if res.value is None:
                return check(FAIL, "absent", "predicted a value but total domination does not exist")
            return check(PASS if res.value == pred.value else FAIL, res.value)
        contradicted = not (res.lower_bound <= pred.value <= res.upper_bound)
        return check(BOUNDS_ONLY, [res.lower_bound, res.upper_bound], "contradicted by bounds" if contradicted else "")

    bound = pred.value
    if pred.theorem_id == "upper-log-greedy":
        bound = pred.detail["floor"]
    if res.exact and res.value is None:
        return check(FAIL, "absent", "bound on a total domination number that does not exist")
    if not res.exact:
        lo, hi = res.lower_bound, res.upper_bound
        bad = lo > bound if pred.kind == UPPER else hi < bound
        return check(BOUNDS_ONLY, [lo, hi], "contradicted by bounds" if bad else "")
    ok = res.value <= bound if pred.kind == UPPER else res.value >= bound
    note = ""
    if pred.theorem_id == "upper-half-noncentral":
        tight = res.value == bound
        expected = pred.detail["equality_case"] is not None
        note = f"equality {'holds' if tight else 'fails'}; fingerprint {pred.detail['equality_case']}"
        ok = ok and tight == expected
    return check(PASS if ok else FAIL, res.value, note)


def run_theorem_suite(g: GroupTable, budget: float = DEFAULT_BUDGET) -> GroupOutcome:
    """Solve ``gamma`` and ``gamma_t`` of the proper commuting graph and check every prediction."""
    desc = g.descriptor
    preds = predictions_for_group(g, budget)
    checks: list[TheoremCheck] = []
    record = None
    gamma = total = None
    if not g.is_abelian:
        graph = proper_commuting_graph(g)
        gamma = exact_domination_number(graph, budget)
        total = exact_total_domination_number(graph, budget)
        record = GroupRecord(
            desc,
            g.order,
            g.order - graph.vertex_count,
            gamma.value,
            total.value,
            (gamma.lower_bound, gamma.upper_bound),
            (total.lower_bound, total.upper_bound) if total.lower_bound is not None else None,
            gamma.exact and total.exact,
            equality_fingerprint(g),
        )
    epg = None
    for pred in preds:
        if not pred.applicable:
            checks.append(TheoremCheck(pred.theorem_id, desc, False, pred.reason, None, None, SKIPPED))
            continue
        start = time.monotonic()
        if pred.detail.get("graph") == "proper-epg":
            if epg is None:
                epg = exact_domination_number(proper_enhanced_power_graph(g), budget)
            res = epg
        elif pred.kind in (EXACT_GAMMA_T, NONEXISTENCE) or pred.theorem_id in _TOTAL_BOUNDS:
            res = total
        else:
            res = gamma
        chk = _compare(pred, res, desc)
        if pred.detail.get("implies_ac") and chk.status == PASS and not is_ac_group(g):
            chk = TheoremCheck(chk.theorem_id, desc, True, chk.reason, chk.predicted, chk.computed, FAIL, "group is not AC")
        checks.append(
            TheoremCheck(**{**chk.__dict__, "elapsed": time.monotonic() - start})
        )
    return GroupOutcome(record, checks)


# -- corpus sweep ---------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusEntry:
    descriptor: str
    budget: Optional[float] = None


def load_corpus(path: Optional[str | Path] = None) -> tuple[str, list[CorpusEntry]]:
    if path is None:
        text = resources.files("commdom").joinpath("data/default_corpus.json").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    obj = json.loads(text)
    return obj.get("name", str(path)), [CorpusEntry(e["descriptor"], e.get("budget")) for e in obj["entries"]]


def corpus_up_to(max_order: int, path: Optional[str | Path] = None) -> tuple[str, list[CorpusEntry]]:
    name, entries = load_corpus(path)
    kept = [e for e in entries if build(e.descriptor).order <= max_order]
    return f"{name} (order <= {max_order})", kept


@dataclass
class SweepReport:
    corpus: str
    budget: float
    records: list[GroupRecord]
    checks: list[TheoremCheck]
    summary: dict = field(default_factory=dict)
    max_ratio: Optional[str] = None
    max_ratio_groups: list[str] = field(default_factory=list)
    spectrum_hits: dict = field(default_factory=dict)
    coverage_missing: list[str] = field(default_factory=list)

    @property
    def failures(self) -> list[TheoremCheck]:
        return [c for c in self.checks if c.status == FAIL]

    def to_json(self, include_time: bool = False) -> dict:
        return {
            "corpus": self.corpus,
            "budget": self.budget,
            "summary": self.summary,
            "max_ratio": self.max_ratio,
            "max_ratio_groups": self.max_ratio_groups,
            "spectrum_hits": self.spectrum_hits,
            "coverage_missing": self.coverage_missing,
            "records": [r.to_json() for r in self.records],
            "checks": [c.to_json(include_time) for c in self.checks],
        }

    @classmethod
    def from_json(cls, obj: dict) -> SweepReport:
        return cls(
            obj["corpus"],
            obj["budget"],
            [GroupRecord.from_json(r) for r in obj["records"]],
            [TheoremCheck.from_json(c) for c in obj["checks"]],
            obj["summary"],
            obj["max_ratio"],
            obj["max_ratio_groups"],
            obj["spectrum_hits"],
            obj["coverage_missing"],
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["group", "order", "gamma", "gamma_t", "ratio", "gamma_lower", "gamma_upper"])
        for r in self.records:
            gt = r.gamma_t if r.gamma_t is not None else ("absent" if r.exact else "")
            w.writerow([r.descriptor, r.order, r.gamma, gt, _jsonable(r.ratio), *r.gamma_bounds])
        return buf.getvalue()


def _suite_for(descriptor: str, budget: float) -> GroupOutcome:
    return run_theorem_suite(build(descriptor), budget)


# every formula id that should be applicable somewhere in a corpus of constructible groups
FORMULA_IDS = (
    "lower-centralizer",
    "upper-cyclic-cover",
    "upper-half-noncentral",
    "upper-log-greedy",
    "gendihedral-exact",
    "gendihedral-exact-elementary",
    "order2-centralizer-structure",
    "total-existence-gendihedral",
    "total-existence-centralizer",
    "total-upper-cyclic-cover",
    "ac-exact",
    "ac-total-exact",
    "two-prime-index",
    "two-prime-index-total",
    "two-nonabelian-centralizers-total",
    "central-codim2",
    "central-codim2-total",
    "pq-exact",
    "pq-total",
    "pgl2-exact",
    "pgl2-total",
    "psl2-total",
    "quaternion-total",
    "nilpotent-min",
    "nilpotent-total-upper",
    "nilpotent-total-exact",
    "nilpotent-order8",
    "epg-nilpotent-min",
)


def _corpus_checks(records: list[GroupRecord]) -> tuple[list[TheoremCheck], Optional[Fraction], list[str], dict]:
    """Ratio maximum and spectrum checks over the whole corpus."""
    out = []
    exact = [r for r in records if r.ratio is not None]
    best = max((r.ratio for r in exact), default=None)
    at_max = [r.descriptor for r in exact if r.ratio == best]
    ok = best == Fraction(2, 3) and all(r.fingerprint == "S3" for r in exact if r.ratio == best)
    out.append(
        TheoremCheck(
            "ratio-max",
            "corpus",
            True,
            "maximum of gamma / |G| over the corpus",
            "2/3",
            _jsonable(best),
            PASS if ok else FAIL,
            "attained at " + ", ".join(at_max),
        )
    )
    by_desc = {r.descriptor: r for r in records}
    hits = {}
    for k in range(2, 200):
        spec, ratio = ratio_spectrum_witness(k)
        r = by_desc.get(spec.descriptor)
        if r is None:
            if 4 * k - 2 > 200:
                break
            continue
        hit = r.ratio == ratio
        hits[str(k)] = hit
        out.append(
            TheoremCheck(
                "ratio-spectrum",
                spec.descriptor,
                True,
                f"k = {k}",
                str(ratio),
                _jsonable(r.ratio),
                PASS if hit else (BOUNDS_ONLY if r.ratio is None else FAIL),
            )
        )
    # ratios strictly between 1/2 and 1 must have the form k / (2k - 1); consistent, not proved
    for r in exact:
        if Fraction(1, 2) < r.ratio < 1:
            ok = (r.ratio / (2 * r.ratio - 1)).denominator == 1
            out.append(
                TheoremCheck(
                    "ratio-form",
                    r.descriptor,
                    True,
                    "ratio above 1/2",
                    "k/(2k-1)",
                    _jsonable(r.ratio),
                    PASS if ok else FAIL,
                    "consistent" if ok else "",
                )
            )
    return out, best, at_max, hits


def run_family_sweep(
    entries: Sequence[CorpusEntry],
    budget: float = DEFAULT_BUDGET,
    workers: int = 1,
    corpus_name: str = "custom",
) -> SweepReport:
    """Run the suite on every corpus group; the report order follows the corpus."""
    budgets = [e.budget if e.budget is not None else budget for e in entries]
    descs = [e.descriptor for e in entries]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_suite_for, descs, budgets))
    else:
        outcomes = [_suite_for(d, b) for d, b in zip(descs, budgets)]
    records = [o.record for o in outcomes if o.record is not None]
    checks = [c for o in outcomes for c in o.checks]
    extra, best, at_max, hits = _corpus_checks(records)
    checks += extra
    summary = {s: sum(1 for c in checks if c.status == s) for s in STATUSES}
    summary["groups"] = len(entries)
    seen = {c.theorem_id for c in checks if c.applicable}
    return SweepReport(
        corpus_name,
        budget,
        records,
        checks,
        summary,
        _jsonable(best) if best is not None else None,
        at_max,
        hits,
        [t for t in FORMULA_IDS if t not in seen],
    )


# -- strong products -------------------------------------------------------------------


@dataclass
class PropertyReport:
    seed: int
    trials: int
    factors: int
    law_counts: dict
    counterexamples: list[str]
    brute_force_products: int

    def to_json(self) -> dict:
        return asdict(self)


def random_planted_graph(rng: random.Random, max_n: int = 7) -> SimpleGraph:
    """Random non-complete graph on 3..max_n vertices whose vertex 0 is universal."""
    while True:
        n = rng.randint(3, max_n)
        edges = [(0, v) for v in range(1, n)]
        edges += [(u, v) for u, v in combinations(range(1, n), 2) if rng.random() < 0.5]
        g = SimpleGraph.from_edges(n, edges, provenance="random")
        if g.edge_count() < n * (n - 1) // 2:
            return g


def _gamma_checked(g: SimpleGraph, total: bool, budget: float, limit: int = 200_000) -> tuple[Optional[int], bool]:
    """Exact value from the solver, re-proved by enumeration when that is affordable."""
    res = (exact_total_domination_number if total else exact_domination_number)(g, budget)
    if not res.exact:
        raise RuntimeError("property-test graph exceeded the solver budget")
    if res.value is None or res.value <= 1:
        return res.value, True
    n, k = g.vertex_count, res.value - 1
    if comb(n, k) > limit:
        return res.value, False
    if has_dominating_set_of_size(g, k, total):
        raise AssertionError("solver optimum beaten by enumeration")
    return res.value, True


def strong_product_property_tests(
    seed: int = DEFAULT_SEED, trials: int = 200, factors: int = 2, budget: float = DEFAULT_BUDGET
) -> PropertyReport:
    """Random planted-universal factors; factor values by enumeration, product values by the solver."""
    rng = random.Random(seed)
    counts = {"dom-product": 0, "gamma-min": 0, "complete-factor": 0, "total-upper": 0, "total-exact": 0}
    bad: list[str] = []
    brute = 0
    for trial in range(trials):
        gs = [random_planted_graph(rng) for _ in range(factors)]
        prod = strong_product_all(gs)
        tag = f"trial {trial}: " + "; ".join(json.dumps(g.to_json()["edges"]) + f" n={g.vertex_count}" for g in gs)

        sizes = [g.vertex_count for g in gs]
        doms = [dominating_vertices(g).members() for g in gs]
        expected = set()
        for combo in _product_indices(doms):
            expected.add(_flat(combo, sizes))
        if set(dominating_vertices(prod).members()) != expected:
            bad.append(tag + " | dominating vertices of product")
        counts["dom-product"] += 1

        proper_factors = [proper_graph(g) for g in gs]
        factor_gamma = [brute_force_gamma(p) for p in proper_factors]
        factor_total = [brute_force_gamma(p, total=True) for p in proper_factors]
        m = min(factor_gamma)
        proper_prod = proper_graph(prod)
        got, proved = _gamma_checked(proper_prod, False, budget)
        brute += proved
        if got != m:
            bad.append(tag + f" | gamma {got} != min {m}")
        counts["gamma-min"] += 1

        kn = complete(rng.randint(1, 3))
        with_k = proper_graph(strong_product_all([gs[0], kn]))
        got_k, _ = _gamma_checked(with_k, False, budget)
        if got_k != factor_gamma[0]:
            bad.append(tag + f" | complete factor K{kn.vertex_count}: {got_k} != {factor_gamma[0]}")
        counts["complete-factor"] += 1

        got_t, proved_t = _gamma_checked(proper_prod, True, budget)
        brute += proved_t
        if got_t is None or got_t > m + 1:
            bad.append(tag + f" | gamma_t {got_t} > {m + 1}")
        counts["total-upper"] += 1
        if all(t is None or t > gm for t, gm in zip(factor_total, factor_gamma)):
            if got_t != m + 1:
                bad.append(tag + f" | gamma_t {got_t} != {m + 1}")
            counts["total-exact"] += 1
    return PropertyReport(seed, trials, factors, counts, bad, brute)


def _product_indices(lists: list[list[int]]):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for rest in _product_indices(lists[1:]):
            yield (head,) + rest


def _flat(combo: tuple[int, ...], sizes: list[int]) -> int:
    idx = 0
    for c, s in zip(combo, sizes):
        idx = idx * s + c
    return idx
