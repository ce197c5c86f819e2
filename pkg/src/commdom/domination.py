"""Exact and greedy domination / total domination with certificates.

Both problems are covers by neighbourhoods: closed ones for domination, open
ones for total domination. Neighbourhoods are symmetric, so the sets able to
cover a vertex ``e`` are indexed by the neighbourhood of ``e`` itself; the
search never materialises a separate incidence structure.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .graphs import SimpleGraph, connected_components
from .masks import SubsetMask, iter_bits

DOMINATION = "domination"
TOTAL = "total_domination"
EXACT = "exact"
GREEDY_ONLY = "greedy_upper_only"
FORMULA = "formula"

DEFAULT_BUDGET = 60.0
_CLOCK_EVERY = 256


@dataclass(frozen=True)
class DominationResult:
    kind: str
    value: Optional[int]
    witness: Optional[SubsetMask]
    method: str
    lower_bound: Optional[int]
    upper_bound: Optional[int]
    elapsed: float = 0.0
    node_count: int = 0

    @property
    def exact(self) -> bool:
        return self.method == EXACT

    @property
    def exists(self) -> bool:
        """False only for a total domination problem with an isolated vertex."""
        return not (self.kind == TOTAL and self.method == EXACT and self.value is None)

    def witness_labels(self, g: SimpleGraph) -> list[str]:
        return [g.label(v) for v in self.witness] if self.witness is not None else []

    def witness_ids(self, g: SimpleGraph) -> list[int]:
        return [g.original_id(v) for v in self.witness] if self.witness is not None else []

    def to_json(self, include_time: bool = True) -> dict:
        out = {
            "kind": self.kind,
            "value": self.value,
            "witness": self.witness.members() if self.witness is not None else None,
            "universe": self.witness.universe_size if self.witness is not None else None,
            "method": self.method,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "node_count": self.node_count,
        }
        if include_time:
            out["elapsed"] = self.elapsed
        return out

    @classmethod
    def from_json(cls, obj: dict) -> DominationResult:
        witness = None
        if obj.get("witness") is not None:
            witness = SubsetMask.from_indices(obj["universe"], obj["witness"])
        return cls(
            kind=obj["kind"],
            value=obj["value"],
            witness=witness,
            method=obj["method"],
            lower_bound=obj["lower_bound"],
            upper_bound=obj["upper_bound"],
            elapsed=obj.get("elapsed", 0.0),
            node_count=obj.get("node_count", 0),
        )


class InexactResult(Exception):
    """A quantity could only be bracketed within the time budget."""

    def __init__(self, lower, upper):
        self.lower, self.upper = lower, upper
        super().__init__(f"only bounded: [{lower}, {upper}]")


# -- certificates -----------------------------------------------------------------


def is_dominating_set(g: SimpleGraph, s: SubsetMask) -> bool:
    covered = 0
    for v in s:
        covered |= g.closed(v)
    return covered == g.full_bits


def is_total_dominating_set(g: SimpleGraph, s: SubsetMask) -> bool:
    covered = 0
    for v in s:
        covered |= g.rows[v]
    return covered == g.full_bits


# -- greedy -------------------------------------------------------------------------


def _greedy_cover(sets: list[int], universe: int) -> Optional[list[int]]:
    uncovered = universe
    chosen = []
    while uncovered:
        best_v, best_gain = -1, 0
        for v in iter_bits(universe):
            gain = (sets[v] & uncovered).bit_count()
            if gain > best_gain:
                best_v, best_gain = v, gain
        if best_v < 0:
            return None
        chosen.append(best_v)
        uncovered &= ~sets[best_v]
    return chosen


def greedy_dominating_set(g: SimpleGraph) -> SubsetMask:
    """Repeatedly take the vertex dominating the most undominated vertices (least index on ties)."""
    sets = [g.closed(v) for v in range(g.vertex_count)]
    chosen = _greedy_cover(sets, g.full_bits) or []
    return SubsetMask.from_indices(g.vertex_count, chosen)


def greedy_total_dominating_set(g: SimpleGraph) -> Optional[SubsetMask]:
    chosen = _greedy_cover(list(g.rows), g.full_bits)
    return None if chosen is None else SubsetMask.from_indices(g.vertex_count, chosen)


def greedy_guarantee(g: SimpleGraph) -> float:
    """``n (1 + ln(delta + 1)) / (delta + 1)`` with ``delta`` the minimum degree."""
    if g.vertex_count == 0:
        return 0.0
    delta = min(g.degree(v) for v in range(g.vertex_count))
    return g.vertex_count * (1 + math.log(delta + 1)) / (delta + 1)


# -- branch and bound -----------------------------------------------------------------


class _OutOfTime(Exception):
    pass


class _CoverSearch:
    """Minimum cover of ``universe`` by the sets ``sets[v]`` for ``v`` in ``universe``."""

    def __init__(self, sets: list[int], universe: int, deadline: float):
        self.sets = sets
        self.universe = universe
        self.deadline = deadline
        self.nodes = 0
        self.best: Optional[list[int]] = None

    def lower_bound(self, uncovered: int, allowed: int) -> int:
        # elements no two of which share a coverer need distinct sets
        sets = self.sets
        elems = sorted(iter_bits(uncovered), key=lambda e: ((sets[e] & allowed).bit_count(), e))
        used = 0
        packing = 0
        for e in elems:
            c = sets[e] & allowed
            if not c & used:
                used |= c
                packing += 1
        max_gain = max((sets[v] & uncovered).bit_count() for v in iter_bits(allowed))
        if max_gain == 0:
            return len(elems) + 1
        return max(packing, -(-uncovered.bit_count() // max_gain))

    def solve(self) -> tuple[Optional[list[int]], int]:
        """Return ``(optimum or None if infeasible, root lower bound)``.

        On timeout raises :class:`_OutOfTime` with ``self.best`` holding the best
        cover found so far.
        """
        sets = self.sets
        for e in iter_bits(self.universe):
            if not sets[e] & self.universe:
                return None, 0
        greedy = _greedy_cover(sets, self.universe)
        self.best = greedy
        self.root_lb = self.lower_bound(self.universe, self.universe)
        if self.root_lb < len(greedy):
            self._search(self.universe, self.universe, [])
        return self.best, self.root_lb

    def _search(self, uncovered: int, allowed: int, chosen: list[int]) -> None:
        self.nodes += 1
        if self.nodes % _CLOCK_EVERY == 0 and time.monotonic() > self.deadline:
            raise _OutOfTime
        if not uncovered:
            if len(chosen) < len(self.best):
                self.best = list(chosen)
            return
        if len(chosen) + 1 >= len(self.best):
            return
        if len(chosen) + self.lower_bound(uncovered, allowed) >= len(self.best):
            return
        sets = self.sets
        pivot, pivot_count = -1, None
        for e in iter_bits(uncovered):
            c = (sets[e] & allowed).bit_count()
            if pivot_count is None or c < pivot_count:
                pivot, pivot_count = e, c
                if c <= 1:
                    break
        if not pivot_count:
            return
        cands = sorted(
            ((sets[v] & uncovered, v) for v in iter_bits(sets[pivot] & allowed)),
            key=lambda t: (-t[0].bit_count(), t[1]),
        )
        kept: list[tuple[int, int]] = []
        for cov, v in cands:
            # drop v when an earlier candidate covers a superset; candidates are
            # sorted by decreasing coverage so any dominator comes first
            if any(cov & ~kc == 0 for kc, _ in kept):
                continue
            kept.append((cov, v))
        for cov, v in kept:
            chosen.append(v)
            self._search(uncovered & ~cov, allowed, chosen)
            chosen.pop()
            allowed &= ~(1 << v)


def _solve(g: SimpleGraph, kind: str, budget: float) -> DominationResult:
    start = time.monotonic()
    deadline = start + budget
    n = g.vertex_count
    sets = [g.closed(v) for v in range(n)] if kind == DOMINATION else list(g.rows)
    if kind == TOTAL and any(r == 0 for r in g.rows):
        return DominationResult(kind, None, None, EXACT, None, None, time.monotonic() - start, 0)
    chosen: list[int] = []
    lower = upper = 0
    nodes = 0
    exact = True
    for comp in connected_components(g):
        search = _CoverSearch(sets, comp.bits, deadline)
        try:
            best, _ = search.solve()
            assert best is not None
            lower += len(best)
            upper += len(best)
            chosen.extend(best)
        except _OutOfTime:
            exact = False
            lower += search.root_lb
            upper += len(search.best)
            chosen.extend(search.best)
        nodes += search.nodes
    witness = SubsetMask.from_indices(n, chosen)
    elapsed = time.monotonic() - start
    if exact:
        return DominationResult(kind, len(chosen), witness, EXACT, lower, upper, elapsed, nodes)
    return DominationResult(kind, None, witness, GREEDY_ONLY, lower, upper, elapsed, nodes)


def exact_domination_number(g: SimpleGraph, budget: float = DEFAULT_BUDGET) -> DominationResult:
    """Minimum dominating set by component-wise branch and bound.

    When the budget runs out the result carries ``method="greedy_upper_only"``,
    no value, and the best certified bounds.
    """
    return _solve(g, DOMINATION, budget)


def exact_total_domination_number(g: SimpleGraph, budget: float = DEFAULT_BUDGET) -> DominationResult:
    """Minimum total dominating set; ``value`` is None when a vertex is isolated."""
    return _solve(g, TOTAL, budget)


def domination_ratio(group, budget: float = DEFAULT_BUDGET) -> Fraction:
    """``gamma(C**(G)) / |G|`` as an exact fraction.

    Raises :class:`InexactResult` carrying the bracketing fractions when the
    solver runs out of budget.
    """
    from .commuting import proper_commuting_graph

    if group.is_abelian:
        raise ValueError("domination ratio needs a non-abelian group")
    res = exact_domination_number(proper_commuting_graph(group), budget)
    if not res.exact:
        raise InexactResult(Fraction(res.lower_bound, group.order), Fraction(res.upper_bound, group.order))
    return Fraction(res.value, group.order)
