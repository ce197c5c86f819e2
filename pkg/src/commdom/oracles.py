"""Exhaustive reference computations, independent of the branch-and-bound solver."""

from __future__ import annotations

from itertools import combinations
from typing import Optional

from .graphs import SimpleGraph


def brute_force_gamma(g: SimpleGraph, total: bool = False, limit: Optional[int] = None) -> Optional[int]:
    """Smallest ``k`` such that some ``k``-subset dominates (totally, if asked).

    Returns None when no such set exists (or none of size ``<= limit``).
    """
    n = g.vertex_count
    if n == 0:
        return 0
    full = (1 << n) - 1
    nbhd = [g.rows[v] if total else g.rows[v] | (1 << v) for v in range(n)]
    top = n if limit is None else min(n, limit)
    for k in range(1, top + 1):
        for subset in combinations(range(n), k):
            covered = 0
            for v in subset:
                covered |= nbhd[v]
            if covered == full:
                return k
    return None


def has_dominating_set_of_size(g: SimpleGraph, k: int, total: bool = False) -> bool:
    n = g.vertex_count
    full = (1 << n) - 1
    nbhd = [g.rows[v] if total else g.rows[v] | (1 << v) for v in range(n)]
    for subset in combinations(range(n), k):
        covered = 0
        for v in subset:
            covered |= nbhd[v]
        if covered == full:
            return True
    return False
