"""Graphs defined by a group: commuting and enhanced power graphs, and their proper parts."""

from __future__ import annotations

import numpy as np

from .graphs import SimpleGraph, induced_subgraph, proper_graph
from .groups.core import GroupTable, center, maximal_cyclic_subgroups
from .masks import SubsetMask


def _labels(g: GroupTable) -> tuple[str, ...]:
    return tuple(g.label(i) for i in range(g.order))


def commuting_graph(g: GroupTable) -> SimpleGraph:
    return SimpleGraph.from_adjacency(
        g.commute, _labels(g), range(g.order), provenance=f"commuting({g.descriptor})"
    )


def proper_commuting_graph(g: GroupTable) -> SimpleGraph:
    """Commuting graph induced on the noncentral elements.

    Vertex ids are the original element indices. For an abelian group the
    result is empty and carries the ``abelian`` flag.
    """
    full = commuting_graph(g)
    out = induced_subgraph(full, center(g).complement())
    return SimpleGraph(
        out.vertex_count,
        out.rows,
        out.vertex_labels,
        out.vertex_ids,
        f"proper-commuting({g.descriptor})",
        frozenset({"abelian"}) if g.is_abelian else frozenset(),
    )


def enhanced_power_graph(g: GroupTable) -> SimpleGraph:
    """``u ~ v`` iff ``<u, v>`` is cyclic.

    A subgroup is cyclic iff it lies in a cyclic subgroup, hence in a maximal
    one, so the graph is the union of cliques on the maximal cyclic subgroups.
    """
    n = g.order
    rows = [0] * n
    subgroups, _, _ = maximal_cyclic_subgroups(g)
    for m in subgroups:
        for v in m:
            rows[v] |= m.bits
    rows = [r & ~(1 << v) for v, r in enumerate(rows)]
    return SimpleGraph(n, tuple(rows), _labels(g), tuple(range(n)), f"epg({g.descriptor})")


def proper_enhanced_power_graph(g: GroupTable) -> SimpleGraph:
    """EPG with its dominating vertices removed (not the group center)."""
    out = proper_graph(enhanced_power_graph(g))
    return SimpleGraph(
        out.vertex_count,
        out.rows,
        out.vertex_labels,
        out.vertex_ids,
        f"proper-epg({g.descriptor})",
        out.flags,
    )


def generated_subgroup(g: GroupTable, elements: list[int]) -> SubsetMask:
    """Closure of ``elements`` under multiplication."""
    members = {g.identity}
    frontier = set(elements) - members
    members |= frontier
    while frontier:
        new = set()
        for a in frontier:
            for b in list(members):
                for c in (int(g.mul[a, b]), int(g.mul[b, a])):
                    if c not in members:
                        new.add(c)
        members |= new
        frontier = new
    return SubsetMask.from_indices(g.order, members)


def is_cyclic_closure(g: GroupTable, u: int, v: int) -> bool:
    """Pairwise test: ``<u, v>`` contains an element whose order is the subgroup size."""
    sub = generated_subgroup(g, [u, v])
    size = len(sub)
    orders = g.element_orders
    return bool(np.any(orders[sub.members()] == size))
