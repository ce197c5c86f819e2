"""Simple undirected graphs stored as packed bit rows.

``rows[v]`` is an integer whose set bits are the (open) neighbours of ``v``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .groups.core import SizeLimitError
from .masks import SubsetMask, bools_to_int, iter_bits

DEFAULT_MAX_VERTICES = 20000

_max_vertices = DEFAULT_MAX_VERTICES


def set_max_vertices(cap: int) -> None:
    global _max_vertices
    _max_vertices = int(cap)


@dataclass(frozen=True)
class SimpleGraph:
    vertex_count: int
    rows: tuple[int, ...]
    vertex_labels: Optional[tuple[str, ...]] = None
    # original indices (e.g. group elements) of the vertices
    vertex_ids: Optional[tuple[int, ...]] = None
    provenance: str = ""
    flags: frozenset[str] = field(default_factory=frozenset)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Optional[Sequence[str]] = None,
        provenance: str = "edges",
    ) -> SimpleGraph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise IndexError(f"edge ({u}, {v}) out of range")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows), tuple(labels) if labels else None, None, provenance)

    @classmethod
    def from_adjacency(
        cls,
        adj: np.ndarray,
        labels: Optional[Sequence[str]] = None,
        vertex_ids: Optional[Sequence[int]] = None,
        provenance: str = "matrix",
    ) -> SimpleGraph:
        adj = np.array(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be square")
        if not (adj == adj.T).all():
            raise ValueError("adjacency must be symmetric")
        np.fill_diagonal(adj, False)
        rows = tuple(bools_to_int(r) for r in adj)
        return cls(
            adj.shape[0],
            rows,
            tuple(labels) if labels is not None else None,
            tuple(int(i) for i in vertex_ids) if vertex_ids is not None else None,
            provenance,
        )

    @property
    def full_bits(self) -> int:
        return (1 << self.vertex_count) - 1

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.rows[v]))

    def closed(self, v: int) -> int:
        return self.rows[v] | (1 << v)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.vertex_count) for v in iter_bits(self.rows[u] >> (u + 1) << (u + 1))]

    def label(self, v: int) -> str:
        if self.vertex_labels is not None:
            return self.vertex_labels[v]
        return str(v)

    def original_id(self, v: int) -> int:
        return self.vertex_ids[v] if self.vertex_ids is not None else v

    def adjacency_matrix(self) -> np.ndarray:
        n = self.vertex_count
        out = np.zeros((n, n), dtype=bool)
        for u in range(n):
            out[u, self.neighbors(u)] = True
        return out

    def same_graph(self, other: SimpleGraph) -> bool:
        """Equality of vertex count and adjacency, ignoring labels and provenance."""
        return self.vertex_count == other.vertex_count and self.rows == other.rows

    def to_json(self) -> dict:
        out: dict = {"n": self.vertex_count, "edges": [list(e) for e in self.edges()]}
        if self.vertex_labels is not None:
            out["labels"] = list(self.vertex_labels)
        return out


def graph_from_json(obj: dict) -> SimpleGraph:
    return SimpleGraph.from_edges(int(obj["n"]), [tuple(e) for e in obj["edges"]], obj.get("labels"), "file")


def save_graph(g: SimpleGraph, path: str | Path) -> None:
    Path(path).write_text(json.dumps(g.to_json()) + "\n", encoding="utf-8")


def load_graph(path: str | Path) -> SimpleGraph:
    return graph_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


# -- small named graphs -----------------------------------------------------------


def complete(n: int) -> SimpleGraph:
    full = (1 << n) - 1
    return SimpleGraph(n, tuple(full & ~(1 << v) for v in range(n)), provenance=f"K{n}")


def edgeless(n: int) -> SimpleGraph:
    return SimpleGraph(n, (0,) * n, provenance=f"edgeless({n})")


def star(leaves: int) -> SimpleGraph:
    """``K_{1,leaves}`` with the center at vertex 0."""
    return SimpleGraph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)], provenance=f"K1,{leaves}")


def cycle(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], provenance=f"C{n}")


# -- operations -----------------------------------------------------------------


def dominating_vertices(g: SimpleGraph) -> SubsetMask:
    """Vertices whose closed neighbourhood is the whole vertex set."""
    full = g.full_bits
    bits = 0
    for v in range(g.vertex_count):
        if g.closed(v) == full:
            bits |= 1 << v
    return SubsetMask(g.vertex_count, bits)


def induced_subgraph(g: SimpleGraph, keep: SubsetMask) -> SimpleGraph:
    if keep.universe_size != g.vertex_count:
        raise ValueError("mask universe does not match the graph")
    kept = keep.members()
    pos = {v: i for i, v in enumerate(kept)}
    rows = []
    for v in kept:
        r = 0
        for u in iter_bits(g.rows[v] & keep.bits):
            r |= 1 << pos[u]
        rows.append(r)
    labels = tuple(g.label(v) for v in kept) if g.vertex_labels is not None else None
    return SimpleGraph(
        len(kept),
        tuple(rows),
        labels,
        tuple(g.original_id(v) for v in kept),
        g.provenance,
        g.flags,
    )


def proper_graph(g: SimpleGraph) -> SimpleGraph:
    """Remove every dominating vertex; a complete input yields an empty, flagged graph."""
    dom = dominating_vertices(g)
    out = induced_subgraph(g, dom.complement())
    flags = out.flags | ({"complete-input"} if dom.is_full() else set())
    return SimpleGraph(
        out.vertex_count, out.rows, out.vertex_labels, out.vertex_ids, f"proper({g.provenance})", frozenset(flags)
    )


def strong_product(a: SimpleGraph, b: SimpleGraph) -> SimpleGraph:
    """Strong product; vertex ``(i, j)`` has index ``i * |b| + j``."""
    na, nb = a.vertex_count, b.vertex_count
    n = na * nb
    if n > _max_vertices:
        raise SizeLimitError(f"strong product with {n} vertices exceeds the cap of {_max_vertices}")
    # closed neighbourhood of (i, j) is N[i] x N[j]; spreading N[i] over blocks
    # of width nb and multiplying by N[j] places one copy of N[j] per block
    spread = []
    for i in range(na):
        s = 0
        for k in iter_bits(a.closed(i)):
            s |= 1 << (k * nb)
        spread.append(s)
    closed_b = [b.closed(j) for j in range(nb)]
    rows = []
    for i in range(na):
        for j in range(nb):
            v = i * nb + j
            rows.append((spread[i] * closed_b[j]) & ~(1 << v))
    labels = None
    if a.vertex_labels is not None or b.vertex_labels is not None:
        labels = tuple(f"({a.label(i)},{b.label(j)})" for i in range(na) for j in range(nb))
    return SimpleGraph(n, tuple(rows), labels, None, f"strong({a.provenance},{b.provenance})")


def strong_product_all(graphs: Sequence[SimpleGraph]) -> SimpleGraph:
    out = graphs[0]
    for h in graphs[1:]:
        out = strong_product(out, h)
    return out


def connected_components(g: SimpleGraph) -> list[SubsetMask]:
    """Components ordered by their least vertex."""
    n = g.vertex_count
    remaining = g.full_bits
    out = []
    while remaining:
        start = remaining & -remaining
        comp = start
        frontier = start
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= g.rows[v]
            frontier = nxt & ~comp
            comp |= frontier
        out.append(SubsetMask(n, comp))
        remaining &= ~comp
    return out


def is_clique(g: SimpleGraph, s: SubsetMask) -> bool:
    for v in s:
        if (s.bits & ~(1 << v)) & ~g.rows[v]:
            return False
    return True
