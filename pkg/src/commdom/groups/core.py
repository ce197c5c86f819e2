"""Finite groups as Cayley tables, and the group-theoretic queries built on them.

Elements are the indices ``0..n-1``; ``mul[a, b]`` is the index of ``a*b``.
Labels are for display only and never enter a computation.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..masks import SubsetMask

DEFAULT_MAX_ORDER = 4096
EXHAUSTIVE_ASSOCIATIVITY_LIMIT = 512
ASSOCIATIVITY_SAMPLES = 100_000
ASSOCIATIVITY_SEED = 20240613


class SizeLimitError(ValueError):
    """A construction would exceed the configured order cap."""


class GroupValidationError(ValueError):
    def __init__(self, violations: list[str]):
        self.violations = violations
        shown = "; ".join(violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        super().__init__(f"not a group: {shown}{more}")


_max_order = DEFAULT_MAX_ORDER


def max_order() -> int:
    return _max_order


def set_max_order(cap: int) -> None:
    global _max_order
    if cap < 1:
        raise ValueError("order cap must be positive")
    _max_order = int(cap)


def check_order_cap(order: int, what: str = "group") -> None:
    if order > _max_order:
        raise SizeLimitError(f"{what} of order {order} exceeds the cap of {_max_order}")


@dataclass(frozen=True, eq=False)
class GroupTable:
    order: int
    mul: np.ndarray
    identity: int
    inverse: np.ndarray
    labels: Optional[tuple[str, ...]] = None
    descriptor: str = "table"

    def __post_init__(self) -> None:
        self.mul.setflags(write=False)
        self.inverse.setflags(write=False)

    @classmethod
    def from_table(
        cls,
        mul: Sequence[Sequence[int]] | np.ndarray,
        labels: Optional[Sequence[str]] = None,
        descriptor: str = "table",
        check_cap: bool = True,
    ) -> GroupTable:
        """Build a table, locating the identity and inverses from ``mul``.

        Raises :class:`GroupValidationError` when there is no two-sided identity
        or some element lacks an inverse. Full validation is left to :func:`validate`.
        """
        table = np.array(mul, dtype=np.int32)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupValidationError([f"table has shape {table.shape}, expected n x n with n >= 1"])
        n = table.shape[0]
        if check_cap:
            check_order_cap(n)
        if table.min() < 0 or table.max() >= n:
            raise GroupValidationError(["table entries out of range"])
        ar = np.arange(n)
        ids = [e for e in range(n) if (table[e] == ar).all() and (table[:, e] == ar).all()]
        if not ids:
            raise GroupValidationError(["no identity element"])
        e = ids[0]
        hits = table == e
        if not hits.any(axis=1).all():
            missing = int(np.flatnonzero(~hits.any(axis=1))[0])
            raise GroupValidationError([f"no inverse for {missing}"])
        inverse = hits.argmax(axis=1).astype(np.int32)
        return cls(
            order=n,
            mul=table,
            identity=e,
            inverse=inverse,
            labels=tuple(labels) if labels is not None else None,
            descriptor=descriptor,
        )

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    def _check_index(self, x: int) -> None:
        if not 0 <= x < self.order:
            raise IndexError(f"element {x} out of range for group of order {self.order}")

    @cached_property
    def commute(self) -> np.ndarray:
        """Boolean matrix, ``commute[x, y]`` iff ``xy = yx``."""
        m = self.mul == self.mul.T
        m.setflags(write=False)
        return m

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        ar = np.arange(n)
        cur = ar.copy()
        k = 1
        while (orders == 0).any():
            hit = (cur == self.identity) & (orders == 0)
            orders[hit] = k
            cur = self.mul[cur, ar]
            k += 1
        orders.setflags(write=False)
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool(self.commute.all())

    def order_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(int(o) for o in self.element_orders).items()))

    def power(self, x: int, k: int) -> int:
        k %= int(self.element_orders[x])
        result, base = self.identity, x
        while k:
            if k & 1:
                result = int(self.mul[result, base])
            base = int(self.mul[base, base])
            k >>= 1
        return result

    def cyclic_subgroup(self, x: int) -> list[int]:
        """Powers of ``x`` in order ``e, x, x^2, ...``."""
        out = [self.identity]
        cur = x
        while cur != self.identity:
            out.append(cur)
            cur = int(self.mul[cur, x])
        return out

    def fingerprint(self) -> tuple:
        """Isomorphism-invariant summary used in place of isomorphism testing."""
        return (
            self.order,
            tuple(self.order_histogram().items()),
            len(center(self)),
            len(distinct_centralizers(self)),
        )


# -- validation ---------------------------------------------------------------


def validate(g: GroupTable) -> list[str]:
    """Return every group-axiom violation of ``g``; an empty list certifies a group."""
    mul = np.asarray(g.mul)
    n = g.order
    if mul.shape != (n, n):
        return [f"table has shape {mul.shape}, expected ({n}, {n})"]
    if n == 0:
        return ["empty table"]
    if mul.min() < 0 or mul.max() >= n:
        return ["table entries out of range"]
    out: list[str] = []
    ar = np.arange(n)
    for r in range(n):
        if len(np.unique(mul[r])) != n:
            out.append(f"row {r} is not a permutation")
    for c in range(n):
        if len(np.unique(mul[:, c])) != n:
            out.append(f"column {c} is not a permutation")
    e = g.identity
    if not 0 <= e < n:
        return out + [f"identity index {e} out of range"]
    bad_identity = np.flatnonzero((mul[e] != ar) | (mul[:, e] != ar))
    inv = np.asarray(g.inverse)
    if len(bad_identity):
        # inverses are meaningless relative to a wrong identity
        out.append(f"identity violated at {int(bad_identity[0])}")
    elif inv.shape != (n,) or inv.min() < 0 or inv.max() >= n:
        out.append("inverse table malformed")
    else:
        for x in np.flatnonzero(mul[ar, inv] != e):
            out.append(f"inverse violated at {int(x)}")
    if g.labels is not None and len(g.labels) != n:
        out.append(f"{len(g.labels)} labels for {n} elements")
    out.extend(_associativity_violations(mul))
    return out


def _associativity_violations(mul: np.ndarray, limit: int = 10) -> list[str]:
    n = mul.shape[0]
    out: list[str] = []
    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT:
        for a in range(n):
            left = mul[mul[a]]  # left[b, c] = (ab)c
            right = mul[a][mul]  # right[b, c] = a(bc)
            bad = np.argwhere(left != right)
            for b, c in bad[: limit - len(out)]:
                out.append(f"associativity violated at ({a}, {int(b)}, {int(c)})")
            if len(out) >= limit:
                break
    else:
        rng = np.random.default_rng(ASSOCIATIVITY_SEED)
        a, b, c = rng.integers(0, n, size=(3, ASSOCIATIVITY_SAMPLES))
        bad = np.flatnonzero(mul[mul[a, b], c] != mul[a, mul[b, c]])
        for i in bad[:limit]:
            out.append(f"associativity violated at ({a[i]}, {b[i]}, {c[i]})")
    return out


# -- element and subgroup queries ---------------------------------------------


def element_order(g: GroupTable, x: int) -> int:
    g._check_index(x)
    return int(g.element_orders[x])


def centralizer(g: GroupTable, x: int) -> SubsetMask:
    g._check_index(x)
    return SubsetMask.from_bools(g.commute[x])


def center(g: GroupTable) -> SubsetMask:
    return SubsetMask.from_bools(g.commute.all(axis=1))


def distinct_centralizers(g: GroupTable) -> list[SubsetMask]:
    """Distinct element centralizers, in order of the least element realizing each."""
    seen: dict[bytes, SubsetMask] = {}
    for x in range(g.order):
        row = g.commute[x]
        key = np.packbits(row).tobytes()
        if key not in seen:
            seen[key] = SubsetMask.from_bools(row)
    return list(seen.values())


def is_abelian_subset(g: GroupTable, s: SubsetMask) -> bool:
    idx = s.members()
    return bool(g.commute[np.ix_(idx, idx)].all())


def is_subgroup(g: GroupTable, s: SubsetMask) -> bool:
    idx = s.members()
    if not idx or g.identity not in s:
        return False
    flags = s.to_bools()
    return bool(flags[g.mul[np.ix_(idx, idx)]].all())


def is_ac_group(g: GroupTable) -> bool:
    """True iff every noncentral centralizer is abelian (vacuously true when abelian)."""
    full = SubsetMask.full(g.order)
    return all(is_abelian_subset(g, c) for c in distinct_centralizers(g) if c != full)


def maximal_cyclic_subgroups(g: GroupTable) -> tuple[list[SubsetMask], int, int]:
    """Maximal cyclic subgroups with the counts ``(T, U)``.

    ``T`` is the number of maximal cyclic subgroups and ``U`` the number of those
    lying inside the center. ``<x>`` fails to be maximal exactly when ``x`` is a
    power of an element of strictly larger order.
    """
    n = g.order
    orders = g.element_orders
    ar = np.arange(n)
    dominated = np.zeros(n, dtype=bool)
    cur = ar.copy()
    for _ in range(int(orders.max())):
        cur = g.mul[cur, ar]
        dominated[cur[orders[cur] < orders]] = True
    z = center(g)
    found: dict[int, SubsetMask] = {}
    covered = 0
    for x in np.flatnonzero(~dominated):
        x = int(x)
        if covered >> x & 1:
            continue
        m = SubsetMask.from_indices(n, g.cyclic_subgroup(x))
        # generators of one subgroup are all undominated; keep the first
        gens = [y for y in m if int(orders[y]) == int(orders[x])]
        for y in gens:
            covered |= 1 << y
        found[min(gens)] = m
    subgroups = [found[k] for k in sorted(found)]
    u = sum(1 for m in subgroups if m.issubset(z))
    return subgroups, len(subgroups), u


def least_prime(n: int) -> int:
    """Smallest prime divisor of ``n`` (0 for ``n = 1``)."""
    if n < 2:
        return 0
    p = 2
    while p * p <= n:
        if n % p == 0:
            return p
        p += 1
    return n


def prime_factorization(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and least_prime(n) == n


def prime_power(q: int) -> Optional[tuple[int, int]]:
    """``(p, k)`` with ``q = p**k``, or None when ``q`` is not a prime power."""
    f = prime_factorization(q)
    if len(f) != 1:
        return None
    (p, k), = f.items()
    return p, k


def _is_power_of(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def nilpotent_decomposition(g: GroupTable) -> Optional[list[tuple[int, SubsetMask]]]:
    """Sylow subgroups ``[(p, P_p), ...]`` when ``g`` is nilpotent, else None.

    For each prime ``p`` dividing the order, the elements of ``p``-power order
    must form a subgroup of the full ``p``-part order.
    """
    parts = []
    orders = g.element_orders
    for p, k in prime_factorization(g.order).items():
        flags = np.array([_is_power_of(int(o), p) for o in orders])
        if int(flags.sum()) != p**k:
            return None
        mask = SubsetMask.from_bools(flags)
        if not is_subgroup(g, mask):
            return None
        parts.append((p, mask))
    return parts


def subgroup(g: GroupTable, s: SubsetMask, descriptor: Optional[str] = None) -> GroupTable:
    """Table of the subgroup on ``s``, elements re-indexed in ascending order."""
    idx = s.members()
    if not is_subgroup(g, s):
        raise ValueError("mask is not a subgroup")
    pos = np.full(g.order, -1, dtype=np.int32)
    pos[idx] = np.arange(len(idx))
    table = pos[g.mul[np.ix_(idx, idx)]]
    labels = [g.label(i) for i in idx] if g.labels is not None else None
    return GroupTable.from_table(table, labels, descriptor or f"subgroup({g.descriptor})")


def direct_product(a: GroupTable, b: GroupTable) -> GroupTable:
    """Componentwise product; element ``(i, j)`` has index ``i * |b| + j``."""
    na, nb = a.order, b.order
    check_order_cap(na * nb, "direct product")
    table = (a.mul[:, None, :, None].astype(np.int64) * nb + b.mul[None, :, None, :]).reshape(
        na * nb, na * nb
    )
    labels = [f"({a.label(i)},{b.label(j)})" for i in range(na) for j in range(nb)]
    return GroupTable(
        order=na * nb,
        mul=table.astype(np.int32),
        identity=a.identity * nb + b.identity,
        inverse=(a.inverse[:, None].astype(np.int32) * nb + b.inverse[None, :]).reshape(-1),
        labels=tuple(labels),
        descriptor=f"direct({a.descriptor},{b.descriptor})",
    )


# -- aggregated invariants ----------------------------------------------------


@dataclass(frozen=True)
class GroupInvariants:
    order: int
    center: SubsetMask = field(repr=False)
    center_size: int
    is_abelian: bool
    least_prime: int
    cent_count: int
    nacent_count: int
    order2_centralizer_count: int
    max_cyclic_T: int
    max_cyclic_U: int
    M: int
    d: int
    is_ac_group: bool
    is_nilpotent: bool
    order_histogram: dict[int, int] = field(repr=False)

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "center": self.center.members(),
            "center_size": self.center_size,
            "is_abelian": self.is_abelian,
            "least_prime": self.least_prime,
            "cent_count": self.cent_count,
            "nacent_count": self.nacent_count,
            "order2_centralizer_count": self.order2_centralizer_count,
            "max_cyclic_T": self.max_cyclic_T,
            "max_cyclic_U": self.max_cyclic_U,
            "M": self.M,
            "d": self.d,
            "is_ac_group": self.is_ac_group,
            "is_nilpotent": self.is_nilpotent,
            "order_histogram": {str(k): v for k, v in self.order_histogram.items()},
        }


def compute_invariants(g: GroupTable) -> GroupInvariants:
    z = center(g)
    zs = len(z)
    cents = distinct_centralizers(g)
    full = SubsetMask.full(g.order)
    nacent = sum(1 for c in cents if not is_abelian_subset(g, c))
    sizes = g.commute.sum(axis=1)
    noncentral = [int(s) for x, s in enumerate(sizes) if x not in z]
    _, t_count, u_count = maximal_cyclic_subgroups(g)
    return GroupInvariants(
        order=g.order,
        center=z,
        center_size=zs,
        is_abelian=g.is_abelian,
        least_prime=least_prime(g.order),
        cent_count=len(cents),
        nacent_count=nacent,
        order2_centralizer_count=sum(1 for c in cents if len(c) == 2 and c != full),
        max_cyclic_T=t_count,
        max_cyclic_U=u_count,
        M=max(noncentral) - zs if noncentral else 0,
        d=min(noncentral) - zs if noncentral else 0,
        is_ac_group=is_ac_group(g),
        is_nilpotent=nilpotent_decomposition(g) is not None,
        order_histogram=g.order_histogram(),
    )


# -- file format ----------------------------------------------------------------


def group_to_json(g: GroupTable, name: Optional[str] = None) -> dict:
    out = {
        "name": name or g.descriptor,
        "order": g.order,
        "table": g.mul.tolist(),
    }
    if g.labels is not None:
        out["labels"] = list(g.labels)
    return out


def group_from_json(obj: dict) -> GroupTable:
    """Parse the group file object; always validated."""
    try:
        table = obj["table"]
        order = int(obj["order"])
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupValidationError([f"malformed group object: {exc}"]) from None
    if len(table) != order:
        raise GroupValidationError([f"order {order} but table has {len(table)} rows"])
    g = GroupTable.from_table(table, obj.get("labels"), descriptor=obj.get("name", "file"))
    violations = validate(g)
    if violations:
        raise GroupValidationError(violations)
    return g


def save_group(g: GroupTable, path: str | Path, name: Optional[str] = None) -> None:
    Path(path).write_text(json.dumps(group_to_json(g, name)) + "\n", encoding="utf-8")


def load_group(path: str | Path) -> GroupTable:
    return group_from_json(json.loads(Path(path).read_text(encoding="utf-8")))
