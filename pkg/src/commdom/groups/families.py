"""Constructors for the group families, plus descriptor round-tripping.

Canonical element orderings:

* ``cyclic(n)``: ``k`` is the residue ``k``.
* ``abelian(n1,...,nk)``: mixed-radix tuples, last coordinate fastest.
* ``gendihedral(A)`` and ``dihedral(2n)``: ``a`` at index ``a`` and ``a*x`` at
  ``|A| + a``, where ``x`` is the inverting involution.
* ``quaternion(2^m)``: ``a^i`` at ``i`` and ``a^i b`` at ``2^(m-1) + i``.
* ``heisenberg(p)``: the matrix with entries ``(a, b, c)`` above the diagonal at
  ``a*p^2 + b*p + c``.
* permutation families (``symmetric``, ``alternating``, ``pgl2``, ``psl2``):
  lexicographic order of the permutations, so the identity is index 0.
* ``perm_closure``: breadth-first discovery order from the identity.
"""

from __future__ import annotations

import ast
import dataclasses
import json
from collections import deque
from itertools import permutations
from math import gcd, prod
from typing import Sequence

import numpy as np

from .core import (
    GroupTable,
    SizeLimitError,
    check_order_cap,
    direct_product,
    is_prime,
    max_order,
    nilpotent_decomposition,
    prime_power,
    subgroup,
)
from .fields import FiniteField

Perm = tuple[int, ...]


def cyclic(n: int) -> GroupTable:
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    check_order_cap(n)
    ar = np.arange(n)
    table = (ar[:, None] + ar[None, :]) % n
    return GroupTable(
        order=n,
        mul=table.astype(np.int32),
        identity=0,
        inverse=((-ar) % n).astype(np.int32),
        labels=tuple(str(k) for k in range(n)),
        descriptor=f"cyclic({n})",
    )


def abelian_product(ns: Sequence[int]) -> GroupTable:
    ns = [int(n) for n in ns]
    if not ns or any(n < 1 for n in ns):
        raise ValueError("abelian_product needs a non-empty list of positive integers")
    check_order_cap(prod(ns))
    g = cyclic(ns[0])
    for n in ns[1:]:
        g = direct_product(g, cyclic(n))
    labels = None
    if len(ns) > 1:
        coords = np.array(np.unravel_index(np.arange(g.order), ns)).T
        labels = tuple("(" + ",".join(map(str, c)) + ")" for c in coords)
    else:
        labels = g.labels
    return dataclasses.replace(g, labels=labels, descriptor=f"abelian({','.join(map(str, ns))})")


def generalized_dihedral(a: GroupTable) -> GroupTable:
    """``A`` extended by an involution ``x`` with ``x a x^-1 = a^-1``."""
    if not a.is_abelian:
        raise ValueError("generalized_dihedral requires an abelian group")
    m = a.order
    check_order_cap(2 * m)
    n = 2 * m
    table = np.empty((n, n), dtype=np.int32)
    # (a x^s)(b x^t) = a b^((-1)^s) x^(s+t)
    table[:m, :m] = a.mul
    table[:m, m:] = a.mul + m
    table[m:, :m] = a.mul[:, a.inverse] + m
    table[m:, m:] = a.mul[:, a.inverse]
    inverse = np.concatenate([a.inverse, np.arange(m, n)]).astype(np.int32)
    labels = tuple(a.label(i) for i in range(m)) + tuple(f"{a.label(i)}*x" for i in range(m))
    return GroupTable(n, table, a.identity, inverse, labels, f"gendihedral({a.descriptor})")


def dihedral(order: int) -> GroupTable:
    """Dihedral group of the given order ``2n`` (``n >= 3``)."""
    if order % 2 or order < 6:
        raise ValueError("dihedral(2n) needs an even order 2n with n >= 3")
    g = generalized_dihedral(cyclic(order // 2))
    labels = tuple(f"r{k}" for k in range(order // 2)) + tuple(f"s r{k}" for k in range(order // 2))
    return dataclasses.replace(g, labels=labels, descriptor=f"dihedral({order})")


def generalized_quaternion(order: int) -> GroupTable:
    """``Q_{2^m} = <a, b | a^(2^(m-1)), b^2 = a^(2^(m-2)), b a b^-1 = a^-1>``, ``m >= 3``."""
    pk = prime_power(order)
    if pk is None or pk[0] != 2 or pk[1] < 3:
        raise ValueError("generalized_quaternion needs order 2^m with m >= 3")
    check_order_cap(order)
    N = order // 2
    half = N // 2
    i = np.arange(N)
    I, J = np.meshgrid(i, i, indexing="ij")
    table = np.empty((order, order), dtype=np.int32)
    table[:N, :N] = (I + J) % N
    table[:N, N:] = (I + J) % N + N
    table[N:, :N] = (I - J) % N + N
    table[N:, N:] = (I - J + half) % N
    g = GroupTable.from_table(
        table,
        [f"a{k}" for k in range(N)] + [f"a{k} b" for k in range(N)],
        descriptor=f"quaternion({order})",
    )
    return g


def _perm_table(perms: list[Perm], labels: list[str], descriptor: str) -> GroupTable:
    n = len(perms)
    check_order_cap(n)
    arr = np.array(perms, dtype=np.int64)
    k = arr.shape[1]
    weights = k ** np.arange(k - 1, -1, -1, dtype=np.int64)
    codes = arr @ weights
    order_idx = np.argsort(codes)
    sorted_codes = codes[order_idx]
    table = np.empty((n, n), dtype=np.int32)
    for a in range(n):
        comp = arr[a][arr]  # (a o b)(i) = a[b[i]]
        pos = np.searchsorted(sorted_codes, comp @ weights)
        table[a] = order_idx[pos]
    return GroupTable.from_table(table, labels, descriptor)


def cycle_string(p: Perm) -> str:
    seen, parts = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def parse_cycles(text: str, degree: int) -> Perm:
    """Array form of a permutation in cycle notation, e.g. ``"(0 1 2)(3 4)"``."""
    p = list(range(degree))
    body = text.strip()
    if body in ("", "()"):
        return tuple(p)
    for chunk in body.replace(")", ")|").split("|"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise ValueError(f"bad cycle syntax: {text!r}")
        pts = [int(t) for t in chunk[1:-1].replace(",", " ").split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if not 0 <= a < degree:
                raise ValueError(f"point {a} outside degree {degree}")
            p[a] = b
    if sorted(p) != list(range(degree)):
        raise ValueError(f"not a permutation: {text!r}")
    return tuple(p)


def symmetric(n: int) -> GroupTable:
    if n < 1:
        raise ValueError("symmetric(n) needs n >= 1")
    check_order_cap(prod(range(1, n + 1)))
    perms = list(permutations(range(n)))
    return _perm_table(perms, [cycle_string(p) for p in perms], f"symmetric({n})")


def _is_even(p: Perm) -> bool:
    seen, transpositions = set(), 0
    for i in range(len(p)):
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        if length:
            transpositions += length - 1
    return transpositions % 2 == 0


def alternating(n: int) -> GroupTable:
    if n < 1:
        raise ValueError("alternating(n) needs n >= 1")
    check_order_cap(max(1, prod(range(1, n + 1)) // 2))
    perms = [p for p in permutations(range(n)) if _is_even(p)]
    return _perm_table(perms, [cycle_string(p) for p in perms], f"alternating({n})")


def heisenberg(p: int) -> GroupTable:
    """Upper unitriangular 3x3 matrices over GF(p)."""
    if not is_prime(p):
        raise ValueError(f"heisenberg(p) needs a prime, got {p}")
    n = p**3
    check_order_cap(n)
    idx = np.arange(n)
    a, b, c = idx // (p * p), (idx // p) % p, idx % p
    A1, A2 = np.meshgrid(a, a, indexing="ij")
    B1, B2 = np.meshgrid(b, b, indexing="ij")
    C1, C2 = np.meshgrid(c, c, indexing="ij")
    table = ((A1 + A2) % p) * p * p + ((B1 + B2) % p) * p + (C1 + C2 + A1 * B2) % p
    labels = [f"[{x},{y},{z}]" for x, y, z in zip(a, b, c)]
    return GroupTable.from_table(table, labels, f"heisenberg({p})")


def _projective_perms(q: int, special: bool) -> list[Perm]:
    f = FiniteField(q)
    inf = q
    squares = f.nonzero_squares
    perms = set()
    for a in range(q):
        for b in range(q):
            for c in range(q):
                for d in range(q):
                    det = f.sub(int(f.mul[a, d]), int(f.mul[b, c]))
                    if det == 0 or (special and det not in squares):
                        continue
                    img = []
                    for z in range(q + 1):
                        if z == inf:
                            img.append(int(f.mul[a, f.inv[c]]) if c else inf)
                            continue
                        num = int(f.add[f.mul[a, z], b])
                        den = int(f.add[f.mul[c, z], d])
                        img.append(int(f.mul[num, f.inv[den]]) if den else inf)
                    perms.add(tuple(img))
    return sorted(perms)


def _check_projective(q: int, order: int) -> None:
    if prime_power(q) is None:
        raise ValueError(f"{q} is not a prime power")
    check_order_cap(order)


def pgl2(q: int) -> GroupTable:
    """PGL(2, q) acting on the projective line; point ``q`` is infinity."""
    _check_projective(q, q**3 - q)
    perms = _projective_perms(q, special=False)
    return _perm_table(perms, [cycle_string(p) for p in perms], f"pgl2({q})")


def psl2(q: int) -> GroupTable:
    """PSL(2, q): the maps whose determinant is a nonzero square."""
    _check_projective(q, (q**3 - q) // gcd(2, q - 1))
    perms = _projective_perms(q, special=True)
    return _perm_table(perms, [cycle_string(p) for p in perms], f"psl2({q})")


def perm_closure(generators: Sequence[Sequence[int]], descriptor: str | None = None) -> GroupTable:
    """Group generated by permutations in array form, via breadth-first closure."""
    gens = [tuple(int(i) for i in g) for g in generators]
    if not gens:
        raise ValueError("perm_closure needs at least one generator")
    k = len(gens[0])
    for g in gens:
        if len(g) != k or sorted(g) != list(range(k)):
            raise ValueError(f"not a permutation of range({k}): {g}")
    cap = max_order()
    ident = tuple(range(k))
    seen = {ident: 0}
    elems = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple(x[i] for i in g)  # x o g
            if y not in seen:
                if len(elems) >= cap:
                    raise SizeLimitError(f"closure exceeds the cap of {cap}")
                seen[y] = len(elems)
                elems.append(y)
                queue.append(y)
    if descriptor is None:
        descriptor = "perm_closure(" + json.dumps([list(g) for g in gens], separators=(",", ":")) + ")"
    return _perm_table(elems, [cycle_string(p) for p in elems], descriptor)


def metacyclic_pq(p: int, q: int) -> GroupTable:
    """The non-abelian group of order ``pq`` (``p < q`` primes, ``p | q - 1``)."""
    if not (is_prime(p) and is_prime(q) and p < q and (q - 1) % p == 0):
        raise ValueError(f"no non-abelian group of order {p}*{q}")
    r = next(r for r in range(2, q) if pow(r, p, q) == 1)
    shift = [(x + 1) % q for x in range(q)]
    scale = [(r * x) % q for x in range(q)]
    return perm_closure([shift, scale], descriptor=f"pq({p},{q})")


def sylow(p: int, g: GroupTable) -> GroupTable:
    """The normal Sylow ``p``-subgroup of a nilpotent group."""
    parts = nilpotent_decomposition(g)
    if parts is None:
        raise ValueError(f"{g.descriptor} is not nilpotent")
    for prime, mask in parts:
        if prime == p:
            return subgroup(g, mask, descriptor=f"sylow({p},{g.descriptor})")
    raise ValueError(f"{p} does not divide the order of {g.descriptor}")


def direct(*factors: GroupTable) -> GroupTable:
    if not factors:
        raise ValueError("direct() needs at least one factor")
    g = factors[0]
    for h in factors[1:]:
        g = direct_product(g, h)
    return g


# -- descriptors ----------------------------------------------------------------

FAMILIES = {
    "cyclic": cyclic,
    "abelian": lambda *ns: abelian_product(ns),
    "gendihedral": generalized_dihedral,
    "dihedral": dihedral,
    "quaternion": generalized_quaternion,
    "symmetric": symmetric,
    "alternating": alternating,
    "heisenberg": heisenberg,
    "pgl2": pgl2,
    "psl2": psl2,
    "pq": metacyclic_pq,
    "perm_closure": perm_closure,
    "direct": direct,
    "sylow": sylow,
}


@dataclasses.dataclass(frozen=True)
class FamilySpec:
    """A family name with its parameters (integers, integer lists, or nested specs)."""

    family: str
    params: tuple = ()

    def build(self) -> GroupTable:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        args = [p.build() if isinstance(p, FamilySpec) else p for p in self.params]
        return FAMILIES[self.family](*args)

    @property
    def descriptor(self) -> str:
        def fmt(p) -> str:
            if isinstance(p, FamilySpec):
                return p.descriptor
            if isinstance(p, (list, tuple)):
                return json.dumps(p, separators=(",", ":"))
            return str(p)

        return f"{self.family}({','.join(fmt(p) for p in self.params)})"


def parse_descriptor(text: str) -> FamilySpec:
    """Parse ``"direct(dihedral(8),cyclic(3))"``-style descriptors."""
    try:
        tree = ast.parse(text.strip(), mode="eval").body
    except SyntaxError as exc:
        raise ValueError(f"bad descriptor {text!r}: {exc.msg}") from None

    def conv(node):
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
            return FamilySpec(node.func.id, tuple(conv(a) for a in node.args))
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, (ast.List, ast.Tuple)):
            return [conv(e) for e in node.elts]
        raise ValueError(f"bad descriptor {text!r}")

    spec = conv(tree)
    if not isinstance(spec, FamilySpec):
        raise ValueError(f"bad descriptor {text!r}")
    return spec


def build(text: str) -> GroupTable:
    return parse_descriptor(text).build()
