"""Small Galois fields GF(p^k) as lookup tables.

Elements are encoded as integers whose base-``p`` digits are the polynomial
coefficients (least significant first), so the prime subfield is ``0..p-1``.
"""

from __future__ import annotations

from functools import cached_property
from itertools import product

import numpy as np

from .core import prime_power


def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = a[:]
    while len(a) >= len(f):
        c = a[-1]
        if c:
            shift = len(a) - len(f)
            for i, fc in enumerate(f):
                a[shift + i] = (a[shift + i] - c * fc) % p
        a.pop()
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=d):
            g = list(tail) + [1]
            if not any(_poly_mod(f, g, p)):
                return False
    return True


def _irreducible(p: int, k: int) -> list[int]:
    """Lexicographically first monic irreducible polynomial of degree ``k``."""
    for tail in product(range(p), repeat=k):
        f = list(tail) + [1]
        if _is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")


class FiniteField:
    def __init__(self, q: int):
        pk = prime_power(q)
        if pk is None:
            raise ValueError(f"{q} is not a prime power")
        self.q = q
        self.p, self.k = pk
        self.modulus = _irreducible(self.p, self.k)

    def _digits(self, x: int) -> list[int]:
        return [(x // self.p**i) % self.p for i in range(self.k)]

    def _encode(self, coeffs: list[int]) -> int:
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    @cached_property
    def add(self) -> np.ndarray:
        q, p = self.q, self.p
        t = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            da = self._digits(a)
            for b in range(q):
                db = self._digits(b)
                t[a, b] = self._encode([(x + y) % p for x, y in zip(da, db)])
        return t

    @cached_property
    def mul(self) -> np.ndarray:
        q, p = self.q, self.p
        t = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            da = self._digits(a)
            for b in range(q):
                db = self._digits(b)
                prod = [0] * (2 * self.k - 1)
                for i, x in enumerate(da):
                    for j, y in enumerate(db):
                        prod[i + j] = (prod[i + j] + x * y) % p
                r = _poly_mod(prod, self.modulus, p) if len(prod) >= len(self.modulus) else prod
                t[a, b] = self._encode((r + [0] * self.k)[: self.k])
        return t

    @cached_property
    def inv(self) -> np.ndarray:
        out = np.zeros(self.q, dtype=np.int64)
        for a in range(1, self.q):
            out[a] = int(np.flatnonzero(self.mul[a] == 1)[0])
        return out

    @cached_property
    def neg(self) -> np.ndarray:
        return np.array([int(np.flatnonzero(self.add[a] == 0)[0]) for a in range(self.q)])

    @cached_property
    def nonzero_squares(self) -> frozenset[int]:
        return frozenset(int(self.mul[a, a]) for a in range(1, self.q))

    def sub(self, a: int, b: int) -> int:
        return int(self.add[a, self.neg[b]])
