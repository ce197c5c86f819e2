"""Fixed-width subsets backed by Python integers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np


@dataclass(frozen=True)
class SubsetMask:
    """A subset of ``range(universe_size)``; bit ``i`` set means ``i`` is a member."""

    universe_size: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.universe_size < 0:
            raise ValueError("universe_size must be non-negative")
        if self.bits < 0 or self.bits >> self.universe_size:
            raise ValueError("bits outside the universe")

    @classmethod
    def from_indices(cls, universe_size: int, indices: Iterable[int]) -> SubsetMask:
        bits = 0
        for i in indices:
            if not 0 <= i < universe_size:
                raise IndexError(f"index {i} outside universe of size {universe_size}")
            bits |= 1 << i
        return cls(universe_size, bits)

    @classmethod
    def from_bools(cls, flags: np.ndarray) -> SubsetMask:
        flags = np.asarray(flags, dtype=bool)
        return cls(len(flags), bools_to_int(flags))

    @classmethod
    def full(cls, universe_size: int) -> SubsetMask:
        return cls(universe_size, (1 << universe_size) - 1)

    @classmethod
    def empty(cls, universe_size: int) -> SubsetMask:
        return cls(universe_size, 0)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, i: int) -> bool:
        return 0 <= i < self.universe_size and bool(self.bits >> i & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def members(self) -> list[int]:
        return list(iter_bits(self.bits))

    def to_bools(self) -> np.ndarray:
        out = np.zeros(self.universe_size, dtype=bool)
        out[self.members()] = True
        return out

    def _check(self, other: SubsetMask) -> None:
        if other.universe_size != self.universe_size:
            raise ValueError("masks over different universes")

    def __and__(self, other: SubsetMask) -> SubsetMask:
        self._check(other)
        return SubsetMask(self.universe_size, self.bits & other.bits)

    def __or__(self, other: SubsetMask) -> SubsetMask:
        self._check(other)
        return SubsetMask(self.universe_size, self.bits | other.bits)

    def __sub__(self, other: SubsetMask) -> SubsetMask:
        self._check(other)
        return SubsetMask(self.universe_size, self.bits & ~other.bits)

    def complement(self) -> SubsetMask:
        return SubsetMask(self.universe_size, ~self.bits & ((1 << self.universe_size) - 1))

    def issubset(self, other: SubsetMask) -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def is_full(self) -> bool:
        return self.bits == (1 << self.universe_size) - 1


def iter_bits(bits: int) -> Iterator[int]:
    """Yield set bit positions in ascending order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def bools_to_int(flags: np.ndarray) -> int:
    packed = np.packbits(np.asarray(flags, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")
