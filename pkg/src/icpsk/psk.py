"""PSK constellations with explicit bit labelings and minimum-distance pair sets.

A 2^N point PSK constellation places point k at angle 2*pi*k/M and assigns it
the N-bit label labels[k]. For a selector a over the label bits, the pair set
P(a) collects the adjacent (minimum distance) point pairs whose labels differ
in the XOR parity of the bits selected by a; |P(a)| drives the dominant term
of the decoding error rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

__all__ = [
    "PskLabeling",
    "SignalPoint",
    "PairSet",
    "natural_labeling",
    "gray_labeling",
    "map_symbol",
    "min_distance",
    "adjacent_pairs",
    "compute_pair_set",
]


@dataclass(frozen=True)
class PskLabeling:
    """Bit labeling of a 2^n_bits PSK constellation.

    labels[k] is the integer label carried by the point at angular position k
    (angle 2*pi*k/size); labels must be a permutation of 0..size-1. es is the
    symbol energy.
    """

    n_bits: int
    labels: tuple[int, ...]
    es: float = 1.0

    def __post_init__(self):
        if self.n_bits < 1:
            raise ValueError("n_bits must be at least 1")
        if self.es <= 0:
            raise ValueError("symbol energy must be positive")
        size = 1 << self.n_bits
        if sorted(self.labels) != list(range(size)):
            raise ValueError(
                f"labels must be a permutation of 0..{size - 1}")

    @property
    def size(self) -> int:
        """Constellation size M = 2^n_bits."""
        return 1 << self.n_bits

    @cached_property
    def position_of(self) -> tuple[int, ...]:
        """Inverse permutation: position_of[label] is the angular position."""
        inv = [0] * self.size
        for pos, lab in enumerate(self.labels):
            inv[lab] = pos
        return tuple(inv)


@dataclass(frozen=True)
class SignalPoint:
    position: int
    label: int
    coordinates: tuple[float, float]


@dataclass(frozen=True)
class PairSet:
    """Unordered adjacent position pairs, each stored as (low, high)."""

    pairs: frozenset[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.pairs))

    def __contains__(self, pair) -> bool:
        j, k = pair
        return (min(j, k), max(j, k)) in self.pairs


def natural_labeling(n_bits: int, es: float = 1.0) -> PskLabeling:
    """Labeling where position k carries label k (decimal-to-binary order)."""
    return PskLabeling(n_bits, tuple(range(1 << n_bits)), es)


def gray_labeling(n_bits: int, es: float = 1.0) -> PskLabeling:
    """Binary-reflected Gray labeling: adjacent points differ in one bit."""
    return PskLabeling(n_bits, tuple(k ^ (k >> 1) for k in range(1 << n_bits)), es)


def map_symbol(y: Sequence[int], labeling: PskLabeling) -> SignalPoint:
    """Signal point whose label equals y read as an N-bit integer (bit 1 = MSB)."""
    if len(y) != labeling.n_bits:
        raise ValueError(
            f"codeword length {len(y)} does not match n_bits={labeling.n_bits}")
    label = 0
    for bit in y:
        label = (label << 1) | (int(bit) & 1)
    pos = labeling.position_of[label]
    angle = 2.0 * math.pi * pos / labeling.size
    r = math.sqrt(labeling.es)
    return SignalPoint(pos, label, (r * math.cos(angle), r * math.sin(angle)))


def min_distance(labeling: PskLabeling) -> float:
    """Minimum distance between constellation points: 2 sqrt(Es) sin(pi/M)."""
    return 2.0 * math.sqrt(labeling.es) * math.sin(math.pi / labeling.size)


def adjacent_pairs(size: int) -> frozenset[tuple[int, int]]:
    """Position pairs at minimum distance: ring neighbors, one pair for M=2."""
    if size < 2:
        raise ValueError("constellation size must be at least 2")
    if size == 2:
        return frozenset({(0, 1)})
    pairs = set()
    for k in range(size):
        j = (k + 1) % size
        pairs.add((min(k, j), max(k, j)))
    return frozenset(pairs)


def _parity(value: int) -> int:
    return value.bit_count() & 1


def compute_pair_set(selector_a: Sequence[int], labeling: PskLabeling) -> PairSet:
    """Adjacent pairs whose labels differ in the parity of the selected bits.

    The selector is read as an N-bit mask with bit 1 as the most significant
    bit, matching the codeword-to-label convention of map_symbol.
    """
    if len(selector_a) != labeling.n_bits:
        raise ValueError(
            f"selector length {len(selector_a)} does not match "
            f"n_bits={labeling.n_bits}")
    mask = 0
    for bit in selector_a:
        mask = (mask << 1) | (int(bit) & 1)
    pairs = set()
    for j, k in adjacent_pairs(labeling.size):
        if _parity(labeling.labels[j] & mask) != _parity(labeling.labels[k] & mask):
            pairs.add((j, k))
    return PairSet(frozenset(pairs))
