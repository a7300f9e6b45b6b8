"""Index coding problem model, GF(2) encoding, and decoding strategy enumeration.

A server holds m binary messages and broadcasts N coded bits y = x L, where L
is an m x N binary matrix. Receiver i already knows the messages in K_i and
wants message W_i. A decoding strategy at receiver i is a nonzero selector
a over the codeword bits such that the XOR of the selected bits equals
x_{W_i} XOR (some subset S of the receiver's side information); the receiver
recovers its message by XORing the selected coded bits with those side
information bits.

Messages, receivers, and codeword bits are 1-based at the API boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "MAX_CODEWORD_BITS",
    "IndexCodingProblem",
    "EncodingMatrix",
    "DecodingStrategy",
    "ValidationResult",
    "validate_problem",
    "validate_matrix",
    "encode",
    "enumerate_strategies",
    "apply_strategy",
]

# Exhaustive enumeration walks all 2^N - 1 nonzero selectors; keep N small.
MAX_CODEWORD_BITS = 24

_ENUM_CHUNK = 1 << 16


# =====================================================================
# Domain types
# =====================================================================

@dataclass(frozen=True)
class IndexCodingProblem:
    """m messages, n receivers, one demanded message and a side info set each.

    demands[i] is the 1-based message W_{i+1} wanted by receiver i+1;
    side_info[i] is the set K_{i+1} of 1-based message indices it knows.
    """

    m: int
    demands: tuple[int, ...]
    side_info: tuple[frozenset[int], ...]

    def __init__(self, m: int, demands: Sequence[int],
                 side_info: Sequence[Iterable[int]]):
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "demands", tuple(int(w) for w in demands))
        object.__setattr__(
            self, "side_info",
            tuple(frozenset(int(k) for k in ks) for ks in side_info))
        if len(self.demands) != len(self.side_info):
            raise ValueError("demands and side_info must have equal length")

    @property
    def n(self) -> int:
        """Number of receivers."""
        return len(self.demands)

    def receiver_indices(self) -> range:
        return range(1, self.n + 1)


@dataclass(frozen=True)
class EncodingMatrix:
    """Binary m x N matrix L; codewords are y = x L over GF(2)."""

    rows: tuple[tuple[int, ...], ...]

    def __init__(self, rows: Sequence[Sequence[int]]):
        clean = tuple(tuple(int(b) for b in row) for row in rows)
        if not clean or not clean[0]:
            raise ValueError("matrix must have at least one row and column")
        width = len(clean[0])
        for row in clean:
            if len(row) != width:
                raise ValueError("matrix rows must have equal length")
            if any(b not in (0, 1) for b in row):
                raise ValueError("matrix entries must be 0 or 1")
        object.__setattr__(self, "rows", clean)

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n_bits(self) -> int:
        """Codeword length N."""
        return len(self.rows[0])

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.uint8)


@dataclass(frozen=True)
class DecodingStrategy:
    """One decoding option at a receiver.

    selector_a is the length-N bit vector over the codeword (bit 1 first);
    si_subset is the set S of 1-based side information messages whose bits
    are XORed with the selected codeword bits.
    """

    receiver: int
    selector_a: tuple[int, ...]
    si_subset: frozenset[int] = field(default_factory=frozenset)

    @property
    def selector_int(self) -> int:
        """Selector read as an integer with bit 1 as the most significant."""
        value = 0
        for bit in self.selector_a:
            value = (value << 1) | (bit & 1)
        return value

    @property
    def selector_str(self) -> str:
        return "".join(str(b & 1) for b in self.selector_a)

    @property
    def used_bits(self) -> tuple[int, ...]:
        """1-based codeword bit indices in the selector support."""
        return tuple(k + 1 for k, b in enumerate(self.selector_a) if b)

    @property
    def si_count(self) -> int:
        """Number of side information bits the strategy consumes."""
        return len(self.si_subset)


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


# =====================================================================
# Validation
# =====================================================================

def validate_problem(problem: IndexCodingProblem) -> ValidationResult:
    """Check every problem invariant, reporting all violations found."""
    violations: list[str] = []
    if problem.m < 1:
        violations.append("message count m must be at least 1")
    if problem.n < 1:
        violations.append("at least one receiver is required")
    for i in problem.receiver_indices():
        want = problem.demands[i - 1]
        knows = problem.side_info[i - 1]
        if want < 1 or want > problem.m:
            violations.append(
                f"receiver {i}: index-out-of-range demand {want}")
        bad = sorted(k for k in knows if k < 1 or k > problem.m)
        if bad:
            violations.append(
                f"receiver {i}: index-out-of-range side info {bad}")
        if want in knows:
            violations.append(
                f"receiver {i}: demand-in-side-info ({want})")
    return ValidationResult(not violations, tuple(violations))


def validate_matrix(problem: IndexCodingProblem,
                    matrix: EncodingMatrix) -> ValidationResult:
    """Check that L fits the problem and serves every receiver.

    L is a valid index code only if every receiver has at least one
    decoding strategy.
    """
    if matrix.m != problem.m:
        return ValidationResult(
            False, (f"matrix has {matrix.m} rows, problem has "
                    f"{problem.m} messages",))
    violations = []
    for i in problem.receiver_indices():
        if not enumerate_strategies(problem, matrix, i):
            violations.append(
                f"receiver {i}: no decoding strategy exists (L is not an "
                f"index code for this problem)")
    return ValidationResult(not violations, tuple(violations))


# =====================================================================
# Encoding and decoding
# =====================================================================

def encode(x: Sequence[int], matrix: EncodingMatrix) -> tuple[int, ...]:
    """Encode a length-m message vector to the N coded bits y = x L."""
    bits = np.asarray(x, dtype=np.uint8)
    if bits.ndim != 1 or bits.shape[0] != matrix.m:
        raise ValueError(
            f"message vector length {bits.shape} does not match m={matrix.m}")
    y = bits @ matrix.as_array() & 1
    return tuple(int(b) for b in y)


def _combination(matrix: EncodingMatrix, selector: Sequence[int]) -> tuple[int, ...]:
    """v = L a over GF(2): which messages the selected coded bits XOR to."""
    a = np.asarray(selector, dtype=np.uint8)
    v = matrix.as_array() @ a & 1
    return tuple(int(b) for b in v)


def enumerate_strategies(problem: IndexCodingProblem,
                         matrix: EncodingMatrix,
                         receiver: int) -> list[DecodingStrategy]:
    """All decoding strategies at one receiver, by increasing selector value.

    A nonzero selector a qualifies when v = L a has v_{W_i} = 1 and the rest
    of its support lies inside K_i; the strategy's side information subset is
    S = support(v) minus {W_i}.
    """
    if receiver < 1 or receiver > problem.n:
        raise ValueError(f"invalid receiver index {receiver}")
    if matrix.m != problem.m:
        raise ValueError("matrix row count does not match message count")
    n_bits = matrix.n_bits
    if n_bits > MAX_CODEWORD_BITS:
        raise ValueError(
            f"codeword length {n_bits} exceeds the enumeration limit "
            f"{MAX_CODEWORD_BITS}")

    want = problem.demands[receiver - 1]
    knows = problem.side_info[receiver - 1]
    allowed = np.zeros(problem.m, dtype=bool)
    allowed[[k - 1 for k in knows]] = True
    allowed[want - 1] = True

    l_t = matrix.as_array().T.astype(np.uint8)  # (N, m)
    shifts = np.arange(n_bits - 1, -1, -1, dtype=np.uint32)

    found: list[DecodingStrategy] = []
    for start in range(1, 1 << n_bits, _ENUM_CHUNK):
        stop = min(start + _ENUM_CHUNK, 1 << n_bits)
        values = np.arange(start, stop, dtype=np.uint32)
        selectors = (values[:, None] >> shifts[None, :]) & 1  # (chunk, N)
        v = selectors.astype(np.uint8) @ l_t & 1  # (chunk, m)
        hits = (v[:, want - 1] == 1) & ~(v & ~allowed).any(axis=1)
        for idx in np.nonzero(hits)[0]:
            support = np.nonzero(v[idx])[0] + 1
            found.append(DecodingStrategy(
                receiver=receiver,
                selector_a=tuple(int(b) for b in selectors[idx]),
                si_subset=frozenset(int(s) for s in support if s != want)))
    return found


def apply_strategy(strategy: DecodingStrategy,
                   y_hat: Sequence[int],
                   si_bits: dict[int, int]) -> int:
    """Decode one bit: XOR the selected coded bits with the selected side bits.

    si_bits maps 1-based message indices to bit values and must cover every
    index in the strategy's si_subset.
    """
    if len(y_hat) != len(strategy.selector_a):
        raise ValueError("codeword length does not match the selector")
    bit = 0
    for sel, y in zip(strategy.selector_a, y_hat):
        bit ^= sel & int(y)
    for k in strategy.si_subset:
        if k not in si_bits:
            raise KeyError(f"missing side information bit for message {k}")
        bit ^= int(si_bits[k]) & 1
    return bit
