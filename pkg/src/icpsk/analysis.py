"""Closed-form error rates, threshold SNRs, and decoding strategy selection.

SNR conventions: gamma_ic is the coded PSK channel SNR on a linear scale,
defined as Es/N0 = N * Eb/N0. gamma_si is the per-bit linear SNR of the BPSK
side information broadcast; the distinguished value NOISELESS (infinity)
means the side information bits are error free.

For a strategy with pair count |P|, side info count eta, and side bit error
probability p, the decoded bit error rate is

    pe = pe_xor * (1 - 2p)^eta + (1 - (1 - 2p)^eta) / 2

where pe_xor is the probability that sliced coded bits XOR to the wrong
parity. The second term is an error floor independent of gamma_ic; the
threshold SNR is where the falling first term meets that floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import DecodingStrategy
from .psk import PskLabeling, compute_pair_set

__all__ = [
    "NOISELESS",
    "SnrSpec",
    "StrategyAnalysis",
    "SelectionResult",
    "db_to_linear",
    "linear_to_db",
    "q_function",
    "q_inverse",
    "union_bound_symbol_error",
    "pe_xor_bound",
    "pe_bound_noiseless",
    "pe_si",
    "pe_noisy_closed_form",
    "pe_noisy_binomial",
    "threshold_gamma",
    "select_strategy_noiseless",
    "select_strategy_noisy",
]

# Error-free side information: pe_si(NOISELESS) = 0.
NOISELESS = math.inf


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(value: float) -> float:
    return 10.0 * math.log10(value)


@dataclass(frozen=True)
class SnrSpec:
    """Linear-scale operating point for the coded and side info channels."""

    gamma_ic: float
    gamma_si: float = NOISELESS

    def __post_init__(self):
        if not self.gamma_ic > 0:
            raise ValueError("gamma_ic must be positive")
        if not self.gamma_si > 0:
            raise ValueError("gamma_si must be positive or NOISELESS")

    @classmethod
    def from_db(cls, gamma_ic_db: float,
                gamma_si_db: float = NOISELESS) -> "SnrSpec":
        si = NOISELESS if math.isinf(gamma_si_db) else db_to_linear(gamma_si_db)
        return cls(db_to_linear(gamma_ic_db), si)


@dataclass(frozen=True)
class StrategyAnalysis:
    """A strategy with the quantities the selection rules rank by."""

    strategy: DecodingStrategy
    pair_count: int
    si_count: int
    pe_bound: float | None = None
    threshold: float | None = None


@dataclass(frozen=True)
class SelectionResult:
    """Chosen strategy plus the full ranking and the branch that decided it."""

    chosen: DecodingStrategy
    ranking: tuple[StrategyAnalysis, ...]
    branch: str  # "min-pair" or "min-si"


# =====================================================================
# Gaussian tail
# =====================================================================

def q_function(x: float) -> float:
    """Tail probability of a standard normal: Q(x) = erfc(x / sqrt(2)) / 2."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def q_inverse(p: float) -> float:
    """Inverse of q_function on (0, 1), via bisection plus Newton polish."""
    if not 0.0 < p < 1.0:
        raise ValueError("q_inverse requires p in (0, 1)")
    lo, hi = -40.0, 40.0  # Q(lo) ~ 1, Q(hi) ~ 0 for all double precision p
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if q_function(mid) > p:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(4):
        pdf = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
        if pdf == 0.0:
            break
        x += (q_function(x) - p) / pdf
    return x


# =====================================================================
# Error rate expressions
# =====================================================================

def union_bound_symbol_error(labeling: PskLabeling, gamma_ic: float) -> float:
    """Union bound on PSK symbol error from all pairwise distances.

    Uses unit symbol energy; with N0 = 1/gamma_ic the pairwise term for
    points j and k is Q(d_jk / sqrt(2 N0)). The bound is clamped to 1.
    """
    if not gamma_ic > 0:
        raise ValueError("gamma_ic must be positive")
    size = labeling.size
    total = 0.0
    for step in range(1, size):
        # chord distance between points step apart, Es = 1
        d = 2.0 * math.sin(math.pi * step / size)
        total += q_function(d * math.sqrt(gamma_ic / 2.0))
    return min(1.0, total)


def pe_xor_bound(pair_count: int, n_bits: int, gamma_ic: float) -> float:
    """Upper bound on the coded-bit XOR error from the pair set size.

    (|P| / 2^N) * 2 Q(sqrt(2 gamma_ic sin^2(pi / 2^N))), clamped to 1.
    """
    size = 1 << n_bits
    if not 0 <= pair_count <= size:
        raise ValueError("pair_count must lie in [0, 2^N]")
    if not gamma_ic > 0:
        raise ValueError("gamma_ic must be positive")
    q = q_function(math.sqrt(2.0 * gamma_ic) * math.sin(math.pi / size))
    return min(1.0, (pair_count / size) * 2.0 * q)


def pe_bound_noiseless(pair_count: int, n_bits: int, eb_no: float) -> float:
    """pe_xor_bound with the per-bit SNR scaled up to Es/N0 = N * Eb/N0."""
    return pe_xor_bound(pair_count, n_bits, n_bits * eb_no)


def pe_si(gamma_si: float) -> float:
    """BPSK error rate of one side information bit: Q(sqrt(2 gamma_si))."""
    if math.isinf(gamma_si):
        return 0.0
    if not gamma_si > 0:
        raise ValueError("gamma_si must be positive or NOISELESS")
    return q_function(math.sqrt(2.0 * gamma_si))


def pe_noisy_closed_form(pe_xor: float, p_si: float, eta: int) -> float:
    """Decoded bit error rate with eta independently noisy side bits."""
    _check_noisy_args(pe_xor, p_si, eta)
    shrink = (1.0 - 2.0 * p_si) ** eta
    return pe_xor * shrink + (1.0 - shrink) / 2.0


def pe_noisy_binomial(pe_xor: float, p_si: float, eta: int) -> float:
    """Same quantity summed over even and odd side bit error counts.

    The decoded bit is wrong when the XOR stage errs and an even number of
    side bits err, or the XOR stage is right and an odd number err. Kept as
    an independent route for cross-checking the closed form.
    """
    _check_noisy_args(pe_xor, p_si, eta)
    even = odd = 0.0
    for v in range(eta + 1):
        term = math.comb(eta, v) * p_si ** v * (1.0 - p_si) ** (eta - v)
        if v % 2 == 0:
            even += term
        else:
            odd += term
    return pe_xor * even + (1.0 - pe_xor) * odd


def _check_noisy_args(pe_xor: float, p_si: float, eta: int) -> None:
    if not 0.0 <= pe_xor <= 1.0:
        raise ValueError("pe_xor must lie in [0, 1]")
    if not 0.0 <= p_si <= 0.5:
        raise ValueError("p_si must lie in [0, 0.5]")
    if eta < 0:
        raise ValueError("eta must be nonnegative")


# =====================================================================
# Threshold SNR
# =====================================================================

def threshold_gamma(pair_count: int, n_bits: int, eta: int,
                    gamma_si: float) -> float:
    """Linear Es/N0 where the falling XOR term meets the side info floor.

    Solves pe_xor_bound(pair_count, n_bits, g) * (1-2p)^eta =
    (1 - (1-2p)^eta) / 2 for g, with p = pe_si(gamma_si). Returns inf when
    no floor exists (eta = 0 or noiseless side info) and 0 when the floor
    dominates at every SNR.
    """
    if pair_count < 1:
        raise ValueError("threshold is undefined for an empty pair set")
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    p = pe_si(gamma_si)
    if eta == 0 or p == 0.0:
        return math.inf
    size = 1 << n_bits
    shrink = (1.0 - 2.0 * p) ** eta
    if shrink == 0.0:
        return 0.0
    # Balance point: Q(sqrt(2 g sin^2(pi/M))) = c
    c = size * (1.0 - shrink) / (4.0 * pair_count * shrink)
    if c >= 0.5:
        return 0.0
    x = q_inverse(c)
    return x * x / (2.0 * math.sin(math.pi / size) ** 2)


# =====================================================================
# Strategy selection
# =====================================================================

def _analyze(strategies: Sequence[DecodingStrategy],
             labeling: PskLabeling) -> list[tuple[int, int, int, DecodingStrategy]]:
    """(pair_count, si_count, selector_int, strategy) for each strategy."""
    if not strategies:
        raise ValueError("strategy list must not be empty")
    receivers = {s.receiver for s in strategies}
    if len(receivers) != 1:
        raise ValueError("all strategies must belong to the same receiver")
    out = []
    for s in strategies:
        pc = len(compute_pair_set(s.selector_a, labeling))
        out.append((pc, s.si_count, s.selector_int, s))
    return out


def select_strategy_noiseless(strategies: Sequence[DecodingStrategy],
                              labeling: PskLabeling) -> SelectionResult:
    """Pick the strategy with the smallest pair set.

    With error free side information the bound is monotone in |P| alone, so
    the minimum pair count wins; ties go to the smallest selector value.
    """
    rows = _analyze(strategies, labeling)
    rows.sort(key=lambda r: (r[0], r[2]))
    ranking = tuple(
        StrategyAnalysis(strategy=s, pair_count=pc, si_count=sc,
                         pe_bound=None, threshold=None)
        for pc, sc, _, s in rows)
    return SelectionResult(rows[0][3], ranking, "min-pair")


def select_strategy_noisy(strategies: Sequence[DecodingStrategy],
                          labeling: PskLabeling,
                          gamma_ic: float,
                          gamma_si: float) -> SelectionResult:
    """Pick a strategy accounting for the side information error floor.

    Above the largest finite threshold the floors dominate, so fewer side
    bits win (ties by smaller pair count); below it the pair count still
    rules (ties by fewer side bits). Remaining ties go to the smallest
    selector value. Strategies with eta = 0 have no floor and an infinite
    threshold; they are ignored when locating the branch point, and when
    every threshold is infinite the pair count branch applies throughout.
    """
    rows = _analyze(strategies, labeling)
    p = pe_si(gamma_si)
    n_bits = labeling.n_bits
    analyzed = []
    for pc, sc, sel, s in rows:
        th = threshold_gamma(pc, n_bits, sc, gamma_si)
        pe = pe_noisy_closed_form(pe_xor_bound(pc, n_bits, gamma_ic), p, sc)
        analyzed.append((pc, sc, sel, s, th, pe))

    finite = [th for *_, th, _ in analyzed if math.isfinite(th)]
    if finite and gamma_ic >= max(finite):
        branch = "min-si"
        analyzed.sort(key=lambda r: (r[1], r[0], r[2]))
    else:
        branch = "min-pair"
        analyzed.sort(key=lambda r: (r[0], r[1], r[2]))

    ranking = tuple(
        StrategyAnalysis(strategy=s, pair_count=pc, si_count=sc,
                         pe_bound=pe, threshold=th)
        for pc, sc, _, s, th, pe in analyzed)
    return SelectionResult(analyzed[0][3], ranking, branch)
