"""Monte Carlo bit error simulation over AWGN and Rayleigh fading channels.

Each trial draws a uniform message vector, encodes it, transmits one PSK
symbol, detects it by minimum Euclidean distance (with perfect channel state
information under fading), optionally passes the receiver's side information
bits through their own BPSK channels, and applies every decoding strategy of
one receiver to the same received data.

Conventions: gamma_ic is Es/N0 with N0 the total complex noise variance
(N0/2 per real dimension); gamma_si is the per-bit SNR of the side
information bits, each sent antipodal over an independent real AWGN draw and
independently faded on the Rayleigh channel. Side information bits are
redrawn every trial.

Reproducibility: trial randomness comes from counter-based Philox streams
keyed by (seed, sweep index, receiver, worker). Workers own disjoint trial
ranges and accumulate privately; results merge additively in worker order,
so a report is bit-identical for a fixed (config, seed, worker count).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .analysis import db_to_linear, pe_noisy_closed_form, pe_si, pe_xor_bound
from .core import DecodingStrategy, EncodingMatrix, IndexCodingProblem, \
    enumerate_strategies
from .psk import PskLabeling, compute_pair_set

__all__ = [
    "BLOCK_TRIALS",
    "ChannelConfig",
    "SweepRow",
    "SimulationReport",
    "run_trial",
    "run_sweep",
    "confidence_interval",
]

BLOCK_TRIALS = 1 << 16

_Z95 = 1.96


# =====================================================================
# Configuration and report types
# =====================================================================

@dataclass(frozen=True)
class ChannelConfig:
    """One simulation campaign: channel kind, SNR sweep, and trial budget.

    gamma_ic_db holds the Es/N0 sweep points in dB; gamma_si_db is the side
    information per-bit SNR in dB, with math.inf meaning noiseless side
    information. min_errors, when set, lets each worker stop its partition
    early once every strategy has accumulated its share of errors (trading
    fixed-trial reproducibility for speed; determinism then holds per
    worker partition).
    """

    kind: str
    gamma_ic_db: tuple[float, ...]
    gamma_si_db: float
    trials: int
    seed: int
    max_workers: int = 4
    min_errors: int | None = None

    def __post_init__(self):
        if self.kind not in ("awgn", "rayleigh"):
            raise ValueError("kind must be 'awgn' or 'rayleigh'")
        if not self.gamma_ic_db:
            raise ValueError("SNR sweep must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.max_workers < 1:
            raise ValueError("max_workers must be at least 1")
        if self.min_errors is not None and self.min_errors < 1:
            raise ValueError("min_errors must be positive when set")
        object.__setattr__(self, "gamma_ic_db",
                           tuple(float(v) for v in self.gamma_ic_db))


@dataclass(frozen=True)
class SweepRow:
    """Result for one (sweep point, receiver, strategy) cell."""

    snr_db: float
    eb_no_db: float
    receiver: int
    selector: str
    pair_count: int
    si_count: int
    theory: float
    simulated: float
    ci_halfwidth: float
    errors: int
    trials: int


@dataclass(frozen=True)
class SimulationReport:
    config: ChannelConfig
    n_bits: int
    rows: tuple[SweepRow, ...]


# =====================================================================
# Trial kernel
# =====================================================================

_parity_tables: dict[int, np.ndarray] = {}


def _parity_table(n_bits: int) -> np.ndarray:
    table = _parity_tables.get(n_bits)
    if table is None:
        values = np.arange(1 << n_bits, dtype=np.uint32)
        bits = (values[:, None] >> np.arange(n_bits, dtype=np.uint32)) & 1
        table = bits.sum(axis=1).astype(np.uint8) & 1
        _parity_tables[n_bits] = table
    return table


def _simulate_block(problem: IndexCodingProblem,
                    matrix: EncodingMatrix,
                    labeling: PskLabeling,
                    strategies: Sequence[DecodingStrategy],
                    kind: str,
                    gamma_ic: float,
                    gamma_si: float,
                    rng: np.random.Generator,
                    count: int,
                    x: np.ndarray | None = None) -> np.ndarray:
    """Error indicators, shape (count, len(strategies)), for one trial block.

    The random draw order is fixed: message bits, channel fade (Rayleigh
    only), channel noise, side info fades (Rayleigh only), side info noise.
    Side info draws cover the receiver's whole known set in sorted order so
    all strategies of the receiver share one received broadcast.
    """
    receiver = strategies[0].receiver
    if any(s.receiver != receiver for s in strategies):
        raise ValueError("all strategies must belong to the same receiver")
    n_bits = matrix.n_bits
    size = labeling.size
    si_order = sorted(problem.side_info[receiver - 1])
    col_of = {k: i for i, k in enumerate(si_order)}

    if x is None:
        x = rng.integers(0, 2, size=(count, matrix.m), dtype=np.uint8)
    else:
        x = np.asarray(x, dtype=np.uint8)
        if x.shape != (count, matrix.m):
            raise ValueError("message override has the wrong shape")

    weights = (1 << np.arange(n_bits - 1, -1, -1, dtype=np.int64))
    y_lab = ((x @ matrix.as_array()) & 1).astype(np.int64) @ weights
    positions = np.asarray(labeling.position_of, dtype=np.int64)[y_lab]
    amp = math.sqrt(labeling.es)
    s_tx = amp * np.exp(2j * math.pi * positions / size)

    if kind == "rayleigh":
        hz = rng.normal(size=(count, 2))
        h = (hz[:, 0] + 1j * hz[:, 1]) * math.sqrt(0.5)
    n0 = 0.0 if math.isinf(gamma_ic) else labeling.es / gamma_ic
    nz = rng.normal(size=(count, 2))
    noise = (nz[:, 0] + 1j * nz[:, 1]) * math.sqrt(n0 / 2.0)
    if kind == "rayleigh":
        ref = (h * s_tx + noise) * np.conj(h)
    else:
        ref = s_tx + noise
    det_pos = np.rint(np.angle(ref) * size / (2.0 * math.pi)).astype(np.int64) % size
    det_lab = np.asarray(labeling.labels, dtype=np.int64)[det_pos]

    noisy_si = si_order and not math.isinf(gamma_si)
    if noisy_si:
        k_bits = len(si_order)
        if kind == "rayleigh":
            hs = rng.normal(size=(count, k_bits, 2))
            si_amp = np.hypot(hs[..., 0], hs[..., 1]) * math.sqrt(0.5)
        else:
            si_amp = 1.0
        z = rng.normal(size=(count, k_bits))
        si_err = (z < -si_amp * math.sqrt(2.0 * gamma_si)).astype(np.uint8)

    parity = _parity_table(n_bits)
    flipped = y_lab ^ det_lab
    out = np.empty((count, len(strategies)), dtype=np.uint8)
    for j, strat in enumerate(strategies):
        err = parity[flipped & strat.selector_int]
        if noisy_si and strat.si_subset:
            cols = [col_of[k] for k in sorted(strat.si_subset)]
            err = err ^ (si_err[:, cols].sum(axis=1, dtype=np.int64) & 1).astype(np.uint8)
        out[:, j] = err
    return out


def run_trial(problem: IndexCodingProblem,
              matrix: EncodingMatrix,
              labeling: PskLabeling,
              strategies: Sequence[DecodingStrategy],
              kind: str,
              gamma_ic: float,
              gamma_si: float,
              rng: np.random.Generator) -> np.ndarray:
    """One trial: per-strategy 0/1 indicators of a wrong decoded bit.

    gamma_ic and gamma_si are linear; gamma_si = math.inf means the side
    information bits are taken error free.
    """
    block = _simulate_block(problem, matrix, labeling, strategies, kind,
                            gamma_ic, gamma_si, rng, count=1)
    return block[0]


# =====================================================================
# Sweep driver
# =====================================================================

def _worker_counts(trials: int, workers: int) -> list[int]:
    base, rem = divmod(trials, workers)
    return [base + (1 if w < rem else 0) for w in range(workers)]


def _run_point(problem, matrix, labeling, strategies, config: ChannelConfig,
               sweep_idx: int, receiver: int,
               gamma_ic: float, gamma_si: float) -> tuple[np.ndarray, int]:
    """Accumulated (per-strategy errors, trials) for one sweep point."""
    workers = config.max_workers
    counts = _worker_counts(config.trials, workers)
    target = None
    if config.min_errors is not None:
        target = max(1, math.ceil(config.min_errors / workers))

    def work(w: int) -> tuple[np.ndarray, int]:
        seq = np.random.SeedSequence((config.seed, sweep_idx, receiver, w))
        rng = np.random.Generator(np.random.Philox(seq))
        errors = np.zeros(len(strategies), dtype=np.int64)
        done = 0
        while done < counts[w]:
            block = min(BLOCK_TRIALS, counts[w] - done)
            out = _simulate_block(problem, matrix, labeling, strategies,
                                  config.kind, gamma_ic, gamma_si, rng, block)
            errors += out.sum(axis=0, dtype=np.int64)
            done += block
            if target is not None and (errors >= target).all():
                break
        return errors, done

    merged = np.zeros(len(strategies), dtype=np.int64)
    total = 0
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for errors, done in pool.map(work, range(workers)):
            merged += errors
            total += done
    return merged, total


def run_sweep(problem: IndexCodingProblem,
              matrix: EncodingMatrix,
              labeling: PskLabeling,
              receivers: Sequence[int] | None,
              config: ChannelConfig) -> SimulationReport:
    """Simulate every strategy of the selected receivers across the sweep.

    Each row carries the simulated error rate with a 95% confidence
    half-width next to the closed-form value from the error analysis (the
    AWGN expression; on the fading channel it serves as a reference, not a
    prediction). Results are deterministic for a fixed config.
    """
    if receivers is None:
        receivers = list(problem.receiver_indices())
    receivers = [int(r) for r in receivers]
    for r in receivers:
        if r < 1 or r > problem.n:
            raise ValueError(f"invalid receiver selection {r}")

    per_receiver: dict[int, list[DecodingStrategy]] = {}
    pair_counts: dict[int, list[int]] = {}
    for r in receivers:
        strategies = enumerate_strategies(problem, matrix, r)
        if not strategies:
            raise ValueError(
                f"receiver {r} has no decoding strategy; L is not an index "
                f"code for this problem")
        per_receiver[r] = strategies
        pair_counts[r] = [len(compute_pair_set(s.selector_a, labeling))
                          for s in strategies]

    gamma_si = math.inf if math.isinf(config.gamma_si_db) \
        else db_to_linear(config.gamma_si_db)
    p_si = pe_si(gamma_si)
    eb_offset = 10.0 * math.log10(matrix.n_bits)

    rows: list[SweepRow] = []
    for sweep_idx, snr_db in enumerate(config.gamma_ic_db):
        gamma_ic = db_to_linear(snr_db)
        for r in receivers:
            strategies = per_receiver[r]
            errors, trials = _run_point(problem, matrix, labeling, strategies,
                                        config, sweep_idx, r, gamma_ic, gamma_si)
            for strat, pc, err in zip(strategies, pair_counts[r], errors):
                theory = pe_noisy_closed_form(
                    pe_xor_bound(pc, matrix.n_bits, gamma_ic), p_si,
                    strat.si_count)
                rows.append(SweepRow(
                    snr_db=snr_db,
                    eb_no_db=snr_db - eb_offset,
                    receiver=r,
                    selector=strat.selector_str,
                    pair_count=pc,
                    si_count=strat.si_count,
                    theory=theory,
                    simulated=int(err) / trials,
                    ci_halfwidth=confidence_interval(int(err), trials),
                    errors=int(err),
                    trials=trials))
    return SimulationReport(config=config, n_bits=matrix.n_bits,
                            rows=tuple(rows))


# =====================================================================
# Interval estimate
# =====================================================================

def confidence_interval(errors: int, trials: int) -> float:
    """95% half-width for an error rate estimate.

    Normal approximation 1.96 sqrt(p(1-p)/n), switching to the Wilson
    interval half-width when either outcome count is below 10 (where the
    normal width collapses toward zero).
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if errors < 0 or errors > trials:
        raise ValueError("errors must lie in [0, trials]")
    p = errors / trials
    if min(errors, trials - errors) >= 10:
        return _Z95 * math.sqrt(p * (1.0 - p) / trials)
    z2 = _Z95 * _Z95
    return (_Z95 * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
            / (1.0 + z2 / trials))
