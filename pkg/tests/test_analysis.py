"""Error rate formulas, threshold SNR, and the two selection rules.

Oracles: mpmath evaluates the Gaussian tail at 50 digits; the threshold is
re-derived by bisecting the defining balance equation directly; the binomial
sum and the closed form check each other over a full grid.
"""

from __future__ import annotations

import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from icpsk.analysis import (
    NOISELESS,
    SnrSpec,
    db_to_linear,
    linear_to_db,
    pe_bound_noiseless,
    pe_noisy_binomial,
    pe_noisy_closed_form,
    pe_si,
    pe_xor_bound,
    q_function,
    q_inverse,
    select_strategy_noiseless,
    select_strategy_noisy,
    threshold_gamma,
    union_bound_symbol_error,
)
from icpsk.core import DecodingStrategy, enumerate_strategies
from icpsk.psk import compute_pair_set, natural_labeling

mpmath.mp.dps = 50


def q_oracle(x: float) -> float:
    """High precision Gaussian tail via mpmath."""
    return float(mpmath.erfc(mpmath.mpf(x) / mpmath.sqrt(2)) / 2)


def bisect_threshold(pair_count: int, n_bits: int, eta: int,
                     gamma_si: float) -> float:
    """Oracle: root of pe_xor_bound(g) (1-2p)^eta = (1 - (1-2p)^eta)/2."""
    p = pe_si(gamma_si)
    shrink = (1.0 - 2.0 * p) ** eta
    floor = (1.0 - shrink) / 2.0

    def gap(log_g: float) -> float:
        return pe_xor_bound(pair_count, n_bits, 10.0 ** log_g) * shrink - floor

    lo, hi = -12.0, 12.0
    assert gap(lo) > 0 > gap(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 10.0 ** (0.5 * (lo + hi))


# ---------------------------------------------------------------------
# Gaussian tail and inverse
# ---------------------------------------------------------------------

class TestQFunction:
    def test_at_zero(self):
        assert q_function(0.0) == pytest.approx(0.5)

    def test_tail_limits(self):
        assert q_function(float("inf")) == 0.0
        assert q_function(float("-inf")) == 1.0

    def test_at_one(self):
        assert q_function(1.0) == pytest.approx(0.158655, abs=1e-6)

    def test_against_high_precision_oracle(self):
        for i in range(161):
            x = -8.0 + 0.1 * i
            assert q_function(x) == pytest.approx(q_oracle(x), rel=1e-12)


class TestQInverse:
    def test_at_half(self):
        assert q_inverse(0.5) == pytest.approx(0.0, abs=1e-10)

    def test_named_point(self):
        assert q_inverse(0.158655) == pytest.approx(1.0, abs=1e-5)

    @pytest.mark.parametrize("x", range(-3, 4))
    def test_round_trip_from_x(self, x):
        assert q_inverse(q_function(float(x))) == pytest.approx(x, abs=1e-8)

    @pytest.mark.parametrize("p", [1e-12, 1e-8, 1e-4, 0.01, 0.3, 0.9, 1 - 1e-9])
    def test_forward_round_trip(self, p):
        assert q_function(q_inverse(p)) == pytest.approx(p, abs=1e-10, rel=1e-9)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
    def test_domain(self, p):
        with pytest.raises(ValueError):
            q_inverse(p)


# ---------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------

class TestUnionBound:
    def test_antipodal_closed_form(self):
        gamma = db_to_linear(6.0)
        assert union_bound_symbol_error(natural_labeling(1), gamma) == \
            pytest.approx(q_function(math.sqrt(2 * gamma)), rel=1e-12)

    def test_high_snr_nearest_neighbor(self):
        gamma = db_to_linear(20.0)
        nn = 2 * q_function(math.sqrt(2 * gamma) * math.sin(math.pi / 8))
        assert union_bound_symbol_error(natural_labeling(3), gamma) == \
            pytest.approx(nn, rel=0.01)

    @pytest.mark.parametrize("gamma_db", [-10.0, -3.0, 0.0, 5.0, 15.0])
    @pytest.mark.parametrize("n_bits", [2, 3, 4])
    def test_dominates_nearest_neighbor_term(self, gamma_db, n_bits):
        gamma = db_to_linear(gamma_db)
        labeling = natural_labeling(n_bits)
        nn = min(1.0, 2 * q_function(
            math.sqrt(2 * gamma) * math.sin(math.pi / labeling.size)))
        assert union_bound_symbol_error(labeling, gamma) >= nn - 1e-15


class TestPeXorBound:
    def test_empty_pair_set(self):
        assert pe_xor_bound(0, 3, 10.0) == 0.0

    def test_reference_value(self):
        got = pe_xor_bound(2, 3, 30.0)
        expected = float(
            (mpmath.mpf(2) / 8) * mpmath.erfc(
                mpmath.sqrt(60 * mpmath.sin(mpmath.pi / 8) ** 2)
                / mpmath.sqrt(2)))
        assert got == pytest.approx(expected, rel=1e-12)
        assert got == pytest.approx(7.58e-4, rel=5e-3)

    @given(st.integers(1, 4), st.floats(0.01, 1e4), st.integers(1, 4))
    def test_linear_in_pair_count(self, pair_count, gamma, n_bits):
        size = 1 << n_bits
        if 2 * pair_count > size:
            pair_count = size // 2 or 1
        one = pe_xor_bound(pair_count, n_bits, gamma)
        two = pe_xor_bound(2 * pair_count, n_bits, gamma)
        if two < 1.0:
            assert two == pytest.approx(2 * one, rel=1e-12)

    def test_never_exceeds_one(self):
        value = pe_xor_bound(8, 3, 1e-9)
        assert 0.999 < value <= 1.0

    @given(st.integers(0, 8), st.floats(1e-3, 1e5))
    def test_noiseless_alias_scales_by_bit_count(self, pair_count, eb_no):
        assert pe_bound_noiseless(pair_count, 3, eb_no) == \
            pe_xor_bound(pair_count, 3, 3 * eb_no)

    def test_ratio_matches_pair_counts(self):
        gamma = 30.0
        assert pe_xor_bound(2, 3, gamma) / pe_xor_bound(8, 3, gamma) == \
            pytest.approx(2 / 8, rel=1e-12)

    def test_single_bit_is_antipodal_error(self):
        eb_no = db_to_linear(4.0)
        assert pe_bound_noiseless(1, 1, eb_no) == \
            pytest.approx(q_function(math.sqrt(2 * eb_no)), rel=1e-12)


class TestPeSi:
    def test_noiseless(self):
        assert pe_si(NOISELESS) == 0.0

    def test_reference_value(self):
        assert pe_si(db_to_linear(5.0)) == pytest.approx(5.95e-3, rel=2e-3)
        assert pe_si(db_to_linear(5.0)) == pytest.approx(
            q_oracle(math.sqrt(2 * 10 ** 0.5)), rel=1e-12)

    def test_monotone_decreasing(self):
        values = [pe_si(db_to_linear(db)) for db in range(-5, 15)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            pe_si(0.0)


# ---------------------------------------------------------------------
# Noisy side information composition
# ---------------------------------------------------------------------

class TestNoisyComposition:
    def test_no_side_bits(self):
        assert pe_noisy_closed_form(0.037, 0.2, 0) == 0.037

    def test_useless_side_bits(self):
        assert pe_noisy_closed_form(0.01, 0.5, 3) == pytest.approx(0.5)

    def test_reference_value(self):
        assert pe_noisy_closed_form(0.01, 0.02, 2) == pytest.approx(
            0.048416, abs=1e-12)

    def test_single_bit_binomial(self):
        assert pe_noisy_binomial(0.3, 0.1, 1) == pytest.approx(
            0.3 * 0.9 + 0.7 * 0.1, rel=1e-12)

    def test_two_bit_binomial(self):
        assert pe_noisy_binomial(0.0, 0.1, 2) == pytest.approx(0.18, rel=1e-12)

    def test_closed_form_equals_binomial_on_grid(self):
        for i in range(0, 51):
            pe_xor = i / 100.0
            for j in range(0, 51):
                p = j / 100.0
                for eta in range(11):
                    a = pe_noisy_closed_form(pe_xor, p, eta)
                    b = pe_noisy_binomial(pe_xor, p, eta)
                    assert abs(a - b) <= 1e-12

    @given(st.floats(0, 0.5), st.floats(0, 0.5), st.integers(0, 10))
    def test_closed_form_equals_binomial(self, pe_xor, p, eta):
        assert pe_noisy_closed_form(pe_xor, p, eta) == pytest.approx(
            pe_noisy_binomial(pe_xor, p, eta), abs=1e-12)

    @given(st.floats(0, 1), st.integers(0, 10))
    def test_clean_side_info_is_identity(self, pe_xor, eta):
        assert pe_noisy_closed_form(pe_xor, 0.0, eta) == pe_xor

    @given(st.floats(0, 0.5), st.integers(1, 10))
    def test_monotone_in_side_error(self, pe_xor, eta):
        values = [pe_noisy_closed_form(pe_xor, p / 100.0, eta)
                  for p in range(51)]
        assert all(b >= a - 1e-15 for a, b in zip(values, values[1:]))

    def test_argument_checks(self):
        with pytest.raises(ValueError):
            pe_noisy_closed_form(1.5, 0.1, 1)
        with pytest.raises(ValueError):
            pe_noisy_closed_form(0.1, 0.7, 1)
        with pytest.raises(ValueError):
            pe_noisy_binomial(0.1, 0.1, -1)


# ---------------------------------------------------------------------
# Threshold SNR
# ---------------------------------------------------------------------

def reference_strategy_shapes(problem, matrix, labeling):
    """(pair_count, si_count) for every strategy of every receiver."""
    shapes = []
    for receiver in problem.receiver_indices():
        for s in enumerate_strategies(problem, matrix, receiver):
            pc = len(compute_pair_set(s.selector_a, labeling))
            shapes.append((pc, s.si_count))
    return shapes


class TestThresholdGamma:
    def test_no_side_bits_means_no_floor(self):
        assert threshold_gamma(2, 3, 0, db_to_linear(5.0)) == math.inf

    def test_noiseless_side_info_means_no_floor(self):
        assert threshold_gamma(2, 3, 2, NOISELESS) == math.inf

    def test_empty_pair_set_rejected(self):
        with pytest.raises(ValueError):
            threshold_gamma(0, 3, 1, 1.0)

    def test_matches_bisection_oracle(self, ex2):
        problem, matrix = ex2
        labeling = natural_labeling(3)
        for gamma_si_db in (5.0, 8.0, 12.0):
            gamma_si = db_to_linear(gamma_si_db)
            for pc, eta in reference_strategy_shapes(problem, matrix, labeling):
                if eta == 0:
                    continue
                got = threshold_gamma(pc, 3, eta, gamma_si)
                oracle = bisect_threshold(pc, 3, eta, gamma_si)
                assert abs(linear_to_db(got) - linear_to_db(oracle)) < 0.01

    def test_balance_holds_at_threshold(self, ex2):
        problem, matrix = ex2
        labeling = natural_labeling(3)
        gamma_si = db_to_linear(5.0)
        p = pe_si(gamma_si)
        for pc, eta in reference_strategy_shapes(problem, matrix, labeling):
            if eta == 0:
                continue
            th = threshold_gamma(pc, 3, eta, gamma_si)
            shrink = (1 - 2 * p) ** eta
            falling = pe_xor_bound(pc, 3, th) * shrink
            floor = (1 - shrink) / 2
            assert falling == pytest.approx(floor, rel=1e-6)

    def test_monotone_in_side_snr(self):
        for pc, eta in ((2, 1), (2, 2), (4, 4), (6, 1), (8, 2)):
            values = [threshold_gamma(pc, 3, eta, db_to_linear(db))
                      for db in (2.0, 5.0, 8.0, 12.0)]
            assert all(a < b for a, b in zip(values, values[1:]))

    def test_floor_dominating_everywhere_gives_zero(self):
        # Strong side noise and a tiny pair set: the floor wins at any SNR.
        assert threshold_gamma(1, 1, 8, 0.01) == 0.0

    def test_very_clean_side_info_gives_inf(self):
        assert threshold_gamma(2, 3, 2, 1e7) == math.inf


# ---------------------------------------------------------------------
# Selection rules
# ---------------------------------------------------------------------

LABELING8 = natural_labeling(3)


class TestNoiselessSelection:
    def test_first_receiver(self, ex1):
        problem, matrix = ex1
        result = select_strategy_noiseless(
            enumerate_strategies(problem, matrix, 1), LABELING8)
        assert result.chosen.selector_str == "100"
        assert result.branch == "min-pair"

    def test_second_receiver(self, ex1):
        problem, matrix = ex1
        result = select_strategy_noiseless(
            enumerate_strategies(problem, matrix, 2), LABELING8)
        assert result.chosen.selector_str == "110"

    def test_single_strategy(self, ex1):
        problem, matrix = ex1
        strategies = enumerate_strategies(problem, matrix, 5)
        result = select_strategy_noiseless(strategies, LABELING8)
        assert result.chosen == strategies[0]

    def test_empty_list_rejected(self):
        with pytest.raises(ValueError):
            select_strategy_noiseless([], LABELING8)

    def test_mixed_receivers_rejected(self):
        strategies = [DecodingStrategy(1, (1, 0, 0)),
                      DecodingStrategy(2, (0, 1, 0))]
        with pytest.raises(ValueError):
            select_strategy_noiseless(strategies, LABELING8)

    def test_chosen_minimizes_pair_count(self, ex1, ex2):
        for problem, matrix in (ex1, ex2):
            for receiver in problem.receiver_indices():
                strategies = enumerate_strategies(problem, matrix, receiver)
                result = select_strategy_noiseless(strategies, LABELING8)
                counts = [len(compute_pair_set(s.selector_a, LABELING8))
                          for s in strategies]
                chosen_count = len(compute_pair_set(
                    result.chosen.selector_a, LABELING8))
                assert chosen_count == min(counts)

    def test_ranking_sorted_by_pair_count(self, ex1):
        problem, matrix = ex1
        result = select_strategy_noiseless(
            enumerate_strategies(problem, matrix, 1), LABELING8)
        counts = [row.pair_count for row in result.ranking]
        assert counts == sorted(counts)

    def test_equal_pair_counts_get_equal_bounds(self):
        # Strategies differing only in how many coded bits they use score
        # identically when their pair counts agree.
        eb_no = db_to_linear(10.0)
        one_bit = len(compute_pair_set((1, 0, 0), LABELING8))
        two_bit = len(compute_pair_set((1, 1, 0), LABELING8))
        assert one_bit == two_bit == 2
        assert pe_bound_noiseless(one_bit, 3, eb_no) == \
            pe_bound_noiseless(two_bit, 3, eb_no)


class TestNoisySelection:
    def test_low_side_snr_first_receiver(self, ex2):
        problem, matrix = ex2
        result = select_strategy_noisy(
            enumerate_strategies(problem, matrix, 1), LABELING8,
            db_to_linear(15.0), db_to_linear(5.0))
        assert result.branch == "min-si"
        assert result.chosen.selector_str == "100"

    def test_low_side_snr_second_receiver(self, ex2):
        problem, matrix = ex2
        result = select_strategy_noisy(
            enumerate_strategies(problem, matrix, 2), LABELING8,
            db_to_linear(15.0), db_to_linear(5.0))
        assert result.branch == "min-si"
        assert result.chosen.selector_str == "110"

    def test_high_side_snr_takes_pair_branch(self, ex2):
        problem, matrix = ex2
        for receiver, expected in ((1, "100"), (2, "110")):
            result = select_strategy_noisy(
                enumerate_strategies(problem, matrix, receiver), LABELING8,
                db_to_linear(15.0), db_to_linear(12.0))
            assert result.branch == "min-pair"
            assert result.chosen.selector_str == expected

    def test_tie_broken_by_pair_count_in_si_branch(self, ex2):
        problem, matrix = ex2
        result = select_strategy_noisy(
            enumerate_strategies(problem, matrix, 1), LABELING8,
            db_to_linear(15.0), db_to_linear(5.0))
        top = result.ranking[0]
        assert (top.si_count, top.pair_count) == (2, 2)

    def test_infinite_thresholds_ignored_in_branch_test(self):
        # One floor-free strategy must not stop the si branch from engaging.
        strategies = [DecodingStrategy(1, (0, 0, 1), frozenset({2, 3})),
                      DecodingStrategy(1, (1, 0, 0), frozenset())]
        result = select_strategy_noisy(strategies, LABELING8,
                                       db_to_linear(30.0), db_to_linear(5.0))
        assert result.branch == "min-si"
        assert result.chosen.si_subset == frozenset()

    def test_all_infinite_thresholds_reduce_to_pair_rule(self):
        strategies = [DecodingStrategy(1, (0, 0, 1), frozenset()),
                      DecodingStrategy(1, (1, 0, 0), frozenset())]
        result = select_strategy_noisy(strategies, LABELING8,
                                       db_to_linear(40.0), db_to_linear(5.0))
        assert result.branch == "min-pair"
        assert result.chosen.selector_str == "100"

    def test_threshold_annotations(self, ex2):
        problem, matrix = ex2
        result = select_strategy_noisy(
            enumerate_strategies(problem, matrix, 1), LABELING8,
            db_to_linear(15.0), db_to_linear(5.0))
        for row in result.ranking:
            assert row.threshold is not None
            assert row.pe_bound is not None
            oracle = bisect_threshold(row.pair_count, 3, row.si_count,
                                      db_to_linear(5.0))
            assert linear_to_db(row.threshold) == pytest.approx(
                linear_to_db(oracle), abs=0.01)


class TestSnrSpec:
    def test_from_db(self):
        spec = SnrSpec.from_db(10.0, 5.0)
        assert spec.gamma_ic == pytest.approx(10.0)
        assert spec.gamma_si == pytest.approx(10 ** 0.5)

    def test_noiseless_default(self):
        assert SnrSpec(1.0).gamma_si == NOISELESS

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            SnrSpec(0.0)
