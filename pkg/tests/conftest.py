"""Shared fixtures: the two reference problems used throughout the suite."""

from __future__ import annotations

from pathlib import Path

import pytest

from icpsk.core import EncodingMatrix, IndexCodingProblem

PROBLEMS_DIR = Path(__file__).resolve().parent.parent / "problems"

EX1_L = ((1, 1, 1), (0, 1, 0), (0, 1, 0), (1, 1, 1), (1, 1, 0))
EX2_L = ((1, 1, 1), (0, 1, 0), (0, 1, 1), (1, 1, 1), (1, 1, 0))

EX1_DEMANDS = (1, 2, 3, 4, 5)
EX1_SIDE_INFO = ({2, 3, 4, 5}, {1, 3, 4, 5}, {2, 4}, {1}, {3})
EX2_SIDE_INFO = ({2, 3, 4, 5}, {1, 3, 4, 5}, {2, 4}, {1, 3}, {3})

# Expected strategies per receiver, keyed by selector bits, in increasing
# selector order; values are the side information subsets S.
EX1_STRATEGIES = {
    1: {(0, 0, 1): {4}, (0, 1, 0): {2, 3, 4, 5},
        (1, 0, 0): {4, 5}, (1, 1, 1): {2, 3, 4}},
    2: {(0, 1, 0): {1, 3, 4, 5}, (0, 1, 1): {3, 5},
        (1, 1, 0): {3}, (1, 1, 1): {1, 3, 4}},
    3: {(1, 1, 0): {2}},
    4: {(0, 0, 1): {1}},
    5: {(1, 0, 1): set()},
}
EX2_STRATEGIES = {
    1: {(0, 0, 1): {3, 4}, (0, 1, 0): {2, 3, 4, 5},
        (1, 0, 0): {4, 5}, (1, 1, 1): {2, 4}},
    2: {(0, 1, 0): {1, 3, 4, 5}, (0, 1, 1): {5},
        (1, 1, 0): {3}, (1, 1, 1): {1, 4}},
    3: {(1, 1, 0): {2}},
    4: {(0, 0, 1): {1, 3}},
    5: {(1, 0, 1): {3}},
}


@pytest.fixture(scope="session")
def ex1():
    problem = IndexCodingProblem(5, EX1_DEMANDS, EX1_SIDE_INFO)
    return problem, EncodingMatrix(EX1_L)


@pytest.fixture(scope="session")
def ex2():
    problem = IndexCodingProblem(5, EX1_DEMANDS, EX2_SIDE_INFO)
    return problem, EncodingMatrix(EX2_L)
