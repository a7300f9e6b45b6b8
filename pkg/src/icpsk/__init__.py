"""Decoding strategy analysis and bit error simulation for index coding
over PSK broadcast channels."""

from .analysis import (
    NOISELESS,
    SelectionResult,
    SnrSpec,
    StrategyAnalysis,
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
from .core import (
    DecodingStrategy,
    EncodingMatrix,
    IndexCodingProblem,
    ValidationResult,
    apply_strategy,
    encode,
    enumerate_strategies,
    validate_matrix,
    validate_problem,
)
from .psk import (
    PairSet,
    PskLabeling,
    SignalPoint,
    adjacent_pairs,
    compute_pair_set,
    gray_labeling,
    map_symbol,
    min_distance,
    natural_labeling,
)
from .sim import (
    ChannelConfig,
    SimulationReport,
    SweepRow,
    confidence_interval,
    run_sweep,
    run_trial,
)

__version__ = "0.1.0"
