"""Figures from icpsk simulation sweep CSVs."""

from .render import (
    EXPECTED_COLUMNS,
    PlotError,
    PlotSpec,
    SweepData,
    build_figure,
    main,
    read_sweep_csv,
    render,
)

__all__ = [
    "EXPECTED_COLUMNS",
    "PlotError",
    "PlotSpec",
    "SweepData",
    "build_figure",
    "main",
    "read_sweep_csv",
    "render",
]

__version__ = "0.1.0"
