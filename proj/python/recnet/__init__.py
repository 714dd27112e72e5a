"""Recovery diffusion on spatial networks (Python bindings of the C++ core)."""

from ._core import (
    ConfigError,
    DataError,
    RecnetError,
    SpatialGraph,
    cli,
    correlate,
    durations_to_trajectory,
    fit_thresholds,
    graph_metrics,
    increment_rate,
    recovery_duration,
    run_diffusion,
    search_multipliers,
    synthesize,
    weekly_difference,
    zero_one_loss,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DataError",
    "RecnetError",
    "SpatialGraph",
    "cli",
    "correlate",
    "durations_to_trajectory",
    "fit_thresholds",
    "graph_metrics",
    "increment_rate",
    "recovery_duration",
    "run_diffusion",
    "search_multipliers",
    "synthesize",
    "weekly_difference",
    "zero_one_loss",
]
