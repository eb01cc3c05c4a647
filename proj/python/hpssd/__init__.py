"""Python front end for the hpssd simulation engine."""

import json

from ._hpssd import (
    ConfigError,
    DataError,
    ParameterError,
    Population,
    RunConfig,
    RunResult,
    ScenarioOutcome,
    __version__,
    bias,
    debias,
    delta,
    dist,
    evaluate_json,
    execute_run,
    execute_sweep,
    generate_population,
    mixing_matrix,
    psi,
    read_results,
    sample_run_config,
    within_design_ranges,
    zeta,
)

SCENARIOS = ("I", "II", "III", "IV")


def evaluate(runs):
    """Report over a run table as nested dicts."""
    return json.loads(evaluate_json(list(runs)))

__all__ = [
    "ConfigError",
    "DataError",
    "ParameterError",
    "Population",
    "RunConfig",
    "RunResult",
    "SCENARIOS",
    "ScenarioOutcome",
    "bias",
    "debias",
    "delta",
    "dist",
    "evaluate",
    "evaluate_json",
    "execute_run",
    "execute_sweep",
    "generate_population",
    "mixing_matrix",
    "psi",
    "read_results",
    "sample_run_config",
    "within_design_ranges",
    "zeta",
]
