"""Effective dynamics of bosonic modes coupled to a driven two-level-system bath."""

from ._core import (
    ConfigError,
    NumericalError,
    SingleModeRates,
    SteadyState,
    closed_form,
    load_config,
    oracle_comparison,
    rates,
    run_scenario,
    scenario_names,
    stability,
    steady_state,
    validate_all,
)

__all__ = [
    "ConfigError",
    "NumericalError",
    "SingleModeRates",
    "SteadyState",
    "closed_form",
    "load_config",
    "oracle_comparison",
    "rates",
    "run_scenario",
    "scenario_names",
    "stability",
    "steady_state",
    "validate_all",
]
