"""Exact lattice computations for hyperkahler fourfolds of K3^[2]-type."""

from ._core import (
    Config,
    HklError,
    Lattice,
    builtin_config,
    builtin_config_names,
    builtin_scenarios,
    discriminant_conditions,
    load_config,
    parse_config,
    run_scenario,
)

__all__ = [
    "Config",
    "HklError",
    "Lattice",
    "builtin_config",
    "builtin_config_names",
    "builtin_scenarios",
    "discriminant_conditions",
    "load_config",
    "parse_config",
    "run_scenario",
]
