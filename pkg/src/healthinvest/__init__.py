"""Overlapping-generations models of health investment, fertility and population.

Three stages share one vocabulary: ``x`` is the labour share devoted to
health, ``n`` children per adult, ``L`` population, ``a`` environmental
adversity.  :mod:`~healthinvest.oracle` re-derives every closed form by
brute force.
"""

from .errors import (
    ConfigError,
    DomainError,
    ModelError,
    NoRootError,
    NoThresholdError,
    PerturbationError,
    RangeError,
)
from .params import (
    Stage1Params,
    Stage2Params,
    Stage3Params,
    validate_stage1,
    validate_stage2,
    validate_stage3,
)
from .shocks import AdversityPath, ShockProcessConfig, generate_path, path_from_values

__version__ = "0.1.0"

__all__ = [
    "AdversityPath",
    "ConfigError",
    "DomainError",
    "ModelError",
    "NoRootError",
    "NoThresholdError",
    "PerturbationError",
    "RangeError",
    "ShockProcessConfig",
    "Stage1Params",
    "Stage2Params",
    "Stage3Params",
    "generate_path",
    "path_from_values",
    "validate_stage1",
    "validate_stage2",
    "validate_stage3",
]
