"""Parameter records for the three model stages and their validation.

Each record is a frozen dataclass.  Constructing one does not validate it;
call the matching ``validate_*`` function (or :func:`load_params`) before
handing a record to the solvers.  Validation returns the very same object,
so it is idempotent.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError, RangeError

__all__ = [
    "Stage1Params",
    "Stage2Params",
    "Stage3Params",
    "validate_stage1",
    "validate_stage2",
    "validate_stage3",
    "params_from_mapping",
    "load_params",
    "read_toml",
]


@dataclass(frozen=True)
class Stage1Params:
    """Ancient economy: health good abated by adversity, survival consumption."""

    phi: float = 1.0  # health-production coefficient
    alpha: float = 0.5  # labour output elasticity
    gamma: float = 0.4  # weight on children
    p: float = 0.2  # output fraction per child
    c_hat: float = 0.5  # survival consumption
    mu: float = 0.05  # ratchet floor, M(0)
    kappa: float = 0.5  # ratchet slope on ln(1 + d)

    @property
    def y_hat(self) -> float:
        """Income at which the survival constraint stops binding."""
        return self.c_hat / (1.0 - self.gamma)


@dataclass(frozen=True)
class Stage2Params:
    """Cobb-Douglas composite of health and labour, health in utility."""

    phi: float = 1.0
    alpha: float = 0.5
    beta: float = 0.5  # health share in the composite input
    gamma: float = 0.4
    p: float = 0.2
    lambda_fixed: float = 1.0
    delta0: float = 0.3  # mortality intercept
    delta1: float = 0.4  # mortality slope in adversity
    delta_min: float = 0.05
    delta_max: float = 0.95


@dataclass(frozen=True)
class Stage3Params:
    """Health multiplies consumption utility; compact production function."""

    A: float = 7.389
    alpha: float = 0.5
    gamma: float = 0.5
    p: float = 0.25


def _finite(rec, names):
    for name in names:
        value = getattr(rec, name)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise RangeError(name, f"{name} must be a real number, got {value!r}")
        if not math.isfinite(value):
            raise RangeError(name, f"{name} must be finite, got {value!r}")


def _open_unit(rec, name):
    value = getattr(rec, name)
    if not 0.0 < value < 1.0:
        raise RangeError(name, f"{name} must lie in (0, 1), got {value!r}")


def _positive(rec, name):
    value = getattr(rec, name)
    if not value > 0.0:
        raise RangeError(name, f"{name} must be > 0, got {value!r}")


def validate_stage1(raw: Stage1Params) -> Stage1Params:
    """Check every stage-1 invariant; return ``raw`` unchanged or raise RangeError.

    Fields are checked in declaration order, so the error names the first
    offending field.
    """
    names = [f.name for f in dataclasses.fields(Stage1Params)]
    _finite(raw, names)
    _positive(raw, "phi")
    _open_unit(raw, "alpha")
    _open_unit(raw, "gamma")
    _open_unit(raw, "p")
    _positive(raw, "c_hat")
    _positive(raw, "mu")
    if not raw.kappa >= 0.0:
        raise RangeError("kappa", f"kappa must be >= 0, got {raw.kappa!r}")
    if not (math.isfinite(raw.y_hat) and raw.y_hat > raw.c_hat):
        raise RangeError("c_hat", "survival income c_hat/(1-gamma) must be finite and exceed c_hat")
    return raw


def validate_stage2(raw: Stage2Params) -> Stage2Params:
    names = [f.name for f in dataclasses.fields(Stage2Params)]
    _finite(raw, names)
    _positive(raw, "phi")
    _open_unit(raw, "alpha")
    _open_unit(raw, "beta")
    _open_unit(raw, "gamma")
    _open_unit(raw, "p")
    _positive(raw, "lambda_fixed")
    if raw.delta1 < 0.0:
        # mortality has to be non-decreasing in adversity
        raise RangeError("delta1", f"delta1 must be >= 0, got {raw.delta1!r}")
    if not 0.0 < raw.delta_min < 1.0:
        raise RangeError("delta_min", f"delta_min must lie in (0, 1), got {raw.delta_min!r}")
    if not 0.0 < raw.delta_max < 1.0:
        raise RangeError("delta_max", f"delta_max must lie in (0, 1), got {raw.delta_max!r}")
    if raw.delta_min > raw.delta_max:
        raise RangeError("delta_max", "delta_max must be >= delta_min")
    return raw


def validate_stage3(raw: Stage3Params) -> Stage3Params:
    names = [f.name for f in dataclasses.fields(Stage3Params)]
    _finite(raw, names)
    _positive(raw, "A")
    _open_unit(raw, "alpha")
    _open_unit(raw, "gamma")
    _open_unit(raw, "p")
    return raw


_RECORDS = {
    "stage1": (Stage1Params, validate_stage1),
    "stage2": (Stage2Params, validate_stage2),
    "stage3": (Stage3Params, validate_stage3),
}


def params_from_mapping(stage: str, table: Mapping[str, Any], base=None):
    """Build and validate a parameter record from a key-value table.

    ``base`` supplies values for keys missing from ``table`` (defaults to the
    dataclass defaults).  Unknown keys raise ConfigError.
    """
    try:
        cls, validate = _RECORDS[stage]
    except KeyError:
        raise ConfigError(f"unknown stage {stage!r}; expected one of {sorted(_RECORDS)}") from None
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(table) - known)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{stage}]: {', '.join(unknown)}")
    values = {k: (float(v) if isinstance(v, int) and not isinstance(v, bool) else v) for k, v in table.items()}
    record = dataclasses.replace(base, **values) if base is not None else cls(**values)
    return validate(record)


def read_toml(path) -> dict:
    try:
        import tomllib  # type: ignore[import-not-found]
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    path = Path(path)
    try:
        with path.open("rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None


def load_params(path, stage: str):
    """Read the ``[stage]`` table from a TOML file; absent table means defaults."""
    doc = read_toml(path)
    table = doc.get(stage, {})
    if not isinstance(table, dict):
        raise ConfigError(f"[{stage}] must be a table")
    return params_from_mapping(stage, table)
