"""Run configuration read from a TOML file.

Layout::

    [run]            # stage, T, L0, lambda0, out
    [shocks]         # ShockProcessConfig fields
    [stage1]         # Stage1Params fields
    [stage2]
    [stage3]

Every table is optional; missing keys take the dataclass defaults.  Unknown
tables or keys are errors.  Command-line flags override file values.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field

from .errors import ConfigError
from .params import Stage1Params, Stage2Params, Stage3Params, params_from_mapping, read_toml
from .shocks import ShockProcessConfig

ENV_CONFIG = "HEALTHINVEST_CONFIG"

_TABLES = {"run", "shocks", "stage1", "stage2", "stage3"}
_RUN_KEYS = {"stage", "T", "L0", "lambda0", "out"}


@dataclass(frozen=True)
class RunConfig:
    stage: int = 1
    T: int = 100
    L0: float = 1.0
    lambda0: float = 1.0
    out: str | None = None
    shocks: ShockProcessConfig = field(default_factory=ShockProcessConfig)
    stage1: Stage1Params = field(default_factory=Stage1Params)
    stage2: Stage2Params = field(default_factory=Stage2Params)
    stage3: Stage3Params = field(default_factory=Stage3Params)

    @property
    def seed(self) -> int:
        return self.shocks.seed

    def params_for(self, stage):
        return getattr(self, f"stage{stage}")

    def check(self) -> "RunConfig":
        if self.stage not in (1, 2, 3):
            raise ConfigError(f"stage must be 1, 2 or 3, got {self.stage!r}")
        if isinstance(self.T, bool) or not isinstance(self.T, int) or self.T < 1:
            raise ConfigError(f"T must be an integer >= 1, got {self.T!r}")
        if not self.L0 > 0 or not self.lambda0 > 0:
            raise ConfigError("L0 and lambda0 must be > 0")
        return self


def _parse_stage(value):
    if isinstance(value, str):
        value = value.removeprefix("stage")
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"stage must be 1, 2 or 3, got {value!r}") from None


def config_from_dict(doc: dict) -> RunConfig:
    unknown = sorted(set(doc) - _TABLES)
    if unknown:
        raise ConfigError(f"unknown table(s): {', '.join(unknown)}")
    run = dict(doc.get("run", {}))
    bad = sorted(set(run) - _RUN_KEYS)
    if bad:
        raise ConfigError(f"unknown key(s) in [run]: {', '.join(bad)}")
    kwargs = {}
    if "stage" in run:
        kwargs["stage"] = _parse_stage(run["stage"])
    if "T" in run:
        kwargs["T"] = run["T"]
    for key in ("L0", "lambda0"):
        if key in run:
            kwargs[key] = float(run[key])
    if "out" in run:
        kwargs["out"] = str(run["out"])
    kwargs["shocks"] = ShockProcessConfig.from_mapping(doc.get("shocks", {}))
    for stage in ("stage1", "stage2", "stage3"):
        kwargs[stage] = params_from_mapping(stage, doc.get(stage, {}))
    return RunConfig(**kwargs).check()


def load_config(path=None) -> RunConfig:
    """Load ``path``, else ``$HEALTHINVEST_CONFIG``, else all defaults."""
    if path is None:
        path = os.environ.get(ENV_CONFIG) or None
    if path is None:
        return RunConfig().check()
    return config_from_dict(read_toml(path))


def with_overrides(cfg: RunConfig, **changes) -> RunConfig:
    changes = {k: v for k, v in changes.items() if v is not None}
    return dataclasses.replace(cfg, **changes).check()
