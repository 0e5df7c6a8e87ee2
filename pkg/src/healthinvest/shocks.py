"""Seeded environmental-adversity paths.

Randomness comes from numpy's PCG64 bit generator seeded with an explicit
64-bit integer; its name is written into every exported path so a run can
be replayed exactly.
"""

from __future__ import annotations

import dataclasses
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import ConfigError

RNG_NAME = "PCG64"
KINDS = ("constant", "iid-uniform", "ar1", "custom")

__all__ = [
    "RNG_NAME",
    "KINDS",
    "ShockProcessConfig",
    "AdversityPath",
    "generate_path",
    "path_from_values",
    "format_path_csv",
    "parse_path_csv",
    "write_path_csv",
    "read_path_csv",
]


@dataclass(frozen=True)
class ShockProcessConfig:
    kind: str = "constant"
    a_const: float = 0.0
    a_lo: float = 0.0
    a_hi: float = 0.0
    rho: float = 0.0
    a_bar: float = 0.0
    sigma: float = 0.0
    seed: int = 0

    def check(self) -> "ShockProcessConfig":
        if self.kind not in KINDS:
            raise ConfigError(f"unknown shock kind {self.kind!r}; expected one of {KINDS}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        for name in ("a_const", "a_lo", "a_hi", "rho", "a_bar", "sigma"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if self.kind == "constant" and self.a_const < 0:
            raise ConfigError("a_const must be >= 0")
        if self.kind == "iid-uniform" and not 0 <= self.a_lo <= self.a_hi:
            raise ConfigError(f"need 0 <= a_lo <= a_hi, got a_lo={self.a_lo}, a_hi={self.a_hi}")
        if self.kind == "ar1":
            if not 0 <= self.rho < 1:
                raise ConfigError(f"rho must lie in [0, 1), got {self.rho}")
            if self.sigma < 0:
                raise ConfigError(f"sigma must be >= 0, got {self.sigma}")
        return self

    @classmethod
    def from_mapping(cls, table: Mapping[str, Any]) -> "ShockProcessConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(table) - known)
        if unknown:
            raise ConfigError(f"unknown key(s) in [shocks]: {', '.join(unknown)}")
        values = dict(table)
        for name in known - {"kind", "seed"}:
            if name in values:
                values[name] = float(values[name])
        return cls(**values).check()

    def metadata(self) -> dict:
        """Fields relevant to ``kind``, in a fixed order."""
        meta = {"kind": self.kind, "seed": self.seed, "rng": RNG_NAME}
        if self.kind == "constant":
            meta["a_const"] = self.a_const
        elif self.kind == "iid-uniform":
            meta.update(a_lo=self.a_lo, a_hi=self.a_hi)
        elif self.kind == "ar1":
            meta.update(rho=self.rho, a_bar=self.a_bar, sigma=self.sigma)
        return meta


@dataclass(frozen=True, eq=False)
class AdversityPath:
    """Realised adversity ``a_0 .. a_T``; ``values`` is a read-only array."""

    values: np.ndarray
    seed: int
    config: ShockProcessConfig

    @property
    def T(self) -> int:
        return len(self.values) - 1

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, AdversityPath):
            return NotImplemented
        return (
            self.seed == other.seed
            and self.config == other.config
            and np.array_equal(self.values, other.values)
        )


def _freeze(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def generate_path(cfg: ShockProcessConfig, T: int) -> AdversityPath:
    """Draw ``T + 1`` adversity levels; a pure function of ``(cfg, T)``."""
    cfg.check()
    if isinstance(T, bool) or not isinstance(T, (int, np.integer)) or T < 1:
        raise ConfigError(f"T must be an integer >= 1, got {T!r}")
    n = int(T) + 1
    if cfg.kind == "custom":
        raise ConfigError("custom paths are built with path_from_values or read_path_csv")
    if cfg.kind == "constant":
        values = np.full(n, cfg.a_const)
    else:
        rng = np.random.Generator(np.random.PCG64(cfg.seed))
        if cfg.kind == "iid-uniform":
            values = rng.uniform(cfg.a_lo, cfg.a_hi, size=n)
        else:
            eps = rng.standard_normal(n)
            latent = np.empty(n)
            latent[0] = cfg.a_bar
            for t in range(1, n):
                latent[t] = cfg.a_bar + cfg.rho * (latent[t - 1] - cfg.a_bar) + cfg.sigma * eps[t]
            # the recursion runs on the unclamped state; only emitted values are floored
            values = np.maximum(latent, 0.0)
    return AdversityPath(_freeze(values), cfg.seed, cfg)


def path_from_values(values: Sequence[float], seed: int = 0) -> AdversityPath:
    """Wrap a hand-built sequence (e.g. a single up-tick) as a path."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or len(arr) < 2:
        raise ConfigError("a path needs at least two values")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ConfigError("adversity values must be finite and >= 0")
    cfg = ShockProcessConfig(kind="custom", seed=seed)
    return AdversityPath(_freeze(arr), seed, cfg)


def format_path_csv(path: AdversityPath) -> str:
    meta = " ".join(f"{k}={v!r}" if isinstance(v, float) else f"{k}={v}" for k, v in path.config.metadata().items())
    lines = [f"# {meta}", "a"]
    lines.extend(repr(float(v)) for v in path.values)
    return "\n".join(lines) + "\n"


def parse_path_csv(text: str) -> AdversityPath:
    meta = {}
    values = []
    header_seen = False
    for lineno, line in enumerate(io.StringIO(text), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                key, sep, val = token.partition("=")
                if sep:
                    meta[key] = val
            continue
        if not header_seen:
            if line != "a":
                raise ConfigError(f"line {lineno}: expected header 'a', got {line!r}")
            header_seen = True
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise ConfigError(f"line {lineno}: not a number: {line!r}") from None
    if not header_seen:
        raise ConfigError("missing header line 'a'")
    seed = int(meta.get("seed", 0))
    kind = meta.get("kind", "custom")
    fields = {}
    for name in ("a_const", "a_lo", "a_hi", "rho", "a_bar", "sigma"):
        if name in meta:
            fields[name] = float(meta[name])
    cfg = ShockProcessConfig(kind=kind, seed=seed, **fields).check()
    if len(values) < 2:
        raise ConfigError("a path needs at least two values")
    arr = np.asarray(values)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise ConfigError("adversity values must be finite and >= 0")
    return AdversityPath(_freeze(arr), seed, cfg)


def write_path_csv(path: AdversityPath, dest) -> None:
    Path(dest).write_text(format_path_csv(path), encoding="utf-8")


def read_path_csv(src) -> AdversityPath:
    return parse_path_csv(Path(src).read_text(encoding="utf-8"))
