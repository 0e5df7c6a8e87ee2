"""Time-stepping for the stage-1 and stage-2 economies under an adversity path."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, DomainError
from .params import Stage1Params, Stage2Params, validate_stage1, validate_stage2
from .shocks import AdversityPath
from . import stage1, stage2

__all__ = [
    "SimRecord",
    "SimSeries",
    "classify_regime",
    "run_stage1",
    "run_stage2",
    "params_hash",
    "series_to_csv",
    "write_series_csv",
    "summarize",
]

BOUNDARY_RTOL = 1e-12

STAGE1_COLUMNS = ("t", "a", "lambda", "x", "y", "n", "L", "regime", "scenario", "g")
STAGE2_COLUMNS = ("t", "a", "lambda", "x", "y", "n", "L", "regime", "delta", "L_tilde", "c")


@dataclass(frozen=True, slots=True)
class SimRecord:
    t: int
    a: float
    lam: float
    x_star: float
    y_star: float
    n_star: float
    L: float
    regime: str
    scenario: str | None = None  # stage 1: position relative to the threshold g
    g: float | None = None
    delta: float | None = None  # stage 2 only
    L_tilde: float | None = None
    c_star: float | None = None


@dataclass(frozen=True)
class SimSeries:
    stage: int
    records: tuple
    params: object
    path_meta: dict
    termination: str
    requested_T: int = 0

    def column(self, name):
        attr = {"lambda": "lam", "x": "x_star", "y": "y_star", "n": "n_star", "c": "c_star"}.get(name, name)
        return [getattr(r, attr) for r in self.records]


def classify_regime(L: float, g: float) -> str:
    """``scenario-1`` above the threshold (shrinking), ``scenario-2`` below (growing)."""
    if not g > 0:
        raise DomainError(f"threshold must be > 0, got {g!r}")
    if abs(L - g) <= BOUNDARY_RTOL * g:
        return "boundary"
    return "scenario-1" if L > g else "scenario-2"


def _check_path(path: AdversityPath, T):
    if T is None:
        T = path.T
    if T < 1:
        raise ConfigError(f"T must be >= 1, got {T}")
    if len(path.values) < T + 1:
        raise ConfigError(f"path has {len(path.values)} values, need T+1 = {T + 1}")
    return T


def run_stage1(p: Stage1Params, path: AdversityPath, L0: float, lambda0: float, T: int | None = None) -> SimSeries:
    """Simulate ``T`` periods (records ``0..T``) of the ancient economy.

    Productivity updates use the current and lagged adversity and allocation;
    the lags start equal to the period-0 values.  The run stops early on
    extinction (fertility zero) or when adversity reaches ``phi * lambda``.
    """
    validate_stage1(p)
    T = _check_path(path, T)
    if not L0 > 0 or not lambda0 > 0:
        raise DomainError(f"need L0 > 0 and lambda0 > 0, got {L0!r}, {lambda0!r}")
    a_vals = [float(v) for v in path.values[: T + 1]]
    if a_vals[0] >= p.phi * lambda0:
        raise DomainError(f"a_0 = {a_vals[0]!r} >= phi*lambda0 = {p.phi * lambda0!r}")

    has_threshold = p.p < p.gamma
    records = []
    lam, L = lambda0, L0
    a_prev = a_vals[0]
    x_prev = None
    reason = "completed"
    for t, a in enumerate(a_vals):
        if a >= p.phi * lam:
            reason = "adversity-exceeds-technology"
            break
        pol = stage1.solve_stage1(p, lam, a, L)
        if has_threshold:
            g = stage1.population_threshold_g(p, lam, a)
            scenario = classify_regime(L, g)
        else:
            g, scenario = None, "no-threshold"
        records.append(SimRecord(t, a, lam, pol.x_star, pol.y_star, pol.n_star, L, pol.regime.value, scenario, g))
        if pol.n_star == 0.0:
            reason = "extinction"
            break
        if t == T:
            break
        if x_prev is None:
            x_prev = pol.x_star
        lam = stage1.update_health_productivity(p, lam, a, a_prev, pol.x_star, x_prev)
        a_prev, x_prev = a, pol.x_star
        L = stage1.step_population(pol.n_star, L)
    return SimSeries(1, tuple(records), p, _path_meta(path), reason, T)


def run_stage2(p: Stage2Params, path: AdversityPath, L0: float, T: int | None = None) -> SimSeries:
    validate_stage2(p)
    T = _check_path(path, T)
    if not L0 > 0:
        raise DomainError(f"need L0 > 0, got {L0!r}")
    records = []
    L = L0
    steady_cache = {}
    for t, a in enumerate(float(v) for v in path.values[: T + 1]):
        delta = stage2.mortality(p, a)
        if delta not in steady_cache:
            steady_cache[delta] = stage2.steady_state_population(p, delta)
        L_tilde = steady_cache[delta]
        pol = stage2.optimal_policy2(p, L)
        if abs(L - L_tilde) <= BOUNDARY_RTOL * L_tilde:
            regime = "steady"
        else:
            regime = "above-steady" if L > L_tilde else "below-steady"
        records.append(
            SimRecord(t, a, p.lambda_fixed, pol.x_star, pol.y, pol.n_star, L, regime,
                      delta=delta, L_tilde=L_tilde, c_star=pol.c_star)
        )
        if t == T:
            break
        L = stage2.step_population2(p, L, delta)
    return SimSeries(2, tuple(records), p, _path_meta(path), "completed", T)


def _path_meta(path: AdversityPath) -> dict:
    return path.config.metadata()


def params_hash(params) -> str:
    payload = json.dumps(dataclasses.asdict(params), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def series_to_csv(series: SimSeries) -> str:
    """CSV text: comment-prefixed metadata lines, a header row, one row per record."""
    meta = " ".join(f"{k}={_fmt(v)}" for k, v in series.path_meta.items())
    lines = [
        f"# stage={series.stage} termination={series.termination} records={len(series.records)}",
        f"# {meta}",
        f"# params={params_hash(series.params)} "
        + " ".join(f"{k}={_fmt(v)}" for k, v in dataclasses.asdict(series.params).items()),
    ]
    if series.stage == 1:
        cols = STAGE1_COLUMNS
        getters = ("t", "a", "lam", "x_star", "y_star", "n_star", "L", "regime", "scenario", "g")
    else:
        cols = STAGE2_COLUMNS
        getters = ("t", "a", "lam", "x_star", "y_star", "n_star", "L", "regime", "delta", "L_tilde", "c_star")
    lines.append(",".join(cols))
    for r in series.records:
        lines.append(",".join(_fmt(getattr(r, g)) for g in getters))
    return "\n".join(lines) + "\n"


def write_series_csv(series: SimSeries, dest) -> None:
    Path(dest).write_text(series_to_csv(series), encoding="utf-8")


def summarize(series: SimSeries) -> dict:
    """Long-run growth and oscillation counts for a run."""
    L = series.column("L")
    lam = series.column("lambda")
    moves = [b - a for a, b in zip(L, L[1:])]
    ups = sum(1 for m in moves if m > 0)
    downs = sum(1 for m in moves if m < 0)
    signs = [m > 0 for m in moves if m != 0]
    flips = sum(1 for s0, s1 in zip(signs, signs[1:]) if s0 != s1)
    out = {
        "periods": len(series.records),
        "termination": series.termination,
        "L_first": L[0] if L else math.nan,
        "L_last": L[-1] if L else math.nan,
        "L_up_moves": ups,
        "L_down_moves": downs,
        "L_direction_changes": flips,
        "lambda_first": lam[0] if lam else math.nan,
        "lambda_last": lam[-1] if lam else math.nan,
        "lambda_jumps": sum(1 for a, b in zip(lam, lam[1:]) if b > a),
    }
    return out
