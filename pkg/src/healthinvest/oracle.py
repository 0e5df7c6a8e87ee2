"""Brute-force checks for every closed form in the package.

Nothing here calls the closed-form policy functions of the stage modules
when computing the brute-force side; production and utility are evaluated
directly from their primitive definitions on grids, and thresholds come
from bisection on a numerically maximised output.  The stage modules are
called only to obtain the closed-form value under test.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoRootError, NoThresholdError
from .numerics import bisect, golden_section_max
from .params import Stage1Params, Stage2Params, Stage3Params
from . import stage1, stage2, stage3

__all__ = [
    "OracleReport",
    "grid_argmax_stage1",
    "grid_argmax_utility2",
    "grid_argmax_utility3",
    "bisect_threshold",
    "bisect_steady_state",
    "reports_to_csv",
]


@dataclass(frozen=True)
class OracleReport:
    target: str
    closed_value: float
    brute_value: float
    abs_error: float
    resolution: float  # grid step or bisection tolerance
    bound: float
    passed: bool

    @classmethod
    def compare(cls, target, closed, brute, resolution, bound):
        err = abs(closed - brute)
        return cls(target, closed, brute, err, resolution, bound, bool(err <= bound))


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    names = [f.name for f in dataclasses.fields(OracleReport)]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    for r in reports:
        row = []
        for name in names:
            v = getattr(r, name)
            row.append(repr(float(v)) if isinstance(v, float) else str(v).lower() if isinstance(v, bool) else v)
        writer.writerow(row)
    return buf.getvalue()


def _interior_grid(lo, hi, n):
    """``n`` equally spaced points strictly inside ``(lo, hi)``."""
    step = (hi - lo) / (n + 1)
    return lo + step * np.arange(1, n + 1), step


def _output1(p: Stage1Params, lam, a, L, x):
    return (p.phi * lam * x - a) * (1.0 - x) ** p.alpha * L ** (p.alpha - 1.0)


def grid_argmax_stage1(p: Stage1Params, lam, a, L=1.0, grid_points=10**6, bound=None) -> OracleReport:
    """Exhaustive maximisation of output over an x-grid on ``(a/(phi lam), 1)``."""
    if grid_points < 1000:
        raise ValueError("grid_points must be >= 1000")
    tech = p.phi * lam
    if not lam > 0 or a < 0 or a >= tech:
        raise DomainError(f"need 0 <= a < phi*lambda, got a={a!r}, phi*lambda={tech!r}")
    xs, step = _interior_grid(a / tech, 1.0, grid_points)
    ys = _output1(p, lam, a, L, xs)
    brute = float(xs[int(np.argmax(ys))])  # argmax returns the lowest index on ties
    closed = stage1.optimal_labor_allocation(p, lam, a)
    return OracleReport.compare("stage1.x_star", closed, brute, step, 2 * step if bound is None else bound)


def _utility2_grid(p: Stage2Params, L, nx, nn):
    xs, dx = _interior_grid(0.0, 1.0, nx)
    lam = p.lambda_fixed
    ys = ((p.phi * lam * xs) ** p.beta * (1.0 - xs) ** (1.0 - p.beta)) ** p.alpha * L ** (p.alpha - 1.0)
    n_hi = float(ys.max()) / p.p
    ns, dn = _interior_grid(0.0, n_hi, nn)
    best = -math.inf
    best_ij = (0, 0)
    log_n = np.log(ns)
    for i in range(nx):
        c = ys[i] - p.p * ns
        with np.errstate(invalid="ignore", divide="ignore"):
            u = (1.0 - p.gamma) * np.log(np.where(c > 0.0, c, np.nan)) + (1.0 - p.gamma) * math.log(xs[i]) + p.gamma * log_n
        u = np.where(np.isnan(u), -np.inf, u)
        j = int(np.argmax(u))
        if u[j] > best:
            best = u[j]
            best_ij = (i, j)
    return xs[best_ij[0]], ns[best_ij[1]], dx, dn


def grid_argmax_utility2(p: Stage2Params, L=1.0, grid_points=1001, bound_steps=2.0, bound=None):
    """2-D grid search of stage-2 utility over ``(x, n)`` with ``c = y - p n``.

    ``grid_points`` is per axis.  Returns two reports, for ``x*`` and ``n*``.
    """
    if not L > 0:
        raise DomainError(f"population must be > 0, got {L!r}")
    x_b, n_b, dx, dn = _utility2_grid(p, L, grid_points, grid_points)
    pol = stage2.optimal_policy2(p, L)
    return [
        OracleReport.compare("stage2.x_star", pol.x_star, float(x_b), dx, bound_steps * dx if bound is None else bound),
        OracleReport.compare("stage2.n_star", pol.n_star, float(n_b), dn, bound_steps * dn if bound is None else bound),
    ]


def _utility3_grid(p: Stage3Params, xs):
    # c and n at their optimum for each x, from the two static first-order conditions
    y = p.A * xs ** (1.0 - p.alpha) * (1.0 - xs) ** p.alpha
    lam_ratio = p.gamma / ((1.0 - p.gamma) * xs)  # p*n*y / c
    c = y / (1.0 + lam_ratio)
    n = lam_ratio * c / (p.p * y)
    return (1.0 - p.gamma) * xs * np.log(c) + p.gamma * np.log(n)


def grid_argmax_utility3(p: Stage3Params, grid_points=10**6, eps=stage3.SCAN_EPS, bound=None) -> OracleReport:
    """Grid maximisation of stage-3 utility over ``x`` under the binding budget.

    The solver's global choice is its utility-maximising root, or ``x = 0``
    when the all-children corner dominates (or no root exists); the grid max
    then sits on the first grid point.
    """
    xs = np.linspace(eps, 1.0 - eps, grid_points)
    step = float(xs[1] - xs[0])
    us = _utility3_grid(p, xs)
    brute = float(xs[int(np.argmax(us))])
    try:
        sol = stage3.solve_health_investment3(p)
        closed = 0.0 if sol.corner_dominates else sol.x_star
    except NoRootError:
        closed = 0.0
    return OracleReport.compare("stage3.x_star", closed, brute, step, 2 * step if bound is None else bound)


def _max_output1(p: Stage1Params, lam, a):
    tech = p.phi * lam
    if not lam > 0 or a < 0 or a >= tech:
        raise DomainError(f"need 0 <= a < phi*lambda, got a={a!r}, phi*lambda={tech!r}")
    x = golden_section_max(lambda x: _output1(p, lam, a, 1.0, x), a / tech, 1.0, tol=1e-15)
    return _output1(p, lam, a, 1.0, x)


def _log_bisect(f, lo, hi_start, grow=10.0, hi_cap=1e300, lo_cap=1e-300):
    """Root of a function that is positive for small arguments and eventually negative.

    Both ends of the bracket are widened geometrically until the sign differs.
    """
    while not f(lo) > 0.0:
        lo /= grow
        if lo < lo_cap:
            return None
    hi = max(hi_start, lo)
    while f(hi) > 0.0:
        hi *= grow
        if hi > hi_cap:
            return None
    u = bisect(lambda u: f(math.exp(u)), math.log(lo), math.log(hi))
    return math.exp(u)


def bisect_threshold(p: Stage1Params, lam, a, rel_bound=1e-6, L_lo=1e-9, L_hi=1.0) -> OracleReport:
    """Bisection on ``n*(L) - 1`` with output maximised numerically."""
    y1 = _max_output1(p, lam, a)

    def excess(L):
        y = y1 * L ** (p.alpha - 1.0)
        if y >= p.c_hat / (1.0 - p.gamma):
            n = p.gamma / p.p
        elif y >= p.c_hat:
            n = (1.0 - p.c_hat / y) / p.p
        else:
            n = 0.0
        return n - 1.0

    brute = _log_bisect(excess, L_lo, L_hi)
    if brute is None:
        raise NoThresholdError("fertility does not cross one after bracket expansion")
    closed = stage1.population_threshold_g(p, lam, a)
    return OracleReport.compare("stage1.g", closed, brute, 0.0, rel_bound * abs(closed))


def bisect_steady_state(p: Stage2Params, delta, rel_bound=1e-6) -> OracleReport:
    """Bisection on ``n*(L) - delta`` with the allocation maximised numerically."""

    def reduced_utility(x):
        f = ((p.phi * p.lambda_fixed * x) ** p.beta * (1.0 - x) ** (1.0 - p.beta)) ** p.alpha
        return math.log(f) + (1.0 - p.gamma) * math.log(x)

    x = golden_section_max(reduced_utility, 1e-12, 1.0 - 1e-12, tol=1e-15)
    f1 = ((p.phi * p.lambda_fixed * x) ** p.beta * (1.0 - x) ** (1.0 - p.beta)) ** p.alpha

    def excess(L):
        return p.gamma * f1 * L ** (p.alpha - 1.0) / p.p - delta

    brute = _log_bisect(excess, 1e-300, 1.0)
    closed = stage2.steady_state_population(p, delta)
    return OracleReport.compare("stage2.L_tilde", closed, brute, 0.0, rel_bound * abs(closed))
