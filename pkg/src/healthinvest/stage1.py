"""First-stage (ancient) economy.

Output per capita is ``(phi*lam*x - a) * (1-x)**alpha * L**(alpha-1)`` where
``x`` is the labour share spent producing the health good and ``a`` is
environmental adversity.  Households maximise output over ``x``, then split
it between consumption and children subject to a survival floor ``c_hat``.
Health productivity ``lam`` only ever ratchets upward, and only after
adversity worsens.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, NoThresholdError
from .params import Stage1Params

__all__ = [
    "Regime",
    "Stage1State",
    "Stage1Policy",
    "output_per_capita",
    "optimal_labor_allocation",
    "optimal_output",
    "output_scale",
    "fertility",
    "solve_stage1",
    "population_threshold_g",
    "ratchet_increment",
    "update_health_productivity",
    "step_population",
    "foc_residual",
    "fixed_point_slope",
]


class Regime(str, enum.Enum):
    INTERIOR = "interior"
    SURVIVAL = "survival-binding"
    EXTINCTION = "extinction"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Stage1State:
    lambda_t: float
    L_t: float
    a_prev: float
    x_prev: float


@dataclass(frozen=True)
class Stage1Policy:
    x_star: float
    y_star: float
    n_star: float
    regime: Regime
    c_star: float


def _check_tech(p: Stage1Params, lam: float, a: float) -> float:
    if not lam > 0.0:
        raise DomainError(f"lambda must be > 0, got {lam!r}")
    if a < 0.0:
        raise DomainError(f"adversity must be >= 0, got {a!r}")
    tech = p.phi * lam
    if a >= tech:
        raise DomainError(
            f"adversity a={a!r} >= phi*lambda={tech!r}: no allocation yields positive output"
        )
    return tech


def output_per_capita(p: Stage1Params, lam: float, a: float, L: float, x: float) -> float:
    """Per-capita output at allocation ``x``; non-positive when ``x <= a/(phi*lam)``."""
    if not 0.0 <= x < 1.0:
        raise DomainError(f"allocation must lie in [0, 1), got {x!r}")
    if not L > 0.0:
        raise DomainError(f"population must be > 0, got {L!r}")
    if not lam > 0.0:
        raise DomainError(f"lambda must be > 0, got {lam!r}")
    return (p.phi * lam * x - a) * (1.0 - x) ** p.alpha * L ** (p.alpha - 1.0)


def optimal_labor_allocation(p: Stage1Params, lam: float, a: float) -> float:
    """Closed-form maximiser of output over ``x``.

    Solves ``phi*lam*(1-x) = alpha*(phi*lam*x - a)``, giving
    ``x* = (phi*lam + alpha*a) / ((1+alpha)*phi*lam)``.
    """
    tech = _check_tech(p, lam, a)
    return (tech + p.alpha * a) / ((1.0 + p.alpha) * tech)


def output_scale(p: Stage1Params, lam: float, a: float) -> float:
    """Optimal output at ``L = 1``; optimal output at ``L`` is this times ``L**(alpha-1)``."""
    tech = _check_tech(p, lam, a)
    al = p.alpha
    return (al / tech) ** al * ((tech - a) / (1.0 + al)) ** (1.0 + al)


def optimal_output(p: Stage1Params, lam: float, a: float, L: float) -> float:
    if not L > 0.0:
        raise DomainError(f"population must be > 0, got {L!r}")
    return output_scale(p, lam, a) * L ** (p.alpha - 1.0)


def fertility(p: Stage1Params, y: float) -> tuple[float, Regime]:
    """Children per adult at income ``y`` and the constraint regime that produced it."""
    if not y > 0.0:
        raise DomainError(f"output must be > 0, got {y!r}")
    if y >= p.y_hat:
        return p.gamma / p.p, Regime.INTERIOR
    if y >= p.c_hat:
        # at y == c_hat the floor absorbs all income and n = 0
        n = (1.0 - p.c_hat / y) / p.p
        return n, (Regime.SURVIVAL if n > 0.0 else Regime.EXTINCTION)
    return 0.0, Regime.EXTINCTION


def solve_stage1(p: Stage1Params, lam: float, a: float, L: float) -> Stage1Policy:
    x = optimal_labor_allocation(p, lam, a)
    y = optimal_output(p, lam, a, L)
    n, regime = fertility(p, y)
    return Stage1Policy(x, y, n, regime, c_star=y * (1.0 - p.p * n))


def population_threshold_g(p: Stage1Params, lam: float, a: float) -> float:
    """Population at which optimal fertility equals one.

    Fertility equals one on the survival branch when ``y = c_hat/(1-p)``;
    that income lies on the survival branch only if ``p < gamma``.
    Otherwise fertility never exceeds ``gamma/p <= 1`` and no threshold
    exists.
    """
    scale = output_scale(p, lam, a)
    if p.p >= p.gamma:
        raise NoThresholdError(
            f"fertility never exceeds one: gamma/p = {p.gamma / p.p:.6g} <= 1"
        )
    return (p.c_hat / ((1.0 - p.p) * scale)) ** (1.0 / (p.alpha - 1.0))


def ratchet_increment(p: Stage1Params, d: float) -> float:
    """``M(d) = mu + kappa*ln(1 + max(d, 0))``: positive, increasing, concave for d >= 0."""
    return p.mu + p.kappa * math.log1p(max(d, 0.0))


def update_health_productivity(
    p: Stage1Params, lambda_t: float, a_t: float, a_prev: float, x_t: float, x_prev: float
) -> float:
    if not lambda_t > 0.0:
        raise DomainError(f"lambda must be > 0, got {lambda_t!r}")
    if a_t <= a_prev:
        return lambda_t
    return lambda_t + ratchet_increment(p, x_t - x_prev)


def step_population(n_star: float, L_t: float) -> float:
    if not L_t > 0.0:
        raise DomainError(f"population must be > 0, got {L_t!r}")
    if n_star < 0.0:
        raise DomainError(f"fertility must be >= 0, got {n_star!r}")
    return n_star * L_t


def foc_residual(p: Stage1Params, lam: float, a: float, x: float) -> float:
    """Derivative of output in ``x`` at ``L = 1``, up to the positive factor."""
    tech = p.phi * lam
    al = p.alpha
    return tech * (1.0 - x) ** al - al * (tech * x - a) * (1.0 - x) ** (al - 1.0)


def fixed_point_slope(p: Stage1Params) -> float:
    """Slope of ``L -> n*(L) L`` at the threshold on the survival branch.

    Equals ``1 - (1-p)(1-alpha)/p``; independent of lambda and adversity.
    The threshold attracts iff the magnitude is below one, monotonically iff
    the slope is also non-negative.
    """
    return 1.0 - (1.0 - p.p) * (1.0 - p.alpha) / p.p
