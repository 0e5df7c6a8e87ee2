"""Second-stage economy: health inside a Cobb-Douglas composite and in utility.

Per-capita output is ``[(phi*lam*x)**beta * (1-x)**(1-beta)]**alpha * L**(alpha-1)``.
The household maximises ``(1-g) ln c + (1-g) ln x + g ln n`` subject to
``c + p n = y``.  Population grows by ``1 + n* - delta`` where child
mortality ``delta`` rises with adversity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .numerics import golden_section_max
from .params import Stage2Params

__all__ = [
    "Stage2Policy",
    "Stage2Steady",
    "output_per_capita2",
    "optimal_allocation2",
    "fertility2",
    "optimal_policy2",
    "mortality",
    "step_population2",
    "steady_state",
    "steady_state_population",
    "stability_factor",
]


@dataclass(frozen=True)
class Stage2Policy:
    x_star: float
    n_star: float
    c_star: float
    y: float


@dataclass(frozen=True)
class Stage2Steady:
    L_tilde: float  # fertility equals mortality
    L_tilde_prime: float  # maximiser of the increment (n*(L) - delta) L
    stable: bool
    factor: float  # slope of the population map at L_tilde


def output_per_capita2(p: Stage2Params, x: float, L: float) -> float:
    if not 0.0 < x < 1.0:
        raise DomainError(f"allocation must lie in (0, 1), got {x!r}")
    if not L > 0.0:
        raise DomainError(f"population must be > 0, got {L!r}")
    composite = (p.phi * p.lambda_fixed * x) ** p.beta * (1.0 - x) ** (1.0 - p.beta)
    return composite**p.alpha * L ** (p.alpha - 1.0)


def optimal_allocation2(p: Stage2Params) -> float:
    """Utility-maximising health share; free of ``L``, ``phi`` and ``lambda``."""
    return (p.alpha * p.beta + 1.0 - p.gamma) / (p.alpha + 1.0 - p.gamma)


def fertility2(p: Stage2Params, L: float) -> float:
    """Optimal children per adult, ``gamma * y / p``."""
    return p.gamma * output_per_capita2(p, optimal_allocation2(p), L) / p.p


def optimal_policy2(p: Stage2Params, L: float) -> Stage2Policy:
    x = optimal_allocation2(p)
    y = output_per_capita2(p, x, L)
    n = p.gamma * y / p.p
    # c* = p n (1-g)/g, written so the budget c + p n = y is exact in floating point
    c = y - p.p * n
    return Stage2Policy(x_star=x, n_star=n, c_star=c, y=y)


def mortality(p: Stage2Params, a: float) -> float:
    """Child mortality ``clamp(delta0 + delta1*a, delta_min, delta_max)``."""
    if a < 0.0:
        raise DomainError(f"adversity must be >= 0, got {a!r}")
    return min(max(p.delta0 + p.delta1 * a, p.delta_min), p.delta_max)


def _check_delta(delta):
    if not 0.0 < delta < 1.0:
        raise DomainError(f"mortality must lie in (0, 1), got {delta!r}")


def step_population2(p: Stage2Params, L_t: float, delta: float) -> float:
    _check_delta(delta)
    L_next = (1.0 + fertility2(p, L_t) - delta) * L_t
    if not L_next > 0.0:
        raise DomainError(f"population update produced {L_next!r}")
    return L_next


def steady_state_population(p: Stage2Params, delta: float) -> float:
    """Population at which ``n*(L) = delta``."""
    _check_delta(delta)
    x = optimal_allocation2(p)
    composite = (p.lambda_fixed * p.phi * x) ** p.beta * (1.0 - x) ** (1.0 - p.beta)
    return (delta * p.p / (p.gamma * composite**p.alpha)) ** (1.0 / (p.alpha - 1.0))


def stability_factor(p: Stage2Params, delta: float) -> float:
    """Derivative of the population map at the steady state, ``1 - delta(1-alpha)``."""
    return 1.0 - delta * (1.0 - p.alpha)


def steady_state(p: Stage2Params, delta: float) -> Stage2Steady:
    L_tilde = steady_state_population(p, delta)

    def increment(L):
        return (fertility2(p, L) - delta) * L

    # the increment is concave in L, zero at 0 and at L_tilde, so its peak is inside
    L_prime = golden_section_max(increment, L_tilde * 1e-12, L_tilde, tol=1e-13)
    factor = stability_factor(p, delta)
    return Stage2Steady(L_tilde, L_prime, abs(factor) < 1.0, factor)
