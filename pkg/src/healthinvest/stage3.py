"""Experimental third stage: health multiplies the utility of consumption.

Utility is ``(1-g) x ln c + g ln n`` with budget ``c + p y n = y`` and
production ``y = A x**(1-alpha) (1-x)**alpha``.  For a given ``x`` the
optimal ``c`` and ``n`` follow in closed form; the remaining condition on
``x`` is implicit and may have zero, one or several roots.

The reduced utility ``U(x)`` (utility with ``c`` and ``n`` chosen
optimally) satisfies ``U'(x) = (1-g) G(x)`` where ``G`` is
:func:`foc_residual3`.  Roots where ``G`` falls through zero are local
maxima of ``U``; roots where it rises are local minima.  As ``x -> 0`` the
household puts everything into children and ``U`` tends to ``g ln(1/p)``,
which can beat every interior root; :class:`Stage3Solution` reports that
corner separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, NoRootError, PerturbationError
from .numerics import bisect
from .params import Stage3Params, validate_stage3

__all__ = [
    "SCAN_EPS",
    "SCAN_POINTS",
    "Stage3Solution",
    "SignMap",
    "production3",
    "fertility3",
    "utility3",
    "corner_utility3",
    "foc_residual3",
    "n_form_residual3",
    "find_roots3",
    "solve_health_investment3",
    "comparative_statics3",
    "mixed_partial3",
    "sign_map3",
]

SCAN_EPS = 1e-6
SCAN_POINTS = 10_001  # 10^4 brackets


@dataclass(frozen=True)
class Stage3Solution:
    x_star: float
    n_star: float
    utility_value: float
    root_candidates: tuple  # ((x, utility), ...) ascending in x
    n_at_least_one: bool
    corner_utility: float  # limit of U as x -> 0
    corner_dominates: bool  # corner beats every interior root
    residual: float  # G at x_star


def _check_x(x):
    if not 0.0 < x < 1.0:
        raise DomainError(f"allocation must lie in (0, 1), got {x!r}")


def production3(p: Stage3Params, x: float) -> float:
    _check_x(x)
    return p.A * x ** (1.0 - p.alpha) * (1.0 - x) ** p.alpha


def fertility3(p: Stage3Params, x: float) -> float:
    """Optimal children given ``x``: ``1 / (p ((1-g)/g x + 1))``.  Defined at x = 1 too."""
    return 1.0 / (p.p * ((1.0 - p.gamma) / p.gamma * x + 1.0))


def utility3(p: Stage3Params, x: float) -> float:
    """Reduced utility at ``x`` with ``c`` and ``n`` at their optimum."""
    y = production3(p, x)
    n = fertility3(p, x)
    c = y * (1.0 - p.p * n)
    return (1.0 - p.gamma) * x * math.log(c) + p.gamma * math.log(n)


def corner_utility3(p: Stage3Params) -> float:
    return p.gamma * math.log(1.0 / p.p)


def foc_residual3(p: Stage3Params, x):
    """``G(x) = ln[A ((1-x)/x)**alpha x**2 / (x + g/(1-g))] - alpha/(1-x) + 1``.

    Accepts a scalar or a numpy array (the root scan evaluates it on a grid).
    """
    if np.ndim(x) == 0:
        _check_x(x)
        log = math.log
    else:
        if np.any((x <= 0.0) | (x >= 1.0)):
            raise DomainError("allocation must lie in (0, 1)")
        log = np.log
    al = p.alpha
    odds = p.gamma / (1.0 - p.gamma)
    return (
        log(p.A)
        + al * (log(1.0 - x) - log(x))
        + 2.0 * log(x)
        - log(x + odds)
        - al / (1.0 - x)
        + 1.0
    )


def n_form_residual3(p: Stage3Params, n: float) -> float:
    """The x-condition rewritten in terms of fertility.

    With ``q = p n`` and ``x = g (1-q) / ((1-g) q)``::

        ln[A (q-g)**alpha g**(1-alpha) (1-q)**(2-alpha) / ((1-g) q)]
            - alpha (1-g) q / (q-g) + 1

    which equals ``G(x)`` identically.  Requires ``g < q < 1``.
    """
    q = p.p * n
    g = p.gamma
    al = p.alpha
    if not g < q < 1.0:
        raise DomainError(f"need gamma < p*n < 1, got p*n={q!r}")
    return (
        math.log(p.A)
        + al * math.log(q - g)
        + (1.0 - al) * math.log(g)
        + (2.0 - al) * math.log(1.0 - q)
        - math.log((1.0 - g) * q)
        - al * (1.0 - g) * q / (q - g)
        + 1.0
    )


def find_roots3(p: Stage3Params, points: int = SCAN_POINTS, eps: float = SCAN_EPS) -> list[float]:
    """All sign changes of ``G`` on a uniform scan of ``(eps, 1-eps)``, refined by bisection."""
    xs = np.linspace(eps, 1.0 - eps, points)
    gs = foc_residual3(p, xs)
    roots = []
    for i in np.flatnonzero(gs == 0.0):
        roots.append(float(xs[i]))
    crossing = np.flatnonzero((gs[:-1] * gs[1:]) < 0.0)
    for i in crossing:
        roots.append(bisect(lambda x: foc_residual3(p, x), float(xs[i]), float(xs[i + 1])))
    return sorted(roots)


def solve_health_investment3(p: Stage3Params) -> Stage3Solution:
    """Utility-maximising root of the x-condition.

    Raises NoRootError when ``G`` never changes sign on the scan.
    """
    validate_stage3(p)
    roots = find_roots3(p)
    if not roots:
        xs = np.linspace(SCAN_EPS, 1.0 - SCAN_EPS, SCAN_POINTS)
        gs = foc_residual3(p, xs)
        i = int(np.argmax(gs))
        raise NoRootError(
            f"first-order condition has no root on (0, 1): max G = {gs[i]:.6g} at x = {xs[i]:.6g}",
            max_residual=float(gs[i]),
            argmax=float(xs[i]),
        )
    candidates = tuple((x, utility3(p, x)) for x in roots)
    x_star, u_star = max(candidates, key=lambda c: c[1])
    n_star = fertility3(p, x_star)
    corner = corner_utility3(p)
    return Stage3Solution(
        x_star=x_star,
        n_star=n_star,
        utility_value=u_star,
        root_candidates=candidates,
        n_at_least_one=n_star >= 1.0,
        corner_utility=corner,
        corner_dominates=corner > u_star,
        residual=foc_residual3(p, x_star),
    )


def _with(p: Stage3Params, **changes) -> Stage3Params:
    return validate_stage3(replace(p, **changes))


_PARAM_NAMES = ("gamma", "alpha")


def _solve_counted(p):
    sol = solve_health_investment3(p)
    return sol.x_star, len(sol.root_candidates)


def comparative_statics3(p: Stage3Params, which: str, h: float = 1e-4) -> float:
    """Central difference of ``x*`` with respect to ``gamma`` or ``alpha``."""
    if which not in _PARAM_NAMES:
        raise ValueError(f"which must be one of {_PARAM_NAMES}, got {which!r}")
    base = getattr(p, which)
    _, count = _solve_counted(p)
    x_up, c_up = _solve_counted(_with(p, **{which: base + h}))
    x_dn, c_dn = _solve_counted(_with(p, **{which: base - h}))
    if not c_up == count == c_dn:
        raise PerturbationError(
            f"root count changes across {which} = {base} +/- {h}: {c_dn}, {count}, {c_up}"
        )
    return (x_up - x_dn) / (2.0 * h)


def mixed_partial3(p: Stage3Params, h: float = 1e-3) -> float:
    """Second cross difference of ``x*`` in ``alpha`` and ``gamma``."""
    counts = set()
    vals = {}
    for da in (1, -1):
        for dg in (1, -1):
            q = _with(p, alpha=p.alpha + da * h, gamma=p.gamma + dg * h)
            x, c = _solve_counted(q)
            counts.add(c)
            vals[da, dg] = x
    if len(counts) != 1:
        raise PerturbationError(f"root count changes across the cross stencil: {sorted(counts)}")
    return (vals[1, 1] - vals[1, -1] - vals[-1, 1] + vals[-1, -1]) / (4.0 * h * h)


@dataclass(frozen=True)
class SignMap:
    """Finite-difference derivative of ``x*`` along a one-parameter sweep."""

    which: str
    values: tuple
    derivatives: tuple  # None where the derivative is undefined (no root, root count change)
    notes: tuple

    @property
    def positive_intervals(self) -> list[tuple[float, float]]:
        """Maximal runs of consecutive sweep values with a positive derivative."""
        runs = []
        start = prev = None
        for v, d in zip(self.values, self.derivatives):
            if d is not None and d > 0.0:
                if start is None:
                    start = v
                prev = v
            elif start is not None:
                runs.append((start, prev))
                start = None
        if start is not None:
            runs.append((start, prev))
        return runs

    @property
    def finding(self) -> str | None:
        """Non-empty when the sweep shows no positive-sign interval."""
        if self.positive_intervals:
            return None
        defined = [d for d in self.derivatives if d is not None]
        if not defined:
            return f"dx*/d{self.which} undefined at every sweep point"
        return (
            f"no positive dx*/d{self.which} on [{self.values[0]:g}, {self.values[-1]:g}]: "
            f"{len(defined)} defined points, max derivative {max(defined):.6g}"
        )


def sign_map3(p: Stage3Params, which: str, lo: float, hi: float, steps: int, h: float = 1e-4) -> SignMap:
    values = tuple(float(v) for v in np.linspace(lo, hi, steps))
    derivs = []
    notes = []
    for v in values:
        try:
            derivs.append(comparative_statics3(_with(p, **{which: v}), which, h))
            notes.append("")
        except (NoRootError, PerturbationError) as exc:
            derivs.append(None)
            notes.append(type(exc).__name__)
    return SignMap(which, values, tuple(derivs), tuple(notes))
