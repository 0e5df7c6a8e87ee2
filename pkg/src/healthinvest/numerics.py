"""Small univariate root finder and maximiser used across the stages."""

from __future__ import annotations

import math

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def bisect(f, lo, hi, xtol=0.0, maxiter=200):
    """Root of ``f`` on ``[lo, hi]`` by bisection.

    ``f(lo)`` and ``f(hi)`` must differ in sign (a zero at either end is
    returned immediately).  With ``xtol=0`` the bracket is halved until the
    midpoint is no longer representable between the endpoints, i.e. to full
    double precision.
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ValueError(f"no sign change on [{lo!r}, {hi!r}]: f={flo!r}, {fhi!r}")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= xtol:
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    # endpoint with the smaller residual
    return lo if abs(flo) <= abs(fhi) else hi


def golden_section_max(f, lo, hi, tol=1e-12, maxiter=500):
    """Maximiser of a unimodal ``f`` on ``[lo, hi]``.

    Stops when the bracket is narrower than ``tol * max(1, |x|)``.
    """
    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a <= tol * max(1.0, abs(c)) or not a < c < d < b:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return c if fc >= fd else d
