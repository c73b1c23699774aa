"""Explicit comparison functions on real radii.

These are the one-dimensional envelopes used by the separation certificates:

    xi(s, t)      = |s^(-1/2) - t^(-1/2)| + |s^(3/2) - t^(3/2)|
    psi(s)        = sum_{j>=4} s^(j(j-2)/2)
    k_bound(s, t) = 2|s^(-3/2) - t^(-3/2)| + |s^(-2) - t^(-2)| + |s^(5/2) - t^(5/2)|
    l_bound(s)    = sum_{j>=6} s^(j(j-4)/2)
    m_bound(s)    = l_bound(s) + s^(5/2)  = sum_{j>=5} s^(j(j-4)/2)

xi bounds the drift of the degree-3 partial sum between two radii when the
evaluation point stays on |x| = |q|^(-3/2) with frozen arguments; psi bounds
the matching tail.  k_bound and l_bound play the same two roles for the
degree-5 partial sum on |x| = |q|^(-5/2); m_bound additionally dominates the
negative-index tail G on the circles |x| = |q|^(-k+1/2), k >= 3.

solve_c0() returns the radius below which zero separation is classical: the
unique root in (0, 1) of 2*sum_{n>=1} r^(n^2/2) = 1.
"""

import math
from functools import lru_cache

from .errors import InvalidParameter

# series terms below this relative size are closed out by the remainder bound
_REL_CUTOFF = 1e-17
_MAX_TERMS = 200


def _check_radius(s: float, name: str = "s") -> float:
    s = float(s)
    if not 0.0 < s < 1.0:
        raise InvalidParameter(f"{name} must lie in (0, 1), got {s!r}")
    return s


def _power_series(s: float, exponent, j0: int) -> float:
    """Sum s^exponent(j) for j >= j0 with a geometric remainder closure.

    ``exponent`` must be increasing and convex in j so consecutive term
    ratios decrease; the returned value includes the remainder bound and is
    therefore an upper bound on the true sum.
    """
    total = 0.0
    prev = None
    for j in range(j0, j0 + _MAX_TERMS):
        term = s ** exponent(j)
        total += term
        if prev is not None and prev > 0.0:
            rho = term / prev
            rem = term * rho / (1.0 - rho) if rho < 1.0 else math.inf
            if rem <= _REL_CUTOFF * total:
                return total + rem
        prev = term
    return total


def xi(s: float, t: float) -> float:
    """Radius-drift envelope for the degree-3 sum on |x| = |q|^(-3/2)."""
    s = _check_radius(s, "s")
    t = _check_radius(t, "t")
    return abs(s**-0.5 - t**-0.5) + abs(s**1.5 - t**1.5)


def psi(s: float) -> float:
    """Tail envelope sum_{j>=4} s^(j(j-2)/2) for the degree-3 sum."""
    s = _check_radius(s)
    return _power_series(s, lambda j: j * (j - 2) / 2.0, 4)


def k_bound(s: float, t: float) -> float:
    """Radius-drift envelope for the degree-5 sum on |x| = |q|^(-5/2)."""
    s = _check_radius(s, "s")
    t = _check_radius(t, "t")
    return 2.0 * abs(s**-1.5 - t**-1.5) + abs(s**-2.0 - t**-2.0) + abs(s**2.5 - t**2.5)


def l_bound(s: float) -> float:
    """Tail envelope sum_{j>=6} s^(j(j-4)/2) for the degree-5 sum."""
    s = _check_radius(s)
    return _power_series(s, lambda j: j * (j - 4) / 2.0, 6)


def m_bound(s: float) -> float:
    """l_bound(s) + s^(5/2); dominates |G| on the circles |x| = |q|^(-k+1/2), k >= 3."""
    s = _check_radius(s)
    return l_bound(s) + s**2.5


def _c0_equation(r: float) -> float:
    total = 0.0
    nu = 1
    while True:
        term = r ** (nu * nu / 2.0)
        total += term
        if term < 1e-18:
            return 2.0 * total - 1.0
        nu += 1


@lru_cache(maxsize=1)
def solve_c0() -> float:
    """Root of 2*sum_{n>=1} r^(n^2/2) = 1, by bisection to 1e-12.

    The left side is strictly increasing on (0, 1), so bisection from the
    bracket [0.05, 0.5] is guaranteed.
    """
    lo, hi = 0.05, 0.5
    # f(lo) < 0 < f(hi) holds by direct evaluation
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if _c0_equation(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
