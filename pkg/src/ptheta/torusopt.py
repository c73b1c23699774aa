"""Global minimisation of |theta_k| on phase tori.

The problem: for a fixed radius r = |q| and x-circle exponent e (x lives on
|x| = r^-e), minimise

    (a, b) |-> |theta_k(q, x)|^2,   q = r e^(ib),  x = r^(-e) e^(i(a - b)),

over a in [0, 2pi] and b in a closed sub-interval of [0, 2pi].  The angle a
measures the phase of the degree-one monomial q*x, which decouples the two
angles at first order; reported minimisers use these coordinates.  With
T_j = j(j+1)/2 the j-th term's phase is j*a + (T_j - j)*b and its modulus is
r^(T_j - e*j), so the objective is a trigonometric polynomial in (a, b).

minimize_on_torus runs a deterministic multi-start: a coarse grid scan plus
SplitMix64-seeded random starts, each descended by projected gradient with
backtracking and finished by a damped Newton polish (see the kernels).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._rng import SplitMix64
from .errors import InvalidParameter

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TorusProblem:
    """One torus-minimisation instance.

    k: truncation order; r: |q| in (0, 1); e: x-circle exponent (|x| = r^-e);
    b_range: closed sub-interval of [0, 2pi] boxing arg(q); a_range is always
    the full circle.
    """

    k: int
    r: float
    e: float
    b_range: tuple[float, float] = (0.0, TWO_PI)
    a_range: tuple[float, float] = (0.0, TWO_PI)

    def __post_init__(self):
        if not isinstance(self.k, int) or not 1 <= self.k <= 64:
            raise InvalidParameter(f"k must be an integer in [1, 64], got {self.k!r}")
        if not 0.0 < self.r < 1.0:
            raise InvalidParameter(f"r must lie in (0, 1), got {self.r!r}")
        if not self.e > 0.0:
            raise InvalidParameter(f"e must be positive, got {self.e!r}")
        blo, bhi = self.b_range
        if not (0.0 <= blo < bhi <= TWO_PI + 1e-12):
            raise InvalidParameter(f"b_range must be a closed interval in [0, 2pi], got {self.b_range!r}")
        alo, ahi = self.a_range
        if abs(alo) > 1e-12 or abs(ahi - TWO_PI) > 1e-12:
            raise InvalidParameter("a_range is fixed to the full circle [0, 2pi]")

    def coefficient_arrays(self):
        """(moduli, a-phase weights, b-phase weights) as float64 arrays."""
        j = np.arange(self.k + 1, dtype=float)
        t = j * (j + 1) / 2.0
        c = np.exp((t - self.e * j) * math.log(self.r))
        return (
            np.ascontiguousarray(c),
            np.ascontiguousarray(j),
            np.ascontiguousarray(t - j),
        )

    def q_of(self, b: float) -> complex:
        return self.r * complex(math.cos(b), math.sin(b))

    def x_of(self, a: float, b: float) -> complex:
        ph = a - b
        return self.r ** (-self.e) * complex(math.cos(ph), math.sin(ph))


@dataclass(frozen=True)
class TorusMinResult:
    """Best local minimum found: mu is the minimal MODULUS (sqrt of |.|^2).

    spread is max - min over the converged local-minimum moduli, a cheap
    multi-modality indicator; restarts_used counts all descents including
    the grid-seeded one.
    """

    mu: float
    a_star: float
    b_star: float
    restarts_used: int
    spread: float
    converged: int = field(default=0)

    def as_dict(self):
        return {
            "mu": self.mu,
            "a_star": self.a_star,
            "b_star": self.b_star,
            "restarts_used": self.restarts_used,
            "spread": self.spread,
            "converged": self.converged,
        }


def objective_and_gradient(p: TorusProblem, a: float, b: float):
    """|theta_k|^2 at the torus point and its exact (a, b) partials."""
    c, jv, hv = p.coefficient_arrays()
    return kernels.torus_point(c, jv, hv, float(a), float(b))


def minimize_on_torus(
    p: TorusProblem,
    seed: int,
    restarts: int = 20,
    tol: float = 1e-7,
    grid_n: int = 128,
    max_iter: int = 500,
) -> TorusMinResult:
    """Deterministic multi-start descent; returns the best local minimum.

    Starts: `restarts` SplitMix64(seed) points uniform over the (a, b) box,
    plus the best cell of a grid_n x grid_n coarse scan.  The final argmin is
    selected lexicographically by (value, a, b) so identical seeds reproduce
    bit-identically regardless of evaluation order.
    """
    if restarts < 0:
        raise InvalidParameter("restarts must be nonnegative")
    c, jv, hv = p.coefficient_arrays()
    blo, bhi = p.b_range
    rng = SplitMix64(seed)
    starts = []
    for _ in range(restarts):
        ua = rng.next_float()
        ub = rng.next_float()
        starts.append((ua * TWO_PI, blo + ub * (bhi - blo)))
    _, ga, gb = kernels.torus_grid_min(c, jv, hv, grid_n, grid_n, 0.0, TWO_PI, blo, bhi)
    starts.append((ga, gb))

    best = None
    conv_values = []
    for a0, b0 in starts:
        f, a, b, pg, _, ok = kernels.torus_descent(
            c, jv, hv, a0, b0, blo, bhi, tol, max_iter
        )
        a = a % TWO_PI
        if ok:
            conv_values.append(math.sqrt(f))
        key = (f, a, b)
        if best is None or key < best:
            best = key
    f, a, b = best
    spread = (max(conv_values) - min(conv_values)) if conv_values else math.nan
    return TorusMinResult(
        mu=math.sqrt(f),
        a_star=a,
        b_star=b,
        restarts_used=len(starts),
        spread=spread,
        converged=len(conv_values),
    )
