"""Zeros of theta(q, .) and its truncations: location, counting, tracking.

Three independent routes to the zero set are provided and cross-checked by
the test suite:

  * roots_truncation  -- all k roots of the degree-k truncation, found
    simultaneously (Aberth-Ehrlich) with scale-free evaluation, so the
    exponentially spread root moduli (|xi_j| ~ |q|^-j) never overflow;
  * count_zeros_disk  -- the argument principle: the winding number of
    theta(q, .) around a circle, by adaptive trapezoid quadrature of
    theta'/theta (spectrally accurate on the periodic contour);
  * track_zero        -- Newton continuation of a single zero along a path
    in q, with automatic path subdivision.

refine_double_zero solves (f, df/dx) = 0 in the two complex unknowns (q, x)
by a damped Newton iteration on the 2x2 complex Jacobian; it is the ground
truth for every reported double zero.

Separation bookkeeping: zero #1 belongs to the open disk |x| < |q|^(-3/2)
and zero #k (k >= 2) to the open annulus |q|^(-k+1/2) < |x| < |q|^(-k-1/2);
a ZeroSet is `separated` when every zero sits strictly inside its shell.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidParameter,
    NoConvergence,
    NotAnInteger,
    PathLost,
    SingularJacobian,
    ZeroOnContour,
)
from .series import (
    DEFAULT_CONFIG,
    EvalConfig,
    ThetaJet,
    _as_complex,
    _check_q,
    theta,
    theta_dx,
    theta_jet,
    theta_tail_bound,
    trunc_jet,
)

_BOUNDARY_REL_TOL = 1e-9   # modulus-equality tolerance at shell boundaries
_JET_CONFIG = EvalConfig(tail_tol=1e-16, max_terms=512)


class BoundaryWarning(UserWarning):
    """A zero modulus sits within tolerance of a separation shell boundary."""


@dataclass(frozen=True)
class ContourConfig:
    """Adaptive winding-number quadrature knobs."""

    initial_samples: int = 256
    max_samples: int = 65536
    winding_tol: float = 0.05

    def __post_init__(self):
        if self.initial_samples < 8 or self.max_samples < self.initial_samples:
            raise InvalidParameter("need 8 <= initial_samples <= max_samples")
        if not 0.0 < self.winding_tol < 0.5:
            raise InvalidParameter("winding_tol must lie in (0, 0.5)")


DEFAULT_CONTOUR = ContourConfig()


@dataclass(frozen=True)
class AnnulusSpec:
    """Open annulus |q|^-a < |x| < |q|^-b (exponent form), 0 < a < b."""

    a: float
    b: float
    q_abs: float | None = None

    def __post_init__(self):
        if not 0.0 < self.a < self.b:
            raise InvalidParameter(f"need 0 < a < b, got a={self.a!r}, b={self.b!r}")
        if self.q_abs is not None and not 0.0 < self.q_abs < 1.0:
            raise InvalidParameter("q_abs must lie in (0, 1)")


@dataclass(frozen=True)
class ZeroSet:
    """Zeros ordered by ascending modulus with shell assignments.

    annulus_index[i] = n means zero i lies in the shell of zero #n (n = 0
    encodes the inner disk |x| < |q|^(-3/2)).  separated is the strict
    shell condition for the whole list; any zero within relative tolerance
    1e-9 of a shell boundary forces separated = False.
    """

    q: complex
    zeros: tuple
    source: str
    annulus_index: tuple
    separated: bool


def _annulus_of(q_abs: float, modulus: float) -> tuple[int, bool]:
    """(shell index, on_boundary) for a zero modulus; 0 is the inner disk."""
    u = math.log(modulus) / -math.log(q_abs) if modulus > 0 else 0.0
    n = 0 if u < 1.5 else int(round(u))
    m_near = int(round(u - 0.5))
    on_boundary = False
    if m_near >= 1:
        shell = q_abs ** -(m_near + 0.5)
        if abs(modulus - shell) <= _BOUNDARY_REL_TOL * shell:
            on_boundary = True
    return n, on_boundary


def _make_zeroset(q: complex, zs: np.ndarray, source: str) -> ZeroSet:
    aq = abs(q)
    idx = []
    separated = True
    boundary_hit = False
    for i, z in enumerate(zs):
        n, on_boundary = _annulus_of(aq, abs(z))
        idx.append(n)
        boundary_hit = boundary_hit or on_boundary
        want = 0 if i == 0 else i + 1
        if i == 0:
            if not (abs(z) > 0.0 and n == 0):
                separated = False
        elif n != want:
            separated = False
    if boundary_hit:
        warnings.warn(
            "zero modulus within 1e-9 of a shell boundary; separation not asserted",
            BoundaryWarning,
            stacklevel=3,
        )
        separated = False
    return ZeroSet(q, tuple(zs.tolist()), source, tuple(idx), separated)


# ---------------------------------------------------------------------------
# truncation roots
# ---------------------------------------------------------------------------

def _scaled_ratio(base: np.ndarray, jj: np.ndarray, z: np.ndarray):
    """(p/p', scaled residual |p|/maxterm) for the truncation at each z."""
    lz = np.log(z)
    L = base[None, :] + np.outer(lz, jj)
    t = np.exp(L - L.real.max(axis=1, keepdims=True))
    p = t.sum(axis=1)
    pz = (t * jj[None, :]).sum(axis=1)  # z * p' / maxterm
    safe = np.where(pz == 0, 1.0, pz)
    n = np.where(pz == 0, 0.0, p / safe) * z
    return n, np.abs(p)


def roots_truncation(q, k: int, max_sweeps: int = 250) -> ZeroSet:
    """All k roots of theta_k(q, .) by Aberth-Ehrlich simultaneous iteration.

    Initial guesses are the small-q asymptotes -q^(-j) with a deterministic
    relative perturbation to break symmetry.  Evaluation is scale-free (log
    domain, largest term factored out), so any 0 < |q| < 1 with |q|^(-k)
    representable is fine.  Residuals are measured against the largest
    coefficient-term magnitude max_j |q^(j(j+1)/2) x^j|.
    """
    q = _as_complex(q, "q")
    if q == 0:
        raise InvalidParameter("q must be nonzero")
    if not isinstance(k, int) or not 1 <= k <= 64:
        raise InvalidParameter(f"k must be an integer in [1, 64], got {k!r}")
    if k * math.log(abs(q)) < -700.0:
        raise InvalidParameter("|q|^-k overflows; reduce k or move q away from 0")
    jj = np.arange(k + 1, dtype=float)
    base = jj * (jj + 1) / 2.0 * cmath.log(q)
    pert = 1.0 + 1e-3 * np.exp(2.399963j * np.arange(1, k + 1))
    z = np.array([-(q ** -j) for j in range(1, k + 1)]) * pert
    for _ in range(max_sweeps):
        n, resid = _scaled_ratio(base, jj, z)
        diffs = z[:, None] - z[None, :]
        np.fill_diagonal(diffs, np.inf)
        s = (1.0 / diffs).sum(axis=1)
        w = n / (1.0 - n * s)
        big = np.abs(w) > 0.5 * np.abs(z)
        w = np.where(big, w * (0.5 * np.abs(z) / np.abs(w)), w)
        z = z - w
        if np.all((np.abs(w) <= 1e-13 * np.abs(z)) | (resid <= 1e-14)):
            break
    n, resid = _scaled_ratio(base, jj, z)
    if resid.max() > 1e-9:
        raise NoConvergence(
            f"Aberth stalled; worst scaled residual {resid.max():.3e}"
        )
    for _ in range(2):  # Newton polish, kept only where the residual improves
        n, resid = _scaled_ratio(base, jj, z)
        z2 = z - n
        _, resid2 = _scaled_ratio(base, jj, z2)
        z = np.where(resid2 < resid, z2, z)
    order = np.lexsort((np.angle(z), np.abs(z)))
    return _make_zeroset(q, z[order], f"truncation:{k}")


def closest_adjacent_pair(zero_set: ZeroSet, nfirst: int = 12):
    """Midpoint and index of the closest modulus-adjacent pair of zeros.

    The relative gap |z_{i+1} - z_i| / |z_i| is minimised over the first
    `nfirst` zeros; a coalescing pair is always modulus-adjacent, so this is
    the standard double-zero seed.
    """
    zs = zero_set.zeros[: max(2, nfirst)]
    if len(zs) < 2:
        raise InvalidParameter("need at least two zeros to pick a pair")
    best = None
    for i in range(len(zs) - 1):
        gap = abs(zs[i + 1] - zs[i]) / abs(zs[i])
        if best is None or gap < best[0]:
            best = (gap, i)
    i = best[1]
    return 0.5 * (zs[i] + zs[i + 1]), i


# ---------------------------------------------------------------------------
# argument-principle counting
# ---------------------------------------------------------------------------

def _contour_terms(q: complex, radius: float):
    """Scaled coefficient factors w_j with theta(q, r e^(it)) = e^L sum w_j e^(ijt).

    The truncation order is chosen so the neglected tail is at most 1e-14 of
    the largest retained term; combined with the contour's near-zero guard
    (which rejects |theta| below 1e-6 of scale) this keeps the counted
    polynomial and theta itself on the same side of zero everywhere.
    """
    aq = abs(q)
    lq, lr = math.log(aq), math.log(radius)
    logmag_peak = 0.0
    logmag = 0.0
    j = 0
    while True:
        j += 1
        logmag += j * lq + lr  # log |t_j| - log |t_{j-1}|
        logmag_peak = max(logmag_peak, logmag)
        if aq ** (j + 1) * radius < 1.0 and logmag < logmag_peak - 40.0:
            break
        if j > 4000:
            raise InvalidParameter("contour radius too large for |q|")
    jj = np.arange(j + 1, dtype=float)
    a = jj * (jj + 1) / 2.0 * cmath.log(q) + jj * lr
    w = np.exp(a - a.real.max())
    return w, jj


def count_zeros_disk(q, radius: float, cfg: ContourConfig = DEFAULT_CONTOUR) -> int:
    """Number of zeros of theta(q, .) in |x| < radius, by winding number.

    Uniform trapezoid samples of (theta'/theta) x dt are doubled until the
    mean lands within winding_tol of an integer and one more doubling agrees.
    A sample whose Newton displacement |theta/theta'| estimates a zero closer
    than 1e-6 * radius to the contour raises ZeroOnContour.
    """
    q = _check_q(q)
    radius = float(radius)
    if not (radius > 0.0 and math.isfinite(radius)):
        raise InvalidParameter(f"radius must be positive and finite, got {radius!r}")
    w, jj = _contour_terms(q, radius)
    candidate = None
    n = cfg.initial_samples
    while n <= cfg.max_samples:
        ivals = np.empty(n, complex)
        for lo in range(0, n, 8192):
            hi = min(lo + 8192, n)
            t = 2.0 * math.pi * np.arange(lo, hi) / n
            e = np.exp(1j * np.outer(jj, t))
            u = w @ e
            v = (w * jj) @ e
            au = np.abs(u)
            if au.min() <= 1e-12 * max(au.max(), 1.0):
                raise ZeroOnContour(f"|theta| vanishes on |x| = {radius:.6g}")
            with np.errstate(divide="ignore"):
                dist = au / np.abs(v)
            if dist.min() < 1e-6:
                raise ZeroOnContour(
                    f"zero within ~1e-6*radius of the contour |x| = {radius:.6g}"
                )
            ivals[lo:hi] = v / u
        wind = complex(ivals.mean())
        nearest = int(round(wind.real))
        if abs(wind - nearest) < cfg.winding_tol:
            if candidate == nearest:
                return nearest
            candidate = nearest
        else:
            candidate = None
        n *= 2
    raise NotAnInteger(
        f"winding number failed to stabilise below {cfg.max_samples} samples"
    )


def count_zeros_annulus(q, spec: AnnulusSpec, cfg: ContourConfig = DEFAULT_CONTOUR) -> int:
    """Zeros of theta(q, .) in the open annulus |q|^-a < |x| < |q|^-b."""
    q = _check_q(q)
    aq = abs(q)
    if spec.q_abs is not None and abs(spec.q_abs - aq) > 1e-12 * aq:
        raise InvalidParameter("AnnulusSpec.q_abs disagrees with |q|")
    outer = count_zeros_disk(q, aq ** -spec.b, cfg)
    inner = count_zeros_disk(q, aq ** -spec.a, cfg)
    return outer - inner


# ---------------------------------------------------------------------------
# continuation and double-zero refinement
# ---------------------------------------------------------------------------

def polish_zero(q, x0, tol: float = 1e-11, max_iter: int = 50):
    """Newton on x for theta(q, x) = 0 from x0; None if it does not settle."""
    x = complex(x0)
    f = theta(q, x, _JET_CONFIG).value
    for _ in range(max_iter):
        if abs(f) < tol:
            return x
        fp = theta_dx(q, x, _JET_CONFIG).value
        if fp == 0:
            return None
        dx = -f / fp
        if abs(dx) > 0.5 * (1.0 + abs(x)):
            return None
        lam = 1.0
        for _ in range(40):
            x2 = x + lam * dx
            f2 = theta(q, x2, _JET_CONFIG).value
            if abs(f2) < abs(f):
                x, f = x2, f2
                break
            lam *= 0.5
        else:
            return None
    return x if abs(f) < tol else None


def track_zero(q_path, x_start, residual_tol: float = 1e-10):
    """Follow one zero of theta(q, .) along a discrete q-path.

    Newton is started from the zero at the previous path point; segments on
    which it fails are bisected, with a total budget of 2^16 subdivisions
    (PathLost afterwards -- the usual sign of passing near a double zero,
    where the branch to follow is genuinely ambiguous).
    """
    q_path = [_check_q(qv) for qv in q_path]
    if not q_path:
        raise InvalidParameter("q_path must be non-empty")
    x = _as_complex(x_start, "x_start")
    if abs(theta(q_path[0], x, _JET_CONFIG).value) > residual_tol:
        raise InvalidParameter("x_start is not a zero of theta(q_path[0], .)")
    out = [x]
    budget = 2**16
    for qa, qb in zip(q_path, q_path[1:]):
        segments = [(qa, qb)]
        x_seg = out[-1]
        while segments:
            q_from, q_to = segments.pop()
            xn = polish_zero(q_to, x_seg, tol=residual_tol)
            if xn is None:
                budget -= 1
                if budget < 0:
                    raise PathLost(
                        "subdivision budget exhausted (collision with another zero?)"
                    )
                mid = 0.5 * (q_from + q_to)
                if mid == q_from or mid == q_to:
                    raise PathLost("segment no longer divisible")
                segments.append((mid, q_to))
                segments.append((q_from, mid))
            else:
                x_seg = xn
        out.append(x_seg)
    return out


def _jet(q, x, use_truncation):
    if use_truncation is None:
        return theta_jet(q, x, _JET_CONFIG)
    return trunc_jet(q, x, use_truncation)


def refine_double_zero(q0, x0, use_truncation: int | None = None,
                       max_iter: int = 100):
    """Damped Newton for the double-zero system (f, df/dx) = 0 in (q, x).

    f is the full series (use_truncation=None) or the degree-k truncation.
    Returns (q*, x*, residual) with residual = max(|f|, |df/dx|) < 1e-11.
    """
    q = _as_complex(q0, "q0")
    x = _as_complex(x0, "x0")
    jet = _jet(q, x, use_truncation)
    res = max(abs(jet.f), abs(jet.fx))
    for _ in range(max_iter):
        if res < 1e-12:
            break
        det = jet.fq * jet.fxx - jet.fx * jet.fxq
        scale = max(abs(jet.fq * jet.fxx), abs(jet.fx * jet.fxq), 1e-300)
        if abs(det) < 1e-14 * scale:
            raise SingularJacobian(
                f"Jacobian determinant ~ {abs(det):.2e} at q={q!r}, x={x!r}"
            )
        dq = (-jet.f * jet.fxx + jet.fx * jet.fx) / det
        dx = (-jet.fq * jet.fx + jet.fxq * jet.f) / det
        lam = 1.0
        for _ in range(40):
            q2, x2 = q + lam * dq, x + lam * dx
            if use_truncation is not None or 0 < abs(q2) <= 0.99:
                jet2 = _jet(q2, x2, use_truncation)
                res2 = max(abs(jet2.f), abs(jet2.fx))
                if res2 < res:
                    q, x, jet, res = q2, x2, jet2, res2
                    break
            lam *= 0.5
        else:
            break
    if res >= 1e-11:
        raise NoConvergence(f"double-zero Newton stalled at residual {res:.3e}")
    return q, x, res
