"""Spectrum location: parameters q where theta (or a truncation) has a double zero.

Pipeline: a grid scan of |Res(theta_k, d theta_k/dx)| flags candidate cells
(the resultant vanishes exactly at the double-zero parameters); each flagged
cell is handed to the damped Newton solver on the system (f, df/dx) = 0,
whose residual -- not the ill-conditioned determinant -- is the acceptance
criterion.  Confirmed double zeros are classified by Definition-style pair
indices: the value gets the pair (j, j+1) when exactly j-1 zeros, counted
with multiplicity, have strictly smaller modulus than the coalescing pair.

Truncation spectra are exact statements about polynomials; spectra of the
full series are obtained by re-refining truncation values against increasing
orders until the located parameter stops moving (refine_to_full_theta), and
are flagged `would_be` unless they match an independently confirmed value.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    AmbiguousModulus,
    InvalidParameter,
    NotStabilized,
    ResultantOverflow,
    ThetaError,
)
from .series import _as_complex, theta_tail_bound
from .zeros import (
    BoundaryWarning,
    closest_adjacent_pair,
    polish_zero,
    refine_double_zero,
    roots_truncation,
)

_LN10 = math.log(10.0)
_PAIR_BAND_REL = 1e-6       # modulus band half-width for pair classification
_SCAN_DIP_LOG10 = 0.75      # candidate dips sit this far below the local median
_SCAN_WINDOW = 6            # half-width (cells) of the local background window
_ORIGIN_GUARD = 0.02        # grid cells this close to q = 0 are artifacts

# Independently confirmed spectral values of the full series (high-precision
# refinements; printed reference digits are truncations of these).  Anything
# located outside this list is reported as a would-be value only.
CONFIRMED_SPECTRAL_VALUES = (
    0.3092493386 + 0.0j,
    0.5169593598 + 0.0j,
    0.6306283161 + 0.0j,
    -0.7271333255 + 0.0j,
    0.4353184958 + 0.1230440086j,
    0.4353184958 - 0.1230440086j,
)
_CONFIRM_TOL = 2e-5


def is_confirmed_spectral_value(q: complex) -> bool:
    return any(abs(q - v) < _CONFIRM_TOL for v in CONFIRMED_SPECTRAL_VALUES)


@dataclass(frozen=True)
class RegionSpec:
    """Rectangular scan region with a square per-axis grid."""

    re_range: tuple[float, float]
    im_range: tuple[float, float]
    grid_n: int = 161

    def __post_init__(self):
        for lo, hi in (self.re_range, self.im_range):
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise InvalidParameter(f"degenerate range {lo!r}:{hi!r}")
            if max(abs(lo), abs(hi)) > 1.25:
                raise InvalidParameter("scan regions live inside [-1.25, 1.25]^2")
        if self.grid_n < 8:
            raise InvalidParameter("grid_n must be at least 8")


@dataclass(frozen=True)
class SpectralValue:
    """A located double-zero event.

    pair = (j, j+1) means the j-th and (j+1)-st zeros by modulus coalesce;
    simple_zeros_inside are the j-1 zeros of strictly smaller modulus.
    would_be marks values of the full series not matching any independently
    confirmed spectral value.
    """

    q_star: complex
    x_star: complex
    pair: tuple[int, int]
    source: str
    residual: float
    simple_zeros_inside: tuple = ()
    would_be: bool = False

    def __post_init__(self):
        if not self.residual < 1e-10:
            raise InvalidParameter(f"residual {self.residual!r} not below 1e-10")
        if self.pair[1] != self.pair[0] + 1 or self.pair[0] < 1:
            raise InvalidParameter(f"malformed pair {self.pair!r}")
        if len(self.simple_zeros_inside) != self.pair[0] - 1:
            raise InvalidParameter(
                "pair index disagrees with the count of smaller zeros"
            )

    def as_dict(self):
        return {
            "source": self.source,
            "q": [self.q_star.real, self.q_star.imag],
            "x": [self.x_star.real, self.x_star.imag],
            "pair": [self.pair[0], self.pair[1]],
            "residual": self.residual,
            "would_be": self.would_be,
        }


@dataclass(frozen=True)
class ResultantValue:
    """Magnitude-safe resultant: value = mantissa * 10**exponent.

    |mantissa| lies in [1, 10) (or mantissa = 0 for an exact zero), so any
    resultant magnitude is representable regardless of float range.
    """

    mantissa: complex
    exponent: int = 0

    def to_complex(self) -> complex:
        if self.mantissa == 0:
            return 0.0 + 0.0j
        if self.exponent > 307:
            raise ResultantOverflow(
                f"|resultant| ~ 10^{self.exponent} exceeds float range"
            )
        return self.mantissa * 10.0 ** float(self.exponent)

    @property
    def log10_abs(self) -> float:
        if self.mantissa == 0:
            return -math.inf
        return math.log10(abs(self.mantissa)) + self.exponent


def _check_resultant_order(k) -> int:
    if not isinstance(k, int) or not 2 <= k <= 20:
        raise InvalidParameter(f"resultant order must be an integer in [2, 20], got {k!r}")
    return k


def _sylvester_batch(k: int, q: np.ndarray) -> np.ndarray:
    """Stacked Sylvester matrices of (theta_k, d theta_k/dx) at each q."""
    n = q.shape[0]
    a = np.empty((n, k + 1), complex)
    a[:, 0] = 1.0
    qp = np.ones_like(q)
    for j in range(1, k + 1):
        qp = qp * q
        a[:, j] = a[:, j - 1] * qp
    b = a[:, 1:] * np.arange(1, k + 1)
    m = 2 * k - 1
    s = np.zeros((n, m, m), complex)
    a_rev = a[:, ::-1]
    b_rev = b[:, ::-1]
    for i in range(k - 1):
        s[:, i, i : i + k + 1] = a_rev
    for i in range(k):
        s[:, k - 1 + i, i : i + k] = b_rev
    return s


def _resultant_batch(k: int, q: np.ndarray):
    """(unit signs, log10 magnitudes) of the resultant over a q-batch.

    Rows are scaled to unit max modulus before the LU determinant
    (numpy slogdet, partial pivoting) and the scale factors folded back in the
    log domain, so no intermediate over/underflows.
    """
    s = _sylvester_batch(k, q)
    scale = np.abs(s).max(axis=2)
    scale[scale == 0.0] = 1.0
    s /= scale[:, :, None]
    sign, logdet = np.linalg.slogdet(s)
    log10 = (logdet + np.log(scale).sum(axis=1)) / _LN10
    return sign, log10


def resultant_at_raw(k: int, q) -> ResultantValue:
    """Resultant of theta_k and its x-derivative at q, magnitude-safe."""
    k = _check_resultant_order(k)
    q = _as_complex(q, "q")
    if q == 0:
        return ResultantValue(0.0 + 0.0j, 0)
    sign, log10 = _resultant_batch(k, np.array([q]))
    if sign[0] == 0 or not math.isfinite(log10[0]):
        return ResultantValue(0.0 + 0.0j, 0)
    e = int(math.floor(log10[0]))
    mant = complex(sign[0]) * 10.0 ** (log10[0] - e)
    return ResultantValue(mant, e)


def resultant_at(k: int, q) -> complex:
    """Resultant collapsed to a complex value (ResultantOverflow if too big)."""
    return resultant_at_raw(k, q).to_complex()


def _zero_moduli_for_classification(f_source, q_star, x_star):
    """Zeros of the classification target up to a radius above |x_star|.

    For the full series an order K is picked with tail below 1e-12 of the
    retained term scale on the relevant circle; truncation roots then stand
    in for series zeros (their displacement is far below the band width).
    """
    if f_source is not None:
        return _quiet_roots(q_star, f_source).zeros, f_source
    aq = abs(q_star)
    radius = abs(x_star) * 1.05
    k_use = None
    for k in range(16, 65, 4):
        jj = np.arange(k + 1)
        logterms = jj * (jj + 1) / 2.0 * math.log(aq) + jj * math.log(radius)
        scale = math.exp(logterms.max())
        try:
            tail = theta_tail_bound(aq, radius, k)
        except ThetaError:
            continue
        if tail <= 1e-12 * scale:
            k_use = k
            break
    if k_use is None:
        k_use = 64
    return _quiet_roots(q_star, k_use).zeros, k_use


def _quiet_roots(q, k):
    """roots_truncation without shell-boundary warnings (irrelevant here)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundaryWarning)
        return roots_truncation(q, k)


def classify_pair(f_source: int | None, q_star, x_star) -> tuple[int, int]:
    """Pair (j, j+1) of a refined double zero; j-1 = zeros strictly inside.

    Raises AmbiguousModulus unless the modulus band |x_star| * (1 +- 1e-6)
    contains exactly the two coalescing zeros.
    """
    pair, _ = _classify_with_zeros(f_source, q_star, x_star)
    return pair


def _classify_with_zeros(f_source, q_star, x_star):
    q_star = _as_complex(q_star, "q_star")
    x_star = _as_complex(x_star, "x_star")
    zs, _ = _zero_moduli_for_classification(f_source, q_star, x_star)
    r = abs(x_star)
    lo, hi = r * (1.0 - _PAIR_BAND_REL), r * (1.0 + _PAIR_BAND_REL)
    in_band = [z for z in zs if lo <= abs(z) <= hi]
    below = [z for z in zs if abs(z) < lo]
    if len(in_band) != 2:
        raise AmbiguousModulus(
            f"{len(in_band)} zeros in the modulus band of |x*| = {r:.6g}"
        )
    for z in in_band:
        if abs(z - x_star) > 1e-3 * (1.0 + r):
            raise AmbiguousModulus(
                "a zero shares the modulus band but is far from the double zero"
            )
    j = len(below) + 1
    return (j, j + 1), below


def scan_truncation_spectrum(k: int, region: RegionSpec, seed: int = 0):
    """Spectral values of theta_k inside a region, via a resultant grid scan.

    Strict local minima of log10|resultant| that dip below the windowed
    local median seed double-zero refinements; converged, deduplicated
    results are classified and returned sorted by (Re q, Im q).  Cells at
    the origin are discarded (the resultant vanishes there without theta_k
    having a multiple zero).  The scan itself is deterministic; `seed` is
    carried into the run record only.
    """
    k = _check_resultant_order(k)
    rlo, rhi = region.re_range
    ilo, ihi = region.im_range
    res = np.linspace(rlo, rhi, region.grid_n)
    ims = np.linspace(ilo, ihi, region.grid_n)
    qgrid = (res[None, :] + 1j * ims[:, None]).ravel()
    log10 = np.empty(qgrid.shape[0])
    for lo in range(0, qgrid.shape[0], 2048):
        hi = min(lo + 2048, qgrid.shape[0])
        _, log10[lo:hi] = _resultant_batch(k, qgrid[lo:hi])
    grid = log10.reshape(region.grid_n, region.grid_n)
    if not np.isfinite(grid).any():
        return []
    padded = np.pad(grid, 1, constant_values=np.inf)
    neighbourhoods = [
        padded[1 + di : 1 + di + grid.shape[0], 1 + dj : 1 + dj + grid.shape[1]]
        for di in (-1, 0, 1)
        for dj in (-1, 0, 1)
        if (di, dj) != (0, 0)
    ]
    is_min = np.ones_like(grid, bool)
    for nb in neighbourhoods:
        is_min &= grid < nb
    # the resultant magnitude sweeps tens of orders across a region, so the
    # dip test is against a windowed median, not a global floor: a zero
    # within half a cell of a grid point digs >~ 1 order below the local
    # background, while smooth-background minima sit well within 0.1
    candidates = []
    w = _SCAN_WINDOW
    for i, j in zip(*np.nonzero(is_min)):
        window = grid[max(0, i - w) : i + w + 1, max(0, j - w) : j + w + 1]
        local = np.median(window[np.isfinite(window)])
        if grid[i, j] <= local - _SCAN_DIP_LOG10 or not np.isfinite(grid[i, j]):
            candidates.append(complex(qgrid[i * region.grid_n + j]))
    candidates.sort(key=lambda z: (z.real, z.imag))

    cell = max((rhi - rlo), (ihi - ilo)) / (region.grid_n - 1)
    found: list[SpectralValue] = []
    for q0 in candidates:
        if abs(q0) < _ORIGIN_GUARD:
            continue
        try:
            zset = _quiet_roots(q0, k)
        except ThetaError:
            continue
        # several spectral values can share one dip cell; seed from the two
        # tightest modulus-adjacent pairs to catch them separately
        for x0 in _pair_seeds(zset, 2):
            try:
                q_star, x_star, resid = refine_double_zero(q0, x0, use_truncation=k)
            except ThetaError:
                continue
            if abs(q_star) < 1e-6:
                continue
            if not (
                rlo - cell <= q_star.real <= rhi + cell
                and ilo - cell <= q_star.imag <= ihi + cell
            ):
                continue
            if any(abs(q_star - f.q_star) < 1e-8 for f in found):
                continue
            try:
                pair, below = _classify_with_zeros(k, q_star, x_star)
            except AmbiguousModulus:
                continue
            found.append(
                SpectralValue(
                    q_star=q_star,
                    x_star=x_star,
                    pair=pair,
                    source=f"truncation:{k}",
                    residual=resid,
                    simple_zeros_inside=tuple(below),
                )
            )
    found.sort(key=lambda sv: (sv.q_star.real, sv.q_star.imag))
    return found


def _pair_seeds(zset, n_seeds: int):
    """Midpoints of the n tightest modulus-adjacent zero pairs."""
    zs = zset.zeros
    gaps = sorted(
        (abs(zs[i + 1] - zs[i]) / abs(zs[i]), i) for i in range(len(zs) - 1)
    )
    return [0.5 * (zs[i] + zs[i + 1]) for _, i in gaps[:n_seeds]]


DEFAULT_K_SCHEDULE = (12, 16, 20, 24, None)


def refine_to_full_theta(
    sv: SpectralValue,
    k_schedule=DEFAULT_K_SCHEDULE,
    stability_tol: float = 1e-7,
) -> SpectralValue:
    """Re-refine a truncation spectral value against the full series.

    The double zero is chased through increasing truncation orders and
    finally the tail-bounded series (schedule entry None); success requires
    the last two located parameters to agree within stability_tol
    (NotStabilized otherwise).  The result is classified against the full
    series and flagged would_be unless it matches a confirmed value.
    """
    q, x = sv.q_star, sv.x_star
    trail = [q]
    resid = sv.residual
    for k in k_schedule:
        if k is not None and (not isinstance(k, int) or not 1 <= k <= 64):
            raise InvalidParameter(f"bad schedule entry {k!r}")
        q, x, resid = refine_double_zero(q, x, use_truncation=k)
        trail.append(q)
    if abs(trail[-1] - trail[-2]) >= stability_tol:
        raise NotStabilized(
            f"parameter still moving by {abs(trail[-1] - trail[-2]):.3e} "
            f"between the last two refinement stages"
        )
    pair, below = _classify_with_zeros(None, q, x)
    polished = []
    for z in below:
        pz = polish_zero(q, z)
        polished.append(pz if pz is not None else z)
    return SpectralValue(
        q_star=q,
        x_star=x,
        pair=pair,
        source="theta",
        residual=resid,
        simple_zeros_inside=tuple(polished),
        would_be=not is_confirmed_spectral_value(q),
    )
