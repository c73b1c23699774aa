"""Evaluation of Ramanujan's partial theta function and its relatives.

The central objects, for a parameter q with 0 < |q| < 1 and a variable x:

    theta(q, x)   = sum_{j>=0} q^(j(j+1)/2) x^j          (entire in x)
    theta_k(q, x) = sum_{j=0}^{k} q^(j(j+1)/2) x^j        (degree-k truncation)
    Theta*(q, x)  = sum_{j in Z} q^(j(j+1)/2) x^j         (bilateral form)
                  = prod_{m>=1} (1-q^m)(1+x q^m)(1+q^(m-1)/x)
    G(q, x)       = sum_{j>=1} q^(j(j-1)/2) x^(-j)

so that theta = Theta* - G.  All exponents of q appearing in these sums are
integers; half-integer powers arise only on real moduli and are computed as
exp(e*log r).

Every open-ended evaluation returns a TailedEvaluation whose ``tail_bound``
is a certified upper bound on the modulus of everything not summed.  The
workhorse bound is the geometric majorant: the theta term ratio is q^(j+1)*x,
so as soon as rho = |q|^(j+1)*|x| < 1 the tail after term j is at most
|t_j| * rho / (1 - rho), and rho only shrinks from there.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (
    DivisionByZero,
    InvalidParameter,
    MajorantDiverges,
    NonFiniteValue,
    TailNotConverged,
)

_RENORM_EVERY = 32    # refresh accumulated powers from exp/log to bound drift
_MAX_TAIL_TERMS = 200


@dataclass(frozen=True)
class EvalConfig:
    """Tail-control knobs for open-ended evaluations.

    tail_tol: target upper bound for the neglected tail (absolute).
    max_terms: hard cap on summed terms before giving up.
    """

    tail_tol: float = 1e-14
    max_terms: int = 512

    def __post_init__(self):
        if not self.tail_tol > 0.0:
            raise InvalidParameter("tail_tol must be positive")
        if self.max_terms < 8:
            raise InvalidParameter("max_terms must be at least 8")


DEFAULT_CONFIG = EvalConfig()


@dataclass(frozen=True)
class TailedEvaluation:
    """A value plus a certified bound on the truncation error committed.

    ``hit_max_terms`` is set when the majorant closed but the bound still
    exceeds the requested tolerance at the term cap; the bound remains valid.
    """

    value: complex
    tail_bound: float
    terms_used: int
    hit_max_terms: bool = False


def _as_complex(z, name: str) -> complex:
    try:
        z = complex(z)
    except (TypeError, ValueError):
        raise InvalidParameter(f"{name} must be a complex number, got {z!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidParameter(f"{name} must be finite, got {z!r}")
    return z


def _require_finite(z: complex) -> complex:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteValue(f"evaluation produced a non-finite value: {z!r}")
    return z


def _check_q(q, upper: float = 0.99) -> complex:
    q = _as_complex(q, "q")
    if not 0.0 < abs(q) <= upper:
        raise InvalidParameter(f"need 0 < |q| <= {upper}, got |q| = {abs(q):.6g}")
    return q


def _int_pow(z: complex, n: int) -> complex:
    """z**n for integer n via exp/log; exact in phase since n is integral."""
    if n == 0:
        return 1.0 + 0.0j
    return cmath.exp(n * cmath.log(z))


def theta(q, x, cfg: EvalConfig = DEFAULT_CONFIG) -> TailedEvaluation:
    """Partial theta sum with a certified tail bound.

    Terms are summed unconditionally while |q|^(j+1)*|x| >= 1; once the ratio
    drops below 1 the geometric majorant closes and summation stops as soon
    as it reaches cfg.tail_tol.

    Raises TailNotConverged if the cap is reached before the majorant closes,
    InvalidParameter unless 0 < |q| <= 0.99.
    """
    q = _check_q(q)
    x = _as_complex(x, "x")
    aq, ax = abs(q), abs(x)
    total = 0.0 + 0.0j
    term = 1.0 + 0.0j  # q^(j(j+1)/2) x^j
    qp = 1.0 + 0.0j    # q^j
    bound = math.inf
    for j in range(cfg.max_terms):
        total += term
        rho = aq ** (j + 1) * ax
        if rho < 1.0:
            bound = abs(term) * rho / (1.0 - rho)
            if bound <= cfg.tail_tol:
                return TailedEvaluation(_require_finite(total), bound, j + 1)
        qp *= q
        term *= qp * x
        if (j + 1) % _RENORM_EVERY == 0 and x != 0:
            qp = _int_pow(q, j + 1)
            term = cmath.exp(
                ((j + 1) * (j + 2) // 2) * cmath.log(q) + (j + 1) * cmath.log(x)
            )
    if not bound < math.inf:
        raise TailNotConverged(
            f"majorant open after {cfg.max_terms} terms (|q|^j|x| still >= 1)"
        )
    return TailedEvaluation(_require_finite(total), bound, cfg.max_terms, True)


def theta_trunc(q, x, k: int) -> complex:
    """Exact degree-k truncation, Horner in x with accumulated q-powers."""
    q = _as_complex(q, "q")
    x = _as_complex(x, "x")
    if not isinstance(k, int) or not 0 <= k <= 64:
        raise InvalidParameter(f"k must be an integer in [0, 64], got {k!r}")
    coeffs = [1.0 + 0.0j]
    qp = 1.0 + 0.0j
    for j in range(1, k + 1):
        qp *= q
        coeffs.append(coeffs[-1] * qp)
        if j % _RENORM_EVERY == 0 and q != 0:
            qp = _int_pow(q, j)
            coeffs[-1] = _int_pow(q, j * (j + 1) // 2)
    acc = coeffs[k]
    for j in range(k - 1, -1, -1):
        acc = acc * x + coeffs[j]
    return _require_finite(acc)


def theta_tail_bound(abs_q: float, abs_x: float, k: int) -> float:
    """Upper bound on |theta - theta_k| valid for all q, x of these moduli.

    Sums the modulus series from j = k+1 and closes it with the geometric
    remainder, so the result is a true upper bound, monotone nondecreasing
    in both moduli.  Requires abs_q^(k+1)*abs_x < 1 (MajorantDiverges
    otherwise; the first closed ratio of the tail).
    """
    abs_q = float(abs_q)
    abs_x = float(abs_x)
    if not 0.0 < abs_q < 1.0:
        raise InvalidParameter(f"need 0 < abs_q < 1, got {abs_q!r}")
    if abs_x < 0.0:
        raise InvalidParameter("abs_x must be nonnegative")
    if not isinstance(k, int) or k < 0:
        raise InvalidParameter(f"k must be a nonnegative integer, got {k!r}")
    if abs_q ** (k + 1) * abs_x >= 1.0:
        raise MajorantDiverges(
            f"abs_q^(k+1)*abs_x = {abs_q ** (k + 1) * abs_x:.6g} >= 1"
        )
    lq, lx = math.log(abs_q), (math.log(abs_x) if abs_x > 0 else None)
    if lx is None:
        return 0.0
    total = 0.0
    for j in range(k + 1, k + 1 + 4 * _MAX_TAIL_TERMS):
        lt = (j * (j + 1) / 2.0) * lq + j * lx
        term = math.exp(lt) if lt > -745.0 else 0.0
        total += term
        rho = abs_q ** (j + 1) * abs_x
        rem = term * rho / (1.0 - rho)
        if rem <= 1e-17 * total or term == 0.0:
            return total + rem
    return total + rem


def theta_dx(q, x, cfg: EvalConfig = DEFAULT_CONFIG) -> TailedEvaluation:
    """d(theta)/dx = sum_{j>=1} j q^(j(j+1)/2) x^(j-1), with tail bound.

    Same majorant as theta with the ratio inflated by (j+1)/j.
    """
    q = _check_q(q)
    x = _as_complex(x, "x")
    aq, ax = abs(q), abs(x)
    total = 0.0 + 0.0j
    qp = q          # q^j
    cj = q          # q^(j(j+1)/2)
    xp = 1.0 + 0.0j # x^(j-1)
    bound = math.inf
    for j in range(1, cfg.max_terms + 1):
        term = j * cj * xp
        total += term
        rho = (j + 1) / j * aq ** (j + 1) * ax
        if rho < 1.0:
            bound = abs(term) * rho / (1.0 - rho)
            if bound <= cfg.tail_tol:
                return TailedEvaluation(_require_finite(total), bound, j)
        qp *= q
        cj *= qp
        xp *= x
        if j % _RENORM_EVERY == 0 and x != 0:
            qp = _int_pow(q, j + 1)
            cj = _int_pow(q, (j + 1) * (j + 2) // 2)
            xp = cmath.exp(j * cmath.log(x))
    if not bound < math.inf:
        raise TailNotConverged(
            f"derivative majorant open after {cfg.max_terms} terms"
        )
    return TailedEvaluation(_require_finite(total), bound, cfg.max_terms, True)


def g_tail(q, x, cfg: EvalConfig = DEFAULT_CONFIG) -> TailedEvaluation:
    """G(q, x) = sum_{m>=1} q^(m(m-1)/2) x^(-m), the negative-index tail.

    The term ratio is q^m / x, so |x| > |q| is required for the majorant to
    close from the first term (MajorantDiverges otherwise).
    """
    q = _check_q(q)
    x = _as_complex(x, "x")
    if x == 0:
        raise DivisionByZero("G(q, x) contains 1/x")
    aq, ax = abs(q), abs(x)
    if aq / ax >= 1.0:
        raise MajorantDiverges(f"|q|/|x| = {aq / ax:.6g} >= 1")
    total = 0.0 + 0.0j
    term = 1.0 / x       # q^(m(m-1)/2) x^(-m)
    qp = 1.0 + 0.0j      # q^(m-1)... multiplied up to q^m before use
    for m in range(1, cfg.max_terms + 1):
        total += term
        rho = aq**m / ax
        bound = abs(term) * rho / (1.0 - rho)
        if bound <= cfg.tail_tol:
            return TailedEvaluation(_require_finite(total), bound, m)
        qp *= q
        term *= qp / x
        if m % _RENORM_EVERY == 0:
            qp = _int_pow(q, m)
            term = cmath.exp(
                ((m + 1) * m // 2) * cmath.log(q) - (m + 1) * cmath.log(x)
            )
    return TailedEvaluation(_require_finite(total), bound, cfg.max_terms, True)


def bilateral_series(q, x, cfg: EvalConfig = DEFAULT_CONFIG) -> TailedEvaluation:
    """Theta*(q, x) as a two-sided sum: theta-side plus G-side.

    The two one-sided tails are bounded separately and added.
    """
    pos = theta(q, x, cfg)
    neg = g_tail(q, x, cfg)
    return TailedEvaluation(
        _require_finite(pos.value + neg.value),
        pos.tail_bound + neg.tail_bound,
        pos.terms_used + neg.terms_used,
        pos.hit_max_terms or neg.hit_max_terms,
    )


def triple_product(q, x, cfg: EvalConfig = DEFAULT_CONFIG) -> TailedEvaluation:
    """Theta*(q, x) as prod_{m>=1} (1-q^m)(1+x q^m)(1+q^(m-1)/x).

    Stops once the factors not yet multiplied can move the product by less
    than cfg.tail_tol in aggregate: with s_m = |q|^m (1+|x|) + |q|^(m-1)/|x|,
    the neglected relative error is at most expm1(S e^S), S = sum_{m>M} s_m,
    and S is a closed geometric sum.
    """
    q = _check_q(q)
    x = _as_complex(x, "x")
    if x == 0:
        raise DivisionByZero("the product form contains 1/x")
    aq, ax = abs(q), abs(x)
    prod = 1.0 + 0.0j
    qp = 1.0 + 0.0j  # q^(m-1)
    for m in range(1, cfg.max_terms + 1):
        qm = qp * q
        prod *= (1.0 - qm) * (1.0 + x * qm) * (1.0 + qp / x)
        qp = qm
        if m % _RENORM_EVERY == 0:
            qp = _int_pow(q, m)
        s_rest = (aq ** (m + 1) * (1.0 + ax) + aq**m / ax) / (1.0 - aq)
        if s_rest < 50.0:
            rel = math.expm1(s_rest * math.exp(s_rest))
            bound = abs(prod) * rel
            if bound <= cfg.tail_tol:
                return TailedEvaluation(_require_finite(prod), bound, m)
    raise TailNotConverged(
        f"product factors still significant after {cfg.max_terms} terms"
    )


@dataclass(frozen=True)
class ThetaJet:
    """theta and the partial derivatives used by double-zero Newton steps."""

    f: complex
    fx: complex
    fq: complex
    fxx: complex
    fxq: complex
    tail_bound: float


def theta_jet(q, x, cfg: EvalConfig = DEFAULT_CONFIG) -> ThetaJet:
    """theta, d/dx, d/dq, d2/dx2, d2/dxdq in one pass, all term-wise.

    The cutoff is driven by the heaviest weight present, j*(j(j+1)/2), whose
    majorant dominates the others once closed; the reported tail bound is for
    that weighted series and is shared by every component after rescaling by
    max(1, 1/|q|) and max(1, 1/|x|)^2.
    """
    q = _check_q(q)
    x = _as_complex(x, "x")
    if x == 0:
        # at x = 0 each derivative collapses to a single surviving term
        return ThetaJet(1.0 + 0.0j, q, 0.0 + 0.0j, 2.0 * q**3, 1.0 + 0.0j, 0.0)
    aq, ax = abs(q), abs(x)
    f = 1.0 + 0.0j
    fx = fq = fxx = fxq = 0.0 + 0.0j
    qp = 1.0 + 0.0j    # q^j
    cj = 1.0 + 0.0j    # q^(T_j)
    cjm = None         # q^(T_j - 1), defined from j = 1
    xp = 1.0 + 0.0j    # x^j
    xpm = None         # x^(j-1)
    xpm2 = None        # x^(j-2)
    bound = math.inf
    scale = max(1.0, 1.0 / aq) * max(1.0, 1.0 / ax) ** 2
    for j in range(1, cfg.max_terms + 1):
        qp *= q
        cj *= qp
        cjm = 1.0 + 0.0j if j == 1 else cjm * qp
        xpm = 1.0 + 0.0j if j == 1 else xpm * x
        xpm2 = (1.0 + 0.0j if j == 2 else (xpm2 * x if j > 2 else None))
        xp *= x
        T = j * (j + 1) / 2.0
        f += cj * xp
        fx += j * cj * xpm
        fq += T * cjm * xp
        fxq += j * T * cjm * xpm
        if j >= 2:
            fxx += j * (j - 1) * cj * xpm2
        w = j * T
        wn = (j + 1) * (j + 1) * (j + 2) / 2.0
        rho = (wn / w) * aq ** (j + 1) * ax
        if rho < 1.0:
            bound = w * abs(cj * xp) * rho / (1.0 - rho) * scale
            if bound <= cfg.tail_tol:
                break
        if j % _RENORM_EVERY == 0:
            lq, lx = cmath.log(q), cmath.log(x)
            qp = cmath.exp(j * lq)
            cj = cmath.exp((j * (j + 1) // 2) * lq)
            cjm = cmath.exp((j * (j + 1) // 2 - 1) * lq)
            xp = cmath.exp(j * lx)
            xpm = cmath.exp((j - 1) * lx)
            if j >= 2:
                xpm2 = cmath.exp((j - 2) * lx)
    for val in (f, fx, fq, fxx, fxq):
        _require_finite(val)
    return ThetaJet(f, fx, fq, fxx, fxq, bound)


def trunc_jet(q, x, k: int) -> ThetaJet:
    """Exact jet of the degree-k truncation (tail bound is zero)."""
    q = _as_complex(q, "q")
    x = _as_complex(x, "x")
    if not isinstance(k, int) or not 0 <= k <= 64:
        raise InvalidParameter(f"k must be an integer in [0, 64], got {k!r}")
    f = 1.0 + 0.0j
    fx = fq = fxx = fxq = 0.0 + 0.0j
    qp = cj = 1.0 + 0.0j
    cjm = xpm = xpm2 = None
    xp = 1.0 + 0.0j
    for j in range(1, k + 1):
        qp *= q
        cj *= qp
        cjm = 1.0 + 0.0j if j == 1 else cjm * qp
        xpm = 1.0 + 0.0j if j == 1 else xpm * x
        xpm2 = 1.0 + 0.0j if j == 2 else (xpm2 * x if j > 2 else None)
        xp *= x
        T = j * (j + 1) / 2.0
        f += cj * xp
        fx += j * cj * xpm
        fq += T * cjm * xp
        fxq += j * T * cjm * xpm
        if j >= 2:
            fxx += j * (j - 1) * cj * xpm2
    for val in (f, fx, fq, fxx, fxq):
        _require_finite(val)
    return ThetaJet(f, fx, fq, fxx, fxq, 0.0)
