"""Machine-checked separation certificates.

Three pipelines establish that theta(q, .) has no zero on the critical
circles |x| = |q|^(-3/2) and |x| = |q|^(-5/2) over parameter sectors, which
pins every zero inside its own modulus shell:

  * run_k1_chain   -- an inequality chain over |q| in (0, 0.6], arg q in
    [pi/4, pi/2], built from two torus minima (radii 0.5 and 0.36), the
    xi/psi drift envelopes between anchor radii, and a small-|q| branch that
    factors theta_3 = (1 + q^2 x)(1 + (1-q) q x + q^4 x^2);
  * run_k2_grid    -- torus minima mu_nu of |theta_5| on a radius grid,
    glued between consecutive radii with the k/l envelopes (rho) and pushed
    below twice the m envelope (eta), which also dominates the bilateral
    tail G on every outer circle;
  * run_sector2    -- the same rho certificate on arg q in [pi/2, pi], radii
    0.55 to 0.6.

certify_separation_direct is the independent numerical complement: it counts
zeros by the argument principle at all shell radii for one q.

Certificates serialise to canonical JSON (sorted keys, fixed separators) so
runs are diffable; wall time is never part of the canonical document.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._rng import SplitMix64
from .bounds import k_bound, l_bound, m_bound, psi, xi
from .errors import ChainBroken, InvalidParameter, MajorantDiverges
from .series import _check_q, theta_tail_bound
from .torusopt import TorusProblem, minimize_on_torus
from .zeros import (
    DEFAULT_CONTOUR,
    ContourConfig,
    ZeroSet,
    _make_zeroset,
    count_zeros_disk,
    polish_zero,
    roots_truncation,
)

SCHEMA_VERSION = 1
B_RANGE_K1 = (math.pi / 4, math.pi / 2)
B_RANGE_SECTOR2 = (math.pi / 2, math.pi)


def _floor_dec(x: float, d: int) -> float:
    return math.floor(x * 10**d + 1e-9) / 10**d


def _ceil_dec(x: float, d: int) -> float:
    return math.ceil(x * 10**d - 1e-9) / 10**d


@dataclass(frozen=True)
class GridSpec:
    """Arithmetic radius grid r_nu = r_start + step * nu, nu = 0..count-1."""

    r_start: float = 0.2025
    step: float = 0.0025
    count: int = 160

    def __post_init__(self):
        if self.count < 2:
            raise InvalidParameter("count must be at least 2")
        if not (0.0 < self.r_start and self.step > 0.0):
            raise InvalidParameter("r_start and step must be positive")
        if not self.r_start + self.step * (self.count - 1) < 1.0:
            raise InvalidParameter("grid radii must stay inside (0, 1)")

    @property
    def radii(self) -> list[float]:
        return [self.r_start + self.step * nu for nu in range(self.count)]


@dataclass(frozen=True)
class CertRow:
    """One consecutive-radius record of a separation certificate.

    rho = min(mu_lo, mu_hi) - K - dL  bounds |theta_5| from below between
    the two radii; eta = rho - 2M additionally clears twice the bilateral
    tail envelope.  `passed` reflects the certificate mode (eta or rho > 0).
    """

    nu: int
    r_lo: float
    r_hi: float
    mu_lo: float
    mu_hi: float
    k_term: float
    l_diff: float
    m_term: float
    rho: float
    eta: float
    passed: bool

    def as_dict(self):
        return {
            "nu": self.nu,
            "r_lo": self.r_lo,
            "r_hi": self.r_hi,
            "mu_lo": self.mu_lo,
            "mu_hi": self.mu_hi,
            "K": self.k_term,
            "dL": self.l_diff,
            "M": self.m_term,
            "rho": self.rho,
            "eta": self.eta,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class SeparationCertificate:
    pipeline: str
    grid: GridSpec
    b_range: tuple[float, float]
    seed: int
    mode: str                      # "eta" or "rho"
    mu_values: tuple
    rows: tuple
    overall_pass: bool
    wall_time_s: float = field(default=0.0, compare=False)

    def to_json_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "pipeline": self.pipeline,
            "grid": {
                "r_start": self.grid.r_start,
                "step": self.grid.step,
                "count": self.grid.count,
            },
            "b_range": list(self.b_range),
            "seed": self.seed,
            "mode": self.mode,
            "mu": list(self.mu_values),
            "rows": [r.as_dict() for r in self.rows],
            "overall_pass": self.overall_pass,
        }


def canonical_json(obj) -> str:
    """Sorted-key, fixed-separator JSON; byte-identical for identical inputs."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _grid_minima(grid: GridSpec, b_range, seed: int, threads=None):
    """One torus minimisation per radius; deterministic per-radius seeds."""
    rng = SplitMix64(seed)
    sub_seeds = [rng.next_u64() for _ in range(grid.count)]
    problems = [
        TorusProblem(k=5, r=r, e=2.5, b_range=b_range) for r in grid.radii
    ]

    def run(i):
        return minimize_on_torus(problems[i], seed=sub_seeds[i])

    if threads is None or threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(grid.count)))
    else:
        results = [run(i) for i in range(grid.count)]
    return results


def run_k2_grid(
    grid: GridSpec = GridSpec(),
    b_range=B_RANGE_K1,
    seed: int = 0,
    threads=None,
    mode: str = "eta",
    pipeline: str = "k2-grid",
) -> SeparationCertificate:
    """The rho/eta certificate on an arithmetic radius grid.

    For each consecutive radius pair: rho = min(mu) - K(r_hi, r_lo) - |dL|
    and eta = rho - 2 M(r_hi); mode selects which must be positive for a
    row to pass.  Rows cover every consecutive pair (count - 1 of them).
    """
    import time

    if mode not in ("eta", "rho"):
        raise InvalidParameter(f"mode must be 'eta' or 'rho', got {mode!r}")
    t0 = time.perf_counter()
    results = _grid_minima(grid, b_range, seed, threads)
    mus = [r.mu for r in results]
    radii = grid.radii
    rows = []
    for nu in range(grid.count - 1):
        r_lo, r_hi = radii[nu], radii[nu + 1]
        kt = k_bound(r_hi, r_lo)
        dl = abs(l_bound(r_lo) - l_bound(r_hi))
        mt = m_bound(r_hi)
        rho = min(mus[nu], mus[nu + 1]) - kt - dl
        eta = rho - 2.0 * mt
        passed = (eta > 0.0) if mode == "eta" else (rho > 0.0)
        rows.append(
            CertRow(nu, r_lo, r_hi, mus[nu], mus[nu + 1], kt, dl, mt, rho, eta, passed)
        )
    return SeparationCertificate(
        pipeline=pipeline,
        grid=grid,
        b_range=tuple(b_range),
        seed=seed,
        mode=mode,
        mu_values=tuple(mus),
        rows=tuple(rows),
        overall_pass=all(r.passed for r in rows),
        wall_time_s=time.perf_counter() - t0,
    )


SECTOR2_GRID = GridSpec(r_start=0.55, step=0.005, count=11)


def run_sector2(seed: int = 0, threads=None) -> SeparationCertificate:
    """The rho certificate for arg q in [pi/2, pi], radii 0.55 + 0.005 j."""
    return run_k2_grid(
        grid=SECTOR2_GRID,
        b_range=B_RANGE_SECTOR2,
        seed=seed,
        threads=threads,
        mode="rho",
        pipeline="sector2",
    )


@dataclass(frozen=True)
class ChainRow:
    """One named inequality of the radius-band chain.

    `value` is recomputed; `bound` is the value rounded outward at the
    certificate's recorded decimal resolution and is what enters subsequent
    arithmetic; kind says which direction must hold.
    """

    name: str
    value: float
    bound: float
    kind: str  # "lower": value > bound must hold; "upper": value < bound
    satisfied: bool

    def as_dict(self):
        return {
            "name": self.name,
            "value": self.value,
            "bound": self.bound,
            "kind": self.kind,
            "pass": self.satisfied,
        }


@dataclass(frozen=True)
class ChainReport:
    rows: tuple
    margins: dict
    overall_margin: float
    passed: bool
    seed: int
    wall_time_s: float = field(default=0.0, compare=False)

    def to_json_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "pipeline": "k1-chain",
            "seed": self.seed,
            "rows": [r.as_dict() for r in self.rows],
            "margins": dict(sorted(self.margins.items())),
            "overall_margin": self.overall_margin,
            "overall_pass": self.passed,
        }


def _arc_min_dist_to_one(radius: float, blo: float, bhi: float) -> float:
    """min over b in [blo, bhi] of |1 - radius e^(ib)|, by golden section.

    The integrand is unimodal on arcs not crossing arg = 0.
    """
    invphi = (math.sqrt(5.0) - 1.0) / 2.0

    def f(b):
        return abs(1.0 - radius * complex(math.cos(b), math.sin(b)))

    a, b = blo, bhi
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(200):
        if b - a < 1e-13:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return min(fc, fd)


def run_k1_chain(seed: int = 0, threads=None) -> ChainReport:
    """Inequality chain certifying |theta| > 0 on |x| = |q|^(-3/2).

    Covers arg q in [pi/4, pi/2] and |q| in (0, 0.6] in five radius bands
    anchored at torus minima of |theta_3| at radii 0.5 and 0.36 plus a
    factorisation argument below 0.24.  Every constant is recomputed and
    rounded outward at the recorded decimal resolution before entering the
    band arithmetic.  Raises ChainBroken (carrying the report) if any
    inequality fails.
    """
    import time

    t0 = time.perf_counter()
    rows = []

    def add(name, value, bound, kind):
        ok = value > bound if kind == "lower" else value < bound
        rows.append(ChainRow(name, value, bound, kind, ok))
        return ok

    mu_05 = minimize_on_torus(
        TorusProblem(k=3, r=0.5, e=1.5, b_range=B_RANGE_K1), seed=seed
    ).mu
    mu_036 = minimize_on_torus(
        TorusProblem(k=3, r=0.36, e=1.5, b_range=B_RANGE_K1), seed=seed
    ).mu

    min3_05 = _floor_dec(mu_05, 2)
    add("min3_r05", mu_05, min3_05, "lower")
    psi_05 = psi(0.5)
    psi_05_up = _ceil_dec(psi_05, 4)
    add("tail_r05", psi_05, psi_05_up, "upper")
    m_r05 = min3_05 - psi_05_up

    xi_65 = xi(0.6, 0.5)
    xi_65_up = _ceil_dec(xi_65, 4)
    add("xi_06_05", xi_65, xi_65_up, "upper")
    dpsi_65 = psi(0.6) - psi_05
    dpsi_65_up = _ceil_dec(dpsi_65, 4)
    add("dpsi_06_05", dpsi_65, dpsi_65_up, "upper")
    m_band_05_06 = m_r05 - xi_65_up - dpsi_65_up

    xi_54 = xi(0.5, 0.4)
    xi_54_up = _ceil_dec(xi_54, 4)
    add("xi_05_04", xi_54, xi_54_up, "upper")
    dpsi_54 = psi_05 - psi(0.4)
    dpsi_54_up = _ceil_dec(dpsi_54, 4)
    add("dpsi_05_04", dpsi_54, dpsi_54_up, "upper")
    m_band_04_05 = m_r05 - xi_54_up - dpsi_54_up

    min3_036 = _floor_dec(mu_036, 2)
    add("min3_r036", mu_036, min3_036, "lower")
    psi_036 = psi(0.36)
    psi_036_up = _ceil_dec(psi_036, 6)
    add("tail_r036", psi_036, psi_036_up, "upper")
    m_r036 = min3_036 - psi_036_up

    xi_4036 = xi(0.4, 0.36)
    xi_4036_up = _ceil_dec(xi_4036, 4)
    add("xi_04_036", xi_4036, xi_4036_up, "upper")
    dpsi_4036 = psi(0.4) - psi_036
    dpsi_4036_up = _ceil_dec(dpsi_4036, 5)
    add("dpsi_04_036", dpsi_4036, dpsi_4036_up, "upper")
    m_band_036_04 = m_r036 - xi_4036_up - dpsi_4036_up

    xi_3624 = xi(0.36, 0.24)
    xi_3624_up = _ceil_dec(xi_3624, 3)
    add("xi_036_024", xi_3624, xi_3624_up, "upper")
    dpsi_3624 = psi_036 - psi(0.24)
    dpsi_3624_up = _ceil_dec(dpsi_3624, 5)
    add("dpsi_036_024", dpsi_3624, dpsi_3624_up, "upper")
    m_band_024_036 = m_r036 - xi_3624_up - dpsi_3624_up

    # small-|q| branch: theta_3 = (1 + q^2 x)(1 + (1-q) q x + q^4 x^2) on
    # |x| = |q|^(-3/2); envelopes below are extremal at |q| = 0.24
    arc = _arc_min_dist_to_one(0.24, *B_RANGE_K1)
    arc_dn = _floor_dec(arc, 4)
    add("arc_dist_one_r024", arc, arc_dn, "lower")
    add("small_q_q2x_sup", math.sqrt(0.24), 0.5, "upper")
    add("small_q_qx_inf", 0.24**-0.5, 2.0, "lower")
    # on |x| = |q|^(-3/2) one has |q^4 x^2| = |q| < 0.24 identically
    theta3_floor = 0.5 * (2.0 * arc_dn - 1.0 - 0.24)
    tail_024 = psi(0.24)
    tail_024_up = _ceil_dec(tail_024, 4)
    add("small_q_tail", tail_024, tail_024_up, "upper")
    add("small_q_factor_floor", theta3_floor, tail_024_up, "lower")
    m_small_q = theta3_floor - tail_024_up

    margins = {
        "surface_r05": m_r05,
        "band_05_06": m_band_05_06,
        "band_04_05": m_band_04_05,
        "surface_r036": m_r036,
        "band_036_04": m_band_036_04,
        "band_024_036": m_band_024_036,
        "small_q": m_small_q,
    }
    for name, value in margins.items():
        add(f"margin_{name}", value, 0.0, "lower")
    overall = min(margins.values())
    report = ChainReport(
        rows=tuple(rows),
        margins=margins,
        overall_margin=overall,
        passed=all(r.satisfied for r in rows),
        seed=seed,
        wall_time_s=time.perf_counter() - t0,
    )
    if not report.passed:
        first_bad = next(r.name for r in rows if not r.satisfied)
        raise ChainBroken(f"chain inequality failed: {first_bad}", report)
    return report


def certify_separation_direct(
    q,
    kmax: int = 6,
    cfg: ContourConfig = DEFAULT_CONTOUR,
) -> ZeroSet:
    """Shell-by-shell zero counts for one q, with a polished zero list.

    Counts zeros of theta(q, .) in |x| < |q|^(-(2k+1)/2) for k = 0..kmax by
    the argument principle; separation holds when the count equals k for
    every k >= 1.  The returned zero list is obtained independently from a
    truncation whose tail is negligible at the outer radius, polished
    against the full series.
    """
    q = _check_q(q)
    if not isinstance(kmax, int) or not 1 <= kmax <= 12:
        raise InvalidParameter(f"kmax must be an integer in [1, 12], got {kmax!r}")
    aq = abs(q)
    counts = [
        count_zeros_disk(q, aq ** -(k + 0.5), cfg) for k in range(kmax + 1)
    ]
    counts_ok = all(counts[k] == k for k in range(1, kmax + 1))

    r_max = aq ** -(kmax + 0.5)
    k_trunc = None
    for k in range(max(2 * kmax, 16), 65, 4):
        try:
            if theta_tail_bound(aq, r_max, k) < 1e-10:
                k_trunc = k
                break
        except MajorantDiverges:
            continue
    if k_trunc is None:
        k_trunc = 64
    roots = [z for z in roots_truncation(q, k_trunc).zeros if abs(z) < r_max]
    polished = []
    for z in roots:
        pz = polish_zero(q, z)
        polished.append(pz if pz is not None else z)
    zs = np.array(sorted(polished, key=lambda z: (abs(z), math.atan2(z.imag, z.real))))
    zero_set = _make_zeroset(q, zs, "theta")
    if not counts_ok:
        zero_set = ZeroSet(
            zero_set.q, zero_set.zeros, zero_set.source, zero_set.annulus_index, False
        )
    return zero_set
