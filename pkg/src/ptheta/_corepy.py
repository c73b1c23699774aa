"""Pure-Python twin of the compiled torus kernels.

Same call signatures and the same arithmetic, written so results track the
compiled backend to floating-point noise.  The grid scan is vectorised with
numpy; the point evaluations and the descent driver are plain loops (the
truncation order is tiny, so call overhead dominates either way).
"""

import math

import numpy as np

BACKEND = "python"

_ARMIJO = 1e-4
_STEP_MIN = 1e-18
_PG_TARGET = 1e-6     # coarse phase hands over to Newton at this gradient norm
_NEWTON_ITERS = 60


def torus_point(c, jv, hv, a, b):
    """|w|^2 and its (a, b) gradient for w = sum c_m exp(i(jv_m a + hv_m b))."""
    wr = wi = war = wai = wbr = wbi = 0.0
    for m in range(len(c)):
        ph = jv[m] * a + hv[m] * b
        co, si = math.cos(ph), math.sin(ph)
        cm = c[m]
        wr += cm * co
        wi += cm * si
        war -= cm * jv[m] * si
        wai += cm * jv[m] * co
        wbr -= cm * hv[m] * si
        wbi += cm * hv[m] * co
    f = wr * wr + wi * wi
    fa = 2.0 * (wr * war + wi * wai)
    fb = 2.0 * (wr * wbr + wi * wbi)
    return f, fa, fb


def torus_point2(c, jv, hv, a, b):
    """torus_point plus the (a, b) Hessian entries (faa, fab, fbb)."""
    wr = wi = war = wai = wbr = wbi = 0.0
    waar = waai = wabr = wabi = wbbr = wbbi = 0.0
    for m in range(len(c)):
        ph = jv[m] * a + hv[m] * b
        co, si = math.cos(ph), math.sin(ph)
        cm = c[m]
        jm, hm = jv[m], hv[m]
        wr += cm * co
        wi += cm * si
        war -= cm * jm * si
        wai += cm * jm * co
        wbr -= cm * hm * si
        wbi += cm * hm * co
        waar -= cm * jm * jm * co
        waai -= cm * jm * jm * si
        wabr -= cm * jm * hm * co
        wabi -= cm * jm * hm * si
        wbbr -= cm * hm * hm * co
        wbbi -= cm * hm * hm * si
    f = wr * wr + wi * wi
    fa = 2.0 * (wr * war + wi * wai)
    fb = 2.0 * (wr * wbr + wi * wbi)
    faa = 2.0 * (war * war + wai * wai + wr * waar + wi * waai)
    fab = 2.0 * (war * wbr + wai * wbi + wr * wabr + wi * wabi)
    fbb = 2.0 * (wbr * wbr + wbi * wbi + wr * wbbr + wi * wbbi)
    return f, fa, fb, faa, fab, fbb


def torus_grid_min(c, jv, hv, na, nb, alo, ahi, blo, bhi):
    """Minimum of |w|^2 over an na x nb grid; a endpoint-open, b closed."""
    c = np.asarray(c, float)
    jv = np.asarray(jv, float)
    hv = np.asarray(hv, float)
    a = alo + (ahi - alo) * np.arange(na) / na
    b = np.linspace(blo, bhi, nb) if nb > 1 else np.array([blo])
    ea = np.exp(1j * np.outer(a, jv)) * c          # (na, m)
    eb = np.exp(1j * np.outer(hv, b))              # (m, nb)
    f = np.abs(ea @ eb) ** 2
    ia, ib = np.unravel_index(np.argmin(f), f.shape)
    return float(f[ia, ib]), float(a[ia]), float(b[ib])


def _project(fa, fb, b, blo, bhi):
    gb = fb
    if b <= blo and fb > 0.0:
        gb = 0.0
    elif b >= bhi and fb < 0.0:
        gb = 0.0
    return fa, gb


def torus_descent(c, jv, hv, a0, b0, blo, bhi, gtol, max_iter):
    """Projected-gradient descent with backtracking, then Newton polish.

    b is boxed to [blo, bhi]; a is unconstrained (periodic).  Returns
    (f, a, b, projected_gradient_norm, iterations, converged).
    """
    a = float(a0)
    b = min(max(float(b0), blo), bhi)
    f, fa, fb = torus_point(c, jv, hv, a, b)
    step = 0.5
    it = 0
    target = max(gtol, _PG_TARGET)
    while it < max_iter:
        it += 1
        ga, gb = _project(fa, fb, b, blo, bhi)
        if math.hypot(ga, gb) <= target:
            break
        moved = False
        while step > _STEP_MIN:
            a2 = a - step * ga
            b2 = min(max(b - step * gb, blo), bhi)
            f2, fa2, fb2 = torus_point(c, jv, hv, a2, b2)
            decrease = ga * (a - a2) + gb * (b - b2)
            if f2 <= f - _ARMIJO * decrease:
                a, b, f, fa, fb = a2, b2, f2, fa2, fb2
                step = min(step * 2.0, 1e3)
                moved = True
                break
            step *= 0.5
        if not moved:
            break
    for _ in range(_NEWTON_ITERS):
        f, fa, fb, faa, fab, fbb = torus_point2(c, jv, hv, a, b)
        ga, gb = _project(fa, fb, b, blo, bhi)
        gn = math.hypot(ga, gb)
        if gn < 1e-12:
            break
        boundary = (b <= blo and fb > 0.0) or (b >= bhi and fb < 0.0)
        if boundary:
            if faa <= 0.0:
                break
            da, db = -fa / faa, 0.0
        else:
            det = faa * fbb - fab * fab
            if det <= 0.0 or faa <= 0.0:
                break
            da = -(fbb * fa - fab * fb) / det
            db = -(faa * fb - fab * fa) / det
        lam = 1.0
        accepted = False
        for _ in range(30):
            a2 = a + lam * da
            b2 = min(max(b + lam * db, blo), bhi)
            f2, fa2, fb2 = torus_point(c, jv, hv, a2, b2)
            ga2, gb2 = _project(fa2, fb2, b2, blo, bhi)
            if math.hypot(ga2, gb2) < gn or f2 < f:
                a, b = a2, b2
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            break
    f, fa, fb = torus_point(c, jv, hv, a, b)
    ga, gb = _project(fa, fb, b, blo, bhi)
    pg = math.hypot(ga, gb)
    return f, a, b, pg, it, pg <= gtol
