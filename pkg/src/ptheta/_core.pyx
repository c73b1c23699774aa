# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled torus kernels: point evaluation, grid scan, descent driver.

Mirrors ptheta._corepy operation for operation; see that module for the
algorithm commentary.  Everything here releases the GIL so certificate
pipelines can fan radii out over threads.
"""

from libc.math cimport cos, sin, hypot
from libc.stdlib cimport free, malloc

BACKEND = "compiled"

DEF ARMIJO = 1e-4
DEF STEP_MIN = 1e-18
DEF PG_TARGET = 1e-6


cdef inline void _point1(const double* c, const double* jv, const double* hv,
                         Py_ssize_t m, double a, double b, double* out) noexcept nogil:
    cdef double wr = 0, wi = 0, war = 0, wai = 0, wbr = 0, wbi = 0
    cdef double ph, co, si, cm
    cdef Py_ssize_t i
    for i in range(m):
        ph = jv[i] * a + hv[i] * b
        co = cos(ph)
        si = sin(ph)
        cm = c[i]
        wr += cm * co
        wi += cm * si
        war -= cm * jv[i] * si
        wai += cm * jv[i] * co
        wbr -= cm * hv[i] * si
        wbi += cm * hv[i] * co
    out[0] = wr * wr + wi * wi
    out[1] = 2.0 * (wr * war + wi * wai)
    out[2] = 2.0 * (wr * wbr + wi * wbi)


cdef inline void _point2(const double* c, const double* jv, const double* hv,
                         Py_ssize_t m, double a, double b, double* out) noexcept nogil:
    cdef double wr = 0, wi = 0, war = 0, wai = 0, wbr = 0, wbi = 0
    cdef double waar = 0, waai = 0, wabr = 0, wabi = 0, wbbr = 0, wbbi = 0
    cdef double ph, co, si, cm, jm, hm
    cdef Py_ssize_t i
    for i in range(m):
        ph = jv[i] * a + hv[i] * b
        co = cos(ph)
        si = sin(ph)
        cm = c[i]
        jm = jv[i]
        hm = hv[i]
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
    out[0] = wr * wr + wi * wi
    out[1] = 2.0 * (wr * war + wi * wai)
    out[2] = 2.0 * (wr * wbr + wi * wbi)
    out[3] = 2.0 * (war * war + wai * wai + wr * waar + wi * waai)
    out[4] = 2.0 * (war * wbr + wai * wbi + wr * wabr + wi * wabi)
    out[5] = 2.0 * (wbr * wbr + wbi * wbi + wr * wbbr + wi * wbbi)


def torus_point(double[::1] c, double[::1] jv, double[::1] hv, double a, double b):
    cdef double out[3]
    with nogil:
        _point1(&c[0], &jv[0], &hv[0], c.shape[0], a, b, out)
    return out[0], out[1], out[2]


def torus_point2(double[::1] c, double[::1] jv, double[::1] hv, double a, double b):
    cdef double out[6]
    with nogil:
        _point2(&c[0], &jv[0], &hv[0], c.shape[0], a, b, out)
    return out[0], out[1], out[2], out[3], out[4], out[5]


def torus_grid_min(double[::1] c, double[::1] jv, double[::1] hv,
                   Py_ssize_t na, Py_ssize_t nb,
                   double alo, double ahi, double blo, double bhi):
    cdef Py_ssize_t m = c.shape[0]
    cdef double* ca = <double*> malloc(2 * na * m * sizeof(double))
    cdef double* cb = <double*> malloc(2 * nb * m * sizeof(double))
    if ca == NULL or cb == NULL:
        if ca != NULL:
            free(ca)
        if cb != NULL:
            free(cb)
        raise MemoryError()
    cdef double best = 0, besta = 0, bestb = 0
    cdef double a, b, ph, wr, wi, f, car, sar, cbr, sbr
    cdef Py_ssize_t ia, ib, i, bestia = 0, bestib = 0
    with nogil:
        for ia in range(na):
            a = alo + (ahi - alo) * ia / na
            for i in range(m):
                ph = jv[i] * a
                ca[2 * (ia * m + i)] = c[i] * cos(ph)
                ca[2 * (ia * m + i) + 1] = c[i] * sin(ph)
        for ib in range(nb):
            b = blo + (bhi - blo) * ib / (nb - 1) if nb > 1 else blo
            for i in range(m):
                ph = hv[i] * b
                cb[2 * (ib * m + i)] = cos(ph)
                cb[2 * (ib * m + i) + 1] = sin(ph)
        best = -1.0
        for ia in range(na):
            for ib in range(nb):
                wr = 0
                wi = 0
                for i in range(m):
                    car = ca[2 * (ia * m + i)]
                    sar = ca[2 * (ia * m + i) + 1]
                    cbr = cb[2 * (ib * m + i)]
                    sbr = cb[2 * (ib * m + i) + 1]
                    wr += car * cbr - sar * sbr
                    wi += car * sbr + sar * cbr
                f = wr * wr + wi * wi
                if best < 0 or f < best:
                    best = f
                    bestia = ia
                    bestib = ib
    besta = alo + (ahi - alo) * bestia / na
    bestb = blo + (bhi - blo) * bestib / (nb - 1) if nb > 1 else blo
    free(ca)
    free(cb)
    return best, besta, bestb


def torus_descent(double[::1] c, double[::1] jv, double[::1] hv,
                  double a0, double b0, double blo, double bhi,
                  double gtol, int max_iter):
    cdef Py_ssize_t m = c.shape[0]
    cdef double a = a0
    cdef double b = b0
    cdef double p[6]
    cdef double f, fa, fb, ga, gb, gn, step, a2, b2, f2, decrease
    cdef double faa, fab, fbb, det, da, db, lam, ga2, gb2, pg, target
    cdef int it = 0, moved, accepted, nwt, ls
    cdef bint boundary
    with nogil:
        if b < blo:
            b = blo
        if b > bhi:
            b = bhi
        _point1(&c[0], &jv[0], &hv[0], m, a, b, p)
        f = p[0]
        fa = p[1]
        fb = p[2]
        step = 0.5
        target = gtol if gtol > PG_TARGET else PG_TARGET
        while it < max_iter:
            it += 1
            ga = fa
            gb = fb
            if b <= blo and fb > 0:
                gb = 0
            elif b >= bhi and fb < 0:
                gb = 0
            if hypot(ga, gb) <= target:
                break
            moved = 0
            while step > STEP_MIN:
                a2 = a - step * ga
                b2 = b - step * gb
                if b2 < blo:
                    b2 = blo
                if b2 > bhi:
                    b2 = bhi
                _point1(&c[0], &jv[0], &hv[0], m, a2, b2, p)
                f2 = p[0]
                decrease = ga * (a - a2) + gb * (b - b2)
                if f2 <= f - ARMIJO * decrease:
                    a = a2
                    b = b2
                    f = f2
                    fa = p[1]
                    fb = p[2]
                    step = step * 2.0
                    if step > 1e3:
                        step = 1e3
                    moved = 1
                    break
                step *= 0.5
            if moved == 0:
                break
        for nwt in range(60):
            _point2(&c[0], &jv[0], &hv[0], m, a, b, p)
            f = p[0]
            fa = p[1]
            fb = p[2]
            faa = p[3]
            fab = p[4]
            fbb = p[5]
            ga = fa
            gb = fb
            if b <= blo and fb > 0:
                gb = 0
            elif b >= bhi and fb < 0:
                gb = 0
            gn = hypot(ga, gb)
            if gn < 1e-12:
                break
            boundary = (b <= blo and fb > 0) or (b >= bhi and fb < 0)
            if boundary:
                if faa <= 0:
                    break
                da = -fa / faa
                db = 0
            else:
                det = faa * fbb - fab * fab
                if det <= 0 or faa <= 0:
                    break
                da = -(fbb * fa - fab * fb) / det
                db = -(faa * fb - fab * fa) / det
            lam = 1.0
            accepted = 0
            for ls in range(30):
                a2 = a + lam * da
                b2 = b + lam * db
                if b2 < blo:
                    b2 = blo
                if b2 > bhi:
                    b2 = bhi
                _point1(&c[0], &jv[0], &hv[0], m, a2, b2, p)
                f2 = p[0]
                ga2 = p[1]
                gb2 = p[2]
                if b2 <= blo and gb2 > 0:
                    gb2 = 0
                elif b2 >= bhi and gb2 < 0:
                    gb2 = 0
                if hypot(ga2, gb2) < gn or f2 < f:
                    a = a2
                    b = b2
                    accepted = 1
                    break
                lam *= 0.5
            if accepted == 0:
                break
        _point1(&c[0], &jv[0], &hv[0], m, a, b, p)
        f = p[0]
        ga = p[1]
        gb = p[2]
        if b <= blo and gb > 0:
            gb = 0
        elif b >= bhi and gb < 0:
            gb = 0
        pg = hypot(ga, gb)
    return f, a, b, pg, it, pg <= gtol
