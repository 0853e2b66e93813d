# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled compute kernels: twin of `_kernels_py` for the hot inner loops.

Tables are injected once from `blades` via `init_tables` so the sign
conventions have a single source of truth.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport isfinite

cnp.import_array()

BACKEND_NAME = "c"

cdef long MIDX[16][16]
cdef double MSGN[16][16]
cdef double REVSGN[16]
cdef bint _CONFIGURED = False


def init_tables(mult_index, mult_sign, rev_signs):
    """Load the blade product tables generated by `blades`."""
    global _CONFIGURED
    cdef long[:, ::1] mi = np.ascontiguousarray(mult_index, dtype=np.int64)
    cdef double[:, ::1] ms = np.ascontiguousarray(mult_sign, dtype=np.float64)
    cdef double[::1] rs = np.ascontiguousarray(rev_signs, dtype=np.float64)
    cdef int i, j
    for i in range(16):
        for j in range(16):
            MIDX[i][j] = mi[i, j]
            MSGN[i][j] = ms[i, j]
        REVSGN[i] = rs[i]
    _CONFIGURED = True


cdef inline void _gp(const double *a, const double *b, double *out) noexcept nogil:
    cdef int i, j
    cdef double ai
    for i in range(16):
        out[i] = 0.0
    for i in range(16):
        ai = a[i]
        if ai == 0.0:
            continue
        for j in range(16):
            out[MIDX[i][j]] += ai * b[j] * MSGN[i][j]


cdef inline void _right_mul_blade(const double *a, int blade, double *out) noexcept nogil:
    cdef int i
    for i in range(16):
        out[i] = 0.0
    for i in range(16):
        out[MIDX[i][blade]] += a[i] * MSGN[i][blade]


cdef void _derivs(const double *pi4, const double *psi, const double *fco,
                  bint has_f, double charge,
                  double *dx, double *dpi, double *dpsi) noexcept nogil:
    cdef double g0psi[16]
    cdef double rpsi[16]
    cdef double v16[16]
    cdef double pi16[16]
    cdef double tmp[16]
    cdef double vv[16]
    cdef double fv[16]
    cdef int i, mu

    # dx = psi g0 ~psi  (grade-1 coefficients)
    _right_mul_blade(psi, 1, g0psi)
    for i in range(16):
        rpsi[i] = psi[i] * REVSGN[i]
    _gp(g0psi, rpsi, v16)
    for mu in range(4):
        dx[mu] = v16[1 + mu]

    # dpi = e * (F . dx)
    if has_f:
        for i in range(16):
            vv[i] = 0.0
        for mu in range(4):
            vv[1 + mu] = dx[mu]
        _gp(fco, vv, fv)
        for mu in range(4):
            dpi[mu] = charge * fv[1 + mu]
    else:
        for mu in range(4):
            dpi[mu] = 0.0

    # dpsi = -(pi psi) g0 g2 g1 = (pi psi) g012
    for i in range(16):
        pi16[i] = 0.0
    for mu in range(4):
        pi16[1 + mu] = pi4[mu]
    _gp(pi16, psi, tmp)
    _right_mul_blade(tmp, 11, dpsi)


def gp(a, b):
    """Geometric product of two 16-coefficient multivectors."""
    if not _CONFIGURED:
        raise RuntimeError("kernel tables not initialised")
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    out = np.zeros(16)
    cdef double[::1] ov = out
    _gp(&av[0], &bv[0], &ov[0])
    return out


def rk4_const_field(state0, fcoeffs, double charge, double h, long nsteps):
    """Fixed-step RK4 for a position-independent field; see `_kernels_py`."""
    if not _CONFIGURED:
        raise RuntimeError("kernel tables not initialised")
    cdef bint has_f = False
    cdef const double[::1] fview
    cdef double fco[16]
    cdef int i
    for i in range(16):
        fco[i] = 0.0
    if fcoeffs is not None and np.any(fcoeffs):
        has_f = True
        fview = np.ascontiguousarray(fcoeffs, dtype=np.float64)
        for i in range(16):
            fco[i] = fview[i]

    out = np.empty((nsteps + 1, 24))
    cdef double[:, ::1] ov = out
    cdef const double[::1] s0 = np.ascontiguousarray(state0, dtype=np.float64)

    cdef double x[4]
    cdef double pi[4]
    cdef double psi[16]
    cdef double pi_s[4]
    cdef double psi_s[16]
    cdef double dx1[4], dx2[4], dx3[4], dx4[4]
    cdef double dp1[4], dp2[4], dp3[4], dp4[4]
    cdef double ds1[16], ds2[16], ds3[16], ds4[16]
    cdef double h6 = h / 6.0
    cdef long k, bad = -1
    cdef int mu
    cdef bint ok

    for mu in range(4):
        x[mu] = s0[mu]
        pi[mu] = s0[4 + mu]
    for i in range(16):
        psi[i] = s0[8 + i]
    for i in range(24):
        ov[0, i] = s0[i]

    with nogil:
        for k in range(nsteps):
            _derivs(pi, psi, fco, has_f, charge, dx1, dp1, ds1)
            for mu in range(4):
                pi_s[mu] = pi[mu] + 0.5 * h * dp1[mu]
            for i in range(16):
                psi_s[i] = psi[i] + 0.5 * h * ds1[i]
            _derivs(pi_s, psi_s, fco, has_f, charge, dx2, dp2, ds2)
            for mu in range(4):
                pi_s[mu] = pi[mu] + 0.5 * h * dp2[mu]
            for i in range(16):
                psi_s[i] = psi[i] + 0.5 * h * ds2[i]
            _derivs(pi_s, psi_s, fco, has_f, charge, dx3, dp3, ds3)
            for mu in range(4):
                pi_s[mu] = pi[mu] + h * dp3[mu]
            for i in range(16):
                psi_s[i] = psi[i] + h * ds3[i]
            _derivs(pi_s, psi_s, fco, has_f, charge, dx4, dp4, ds4)

            for mu in range(4):
                x[mu] += h6 * (dx1[mu] + 2.0 * (dx2[mu] + dx3[mu]) + dx4[mu])
                pi[mu] += h6 * (dp1[mu] + 2.0 * (dp2[mu] + dp3[mu]) + dp4[mu])
            for i in range(16):
                psi[i] += h6 * (ds1[i] + 2.0 * (ds2[i] + ds3[i]) + ds4[i])

            ok = True
            for mu in range(4):
                if not (isfinite(x[mu]) and isfinite(pi[mu])):
                    ok = False
            for i in range(16):
                if not isfinite(psi[i]):
                    ok = False
            for mu in range(4):
                ov[k + 1, mu] = x[mu]
                ov[k + 1, 4 + mu] = pi[mu]
            for i in range(16):
                ov[k + 1, 8 + i] = psi[i]
            if not ok:
                bad = k + 1
                break

    return out, bad
