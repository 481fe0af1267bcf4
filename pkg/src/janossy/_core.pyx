# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: the radial TW integrator and the tridiagonal QL eigensolver.

Mirrors ``_pycore`` operation for operation; both return the same tuples and
status codes.
"""
import numpy as np

from libc.math cimport exp, fabs, hypot, pow, sqrt

from ._dop853 import A as _A, B as _B, C as _C, E3 as _E3, E5 as _E5

cdef enum:
    NS = 12
    NY = 7

cdef enum:
    C_OK = 0
    C_STEP_UNDERFLOW = 1
    C_TOO_MANY_STEPS = 2
    C_NO_CONVERGENCE = 3

OK = C_OK
STEP_UNDERFLOW = C_STEP_UNDERFLOW
TOO_MANY_STEPS = C_TOO_MANY_STEPS
NO_CONVERGENCE = C_NO_CONVERGENCE

cdef double CA[NS][NS]
cdef double CB[NS]
cdef double CC[NS]
cdef double CE3[NS + 1]
cdef double CE5[NS + 1]

for _i in range(NS):
    CC[_i] = _C[_i]
    CB[_i] = _B[_i]
    for _j in range(NS):
        CA[_i][_j] = _A[_i][_j]
for _i in range(NS + 1):
    CE3[_i] = _E3[_i]
    CE5[_i] = _E5[_i]

cdef double SAFE = 0.9
cdef double BETA = 0.04
cdef double EXPO1 = 1.0 / 8.0 - 0.2 * 0.04
cdef double GROW_MAX = 6.0
cdef double SHRINK_MAX = 1.0 / 3.0


cdef inline void _rhs(double tau, const double* y, double a, double b,
                      double* out) noexcept nogil:
    cdef double s = exp(tau)
    cdef double a1 = s * a
    cdef double a2 = s * b
    cdef double q1 = y[0], p1 = y[1], q2 = y[2], p2 = y[3], U = y[4], V = y[5]
    cdef double q1q1 = q1 * q1, p1p1 = p1 * p1, q2q2 = q2 * q2, p2p2 = p2 * p2
    cdef double w = q1 * p2 - p1 * q2
    out[0] = U * q1 + (V + a1) * p1
    out[1] = (V - a1) * q1 - U * p1
    out[2] = U * q2 + (V + a2) * p2
    out[3] = (V - a2) * q2 - U * p2
    out[4] = -a1 * (q1q1 - p1p1) + a2 * (q2q2 - p2p2)
    out[5] = -2.0 * a1 * q1 * p1 + 2.0 * a2 * q2 * p2
    out[6] = (a1 * (q1q1 + p1p1) - a2 * (q2q2 + p2p2) - w * w
              + 2.0 * U * (q1 * p1 - q2 * p2) - V * (q1q1 - p1p1 - q2q2 + p2p2))


cdef inline double _max4(double a, double b, double c, double d) noexcept nogil:
    cdef double m = a
    if b > m:
        m = b
    if c > m:
        m = c
    if d > m:
        m = d
    return m


cdef int _integrate(double a, double b, double* t_io, double* y,
                    const double* tau_out, int n_out, double* states,
                    double tol, long max_steps,
                    long* n_acc_out, long* n_rej_out) noexcept nogil:
    cdef double K[NS + 1][NY]
    cdef double yt[NY]
    cdef double yn[NY]
    cdef double sc[NY]
    cdef double t = t_io[0]
    cdef int k = 0, st, i, j
    cdef long n_acc = 0, n_rej = 0
    cdef double acc, x3, x5, e3, e5, e, fac, fac11, hnew, hs, target, tn, m
    cdef double span, h, hmin, facold = 1e-4
    cdef bint hit

    while k < n_out and tau_out[k] <= t:
        for i in range(NY):
            states[k * NY + i] = y[i]
        k += 1
    if k == n_out:
        return C_OK

    _rhs(t, y, a, b, K[0])
    span = tau_out[n_out - 1] - t
    h = 0.05 if span > 0.05 else span
    hmin = 1e-13 * (fabs(span) if fabs(span) > 1.0 else 1.0)

    while k < n_out:
        if n_acc + n_rej >= max_steps:
            t_io[0] = t
            n_acc_out[0] = n_acc
            n_rej_out[0] = n_rej
            return C_TOO_MANY_STEPS
        if h < hmin:
            t_io[0] = t
            n_acc_out[0] = n_acc
            n_rej_out[0] = n_rej
            return C_STEP_UNDERFLOW
        target = tau_out[k]
        hit = t + h >= target
        hs = target - t if hit else h

        for st in range(1, NS):
            for i in range(NY):
                acc = 0.0
                for j in range(st):
                    if CA[st][j] != 0.0:
                        acc += CA[st][j] * K[j][i]
                yt[i] = y[i] + hs * acc
            _rhs(t + CC[st] * hs, yt, a, b, K[st])
        for i in range(NY):
            acc = 0.0
            for j in range(NS):
                if CB[j] != 0.0:
                    acc += CB[j] * K[j][i]
            yn[i] = y[i] + hs * acc
        tn = target if hit else t + hs
        _rhs(tn, yn, a, b, K[NS])

        # pair-wise scale for (q_j, p_j), mixed tolerance for U, V, lnJ
        for j in range(0, 4, 2):
            m = _max4(fabs(y[j]), fabs(y[j + 1]), fabs(yn[j]), fabs(yn[j + 1]))
            sc[j] = 1e-300 + tol * m
            sc[j + 1] = sc[j]
        for i in range(4, NY):
            m = fabs(y[i]) if fabs(y[i]) > fabs(yn[i]) else fabs(yn[i])
            sc[i] = tol + tol * m

        e5 = 0.0
        e3 = 0.0
        for i in range(NY):
            x5 = 0.0
            x3 = 0.0
            for j in range(NS + 1):
                if CE5[j] != 0.0:
                    x5 += CE5[j] * K[j][i]
            for j in range(NS + 1):
                if CE3[j] != 0.0:
                    x3 += CE3[j] * K[j][i]
            e5 += (x5 / sc[i]) * (x5 / sc[i])
            e3 += (x3 / sc[i]) * (x3 / sc[i])
        if e5 == 0.0 and e3 == 0.0:
            e = 0.0
        else:
            e = hs * e5 / sqrt((e5 + 0.01 * e3) * 7.0)
        if not e < 1e300:
            e = 1e300

        fac11 = pow(e, EXPO1) if e > 0.0 else 0.0
        if e <= 1.0:
            fac = fac11 / pow(facold, BETA)
            fac = fac / SAFE
            if fac > 1.0 / SHRINK_MAX:
                fac = 1.0 / SHRINK_MAX
            if fac < 1.0 / GROW_MAX:
                fac = 1.0 / GROW_MAX
            hnew = hs / fac
            facold = e if e > 1e-4 else 1e-4
            n_acc += 1
            t = tn
            for i in range(NY):
                y[i] = yn[i]
                K[0][i] = K[NS][i]
            if hit:
                while k < n_out and tau_out[k] <= t:
                    for i in range(NY):
                        states[k * NY + i] = y[i]
                    k += 1
                h = hnew if hnew > h else h
            else:
                h = hnew
        else:
            n_rej += 1
            fac = fac11 / SAFE
            if fac > 1.0 / SHRINK_MAX:
                fac = 1.0 / SHRINK_MAX
            h = hs / fac

    t_io[0] = t
    n_acc_out[0] = n_acc
    n_rej_out[0] = n_rej
    return C_OK


def tw_integrate(double a, double b, double tau0, y0, tau_out, double tol,
                 long max_steps):
    """Integrate the radial system in tau = ln s from tau0, recording the
    state exactly at each (ascending) entry of ``tau_out``.

    Returns ``(states, status, n_accepted, n_rejected, tau_reached)``.
    """
    cdef double[::1] tout = np.ascontiguousarray(tau_out, dtype=np.float64)
    cdef int n_out = tout.shape[0]
    states = np.empty((n_out, NY))
    cdef double[:, ::1] st = states
    cdef double y[NY]
    cdef double t = tau0
    cdef long n_acc = 0, n_rej = 0
    cdef int status, i
    for i in range(NY):
        y[i] = y0[i]
    if n_out == 0:
        return states, OK, 0, 0, t
    with nogil:
        status = _integrate(a, b, &t, y, &tout[0], n_out, &st[0, 0], tol,
                            max_steps, &n_acc, &n_rej)
    return states, status, n_acc, n_rej, t


cdef int _tqli(double* d, double* e, int n, int max_iter, long* total) noexcept nogil:
    cdef int l, m, i, it
    cdef double dd, g, r, s, c, p, f, bb
    cdef bint underflow
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= 2.220446049250313e-16 * dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                return C_NO_CONVERGENCE
            it += 1
            total[0] += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                bb = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * bb
                p = s * r
                d[i + 1] = g + p
                g = c * r - bb
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return C_OK


def tqli_eigvalsh(d, e, int max_iter):
    """Eigenvalues of the symmetric tridiagonal matrix with diagonal ``d`` and
    sub-diagonal ``e`` (length n-1) by implicit-shift QL.

    Returns ``(sorted eigenvalues, status, iterations)``.
    """
    cdef double[::1] dv = np.array(d, dtype=np.float64)
    cdef int n = dv.shape[0]
    ework = np.zeros(n)
    ework[:n - 1] = e
    cdef double[::1] ev = ework
    cdef long total = 0
    cdef int status
    with nogil:
        status = _tqli(&dv[0], &ev[0], n, max_iter, &total)
    return np.sort(np.asarray(dv)), status, total
