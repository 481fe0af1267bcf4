"""Pure-Python kernels. Same signatures and status codes as the compiled ``_core``."""
import math

import numpy as np

OK = 0
STEP_UNDERFLOW = 1
TOO_MANY_STEPS = 2
NO_CONVERGENCE = 3

from ._dop853 import A, B, C, E3, E5, N_STAGES

SAFE = 0.9
BETA = 0.04
EXPO1 = 1.0 / 8.0 - 0.2 * BETA
GROW_MAX = 6.0
SHRINK_MAX = 1.0 / 3.0

# sparse rows of the tableau: [(stage, coeff), ...]
_A_ROWS = [[(j, A[i][j]) for j in range(i) if A[i][j] != 0.0] for i in range(N_STAGES)]
_B = [(j, B[j]) for j in range(N_STAGES) if B[j] != 0.0]
_E3 = [(j, E3[j]) for j in range(N_STAGES + 1) if E3[j] != 0.0]
_E5 = [(j, E5[j]) for j in range(N_STAGES + 1) if E5[j] != 0.0]


def tw_rhs(tau, y, a, b, out):
    s = math.exp(tau)
    a1 = s * a
    a2 = s * b
    q1, p1, q2, p2, U, V = y[0], y[1], y[2], y[3], y[4], y[5]
    q1q1 = q1 * q1
    p1p1 = p1 * p1
    q2q2 = q2 * q2
    p2p2 = p2 * p2
    w = q1 * p2 - p1 * q2
    out[0] = U * q1 + (V + a1) * p1
    out[1] = (V - a1) * q1 - U * p1
    out[2] = U * q2 + (V + a2) * p2
    out[3] = (V - a2) * q2 - U * p2
    out[4] = -a1 * (q1q1 - p1p1) + a2 * (q2q2 - p2p2)
    out[5] = -2.0 * a1 * q1 * p1 + 2.0 * a2 * q2 * p2
    out[6] = (a1 * (q1q1 + p1p1) - a2 * (q2q2 + p2p2) - w * w
              + 2.0 * U * (q1 * p1 - q2 * p2) - V * (q1q1 - p1p1 - q2q2 + p2p2))


def _scales(y, yn, tol):
    # q_j, p_j share the magnitude of their pair as scale: near s -> 0 the
    # state spans many decades and an absolute floor would swamp it.
    sc = [0.0] * 7
    for j in (0, 2):
        m = max(abs(y[j]), abs(y[j + 1]), abs(yn[j]), abs(yn[j + 1]))
        sc[j] = sc[j + 1] = 1e-300 + tol * m
    for i in (4, 5, 6):
        sc[i] = tol + tol * max(abs(y[i]), abs(yn[i]))
    return sc


def tw_integrate(a, b, tau0, y0, tau_out, tol, max_steps):
    """Integrate the radial system in tau = ln s from tau0, recording the
    state exactly at each (ascending) entry of ``tau_out``.

    Returns ``(states, status, n_accepted, n_rejected, tau_reached)``.
    """
    n_out = len(tau_out)
    states = np.empty((n_out, 7))
    y = [float(v) for v in y0]
    t = float(tau0)
    k = 0
    while k < n_out and tau_out[k] <= t:
        states[k] = y
        k += 1
    if k == n_out:
        return states, OK, 0, 0, t

    K = [[0.0] * 7 for _ in range(N_STAGES + 1)]
    yt = [0.0] * 7
    yn = [0.0] * 7
    tw_rhs(t, y, a, b, K[0])

    span = float(tau_out[-1]) - t
    h = min(0.05, span)
    hmin = 1e-13 * max(1.0, abs(span))
    facold = 1e-4
    n_acc = 0
    n_rej = 0
    while k < n_out:
        if n_acc + n_rej >= max_steps:
            return states, TOO_MANY_STEPS, n_acc, n_rej, t
        if h < hmin:
            return states, STEP_UNDERFLOW, n_acc, n_rej, t
        target = float(tau_out[k])
        hit = t + h >= target
        hs = target - t if hit else h

        for st in range(1, N_STAGES):
            row = _A_ROWS[st]
            for i in range(7):
                acc = 0.0
                for j, c in row:
                    acc += c * K[j][i]
                yt[i] = y[i] + hs * acc
            tw_rhs(t + C[st] * hs, yt, a, b, K[st])
        for i in range(7):
            acc = 0.0
            for j, c in _B:
                acc += c * K[j][i]
            yn[i] = y[i] + hs * acc
        tn = target if hit else t + hs
        tw_rhs(tn, yn, a, b, K[N_STAGES])

        sc = _scales(y, yn, tol)
        e5 = 0.0
        e3 = 0.0
        for i in range(7):
            x5 = 0.0
            for j, c in _E5:
                x5 += c * K[j][i]
            x3 = 0.0
            for j, c in _E3:
                x3 += c * K[j][i]
            e5 += (x5 / sc[i]) ** 2
            e3 += (x3 / sc[i]) ** 2
        if e5 == 0.0 and e3 == 0.0:
            e = 0.0
        else:
            e = hs * e5 / math.sqrt((e5 + 0.01 * e3) * 7.0)
        if not e < 1e300:
            e = 1e300

        fac11 = e ** EXPO1 if e > 0.0 else 0.0
        if e <= 1.0:
            fac = fac11 / facold ** BETA
            fac = max(1.0 / GROW_MAX, min(1.0 / SHRINK_MAX, fac / SAFE))
            hnew = hs / fac
            facold = max(e, 1e-4)
            n_acc += 1
            t = tn
            y, yn = yn, y
            K[0], K[N_STAGES] = K[N_STAGES], K[0]
            if hit:
                while k < n_out and float(tau_out[k]) <= t:
                    states[k] = y
                    k += 1
                # a truncated step says nothing about the step size the
                # solution tolerates
                h = max(hnew, h)
            else:
                h = hnew
        else:
            n_rej += 1
            h = hs / min(1.0 / SHRINK_MAX, fac11 / SAFE)
    return states, OK, n_acc, n_rej, t


def _pythag(a, b):
    return math.hypot(a, b)


def tqli_eigvalsh(d, e, max_iter):
    """Eigenvalues of the symmetric tridiagonal matrix with diagonal ``d`` and
    sub-diagonal ``e`` (length n-1) by implicit-shift QL.

    Returns ``(sorted eigenvalues, status, iterations)``.
    """
    n = len(d)
    d = [float(v) for v in d]
    e = [float(v) for v in e] + [0.0]
    total = 0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= 2.220446049250313e-16 * dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                return np.sort(np.array(d)), NO_CONVERGENCE, total
            it += 1
            total += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = _pythag(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                bb = c * e[i]
                r = _pythag(f, g)
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
    return np.sort(np.array(d)), OK, total
