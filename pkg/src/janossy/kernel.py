"""Sine kernel and the kernel conditioned on an eigenvalue at the origin.

Coordinates are in kernel units, where the mean level spacing is pi.
"""
import numpy as np

_SQRT_PI = np.sqrt(np.pi)
# psi * sqrt(pi) = sum_n (-1)^n 2n x^(2n) / (2n+1)!, used below |x| = 0.5
_PSI_SERIES = [(-1) ** n * 2 * n / np.prod(np.arange(1.0, 2 * n + 2)) for n in range(1, 10)]


def _out(x, scalar):
    return float(x) if scalar else x


def sinc(x):
    """sin(x)/x, with the Taylor polynomial below |x| = 1e-4."""
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    x2 = x * x
    res = np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)
    return _out(res, scalar)


def kernel_K(x, y):
    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    d = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
    return _out(sinc(d) / np.pi, scalar)


def phi(x):
    scalar = np.ndim(x) == 0
    return _out(np.sin(np.asarray(x, dtype=float)) / _SQRT_PI, scalar)


def psi(x):
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    x2 = x * x
    series = np.zeros_like(x)
    for c in reversed(_PSI_SERIES):
        series = (series + c) * x2
    direct = np.cos(x) - sinc(x)
    res = np.where(np.abs(x) < 0.5, series, direct) / _SQRT_PI
    return _out(res, scalar)


def kernel_Ktilde(x, y):
    """Sine kernel conditioned on an eigenvalue at 0:
    (sinc(x-y) - sinc(x) sinc(y)) / pi. Exactly symmetric in (x, y)."""
    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    res = (sinc(np.abs(x - y)) - sinc(x) * sinc(y)) / np.pi
    return _out(res, scalar)


def kernel_Ktilde_divided(x, y):
    """Integrable form (phi(x) psi(y) - psi(x) phi(y)) / (x - y).

    Falls back to the difference-of-sincs form for |x - y| <= 1e-3, where the
    divided difference cancels catastrophically.
    """
    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x - y
    near = np.abs(d) <= 1e-3
    safe = np.where(near, 1.0, d)
    div = (phi(x) * psi(y) - psi(x) * phi(y)) / safe
    res = np.where(near, kernel_Ktilde(x, y), div)
    return _out(res, scalar)
