"""Fredholm determinant of the conditioned sine kernel by Nystrom discretisation.

Independent of the ODE route in :mod:`janossy.tw`; the two are used to
cross-check each other.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InvalidArgumentError, QualityWarning
from .kernel import kernel_Ktilde
from .quadrature import gauss_legendre

A_MAX_LIMIT = 40.0
DEFAULT_ORDER = 200


@dataclass(frozen=True)
class Interval:
    """[a1, a2] with a1 <= 0 <= a2 in kernel units; the conditioned
    eigenvalue sits at 0."""

    a1: float
    a2: float

    def __post_init__(self):
        a1, a2 = float(self.a1), float(self.a2)
        if not (math.isfinite(a1) and math.isfinite(a2)):
            raise InvalidArgumentError(f"interval endpoints must be finite, got ({a1}, {a2})")
        if a1 > 0 or a2 < 0:
            raise InvalidArgumentError(f"need a1 <= 0 <= a2, got ({a1}, {a2})")
        if -a1 > A_MAX_LIMIT or a2 > A_MAX_LIMIT:
            raise InvalidArgumentError(f"|a_j| must not exceed {A_MAX_LIMIT}, got ({a1}, {a2})")
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)

    @property
    def empty(self):
        return self.a1 == self.a2

    @classmethod
    def coerce(cls, iv):
        return iv if isinstance(iv, cls) else cls(*iv)


def nystrom_matrix(iv, m=DEFAULT_ORDER):
    """``delta_ij - sqrt(w_i) Ktilde(x_i, x_j) sqrt(w_j)`` on the order-m rule."""
    iv = Interval.coerce(iv)
    rule = gauss_legendre(m, iv.a1, iv.a2)
    x = rule.nodes
    sw = np.sqrt(rule.weights)
    return np.eye(m) - sw[:, None] * kernel_Ktilde(x[:, None], x[None, :]) * sw[None, :]


def fredholm_logdet(iv, m=DEFAULT_ORDER):
    """ln Det(I - Ktilde) on the interval, from the LU factorisation
    (partial pivoting) in log space so deep tails do not underflow."""
    iv = Interval.coerce(iv)
    if m < 2:
        raise InvalidArgumentError(f"Nystrom order must be >= 2, got {m}")
    if iv.empty:
        return 0.0
    sign, logabs = np.linalg.slogdet(nystrom_matrix(iv, m))
    if sign <= 0 or not np.isfinite(logabs):
        warnings.warn(
            f"Nystrom matrix on [{iv.a1}, {iv.a2}] is singular to working precision",
            QualityWarning,
            stacklevel=2,
        )
        return -math.inf
    return float(logabs)


def fredholm_det(iv, m=DEFAULT_ORDER):
    """J_1(0; [a1, a2]) by the order-m Nystrom approximation."""
    logdet = fredholm_logdet(iv, m)
    if logdet < -745.0:
        warnings.warn(f"determinant exp({logdet:.1f}) underflows to 0", QualityWarning, stacklevel=2)
    return math.exp(logdet)


def fredholm_det_converged(iv, rel_tol=1e-10, m_start=50, m_max=3200):
    """Double the order from ``m_start`` until successive values agree to
    ``rel_tol``. Returns ``(value, m_used)``."""
    iv = Interval.coerce(iv)
    if not 0 < rel_tol < 1:
        raise InvalidArgumentError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    if iv.empty:
        return 1.0, m_start
    m = m_start
    prev = fredholm_det(iv, m)
    while True:
        m *= 2
        cur = fredholm_det(iv, m)
        if abs(cur - prev) <= rel_tol * abs(cur):
            return cur, m
        if m >= m_max:
            raise ConvergenceError(
                f"Nystrom determinant on [{iv.a1}, {iv.a2}] not converged at m={m}: "
                f"last iterates {prev!r}, {cur!r}"
            )
        prev = cur
