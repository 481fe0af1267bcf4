"""Janossy density J_1(0; [a1, a2]) from the Tracy-Widom system.

The PDE system in the endpoints is integrated along rays
``(a1, a2) = (s a, s b)`` in the variable ``tau = ln s``, starting from the
small-interval series at ``s = eps``. Along the way every sample also yields
the resolvent kernel at the endpoints (R11, R12, R22) and the joint density
``Pc = -d^2 J / da1 da2``.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
import warnings

from .errors import AccuracyError, InvalidArgumentError, QualityWarning, StiffnessError
from .nystrom import A_MAX_LIMIT, Interval

DEFAULT_TOL = 1e-13
START_SCALE = 1e-6  # endpoint magnitude where the series hands over to the ODE
SERIES_LIMIT = 0.01
MAX_STEPS = 200_000
# Past this endpoint magnitude roundoff, amplified by the growing mode of the
# system, costs more than 1e-6 relative accuracy in J.
RELIABLE_SCALE = 12.0

_PI = math.pi
_SP = math.sqrt(math.pi)
_PI32 = math.pi**1.5

STATE_FIELDS = ("q1", "p1", "q2", "p2", "U", "V", "lnJ")


@dataclass(frozen=True)
class TwState:
    q1: float
    p1: float
    q2: float
    p2: float
    U: float
    V: float
    lnJ: float

    def as_array(self):
        return np.array([self.q1, self.p1, self.q2, self.p2, self.U, self.V, self.lnJ])

    @classmethod
    def from_array(cls, y):
        return cls(*(float(v) for v in y))


def boundary_state(a1, a2):
    """Small-interval expansion of the TW variables, accurate to O(a^6)."""
    if not (-SERIES_LIMIT <= a1 <= 0.0 <= a2 <= SERIES_LIMIT):
        raise InvalidArgumentError(
            f"series start needs -{SERIES_LIMIT} <= a1 <= 0 <= a2 <= {SERIES_LIMIT}, got ({a1}, {a2})"
        )
    d3 = a1**3 - a2**3
    d4 = a1**4 - a2**4
    d5 = a1**5 - a2**5
    lnJ = d3 / (9 * _PI) - 2 * d5 / (225 * _PI)

    def q(a):
        return a / _SP - a**3 / (6 * _SP) - d3 * a / (9 * _PI32) + a**5 / (120 * _SP)

    def p(a):
        return -(a**2) / (3 * _SP) + a**4 / (30 * _SP) + d4 * a / (36 * _PI32)

    u = -d3 / (3 * _PI) + d5 / (15 * _PI)
    v = d4 / (12 * _PI)
    w = -d5 / (45 * _PI)
    return TwState(q(a1), p(a1), q(a2), p(a2), 1.0 + u - w, 2.0 * v, lnJ)


def resolvents(a1, a2, states):
    """R11, R12, R22 at the endpoints from TW states (rows of ``states``).

    R12 is the divided difference of the (q, p) pairs; the diagonal entries
    follow from the endpoint PDEs:
    a_j R_jj = 2U q_j p_j + V (p_j^2 - q_j^2) + a_j (q_j^2 + p_j^2)
               + (-1)^k a_k (a_j - a_k) R_jk^2.
    A frozen endpoint (a_j = 0) has R_jj = 0.
    """
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    q1, p1, q2, p2, U, V = (states[..., i] for i in range(6))
    R12 = (q1 * p2 - p1 * q2) / (a1 - a2)
    n1 = 2 * U * q1 * p1 + V * (p1 * p1 - q1 * q1) + a1 * (q1 * q1 + p1 * p1) + a2 * (a1 - a2) * R12**2
    n2 = 2 * U * q2 * p2 + V * (p2 * p2 - q2 * q2) + a2 * (q2 * q2 + p2 * p2) - a1 * (a2 - a1) * R12**2
    with np.errstate(divide="ignore", invalid="ignore"):
        R11 = np.where(a1 != 0.0, n1 / np.where(a1 != 0.0, a1, 1.0), 0.0)
        R22 = np.where(a2 != 0.0, n2 / np.where(a2 != 0.0, a2, 1.0), 0.0)
    return R11, R12, R22


def lnj_flow(a1, a2, states):
    """s d(lnJ)/ds as written in the radial system (right-hand side)."""
    q1, p1, q2, p2, U, V = (states[..., i] for i in range(6))
    return (a1 * (q1**2 + p1**2) - a2 * (q2**2 + p2**2) - (q1 * p2 - p1 * q2) ** 2
            + 2 * U * (q1 * p1 - q2 * p2) - V * (q1**2 - p1**2 - q2**2 + p2**2))


@dataclass(frozen=True, eq=False)
class RaySample:
    s: float
    state: TwState
    R11: float
    R12: float
    R22: float
    Pc: float


@dataclass(frozen=True, eq=False)
class RayProfile:
    """Samples of one radial solve, stored column-wise.

    ``direction`` is the ray endpoint ``(a, b)`` reached at ``s = 1``.
    """

    direction: tuple
    s: np.ndarray
    states: np.ndarray
    R11: np.ndarray
    R12: np.ndarray
    R22: np.ndarray
    Pc: np.ndarray
    stats: dict = field(default_factory=dict)

    @property
    def a1(self):
        return self.s * self.direction[0]

    @property
    def a2(self):
        return self.s * self.direction[1]

    @property
    def lnJ(self):
        return self.states[:, 6]

    @property
    def J(self):
        return np.exp(self.states[:, 6])

    def __len__(self):
        return len(self.s)

    def __getitem__(self, i):
        return RaySample(float(self.s[i]), TwState.from_array(self.states[i]), float(self.R11[i]),
                         float(self.R12[i]), float(self.R22[i]), float(self.Pc[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))


def _check_tol(tol):
    if not 1e-14 <= tol <= 1e-6:
        raise InvalidArgumentError(f"tol must lie in [1e-14, 1e-6], got {tol}")


def integrate_ray(a, b, eps=None, tol=DEFAULT_TOL, s_out=None, n_samples=200, backend=None):
    """Solve the TW system along ``(s a, s b)`` for ``s`` up to 1.

    Parameters
    ----------
    a, b : float
        Ray endpoint, ``a <= 0 <= b``, not both zero.
    eps : float, optional
        Starting value of ``s``; defaults to ``START_SCALE / max(|a|, b)``.
    tol : float
        Local error tolerance of the adaptive Runge-Kutta integrator.
    s_out : array_like, optional
        Values of ``s`` in (0, 1] to sample (any order). Defaults to
        ``n_samples`` evenly spaced points ending at 1. Points at or below
        ``eps`` are filled from the starting series.
    """
    Interval(a, b)
    if a == 0 and b == 0:
        raise InvalidArgumentError("ray direction (0, 0) is degenerate")
    _check_tol(tol)
    scale = max(-a, b)
    if eps is None:
        eps = START_SCALE / scale
    if not 0 < eps <= SERIES_LIMIT / scale:
        raise InvalidArgumentError(f"eps must lie in (0, {SERIES_LIMIT / scale:g}], got {eps}")
    if s_out is None:
        s_out = np.linspace(0.0, 1.0, n_samples + 1)[1:]
    s_out = np.asarray(s_out, dtype=float).ravel()
    if s_out.size == 0 or np.any(s_out <= 0) or np.any(s_out > 1.0):
        raise InvalidArgumentError("sample points must lie in (0, 1]")

    order = np.argsort(s_out, kind="stable")
    s_sorted = s_out[order]
    states = np.empty((s_sorted.size, 7))
    early = s_sorted <= eps
    for i in np.flatnonzero(early):
        states[i] = boundary_state(s_sorted[i] * a, s_sorted[i] * b).as_array()

    kernels = _backend.kernels if backend is None else _backend.get(backend)
    y0 = boundary_state(eps * a, eps * b).as_array()
    n_acc = n_rej = 0
    late = ~early
    if late.any():
        out, status, n_acc, n_rej, t_end = kernels.tw_integrate(
            float(a), float(b), math.log(eps), y0, np.log(s_sorted[late]), float(tol), MAX_STEPS
        )
        if status == kernels.STEP_UNDERFLOW:
            raise StiffnessError(f"step size underflow on ray ({a}, {b}) at s={math.exp(t_end):.6g}",
                                 math.exp(t_end))
        if status == kernels.TOO_MANY_STEPS:
            raise AccuracyError(f"tolerance {tol} not met within {MAX_STEPS} steps on ray ({a}, {b})")
        if not np.all(np.isfinite(out)):
            raise AccuracyError(f"non-finite state on ray ({a}, {b})")
        states[late] = out

    inverse = np.empty_like(order)
    inverse[order] = np.arange(order.size)
    states = states[inverse]
    a1 = s_out * a
    a2 = s_out * b
    R11, R12, R22 = resolvents(a1, a2, states)
    J = np.exp(states[:, 6])
    Pc = J * (R11 * R22 - R12 * R12)
    return RayProfile((float(a), float(b)), s_out, states, R11, R12, R22, Pc,
                      {"eps": eps, "tol": tol, "accepted": n_acc, "rejected": n_rej,
                       "backend": _backend.name_of(kernels)})


def log_janossy(a1, a2, tol=DEFAULT_TOL, eps=None, backend=None):
    """ln J_1(0; [a1, a2]) at the end of one radial solve."""
    iv = Interval(a1, a2)
    if iv.empty:
        return 0.0
    if max(-iv.a1, iv.a2) > RELIABLE_SCALE:
        warnings.warn(f"J on [{iv.a1}, {iv.a2}] is beyond |a| = {RELIABLE_SCALE:g}; relative accuracy degrades "
                      "quickly there, cross-check with the Nystrom determinant", QualityWarning, stacklevel=2)
    prof = integrate_ray(iv.a1, iv.a2, eps=eps, tol=tol, s_out=[1.0], backend=backend)
    return float(prof.states[0, 6])


def janossy(a1, a2, tol=DEFAULT_TOL, eps=None, backend=None):
    """J_1(0; [a1, a2]): probability that the interval holds no eigenvalue
    besides the one conditioned at 0."""
    return math.exp(log_janossy(a1, a2, tol=tol, eps=eps, backend=backend))


__all__ = ["A_MAX_LIMIT", "DEFAULT_TOL", "RayProfile", "RaySample", "TwState", "boundary_state",
           "integrate_ray", "janossy", "log_janossy", "lnj_flow", "resolvents"]
