"""Gauss-Legendre rules mapped to arbitrary intervals."""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, InvalidArgumentError, NumericError

_MAX_NEWTON = 100


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    order: int
    interval: tuple
    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return self.order


def _legendre(x, m):
    """P_m(x) and P_m'(x) by the three-term recurrence."""
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, m + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = m * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


@lru_cache(maxsize=64)
def _reference_rule(m):
    """Nodes/weights on [-1, 1], ascending. Only the positive half is solved
    for; the negative half is its exact mirror image."""
    if m == 1:
        return np.array([0.0]), np.array([2.0])
    half = m // 2
    i = np.arange(1, half + 1)
    x = np.cos(np.pi * (i - 0.25) / (m + 0.5))
    for _ in range(_MAX_NEWTON):
        p, dp = _legendre(x, m)
        dx = p / dp
        x = x - dx
        if np.all(np.abs(dx) <= 4 * np.spacing(x)):
            break
    else:
        raise ConvergenceError(f"Legendre root iteration did not converge for m={m}")
    _, dp = _legendre(x, m)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    if m % 2:
        _, dp0 = _legendre(np.array([0.0]), m)
        x0 = np.array([0.0])
        w0 = 2.0 / dp0**2
        nodes = np.concatenate([-x, x0, x[::-1]])
        weights = np.concatenate([w, w0, w[::-1]])
    else:
        nodes = np.concatenate([-x, x[::-1]])
        weights = np.concatenate([w, w[::-1]])
    return nodes, weights


@lru_cache(maxsize=512)
def _cached_rule(m, lo, hi):
    x, w = _reference_rule(m)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = half * x + mid
    weights = half * w
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return QuadratureRule(m, (lo, hi), nodes, weights)


def gauss_legendre(m, lo=-1.0, hi=1.0):
    """Order-``m`` Gauss-Legendre rule on ``[lo, hi]``.

    Rules are cached and immutable (read-only arrays), so they can be shared
    between threads.
    """
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f"quadrature order must be a positive integer, got {m!r}")
    lo = float(lo)
    hi = float(hi)
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
        raise InvalidArgumentError(f"need finite lo < hi, got [{lo}, {hi}]")
    return _cached_rule(int(m), lo, hi)


def integrate(rule, f):
    """``sum_i w_i f(x_i)``; ``f`` is called once on the node array."""
    vals = np.broadcast_to(np.asarray(f(rule.nodes), dtype=float), rule.nodes.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        node = float(rule.nodes[np.argmax(bad)])
        raise NumericError(f"integrand is not finite at node x={node!r}")
    return float(np.dot(rule.weights, vals))
