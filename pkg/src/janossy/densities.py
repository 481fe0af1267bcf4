"""Spacing, nearest-neighbour, joint and ratio densities of the GUE bulk, and
the moments of the folded ratio r~ = min(r, 1/r).

Everything is derived from radial TW solves (:mod:`janossy.tw`); one solve
serves every requested point along its ray.
"""
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy import integrate as _sint

from ._parallel import pmap
from .errors import DomainError, InvalidArgumentError
from .nystrom import A_MAX_LIMIT
from .quadrature import gauss_legendre
from .tw import DEFAULT_TOL, integrate_ray

DEFAULT_A_MAX = 6 * math.pi
R_MAX = 20.0
_trapz = getattr(np, "trapezoid", None) or np.trapz
KINDS = ("spacing", "nearest_neighbor", "joint", "ratio", "ratio_tilde")
UNITS = ("kernel", "unit-mean")
_SCALE_FREE = ("ratio", "ratio_tilde")


@dataclass(frozen=True, eq=False)
class DensityTable:
    """Tabulated density. ``grid`` is 1-D, or an (n, 2) array of (a1, a2)
    pairs for the joint density (row-major when ``meta['shape']`` is set)."""

    kind: str
    grid: np.ndarray
    values: np.ndarray
    units: str = "kernel"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"unknown density kind {self.kind!r}")
        if self.units not in UNITS:
            raise InvalidArgumentError(f"unknown units {self.units!r}")

    def normalization(self):
        """Trapezoidal integral over the tabulated support."""
        if self.kind == "joint":
            shape = self.meta.get("shape")
            if shape is None:
                raise InvalidArgumentError("joint table has no rectangular shape to integrate over")
            g = self.grid.reshape(*shape, 2)
            v = self.values.reshape(shape)
            inner = _trapz(v, g[0, :, 1], axis=1)
            return float(_trapz(inner, g[:, 0, 0]))
        return float(_trapz(self.values, self.grid))

    def moment(self, k):
        if self.kind == "joint":
            raise InvalidArgumentError("moments are defined for 1-D tables only")
        return float(_trapz(self.grid**k * self.values, self.grid))

    def to_units(self, units):
        """Re-express the table in ``units``. Unit-mean coordinates are kernel
        coordinates divided by pi; densities pick up pi per dimension. Ratio
        tables are scale free and only change their label."""
        if units not in UNITS:
            raise InvalidArgumentError(f"unknown units {units!r}")
        if units == self.units or self.kind in _SCALE_FREE:
            return replace(self, units=units)
        f = 1.0 / math.pi if units == "unit-mean" else math.pi
        dim = 2 if self.kind == "joint" else 1
        return replace(self, grid=self.grid * f, values=self.values / f**dim, units=units)


@dataclass(frozen=True, eq=False)
class MomentSet:
    """E[r~^k] for k = 1..k_max with a per-moment error (numerical bound for
    analytic values, standard error for sampled ones)."""

    k_max: int
    values: np.ndarray
    est_error: np.ndarray
    meta: dict = field(default_factory=dict)

    def __getitem__(self, k):
        if not 1 <= k <= self.k_max:
            raise IndexError(k)
        return float(self.values[k - 1])


def _grid_1d(grid, upper):
    g = np.asarray(grid, dtype=float).ravel()
    if g.size == 0 or np.any(g <= 0) or np.any(g > upper) or not np.all(np.isfinite(g)):
        raise InvalidArgumentError(f"grid points must lie in (0, {upper}]")
    return g


def spacing_density(s_grid, tol=DEFAULT_TOL):
    """P(s) = -dJ_1(0; [0, s])/ds = R22 J along the ray (0, s_max)."""
    s = _grid_1d(s_grid, A_MAX_LIMIT)
    smax = float(s.max())
    prof = integrate_ray(0.0, smax, tol=tol, s_out=s / smax)
    return DensityTable("spacing", s, prof.R22 * prof.J, meta={"ray": (0.0, smax)})


def nearest_neighbor_density(t_grid, tol=DEFAULT_TOL):
    """P_nn(t) = -dJ_1(0; [-t, t])/dt = J (R11 + R22) on the symmetric ray."""
    t = _grid_1d(t_grid, A_MAX_LIMIT)
    tmax = float(t.max())
    prof = integrate_ray(-tmax, tmax, tol=tol, s_out=t / tmax)
    return DensityTable("nearest_neighbor", t, prof.J * (prof.R11 + prof.R22),
                        meta={"ray": (-tmax, tmax), "max_abs_V": float(np.max(np.abs(prof.states[:, 5])))})


def _direction_key(a1, a2):
    rho = max(-a1, a2)
    return (round(a1 / rho, 12), round(a2 / rho, 12)), rho


def joint_density(grid2d, tol=DEFAULT_TOL, workers=None, shape=None):
    """P_c(a1, a2) = -d^2 J / da1 da2 at each (a1, a2) pair.

    Points sharing a direction from the origin are served by one ray solve.
    """
    pts = np.asarray(grid2d, dtype=float).reshape(-1, 2)
    if np.any(pts[:, 0] > 0) or np.any(pts[:, 1] < 0) or np.any(np.abs(pts) > A_MAX_LIMIT):
        raise InvalidArgumentError(f"joint grid needs -{A_MAX_LIMIT} <= a1 <= 0 <= a2 <= {A_MAX_LIMIT}")
    groups = {}
    for i, (a1, a2) in enumerate(pts):
        if a1 == 0.0 and a2 == 0.0:
            continue
        key, rho = _direction_key(a1, a2)
        groups.setdefault(key, []).append((i, rho))

    def solve(item):
        key, members = item
        rho_max = max(r for _, r in members)
        s = np.array([r for _, r in members]) / rho_max
        prof = integrate_ray(key[0] * rho_max, key[1] * rho_max, tol=tol, s_out=s)
        return [i for i, _ in members], prof.Pc

    values = np.zeros(len(pts))
    for idx, pc in pmap(solve, sorted(groups.items()), workers):
        values[idx] = pc
    meta = {"rays": len(groups)}
    if shape is not None:
        meta["shape"] = tuple(shape)
    return DensityTable("joint", pts, values, meta=meta)


def joint_grid(a1_values, a2_values):
    """Row-major (a1, a2) pairs: a1 varies slowest."""
    a1 = np.asarray(a1_values, dtype=float)
    a2 = np.asarray(a2_values, dtype=float)
    g = np.empty((a1.size, a2.size, 2))
    g[..., 0] = a1[:, None]
    g[..., 1] = a2[None, :]
    return g.reshape(-1, 2), (a1.size, a2.size)


def _ratio_at(r, a_max, inner_order, tol):
    """int a P_c(-r a, a) da with the longer spacing capped at a_max, one ray solve."""
    top = a_max / max(1.0, r)
    rule = gauss_legendre(inner_order, 0.0, top)
    prof = integrate_ray(-r * top, top, tol=tol, s_out=rule.nodes / top)
    return float(np.dot(rule.weights, rule.nodes * prof.Pc))


def _folded_ratio(r_values, a_max, inner_order, tol, workers):
    """P_r at each value; one solve per distinct value."""
    uniq, inv = np.unique(r_values, return_inverse=True)
    vals = pmap(lambda r: _ratio_at(float(r), a_max, inner_order, tol), uniq, workers)
    return np.asarray(vals)[inv]


def _check_a_max(a_max):
    if not 0 < a_max <= A_MAX_LIMIT:
        raise InvalidArgumentError(f"a_max must lie in (0, {A_MAX_LIMIT}], got {a_max}")


def ratio_density(r_grid, a_max=DEFAULT_A_MAX, inner_order=120, tol=DEFAULT_TOL, workers=None,
                  r_max=R_MAX, use_symmetry=True):
    """P_r(r) = int_0^inf a P_c(-r a, a) da for the ratio of consecutive spacings.

    With ``use_symmetry`` only r <= 1 is solved for and r > 1 follows from
    P_r(r) = P_r(1/r) / r^2; otherwise every r gets its own ray.
    """
    _check_a_max(a_max)
    r = np.asarray(r_grid, dtype=float).ravel()
    if r.size == 0 or np.any(r <= 0) or not np.all(np.isfinite(r)):
        raise InvalidArgumentError("ratio grid must be positive")
    if np.any(r > r_max):
        raise DomainError(f"ratio grid exceeds r_max={r_max}")
    if not use_symmetry:
        values = _folded_ratio(r, a_max, inner_order, tol, workers)
    else:
        folded = np.minimum(r, 1.0 / r)
        p = _folded_ratio(folded, a_max, inner_order, tol, workers)
        values = np.where(r > 1.0, p / r**2, p)
    return DensityTable("ratio", r, values, meta={"a_max": a_max, "inner_order": inner_order})


def ratio_tilde_density(rt_grid, a_max=DEFAULT_A_MAX, inner_order=120, tol=DEFAULT_TOL, workers=None):
    """Density of r~ = min(r, 1/r) on (0, 1], i.e. 2 P_r(r~)."""
    rt = np.asarray(rt_grid, dtype=float).ravel()
    if rt.size == 0 or np.any(rt <= 0) or np.any(rt > 1):
        raise InvalidArgumentError("r~ grid must lie in (0, 1]")
    p = _folded_ratio(rt, a_max, inner_order, tol, workers)
    return DensityTable("ratio_tilde", rt, 2.0 * p, meta={"a_max": a_max, "inner_order": inner_order})


def _tilde_moments(order, k_max, a_max, inner_order, tol, workers):
    rule = gauss_legendre(order, 0.0, 1.0)
    dens = 2.0 * _folded_ratio(rule.nodes, a_max, inner_order, tol, workers)
    ks = np.arange(0, k_max + 1)
    return (rule.nodes[None, :] ** ks[:, None] * dens[None, :]) @ rule.weights


def ratio_moments(k_max=4, order=100, a_max=DEFAULT_A_MAX, inner_order=120, tol=DEFAULT_TOL,
                  workers=None):
    """E[r~^k], k = 1..k_max, by Gauss-Legendre over r~ in [0, 1].

    The reported values come from order ``2*order``; ``est_error`` is their
    difference from the order-``order`` result. ``meta['normalization']`` is
    the k = 0 moment.
    """
    if not 1 <= k_max <= 8:
        raise InvalidArgumentError(f"k_max must lie in [1, 8], got {k_max}")
    if order < 100:
        raise InvalidArgumentError(f"outer quadrature order must be >= 100, got {order}")
    _check_a_max(a_max)
    coarse = _tilde_moments(order, k_max, a_max, inner_order, tol, workers)
    fine = _tilde_moments(2 * order, k_max, a_max, inner_order, tol, workers)
    return MomentSet(k_max, fine[1:], np.abs(fine[1:] - coarse[1:]),
                     meta={"normalization": float(fine[0]), "normalization_error": float(abs(fine[0] - coarse[0])),
                           "order": 2 * order, "inner_order": inner_order, "a_max": a_max, "tol": tol})


def ratio_bin_probabilities(edges, nodes_per_bin=6, **kw):
    """Probability mass of r~ in each bin ``[edges[i], edges[i+1]]``."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or edges[0] < 0 or edges[-1] > 1 or np.any(np.diff(edges) <= 0):
        raise InvalidArgumentError("bin edges must increase within [0, 1]")
    ref = gauss_legendre(nodes_per_bin, 0.0, 1.0)
    width = np.diff(edges)
    x = edges[:-1, None] + width[:, None] * ref.nodes[None, :]
    dens = ratio_tilde_density(x.ravel(), **kw).values.reshape(x.shape)
    return (dens @ ref.weights) * width


# Wigner-like surmise from 3x3 matrices -------------------------------------------

def _surmise_shape(r, beta):
    return (r + r * r) ** beta / (1.0 + r + r * r) ** (1.0 + 1.5 * beta)


@lru_cache(maxsize=None)
def surmise_constant(beta):
    """Normalisation C_beta of the surmise, computed by quadrature."""
    if beta not in (1, 2, 4):
        raise InvalidArgumentError(f"beta must be 1, 2 or 4, got {beta}")
    lo, _ = _sint.quad(_surmise_shape, 0.0, 1.0, args=(beta,), epsabs=1e-15, epsrel=1e-13, limit=200)
    hi, _ = _sint.quad(_surmise_shape, 1.0, np.inf, args=(beta,), epsabs=1e-15, epsrel=1e-13, limit=200)
    return 1.0 / (lo + hi)


def surmise_ratio(r, beta=2):
    """Surmised ratio density C_beta (r + r^2)^beta / (1 + r + r^2)^(1 + 3 beta / 2)."""
    scalar = np.ndim(r) == 0
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise InvalidArgumentError("r must be non-negative")
    val = surmise_constant(beta) * _surmise_shape(r, beta)
    return float(val) if scalar else val


def surmise_tilde_moment(k, beta=2):
    """E[r~^k] under the surmise."""
    val, _ = _sint.quad(lambda x: x**k * 2.0 * surmise_ratio(x, beta), 0.0, 1.0, epsabs=1e-15, epsrel=1e-13)
    return val


def surmise_gap(exact, beta=2, k_max=4):
    """Surmise moments against exact ones: ``[(k, exact, surmise, surmise - exact), ...]``."""
    rows = []
    for k in range(1, k_max + 1):
        sm = surmise_tilde_moment(k, beta)
        ex = exact[k] if isinstance(exact, MomentSet) else exact[k - 1]
        rows.append((k, float(ex), sm, sm - float(ex)))
    return rows
