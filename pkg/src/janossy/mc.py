"""Monte Carlo GUE spectra from the beta = 2 Hermite tridiagonal model.

Diagonal entries are N(0, 1) and the k-th off-diagonal is chi_{2(N-k)}/sqrt(2),
so the spectrum has the law of a GUE matrix with E|H_ij|^2 = 1 off the
diagonal; the semicircle has radius 2 sqrt(N).
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from ._parallel import pmap
from .densities import DensityTable, MomentSet, ratio_bin_probabilities
from .errors import ConvergenceError, InsufficientStatisticsError, InvalidArgumentError
from .ratios import tilde_ratios

MIN_RATIOS = 1000
QL_MAX_ITER = 60


@dataclass(frozen=True, eq=False)
class SpectrumSample:
    matrix_dim: int
    eigenvalues: np.ndarray
    bulk_fraction: float = 1.0
    diagonal_sum: float = math.nan
    iterations: int = 0

    def bulk_slice(self, bulk_fraction=None):
        """Index range whose ratios are pooled: the central fraction of levels,
        each with both neighbours available."""
        f = self.bulk_fraction if bulk_fraction is None else bulk_fraction
        n = self.matrix_dim
        k = max(1, int(round(f * n)))
        lo = max(1, (n - k) // 2)
        hi = min(n - 1, lo + k)
        return lo, hi

    def bulk_ratios(self, bulk_fraction=None):
        lo, hi = self.bulk_slice(bulk_fraction)
        return tilde_ratios(self.eigenvalues[lo - 1:hi + 1])


def _tridiagonal(N, rng):
    d = rng.standard_normal(N)
    e = np.sqrt(rng.chisquare(2.0 * np.arange(N - 1, 0, -1))) / math.sqrt(2.0)
    return d, e


def _spectrum(N, rng, bulk_fraction=1.0, kernels=None):
    kernels = kernels or _backend.kernels
    d, e = _tridiagonal(N, rng)
    ev, status, its = kernels.tqli_eigvalsh(d, e, QL_MAX_ITER)
    if status != kernels.OK:
        raise ConvergenceError(f"tridiagonal QL did not converge within {QL_MAX_ITER} sweeps per eigenvalue "
                               f"({its} iterations in total)")
    return SpectrumSample(N, ev, bulk_fraction, float(d.sum()), int(its))


def sample_gue_spectrum(N, seed, bulk_fraction=1.0, backend=None):
    """Sorted eigenvalues of one N x N GUE-distributed matrix, reproducible from ``seed``."""
    if int(N) != N or N < 4:
        raise InvalidArgumentError(f"N must be an integer >= 4, got {N}")
    kernels = _backend.get(backend) if backend else None
    return _spectrum(int(N), np.random.default_rng(seed), bulk_fraction, kernels)


def semicircle_radius(N):
    return 2.0 * math.sqrt(N)


def empirical_ratio_stats(n_matrices, N, bulk_fraction=0.1, seed=0, k_max=4, n_bins=50, workers=None):
    """Pool r~ over the bulk of ``n_matrices`` independent spectra.

    Each matrix draws from its own child of ``SeedSequence(seed)`` so results do
    not depend on thread count. Standard errors come from the scatter of the
    per-matrix means, which keeps correlations inside a spectrum honest.
    Returns ``(MomentSet, DensityTable)``; the table is a histogram of r~.
    """
    if n_matrices < 1:
        raise InvalidArgumentError("n_matrices must be >= 1")
    if N < 100:
        raise InvalidArgumentError(f"N must be >= 100, got {N}")
    if not 0 < bulk_fraction <= 0.5:
        raise InvalidArgumentError(f"bulk_fraction must lie in (0, 0.5], got {bulk_fraction}")
    children = np.random.SeedSequence(seed).spawn(n_matrices)
    ks = np.arange(1, k_max + 1)

    def task(child):
        sp = _spectrum(N, np.random.default_rng(child), bulk_fraction)
        rt = sp.bulk_ratios()
        counts = np.bincount(np.minimum((rt * n_bins).astype(np.int64), n_bins - 1), minlength=n_bins)
        return rt.size, (rt[None, :] ** ks[:, None]).mean(axis=1), counts

    results = pmap(task, children, workers)
    sizes = np.array([r[0] for r in results])
    total = int(sizes.sum())
    if total < MIN_RATIOS:
        raise InsufficientStatisticsError(f"only {total} ratios pooled, need at least {MIN_RATIOS}")
    per = np.array([r[1] for r in results])
    counts = np.sum([r[2] for r in results], axis=0)
    w = sizes / total
    values = w @ per
    if n_matrices > 1:
        # all matrices contribute equally many ratios, so the weighted mean is a plain mean
        err = per.std(axis=0, ddof=1) / math.sqrt(n_matrices)
    else:
        err = np.full(k_max, math.inf)
    meta = {"n_samples": total, "n_matrices": n_matrices, "N": N, "bulk_fraction": bulk_fraction, "seed": seed}
    moments = MomentSet(k_max, values, err, meta=meta)
    edges = np.linspace(0.0, 1.0, n_bins + 1)
    centers = 0.5 * (edges[1:] + edges[:-1])
    hist = DensityTable("ratio_tilde", centers, counts / (total * np.diff(edges)),
                        meta={"edges": edges, "counts": counts, **meta})
    return moments, hist


def histogram_chi2(hist, probabilities=None, **kw):
    """Pearson chi^2 of a r~ histogram against the exact bin probabilities.

    Returns ``(chi2, n_bins)``.
    """
    counts = np.asarray(hist.meta["counts"], dtype=float)
    if probabilities is None:
        probabilities = ratio_bin_probabilities(hist.meta["edges"], **kw)
    expected = counts.sum() * np.asarray(probabilities)
    return float(np.sum((counts - expected) ** 2 / expected)), counts.size
