import math

import numpy as np
import pytest
from scipy.linalg import eigvalsh_tridiagonal

from conftest import GUE_MOMENTS
from janossy import mc
from janossy.errors import ConvergenceError, InsufficientStatisticsError, InvalidArgumentError


def test_small_spectrum_deterministic():
    a = mc.sample_gue_spectrum(4, 123)
    b = mc.sample_gue_spectrum(4, 123)
    assert a.eigenvalues.shape == (4,)
    assert np.all(np.isfinite(a.eigenvalues)) and np.all(np.diff(a.eigenvalues) >= 0)
    assert a.eigenvalues.tobytes() == b.eigenvalues.tobytes()
    assert mc.sample_gue_spectrum(4, 124).eigenvalues.tobytes() != a.eigenvalues.tobytes()


@pytest.mark.parametrize("N", [4, 50, 1000])
def test_trace_preserved(N):
    s = mc.sample_gue_spectrum(N, 5)
    assert abs(s.eigenvalues.sum() - s.diagonal_sum) <= 1e-10 * N


def test_semicircle_support():
    s = mc.sample_gue_spectrum(2000, 11)
    inside = np.mean(np.abs(s.eigenvalues) <= mc.semicircle_radius(2000))
    assert inside >= 0.99


@pytest.mark.parametrize("N", [4, 31, 400])
def test_eigenvalues_match_lapack(N):
    rng = np.random.default_rng(N)
    d, e = mc._tridiagonal(N, rng)
    s = mc._spectrum(N, np.random.default_rng(N))
    ref = eigvalsh_tridiagonal(d, e)
    assert np.max(np.abs(s.eigenvalues - ref)) <= 1e-12 * np.max(np.abs(ref))


def test_second_moment_of_model():
    # E tr H^2 = N + N(N-1) for the chosen normalisation
    N = 60
    tr = [np.sum(mc.sample_gue_spectrum(N, k).eigenvalues ** 2) for k in range(300)]
    assert np.mean(tr) == pytest.approx(N * N, rel=0.01)


def test_bulk_slice_is_central():
    s = mc.sample_gue_spectrum(1000, 1, bulk_fraction=0.1)
    lo, hi = s.bulk_slice()
    assert hi - lo == 100 and lo + hi == 1000
    assert s.bulk_ratios().size == 100


def test_ratio_stats_deterministic_and_thread_independent():
    a, ha = mc.empirical_ratio_stats(30, 200, 0.25, seed=9, workers=1)
    b, hb = mc.empirical_ratio_stats(30, 200, 0.25, seed=9, workers=3)
    assert a.values.tobytes() == b.values.tobytes()
    assert a.est_error.tobytes() == b.est_error.tobytes()
    assert np.array_equal(ha.meta["counts"], hb.meta["counts"])
    c, _ = mc.empirical_ratio_stats(30, 200, 0.25, seed=10)
    assert c.values.tobytes() != a.values.tobytes()


def test_ratio_stats_small_run():
    ms, hist = mc.empirical_ratio_stats(200, 400, 0.25, seed=3)
    assert ms.meta["n_samples"] == 20000
    assert abs(ms[1] - GUE_MOMENTS[0]) < 3 * ms.est_error[0]
    assert ms[1] > ms[2] > ms[3] > ms[4] > 0
    counts = hist.meta["counts"]
    assert counts.sum() == 20000 and counts.size == 50
    assert np.sum(hist.values * np.diff(hist.meta["edges"])) == pytest.approx(1.0, rel=1e-12)


def test_insufficient_statistics():
    with pytest.raises(InsufficientStatisticsError):
        mc.empirical_ratio_stats(5, 100, 0.1, seed=1)


@pytest.mark.parametrize("kw", [dict(n_matrices=0, N=200), dict(n_matrices=5, N=99), dict(n_matrices=5, N=200,
                                bulk_fraction=0.6), dict(n_matrices=5, N=200, bulk_fraction=0.0)])
def test_invalid_arguments(kw):
    with pytest.raises(InvalidArgumentError):
        mc.empirical_ratio_stats(**kw)
    with pytest.raises(InvalidArgumentError):
        mc.sample_gue_spectrum(3, 0)


def test_eigensolver_failure_reports_iterations(monkeypatch):
    monkeypatch.setattr(mc, "QL_MAX_ITER", 0)
    with pytest.raises(ConvergenceError, match="iterations"):
        mc.sample_gue_spectrum(10, 0)
