import os
import subprocess
import sys

import numpy as np
import pytest
import scipy.linalg

from janossy import _backend, mc, tw

compiled = pytest.mark.skipif("cython" not in _backend.available(), reason="extension not built")


def test_default_backend_is_compiled_when_available():
    assert _backend.BACKEND == _backend.available()[0]


@compiled
@pytest.mark.parametrize("ray", [(-1.0, 1.0), (-3.0, 0.5), (0.0, 4.0), (-6.0, 0.0)])
def test_tw_trajectories_agree(ray):
    py = tw.integrate_ray(*ray, backend="python", n_samples=50)
    cy = tw.integrate_ray(*ray, backend="cython", n_samples=50)
    assert py.stats["accepted"] == cy.stats["accepted"]
    assert py.stats["rejected"] == cy.stats["rejected"]
    np.testing.assert_allclose(cy.states, py.states, rtol=1e-12, atol=1e-300)
    assert (py.stats["backend"], cy.stats["backend"]) == ("python", "cython")


@pytest.mark.parametrize("name", _backend.available())
def test_tqli_matches_lapack(name):
    k = _backend.get(name)
    rng = np.random.default_rng(3)
    d, e = mc._tridiagonal(300, rng)
    ev, status, its = k.tqli_eigvalsh(d.copy(), e.copy(), mc.QL_MAX_ITER)
    assert status == k.OK and its > 0
    ref = scipy.linalg.eigvalsh_tridiagonal(d, e)
    assert np.all(np.diff(ev) > 0)
    np.testing.assert_allclose(ev, ref, rtol=0, atol=1e-13 * np.abs(ref).max())


@compiled
def test_samplers_agree():
    a = mc.sample_gue_spectrum(200, 11, backend="python")
    b = mc.sample_gue_spectrum(200, 11, backend="cython")
    np.testing.assert_allclose(a.eigenvalues, b.eigenvalues, rtol=0, atol=1e-12)


def _backend_in_subprocess(value):
    env = dict(os.environ, JANOSSY_BACKEND=value)
    return subprocess.run([sys.executable, "-c", "from janossy import _backend; print(_backend.BACKEND)"],
                          capture_output=True, text=True, env=env)


def test_env_forces_python():
    res = _backend_in_subprocess("python")
    assert res.returncode == 0 and res.stdout.strip() == "python"


def test_env_rejects_unknown():
    res = _backend_in_subprocess("fortran")
    assert res.returncode != 0 and "JANOSSY_BACKEND" in res.stderr


def test_unknown_backend_name():
    with pytest.raises(ValueError):
        _backend.get("fortran")
