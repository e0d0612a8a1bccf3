import os

import numpy as np
import pytest

from perron_eig import _backend, _kernels_py

compiled = pytest.importorskip("perron_eig._kernels")


@pytest.mark.skipif(os.environ.get("PERRON_EIG_BACKEND", "").lower() == "python",
                    reason="fallback forced by environment")
def test_compiled_backend_is_default():
    assert _backend.name == "cython"


def test_kernels_agree(rng):
    a = rng.normal(size=(6, 6))
    x = rng.normal(size=(6, 3))
    v = rng.normal(size=6)
    for f, args in [
        ("taylor_apply", (a, x, 12, 0.3)),
        ("shifted_power_apply", (a, 0.7, 3, x)),
        ("phi_prime", (a, 0.4, v, 3)),
    ]:
        assert np.allclose(getattr(compiled, f)(*args), getattr(_kernels_py, f)(*args),
                           rtol=1e-12, atol=1e-12)
    assert compiled.frobenius_inner(a, a) == pytest.approx(_kernels_py.frobenius_inner(a, a), rel=1e-14)


def test_iteration_and_flow_agree(ex53):
    m0 = np.eye(5) / np.sqrt(5)
    wc, tc = compiled.normalized_iteration(ex53, m0, 30, 1.0, 30)
    wp, tp = _kernels_py.normalized_iteration(ex53, m0, 30, 1.0, 30)
    assert np.allclose(wc, wp, atol=1e-13) and np.allclose(tc, tp, atol=1e-13)
    x = wc[:, 3].copy()
    fc = compiled.flow_rk4(ex53, x, 3, 2.02, 16.0, 0.01, 500, 100, -20.0, 20.0)
    fp = _kernels_py.flow_rk4(ex53, x, 3, 2.02, 16.0, 0.01, 500, 100, -20.0, 20.0)
    assert np.allclose(fc[0], fp[0]) and np.allclose(fc[1], fp[1], atol=1e-13)


def test_use_rejects_unknown():
    with pytest.raises(ValueError):
        _backend.use("fortran")
