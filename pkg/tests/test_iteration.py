import numpy as np
import pytest

from perron_eig.errors import DimensionError, SingularInitError
from perron_eig.iteration import (
    check_nonsingular,
    default_gamma,
    direct_taylor_state,
    k_step,
    rayleigh_quotient,
    run_iteration,
)


def test_identity_multiple_is_exact(backend):
    for m in (1, 2, 3, 5):
        est = run_iteration(2.0 * np.eye(m), None, 3, 1.0)
        assert est.s_n == 2.0
        assert np.allclose(est.w_n, np.eye(m) / np.sqrt(m), atol=1e-15)


def test_diagonal_converges_to_top_eigenvalue(backend):
    est = run_iteration(np.diag([1.0, 3.0]), None, 30, 1.0)
    assert est.s_n == pytest.approx(3.0, abs=1e-12)
    assert len(est.rayleigh_trace) == 31
    assert est.rayleigh_trace[0] == (0, pytest.approx(2.0))


def test_k_step_normalizes():
    a = np.array([[1.0, 2.0], [0.0, 1.0]])
    out = k_step(a, np.eye(2), 5)
    assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-15)


def test_scale_invariance_of_init(ex53):
    v = np.eye(5) + 0.1 * np.ones((5, 5))
    a = run_iteration(ex53, v, 20, 1.0)
    b = run_iteration(ex53, 1e6 * v, 20, 1.0)
    assert np.abs(a.w_n - b.w_n).max() <= 1e-12


def test_bad_init_rejected():
    with pytest.raises(SingularInitError):
        check_nonsingular(np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(SingularInitError):
        run_iteration(np.eye(2), np.array([[1.0, 0.0], [0.0, 0.0]]), 5)
    with pytest.raises(DimensionError):
        run_iteration(np.eye(2), np.eye(3), 5)
    with pytest.raises(ValueError):
        run_iteration(np.eye(2), None, 0)


def test_default_gamma():
    assert default_gamma(np.zeros((2, 2))) == 1.0
    assert default_gamma(np.eye(2) * 0.1) == 1.0
    assert default_gamma(np.eye(4) * 10) == pytest.approx(0.1)


def test_rayleigh_quotient():
    w = np.eye(3) / np.sqrt(3)
    assert rayleigh_quotient(np.diag([1.0, 2.0, 3.0]), w) == pytest.approx(2.0)


def test_direct_state():
    v = np.eye(2)
    assert np.allclose(direct_taylor_state(np.eye(2), v, 0.0, 5), v / np.sqrt(2))
    x = direct_taylor_state(np.diag([1.0, 2.0]), v, 10.0, 60)
    assert abs(x[1, 1]) > 0.9999


def test_semisimple_example_converges_fast(ex51, backend):
    errs = {n: abs(run_iteration(ex51, None, n, 1.0).s_n - 2.0) for n in (3, 8, 10)}
    assert errs[3] < 1e-3
    assert errs[10] < errs[8] < 1e-9


def test_symmetric_example_with_custom_init(ex52):
    a, v = ex52
    est = run_iteration(a, v, 10, 1.0)
    assert est.s_n == pytest.approx(2.0, abs=1e-10)
    assert est.init_description == "user"
