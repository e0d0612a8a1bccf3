import numpy as np
import pytest

from perron_eig.errors import CyclicOrderUnresolvedError, DivergenceError
from perron_eig.iteration import run_iteration
from perron_eig.refine import (
    combined_method,
    gradient_flow,
    phi,
    phi_prime,
    phi_second,
    stability_ratio,
)


def test_phi_values():
    a = np.array([[2.0, 1.0], [0.0, 2.0]])
    x = np.array([0.0, 1.0])
    assert phi(a, 2.0, x, 2) == 0.0
    assert phi(a, 2.0, x, 1) == 1.0
    assert phi_prime(a, 2.0, x, 1) == 0.0


def test_phi_second_matches_differences(rng, backend):
    for _ in range(5):
        a = rng.normal(size=(4, 4))
        x = rng.normal(size=4)
        for nu in (1, 2, 3):
            tau = rng.normal()
            h = 1e-5
            fd = (phi_prime(a, tau + h, x, nu) - phi_prime(a, tau - h, x, nu)) / (2 * h)
            assert phi_second(a, tau, x, nu) == pytest.approx(fd, rel=1e-5, abs=1e-7)


def test_flow_exact_for_scalar_multiple(backend):
    res = combined_method(2 * np.eye(3), 100, 20)
    assert res.s_refined == 2.0 and res.converged and res.nu == 1


def test_flow_example(ex53, backend):
    res = combined_method(ex53, 100, 20, 0.2, 100.0)
    assert res.nu == 3 and res.j == 4
    assert abs(res.s_refined - 2.0) < 1e-5
    assert res.trajectory[0] == (0.0, res.s0)
    assert res.trajectory[-1][0] == pytest.approx(100.0)


def test_flow_seven_by_seven(ex81):
    res = combined_method(ex81, 100, 20, 0.2, 150.0)
    assert abs(res.s_refined - 2.0) < 1e-5


def test_divergence_detected():
    a = np.diag([1.0, -1.0])
    x = np.array([1.0, 1.0])
    # concave phi for nu = 1 never, so push with a huge coefficient instead
    with pytest.raises(DivergenceError):
        gradient_flow(a, x, 1, 0.5, gamma=1.0, n=1, t_end=50.0, dt=3.0)


def test_stability_ratio_small_for_example(ex53):
    x = run_iteration(ex53, None, 20, 1.0).w_n[:, 3]
    assert stability_ratio(ex53, x, 3, 2.0203, 0.2, 20, 0.01) < 2.0


def test_unresolved_order_raises():
    a = np.array([[0.0, 1.0], [-1.0, 0.0]])
    with pytest.raises(CyclicOrderUnresolvedError):
        combined_method(a, 30, 5, n_grid=(4, 5))


def test_parameter_checks(ex53):
    with pytest.raises(ValueError):
        combined_method(ex53, 20, 20)
    with pytest.raises(ValueError):
        gradient_flow(ex53, np.ones(5), 0, 2.0)
