import numpy as np
import pytest

from perron_eig import oracle
from perron_eig.errors import OracleFailureError


def _close_sets(a, b, tol):
    a = list(a)
    for z in b:
        i = int(np.argmin([abs(z - w) for w in a]))
        assert abs(z - a[i]) <= tol
        a.pop(i)


def test_eig_small_trivial():
    assert sorted(z.real for z in oracle.eig_small(np.diag([1.0, 2.0, 3.0]))) == [1.0, 2.0, 3.0]
    vals = oracle.eig_small(np.array([[0.0, -1.0], [1.0, 0.0]]))
    assert vals[0] == pytest.approx(-1j) and vals[1] == pytest.approx(1j)


def test_eig_small_against_numpy(rng):
    for _ in range(60):
        m = int(rng.integers(1, 16))
        a = rng.normal(size=(m, m))
        _close_sets(oracle.eig_small(a), np.linalg.eigvals(a), 1e-8)


def test_eig_small_similarity_invariant(rng):
    a = rng.normal(size=(6, 6))
    q, _ = np.linalg.qr(rng.normal(size=(6, 6)))
    _close_sets(oracle.eig_small(a), oracle.eig_small(q @ a @ q.T), 1e-6)


def test_eig_small_limits():
    with pytest.raises(ValueError):
        oracle.eig_small(np.eye(65))


def test_expm_reference():
    assert np.array_equal(oracle.expm_reference(np.zeros((3, 3))), np.eye(3))
    e = oracle.expm_reference(np.diag([1.0, -1.0]))
    assert np.allclose(e, np.diag([np.e, 1 / np.e]), atol=1e-12, rtol=0)
    nil = np.array([[0.0, 5.0], [0.0, 0.0]])
    assert np.array_equal(oracle.expm_reference(nil), np.eye(2) + nil)


def test_expm_inverse_property(rng):
    for _ in range(20):
        a = rng.normal(size=(4, 4))
        a *= rng.uniform(0.1, 3.0) / np.linalg.norm(a)
        prod = oracle.expm_reference(a) @ oracle.expm_reference(-a)
        assert np.abs(prod - np.eye(4)).max() <= 1e-9


def test_numeric_rank():
    assert oracle.numeric_rank(np.eye(4), 1e-8) == 4
    assert oracle.numeric_rank(np.zeros((3, 3)), 1e-8) == 0
    assert oracle.numeric_rank(np.array([[1.0, 2.0], [2.0, 4.0]]), 1e-8) == 1


def test_true_cyclic_order(ex81):
    assert oracle.true_cyclic_order(np.diag([1.0, 2.0, 2.0]), 2.0) == 1
    for k in (1, 2, 4):
        assert oracle.true_cyclic_order(3 * np.eye(k) + np.eye(k, k=1), 3.0) == k
    assert oracle.true_cyclic_order(ex81, 2.0) == 3


def test_reports_for_examples(ex53, ex81):
    r = oracle.oracle_report(ex53)
    assert (r.s, r.alg_multiplicity, r.nu_true) == (pytest.approx(2.0), 3, 3)
    assert r.delta == pytest.approx(0.5) and r.is_perron_like
    r = oracle.oracle_report(ex81)
    assert r.s == pytest.approx(2.0, abs=1e-9)
    assert (r.alg_multiplicity, r.nu_true) == (5, 3)
    assert len(r.eigenvalues) == 7
    g = r.ge_basis
    assert np.abs(g.T @ g - np.eye(5)).max() < 1e-10
    assert np.abs(np.linalg.matrix_power(ex81 - r.s * np.eye(7), 3) @ g).max() < 1e-6


def test_not_perron_like():
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert not oracle.oracle_report(rot).is_perron_like


def test_nonnegative_spectral_radius(rng):
    for _ in range(10):
        a = rng.uniform(0, 1, size=(5, 5))
        r = oracle.oracle_report(a)
        assert r.s == pytest.approx(max(abs(np.linalg.eigvals(a))), abs=1e-8)


def test_projection_reproduces_printed_y(ex81, ex81_y):
    y = oracle.principal_projection(ex81, 2.0, np.eye(7))
    assert np.abs(y - ex81_y).max() <= 1e-8


def test_projection_properties(ex81, ex81_y):
    assert np.allclose(oracle.principal_projection(ex81, 2.0, ex81_y), ex81_y, atol=1e-10)
    comp = np.eye(7) - ex81_y
    assert np.abs(oracle.principal_projection(ex81, 2.0, comp)).max() < 1e-10
    with pytest.raises(OracleFailureError):
        oracle.principal_projection(ex81, 7.0, np.eye(7))
