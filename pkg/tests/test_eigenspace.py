import numpy as np
import pytest

from perron_eig.eigenspace import (
    compute_basis,
    orthonormal_basis,
    p_bar_apply,
    subspace_gap,
)
from perron_eig.errors import DegenerateInputError, EmptySpaceError

S_BAR_81 = 2.000005037291918


def test_subspace_gap_basics():
    e1 = np.array([[1.0], [0.0]])
    assert subspace_gap(e1, e1) == 0.0
    assert subspace_gap(e1, np.array([[1.0], [1.0]])) == pytest.approx(np.sqrt(0.5), abs=1e-15)
    assert subspace_gap(np.eye(2), e1) == 1.0
    with pytest.raises(DegenerateInputError):
        orthonormal_basis(np.array([[1.0, 2.0], [1.0, 2.0]]))


def test_p_bar_is_truncated_inverse():
    a = np.array([[2.0, 1.0], [0.0, 2.0]])
    x = np.eye(2)
    # exp(t N) = I + t N, so P_bar(t) exp(t N) = I for d = 1
    fwd = x + 3.0 * (a - 2 * np.eye(2))
    assert np.allclose(p_bar_apply(a, 2.0, 1, 3.0, fwd), x)
    assert np.array_equal(p_bar_apply(a, 2.0, 0, 3.0, x), x)


def test_seven_by_seven_distance(ex81, ex81_y, backend):
    b = compute_basis(ex81, S_BAR_81, 3, 20)
    y = ex81_y / np.linalg.norm(ex81_y)
    assert np.linalg.norm(b.b_tilde - y) == pytest.approx(0.0015, abs=2e-4)
    assert b.dim_estimate == 5 and b.d == 2
    assert subspace_gap(b.basis, orthonormal_basis(ex81_y[:, [0, 1, 2, 4, 5]])) < 1e-4


def test_semisimple_basis(ex52):
    a, _ = ex52
    b = compute_basis(a, 2.0, 1, 20)
    assert b.dim_estimate == 3
    w, v = np.linalg.eigh(a)
    assert subspace_gap(b.basis, v[:, w > 1.5]) < 1e-8


def test_selected_columns_are_one_based(ex53):
    b = compute_basis(ex53, 2.0, 3, 30)
    assert min(b.selected_columns) >= 1 and b.dim_estimate == 3
    assert b.to_dict()["selected_columns"] == b.selected_columns


def test_empty_space_raises():
    with pytest.raises(EmptySpaceError):
        compute_basis(np.eye(2), 1.0, 1, 5, rank_tol=2.0)
