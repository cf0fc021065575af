import numpy as np
import pytest
from scipy import linalg

from formsemigroups._linalg import MetricFactor, expm, herm, is_positive_definite, lu_factor_checked


@pytest.mark.parametrize("scale", [1e-3, 1.0, 30.0, 400.0])
def test_expm_matches_scipy(scale):
    rng = np.random.default_rng(1)
    a = scale * rng.standard_normal((6, 6))
    ref = linalg.expm(a)
    assert np.allclose(expm(a), ref, rtol=1e-11, atol=1e-13 * np.abs(ref).max())


def test_expm_complex_and_nilpotent():
    n = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert np.allclose(expm(n), [[1, 1], [0, 1]])
    z = np.array([[0, -np.pi], [np.pi, 0]]) * 1j
    assert np.allclose(expm(z), linalg.expm(z))


def test_metric_factor_norms():
    rng = np.random.default_rng(2)
    b = rng.standard_normal((4, 4))
    g = b @ b.T + 4 * np.eye(4)
    mf = MetricFactor(g)
    x = rng.standard_normal(4)
    assert np.isclose(mf.vec_norm(x), np.sqrt(x @ g @ x))
    # operator norm = sqrt of largest generalized eigenvalue of B^T G B against G
    c = rng.standard_normal((4, 4))
    w = linalg.eigh(c.T @ g @ c, g, eigvals_only=True)
    assert np.isclose(mf.op_norm(c), np.sqrt(w.max()))
    assert MetricFactor(np.diag([1.0, 4.0])).vec_norm([1.0, 1.0]) == pytest.approx(np.sqrt(5))


def test_positive_definite_and_lu():
    assert is_positive_definite(np.eye(3))
    assert not is_positive_definite(np.diag([1.0, 0.0]))
    assert lu_factor_checked(np.zeros((2, 2))) is None
    assert lu_factor_checked(np.eye(2)) is not None
    a = np.array([[1.0, 2j], [0.0, 1.0]])
    assert np.allclose(herm(a), herm(a).conj().T)
