import numpy as np
import pytest
from scipy import linalg

from formsemigroups import SchemeMismatch, associate, complexify, evolve, evolve_grid, evolve_matrix, gallery
from formsemigroups.engines import (EvolutionResult, SemigroupScheme, default_scheme, euler_evolve,
                                    spectral_decompose, yosida_evolve)
from formsemigroups.errors import NotSelfadjoint
from formsemigroups.form_core import matrix_triple

ALL = [SemigroupScheme.euler(4000, tol=1e-3), SemigroupScheme.yosida(1e5, tol=1e-3),
       SemigroupScheme.spectral(), SemigroupScheme.dense_exp()]


@pytest.fixture(scope="module")
def heat():
    return associate(gallery.dirichlet_heat_1d(16))


def test_scheme_validation():
    with pytest.raises(ValueError):
        SemigroupScheme("rk4")
    with pytest.raises(ValueError):
        SemigroupScheme.euler(0)
    with pytest.raises(ValueError):
        SemigroupScheme.yosida(-1.0)
    assert SemigroupScheme.euler(8).label() == "euler(n=8)"


@pytest.mark.parametrize("scheme", ALL, ids=lambda s: s.variant)
def test_schemes_agree_with_scipy_expm(heat, scheme):
    ref = linalg.expm(-0.3 * heat.matrix)
    err = heat.op_norm(evolve_matrix(heat, 0.3, scheme) - ref)
    assert err <= max(scheme.tol, 1e-10)


def test_zero_time_is_identity(heat):
    for s in ALL:
        assert np.allclose(evolve_matrix(heat, 0.0, s), np.eye(heat.m))


def test_negative_time_rejected(heat):
    with pytest.raises(ValueError):
        evolve(heat, np.ones(heat.m), -1.0, SemigroupScheme.spectral())


def test_euler_first_order(heat):
    x0 = spectral_decompose(heat).eigenvectors[:, 0]
    exact = evolve(heat, x0, 0.1, SemigroupScheme.spectral())
    errs = [heat.m_norm(euler_evolve(heat, x0, 0.1, n) - exact) for n in (8, 16, 32)]
    assert 1.7 < errs[0] / errs[1] < 2.3 and 1.7 < errs[1] / errs[2] < 2.3


def test_yosida_converges(heat):
    x0 = np.ones(heat.m)
    exact = evolve(heat, x0, 0.1, SemigroupScheme.spectral())
    errs = [heat.m_norm(yosida_evolve(heat, x0, 0.1, lam) - exact) for lam in (10, 100, 1000)]
    assert errs[0] > errs[1] > errs[2]


def test_complex_time_rules(heat):
    with pytest.raises(SchemeMismatch):
        evolve_matrix(heat, 0.1 + 0.1j, SemigroupScheme.euler(4))
    with pytest.raises(ValueError):
        evolve_matrix(heat, 0.1 + 0.1j, SemigroupScheme.spectral())
    cop = associate(complexify(gallery.dirichlet_heat_1d(16)))
    z = 0.2 + 0.1j
    a = evolve_matrix(cop, z, SemigroupScheme.spectral())
    b = evolve_matrix(cop, z, SemigroupScheme.dense_exp())
    assert np.allclose(a, b, atol=1e-10)
    assert np.allclose(b, linalg.expm(-z * cop.matrix), atol=1e-10)


def test_spectral_needs_selfadjoint():
    op = associate(gallery.drift_triple_1d(16))
    with pytest.raises(NotSelfadjoint):
        spectral_decompose(op)
    assert default_scheme(op, 1.0).variant == "euler"


def test_spectral_basis_is_m_orthonormal(heat):
    w, v = spectral_decompose(heat)
    assert np.allclose(v.T @ heat.M_H @ v, np.eye(heat.m))
    assert np.all(np.diff(w) >= 0)


def test_zero_operator_keeps_state():
    op = associate(matrix_triple(np.zeros((3, 3))))
    x = np.array([1.0, -2.0, 3.0])
    res = evolve_grid(op, x, [0.0, 1.0, 5.0], SemigroupScheme.dense_exp())
    for s in res.states:
        assert np.allclose(s, x)


def test_evolution_result_validation_and_csv(heat):
    with pytest.raises(ValueError):
        EvolutionResult([0.0, 0.0], [np.ones(2), np.ones(2)], SemigroupScheme.spectral())
    with pytest.raises(ValueError):
        EvolutionResult([0.0], [], SemigroupScheme.spectral())
    res = evolve_grid(heat, np.ones(heat.m), [0.1, 0.2], SemigroupScheme.spectral())
    lines = res.to_csv({"note": [1, 2]}).splitlines()
    assert lines[0].startswith("t,component_0") and lines[0].endswith(",note")
    assert len(lines) == 3
    back = float(lines[1].split(",")[1])
    assert back == res.states[0][0]  # 17 digits round-trip exactly


def test_complex_csv_columns():
    res = EvolutionResult([0.0], [np.array([1 + 2j])], SemigroupScheme.dense_exp())
    assert res.to_csv().splitlines() == ["t,re_0,im_0", "0,1,2"]
