import numpy as np
import pytest

from formsemigroups import (AlreadyComplex, FormTriple, NonElliptic, NotOrthonormal, associate, complexify,
                            compose_projection, form_constants, identity_triple, matrix_triple, shift_form,
                            validate_triple)
from formsemigroups.errors import SingularResolvent


def spd(rng, n, shift=1.0):
    b = rng.standard_normal((n, n))
    return b @ b.T + shift * np.eye(n)


def test_identity_triple_gives_identity_operator():
    op = associate(identity_triple(3))
    assert np.allclose(op.matrix, np.eye(3))
    assert op.selfadjoint
    assert np.allclose(op.resolvent(1.0, np.ones(3)), 0.5 * np.ones(3))


def test_matrix_triple_recovers_matrix():
    rng = np.random.default_rng(0)
    a = spd(rng, 5) + 0.5 * (lambda s: s - s.T)(rng.standard_normal((5, 5)))
    m = np.diag(rng.uniform(1, 2, 5))
    op = associate(matrix_triple(a, m))
    assert np.allclose(op.matrix, a)
    x = rng.standard_normal(5)
    assert np.allclose(op.apply(x), a @ x)


def test_association_defining_identity():
    # a(u, v) = (A j u | j v)_H for u in the "A-domain" (F u = J^* M y)
    rng = np.random.default_rng(3)
    F = spd(rng, 6)
    J = rng.standard_normal((3, 6))
    M = spd(rng, 3)
    t = FormTriple(F=F, J=J, M_H=M, G_V=np.eye(6), omega=0.0)
    op = associate(t)
    y = rng.standard_normal(3)
    u = np.linalg.solve(F, J.T @ M @ y)
    x = J @ u
    assert np.allclose(op.apply(x), y)
    v = rng.standard_normal(6)
    assert np.isclose(t.form(u, v), (J @ v) @ M @ y)


def test_validation_flags():
    t = FormTriple(F=np.diag([1.0, 0.0]), J=np.array([[1.0, 0.0]]), M_H=np.eye(1), G_V=np.eye(2))
    r = validate_triple(t)
    assert r.rank_J == 1 and r.dense_image
    assert not r.elliptic and not r.ok
    with pytest.raises(NonElliptic):
        associate(t)
    t2 = FormTriple(F=np.diag([1.0, 1.0]), J=np.zeros((1, 2)), M_H=np.eye(1), G_V=np.eye(2))
    assert not validate_triple(t2).dense_image


def test_dimension_errors():
    with pytest.raises(ValueError):
        FormTriple(F=np.eye(2), J=np.eye(3), M_H=np.eye(3), G_V=np.eye(2))
    with pytest.raises(ValueError):
        FormTriple(F=np.eye(2), J=np.eye(2), M_H=np.eye(2), G_V=np.eye(2), omega=-1.0)


def test_arrays_are_read_only():
    t = identity_triple(2)
    with pytest.raises(ValueError):
        t.F[0, 0] = 5.0


def test_shift_form_adds_multiple_of_identity():
    rng = np.random.default_rng(4)
    t = matrix_triple(spd(rng, 4), np.diag([1.0, 2.0, 3.0, 4.0]))
    a = associate(t).matrix
    s = shift_form(t, 2.5)
    assert np.allclose(associate(s).matrix, a + 2.5 * np.eye(4))
    assert s.meta["shift"] == 2.5


def test_complex_lambda_on_real_triple_rejected():
    op = associate(identity_triple(2))
    with pytest.raises(ValueError):
        op.resolvent(1 + 1j, np.ones(2))
    cop = associate(complexify(identity_triple(2)))
    assert np.allclose(cop.resolvent(1 + 1j, np.ones(2)), np.ones(2) / (2 + 1j))
    with pytest.raises(AlreadyComplex):
        complexify(complexify(identity_triple(2)))


def test_singular_resolvent_reported():
    op = associate(matrix_triple(np.diag([1.0, 2.0])))
    with pytest.raises(SingularResolvent) as ei:
        op.resolvent(-1.0, np.ones(2))
    assert ei.value.lam == -1.0


def test_form_constants_identity():
    c = form_constants(identity_triple(3))
    assert c["alpha"] == pytest.approx(1.0)
    assert c["M_cont"] == pytest.approx(1.0)
    assert c["theta_prime"] == pytest.approx(0.0)


def test_form_constants_skew_angle():
    # F = [[1, -r], [r, 1]] has numerical range on the line Re z = 1, |Im z| <= r
    r = 2.0
    t = FormTriple(F=np.array([[1.0, -r], [r, 1.0]]), J=np.eye(2), M_H=np.eye(2), G_V=np.eye(2))
    assert form_constants(t)["theta_prime"] == pytest.approx(np.arctan(r))


def test_compose_projection_requires_orthonormal():
    t = identity_triple(3)
    with pytest.raises(NotOrthonormal):
        compose_projection(t, np.array([[1.0], [1.0], [0.0]]))
    p = compose_projection(t, np.array([[1.0], [0.0], [0.0]]))
    assert p.m == 1


def test_json_round_trip():
    rng = np.random.default_rng(5)
    t = FormTriple(F=spd(rng, 3) + 1j * np.diag([0.1, 0.2, 0.3]), J=rng.standard_normal((2, 3)),
                   M_H=np.eye(2), G_V=np.eye(3), omega=2.0, field="complex")
    t2 = FormTriple.from_json(t.to_json())
    assert t2.is_complex and t2.omega == 2.0
    for k in ("F", "J", "M_H", "G_V"):
        assert np.array_equal(getattr(t, k), getattr(t2, k))
