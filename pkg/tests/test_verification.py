import json
import math

import numpy as np
import pytest

from formsemigroups import FormTriple, NotNodal, associate, gallery, identity_triple, verify_triple
from formsemigroups import verification as v
from formsemigroups.engines import SemigroupScheme
from formsemigroups.form_core import matrix_triple


def test_identity_passes_everything():
    rep = verify_triple(identity_triple(3))
    assert rep.passed
    names = {c.name for c in rep.checks}
    assert {"accretive", "contraction_semigroup", "submarkovian"} <= names


def test_minus_identity_fails_accretivity():
    t = FormTriple(F=-np.eye(2), J=np.eye(2), M_H=np.eye(2), G_V=np.eye(2), omega=2.0)
    op = associate(t)
    chk = v.check_accretivity(op)
    assert not chk.passed and chk.measured == pytest.approx(-1.0)


def test_accretivity_sector_angle():
    # numerical range of diag(1+i, 1-i) spans angle pi/4
    a = np.diag([1 + 1j, 1 - 1j])
    op = associate(matrix_triple(a, field="complex"))
    assert v.check_accretivity(op, math.pi / 4 - 1e-6).passed
    assert not v.check_accretivity(op, math.pi / 4 + 1e-3).passed


def test_resolvent_sector_grid_size_and_failure():
    assert len(v.sector_grid(1.0)) == 65
    op = associate(matrix_triple(np.diag([1.0, 2.0])))
    assert v.check_resolvent_sector(op, 1.5).passed
    bad = associate(FormTriple(F=-np.eye(1), J=np.eye(1), M_H=np.eye(1), G_V=np.eye(1), omega=2.0))
    chk = v.check_resolvent_sector(bad, 0.5)
    assert not chk.passed


def test_contraction_and_semigroup_law():
    op = associate(gallery.dirichlet_heat_1d(16))
    chk = v.check_contraction_semigroup(op, [0.1, 1.0], 0.3, SemigroupScheme.spectral())
    assert chk.passed and chk.measured < 1


def test_submarkovian_lumped_vs_consistent():
    op = associate(gallery.dirichlet_heat_1d(16))
    assert v.check_submarkovian(op, [0.01, 0.1], SemigroupScheme.spectral()).passed
    cons = associate(gallery.dirichlet_heat_1d(16, lumped=False))
    chk = v.check_submarkovian(cons, [0.01], SemigroupScheme.spectral())
    assert not chk.applicable


def test_invariance_negative_examples():
    # off-diagonal positive coupling breaks positivity
    t = FormTriple(F=np.array([[2.0, 1.0], [1.0, 2.0]]), J=np.eye(2), M_H=np.eye(2), G_V=np.eye(2))
    assert not v.check_invariance(t, v.ConvexSetSpec.nonnegative(), samples=200).passed
    # a(u) = -|u|^2 grows states, leaving {u <= 1}
    t2 = FormTriple(F=-np.eye(2), J=np.eye(2), M_H=np.eye(2), G_V=np.eye(2), omega=2.0)
    assert not v.check_invariance(t2, v.ConvexSetSpec.below_one(), samples=200).passed
    assert v.check_invariance(identity_triple(2), v.ConvexSetSpec.box(-1, 1)).passed


def test_invariance_requires_nodal_map():
    t = FormTriple(F=np.eye(2), J=np.array([[0.5, 0.5]]), M_H=np.eye(1), G_V=np.eye(2))
    with pytest.raises(NotNodal):
        v.check_invariance(t, v.ConvexSetSpec.nonnegative())


def test_convex_set_spec():
    with pytest.raises(ValueError):
        v.ConvexSetSpec.box(1, 0)
    assert np.array_equal(v.ConvexSetSpec.below_one().project(np.array([2.0, -3.0])), [1.0, -3.0])


def test_conservation_neumann():
    op = associate(gallery.neumann_heat_2d(4))
    assert v.check_conservation(op, [0.1, 1.0], [SemigroupScheme.spectral(), SemigroupScheme.euler(8)]).passed
    heat = associate(gallery.dirichlet_heat_1d(8))
    assert not v.check_conservation(heat, [1.0], [SemigroupScheme.spectral()]).passed


def test_rescale_consistency():
    t = gallery.dirichlet_heat_1d(16)
    assert v.rescale_consistency(t, 3.0, 0.5, SemigroupScheme.spectral()).passed


def test_real_sector_constants_drift():
    t = gallery.drift_triple_1d(32)
    chk = v.real_sector_constants(t, t.meta["sector_c"], t.meta["sector_omega"], samples=300)
    assert chk.passed
    # too small a constant must fail
    assert not v.real_sector_constants(t, 1e-3, 0.0, samples=300).passed


def test_viscosity_requires_compatible_forms():
    a = gallery.dirichlet_heat_1d(8)
    with pytest.raises(ValueError):
        v.viscosity_convergence(a, gallery.dirichlet_heat_1d(9), 1.0, np.ones(7))


def test_report_json_is_sorted_and_deterministic():
    t = gallery.drift_triple_1d(16)
    a = verify_triple(t, seed=3).to_json({"seed": 3})
    b = verify_triple(t, seed=3).to_json({"seed": 3})
    assert a == b
    d = json.loads(a)
    names = [c["name"] for c in d["checks"]]
    assert names == sorted(names) and d["config"] == {"seed": 3}


def test_verify_raises_omega_when_needed():
    t = FormTriple(F=np.diag([1.0, -0.5]), J=np.eye(2), M_H=np.eye(2), G_V=np.eye(2), omega=0.0)
    rep = verify_triple(t)
    first = rep.checks[0]
    assert first.name == "triple_valid" and first.passed and "raised" in first.detail
    assert not rep.passed  # the operator itself is not accretive
