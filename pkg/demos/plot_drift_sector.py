"""
Drift-diffusion: sector constants and the resolvent bound
=========================================================

The form  int u'v' + u'v  is not symmetric.  After the shift derived from the
coefficient bounds the numerical range sits in a sector, and the resolvent
obeys |lam| ||(lam + A)^-1|| <= 1 on the complementary sector.
"""
import math

from formsemigroups import associate, form_constants, gallery, shift_form, verify_triple
from formsemigroups import verification as v

t = gallery.drift_triple_1d(64, alpha=1.0, beta=1.0, gamma=0.0, c1=1.0)
omega = t.meta["sector_omega"]
shifted = shift_form(t, omega)
k = form_constants(shifted)
theta = math.pi / 2 - k["theta_prime"]
print("derived omega %g, alpha %.3e, continuity %.3f, theta' %.4f" % (omega, k["alpha"], k["M_cont"],
                                                                     k["theta_prime"]))

op = associate(shifted)
chk = v.check_resolvent_sector(op, theta)
print("sup |lam| ||R(lam)||_M over %d points: %.10f" % (chk.components["grid_points"], chk.measured))

# every check at once
print()
print(verify_triple(t, seed=0).table())
