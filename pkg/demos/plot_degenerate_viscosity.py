"""
Degenerate diffusion and vanishing viscosity
============================================

Diffusion switched off on the left half of the square still generates a
conservative contraction semigroup.  Adding (1/n) times the Laplacian and
letting n grow recovers its resolvent.
"""
import numpy as np

from formsemigroups import associate, gallery
from formsemigroups import verification as v
from formsemigroups.engines import SemigroupScheme

a = gallery.partially_degenerate_2d(16)
op = associate(a)
chk = v.check_conservation(op, (0.1, 1.0, 10.0), [SemigroupScheme.spectral(), SemigroupScheme.euler(64)])
print("conservation:", chk.passed, "%.2e" % chk.measured)

x, y = gallery.Mesh2D.unit_square(16).points.T
f = np.cos(np.pi * x) * np.cos(np.pi * y)
chk = v.viscosity_convergence(a, gallery.neumann_heat_2d(16), 10.0, f)
for n, e in zip(chk.components["n_list"], chk.components["errors"]):
    print("  n=%4d  resolvent error %.3e" % (n, e))
