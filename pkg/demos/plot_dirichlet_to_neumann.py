"""
Dirichlet-to-Neumann operator from a non-injective form
=======================================================

Take the Dirichlet integral on the whole mesh but observe only boundary values.
The associated operator on the boundary is the Dirichlet-to-Neumann map, and
it coincides with the Schur complement of the stiffness matrix.
"""
import numpy as np

from formsemigroups import associate, gallery
from formsemigroups import verification as v
from formsemigroups.engines import SemigroupScheme, spectral_decompose

# 1D: two boundary points, and the answer does not depend on the mesh
for n in (2, 10):
    t = gallery.assemble_dtn(gallery.DtNProblem.from_mesh(gallery.Mesh1D.uniform(0, 1, n)))
    print("1D with %d cells:\n" % n, associate(t).matrix)

t = gallery.assemble_dtn(gallery.DtNProblem.from_mesh(gallery.Mesh2D.unit_square(8)))
op = associate(t)
ref = gallery.dtn_schur_reference(t.F, t.meta["boundary"], t.M_H)
print("\n2D 8x8: %d boundary nodes, Schur delta %.2e" % (op.m, np.abs(op.matrix - ref).max()))
print("lowest eigenvalues", np.round(spectral_decompose(op).eigenvalues[:4], 6))
print(v.check_submarkovian(op, (0.1, 1.0), SemigroupScheme.spectral()).detail)
