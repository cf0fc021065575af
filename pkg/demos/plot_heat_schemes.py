"""
Heat equation: three ways to run a semigroup
============================================

Assemble the Dirichlet Laplacian on (0, 1) and compare backward-Euler
products, the Yosida approximation and the exact spectral solution.
"""
import math

import numpy as np

from formsemigroups import associate, gallery
from formsemigroups.engines import SemigroupScheme, euler_evolve, evolve, spectral_decompose, yosida_evolve

op = associate(gallery.dirichlet_heat_1d(64))
w, V = spectral_decompose(op)
print("smallest eigenvalue %.6f, pi^2 = %.6f" % (w[0], math.pi**2))

# start from the first eigenvector so the exact answer is a pure decay
x0 = V[:, 0]
t = 0.1
exact = evolve(op, x0, t, SemigroupScheme.spectral())
print("exact decay factor %.6f vs exp(-t w0) %.6f" % (op.m_norm(exact), np.exp(-t * w[0])))

print("\nbackward Euler, error halves with each doubling of n")
for n in (8, 16, 32, 64):
    print("  n=%3d  error %.3e" % (n, op.m_norm(euler_evolve(op, x0, t, n) - exact)))

print("\nYosida approximation")
for lam in (10, 100, 1000):
    print("  lambda=%5d  error %.3e" % (lam, op.m_norm(yosida_evolve(op, x0, t, lam) - exact)))
