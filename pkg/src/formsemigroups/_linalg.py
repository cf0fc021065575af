"""Dense linear-algebra helpers shared by the engines and the checks."""
import math
import warnings

import numpy as np
from scipy import linalg


def herm(a):
    return 0.5 * (a + a.conj().T)


def skew(a):
    return 0.5 * (a - a.conj().T)


def is_hermitian(a, rtol=1e-12):
    scale = max(np.abs(a).max(initial=0.0), 1.0)
    return bool(np.abs(a - a.conj().T).max(initial=0.0) <= rtol * scale)


def min_eig_relative(a):
    """Smallest eigenvalue of the Hermitian part of ``a`` and the spectral scale."""
    w = linalg.eigvalsh(herm(a))
    return w[0], max(np.abs(w).max(initial=0.0), 1e-300)


def is_positive_definite(a, rtol=1e-12):
    """Hermitian part of ``a`` positive definite, with a relative eigenvalue floor."""
    if a.shape[0] == 0:
        return True
    lo, scale = min_eig_relative(a)
    return bool(lo > rtol * scale)


class MetricFactor:
    """Cholesky factor L of a Hermitian positive-definite Gram matrix M = L L*.

    Maps between H coordinates and Euclidean coordinates, so that
    ``||x||_M = ||L* x||_2`` and ``||B||_M = ||L* B L^{-*}||_2``.
    """

    def __init__(self, gram):
        gram = np.asarray(gram)
        self.diagonal = np.count_nonzero(gram - np.diag(np.diag(gram))) == 0
        if self.diagonal:
            d = np.real(np.diag(gram))
            if np.any(d <= 0):
                raise linalg.LinAlgError("Gram matrix not positive definite")
            self.L = np.diag(np.sqrt(d))
        else:
            self.L = linalg.cholesky(gram, lower=True)

    def to_euclid(self, b):
        """Conjugate an operator ``b`` into Euclidean coordinates."""
        if self.diagonal:
            s = np.diag(self.L)
            return s[:, None] * b / s[None, :]
        lhb = self.L.conj().T @ b
        # right-multiply by L^{-*}: solve X L* = lhb  <=>  L X* = lhb*
        return linalg.solve_triangular(self.L, lhb.conj().T, lower=True).conj().T

    def vec_norm(self, x):
        return float(np.linalg.norm(self.L.conj().T @ x))

    def op_norm(self, b):
        return float(np.linalg.norm(self.to_euclid(b), 2))


def lu_factor_checked(a, rtol=None):
    """LU factorization that refuses numerically singular matrices.

    Returns None when a pivot is below ``rtol`` times the largest pivot.
    """
    n = a.shape[0]
    if rtol is None:
        rtol = 100 * n * np.finfo(float).eps
    with np.errstate(all="ignore"), warnings.catch_warnings():
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        lu, piv = linalg.lu_factor(a, check_finite=True)
    d = np.abs(np.diag(lu))
    if n and (d.max() == 0 or d.min() <= rtol * d.max()):
        return None
    return lu, piv


def expm(a, order=16, target=0.5):
    """Matrix exponential by scaling and squaring with a truncated Taylor core.

    The argument is scaled by ``2**-s`` so that its 1-norm is at most
    ``target``; the Taylor remainder is then below ``target**(order+1)/(order+1)!``.
    """
    a = np.asarray(a)
    n = a.shape[0]
    dtype = np.result_type(a.dtype, float)
    ident = np.eye(n, dtype=dtype)
    if n == 0:
        return ident
    norm = np.linalg.norm(a, 1)
    s = 0 if norm <= target else int(math.ceil(math.log2(norm / target)))
    b = a / 2.0**s
    # Horner evaluation of sum_k b^k/k!
    e = ident.copy()
    for k in range(order, 0, -1):
        e = ident + (b @ e) / k
    for _ in range(s):
        e = e @ e
    return e
