"""Evolution of the semigroup ``T(t) = exp(-tA)`` generated by ``-A``.

Four routes are provided:

* ``euler``    -- Hille's formula ``((n/t) R(n/t))^n``, n backward-Euler steps
                  that all share one resolvent factorization;
* ``yosida``   -- ``exp(t G)`` with the bounded Yosida approximant
                  ``G = lam^2 R(lam) - lam`` of ``-A``;
* ``spectral`` -- exact transport in an M_H-orthonormal eigenbasis
                  (selfadjoint operators only);
* ``exp``      -- dense ``exp(-zA)`` by scaling and squaring, complex z allowed.

Here ``R(lam) = (lam + A)^{-1}``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy import linalg

from . import _linalg
from ._linalg import expm
from .errors import NotSelfadjoint, SchemeMismatch
from .form_core import AssociatedOperator

EULER = "euler"
YOSIDA = "yosida"
SPECTRAL = "spectral"
DENSE_EXP = "exp"
VARIANTS = (EULER, YOSIDA, SPECTRAL, DENSE_EXP)


@dataclass(frozen=True)
class SemigroupScheme:
    variant: str
    n: int | None = None
    lam: float | None = None
    tol: float = 1e-10

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown scheme {self.variant!r}; expected one of {VARIANTS}")
        if self.variant == EULER and (self.n is None or int(self.n) < 1):
            raise ValueError("Euler scheme needs n >= 1 steps")
        if self.variant == YOSIDA and (self.lam is None or not self.lam > 0):
            raise ValueError("Yosida scheme needs lambda > 0")

    @classmethod
    def euler(cls, n: int, tol: float = 1e-10):
        return cls(EULER, n=int(n), tol=tol)

    @classmethod
    def yosida(cls, lam: float, tol: float = 1e-10):
        return cls(YOSIDA, lam=float(lam), tol=tol)

    @classmethod
    def spectral(cls, tol: float = 1e-10):
        return cls(SPECTRAL, tol=tol)

    @classmethod
    def dense_exp(cls, tol: float = 1e-10):
        return cls(DENSE_EXP, tol=tol)

    def label(self) -> str:
        if self.variant == EULER:
            return f"euler(n={self.n})"
        if self.variant == YOSIDA:
            return f"yosida(lambda={self.lam:g})"
        return self.variant


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _check_time(t):
    if t < 0:
        raise ValueError("semigroups are one-sided: t must be >= 0")


def euler_evolve(op: AssociatedOperator, x0, t: float, n: int):
    """``(I + (t/n) A)^{-n} x0`` computed as n resolvent applications."""
    _check_time(t)
    if n < 1:
        raise ValueError("n must be >= 1")
    x = np.array(x0, copy=True)
    if t == 0:
        return x
    lam = n / t
    for _ in range(n):
        x = lam * op.resolvent(lam, x)
    return x


def yosida_generator(op: AssociatedOperator, lam: float) -> np.ndarray:
    """Bounded approximant ``lam^2 R(lam) - lam I`` of ``-A``."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return lam * lam * op.resolvent_matrix(lam) - lam * np.eye(op.m)


def yosida_evolve(op: AssociatedOperator, x0, t: float, lam: float):
    _check_time(t)
    x0 = np.asarray(x0)
    if t == 0:
        return np.array(x0, copy=True)
    return expm(t * yosida_generator(op, lam)) @ x0


def spectral_decompose(op: AssociatedOperator) -> Spectrum:
    """Eigenpairs of a selfadjoint A with ``V^* M_H V = I``, ascending."""
    if not op.selfadjoint:
        raise NotSelfadjoint("spectral decomposition needs a symmetric form")
    M = op.M_H
    MA = _linalg.herm(M @ op.matrix)
    w, v = linalg.eigh(MA, M)
    return Spectrum(w, v)


def _spectral_matrix(op, z):
    w, v = spectral_decompose(op)
    d = np.exp(-w * z)
    return (v * d) @ (v.conj().T @ op.M_H)


def evolve_matrix(op: AssociatedOperator, z, scheme: SemigroupScheme) -> np.ndarray:
    """Matrix of ``T(z)``; complex z needs a complex operator and spectral/exp."""
    zc = complex(z)
    if zc.real < 0:
        raise ValueError("Re z must be >= 0")
    is_complex_time = zc.imag != 0
    if is_complex_time:
        if scheme.variant in (EULER, YOSIDA):
            raise SchemeMismatch(f"{scheme.variant} scheme accepts real times only")
        if not op.triple.is_complex:
            raise ValueError("complex time needs a complex operator (complexify first)")
        z = zc
    else:
        z = zc.real
    m = op.m
    if z == 0:
        return np.eye(m, dtype=complex if op.triple.is_complex else float)
    if scheme.variant == EULER:
        return euler_evolve(op, np.eye(m), z, scheme.n)
    if scheme.variant == YOSIDA:
        return expm(z * yosida_generator(op, scheme.lam))
    if scheme.variant == SPECTRAL:
        t = _spectral_matrix(op, z)
        return t if op.triple.is_complex else t.real
    return expm(-z * op.matrix)


def default_scheme(op: AssociatedOperator, t: float, tol: float = 1e-10) -> SemigroupScheme:
    if op.selfadjoint:
        return SemigroupScheme.spectral(tol)
    norm = op.op_norm(op.matrix)
    n = max(1, int(math.ceil(t * norm / 0.5)))
    return SemigroupScheme.euler(n, tol)


def evolve(op: AssociatedOperator, x0, t, scheme: SemigroupScheme):
    """``T(t) x0`` with the given scheme (real t)."""
    _check_time(t)
    if scheme.variant == EULER:
        return euler_evolve(op, x0, t, scheme.n)
    if scheme.variant == YOSIDA:
        return yosida_evolve(op, x0, t, scheme.lam)
    return evolve_matrix(op, t, scheme) @ np.asarray(x0)


@dataclass
class EvolutionResult:
    times: list
    states: list
    scheme: SemigroupScheme
    diagnostics: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states must have equal length")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be strictly increasing")

    def to_csv(self, extra: dict | None = None) -> str:
        """CSV with 17 significant digits; ``extra`` adds named columns."""
        states = [np.asarray(s) for s in self.states]
        m = states[0].shape[0] if states else 0
        cplx = any(np.iscomplexobj(s) for s in states)
        if cplx:
            header = ["t"] + [f"{p}_{i}" for i in range(m) for p in ("re", "im")]
        else:
            header = ["t"] + [f"component_{i}" for i in range(m)]
        extra = extra or {}
        header += list(extra)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for k, (t, s) in enumerate(zip(self.times, states)):
            row = [_fmt(t)]
            if cplx:
                for z in s:
                    row += [_fmt(z.real), _fmt(z.imag)]
            else:
                row += [_fmt(x) for x in s]
            row += [_fmt(col[k]) for col in extra.values()]
            w.writerow(row)
        return buf.getvalue()


def _fmt(x) -> str:
    return format(float(x), ".17g")


def evolve_grid(op: AssociatedOperator, x0, times: Sequence[float], scheme: SemigroupScheme | None = None):
    """Evolve ``x0`` to each time in ``times``; diagnostics hold M-norm ratios."""
    times = [float(t) for t in times]
    x0 = np.asarray(x0)
    states, diag = [], []
    n0 = op.m_norm(x0)
    for t in times:
        sch = scheme or default_scheme(op, t)
        x = evolve(op, x0, t, sch)
        states.append(x)
        diag.append({"t": t, "norm_ratio": op.m_norm(x) / n0 if n0 else 0.0})
    return EvolutionResult(times, states, scheme or default_scheme(op, max(times, default=0.0)), diag)
