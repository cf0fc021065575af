"""Forms on finite-dimensional spaces and their associated operators.

A form triple ``(a, j)`` is stored as matrices:

* ``F`` (n x n) with ``a(u, v) = v^* F u`` (antilinear in the second slot),
* ``J`` (m x n) realizing ``j: V -> H``,
* ``M_H`` (m x m) the Gram matrix of H, ``(x|y)_H = y^* M_H x``,
* ``G_V`` (n x n) the Gram matrix of V,
* ``omega`` a shift making ``F + omega J^* M_H J`` elliptic.

The associated operator ``A`` on H is characterized by: ``Ax = y`` iff there
is ``u`` with ``Ju = x`` and ``F u = J^* M_H y``.  ``J`` need not be injective.
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass, replace
from dataclasses import field as dc_field
from typing import Any

import numpy as np
from scipy import linalg

from . import _linalg
from .errors import AlreadyComplex, NonElliptic, NotOrthonormal, SingularResolvent, SingularSystem

REAL = "real"
COMPLEX = "complex"

RANK_RTOL = 1e-10
OMEGA_LADDER = (0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0)


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class VSpace:
    """Form domain V with Gram matrix ``G_V``."""

    G_V: np.ndarray

    @property
    def n(self) -> int:
        return self.G_V.shape[0]


@dataclass(frozen=True)
class HSpace:
    """State space H with Gram matrix ``M_H``."""

    M_H: np.ndarray

    @property
    def m(self) -> int:
        return self.M_H.shape[0]


@dataclass(frozen=True, eq=False)
class FormTriple:
    F: np.ndarray
    J: np.ndarray
    M_H: np.ndarray
    G_V: np.ndarray
    omega: float = 0.0
    field: str = REAL
    meta: dict = dc_field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.field not in (REAL, COMPLEX):
            raise ValueError(f"field must be 'real' or 'complex', got {self.field!r}")
        dtype = float if self.field == REAL else complex
        for name in ("F", "J", "M_H", "G_V"):
            value = np.asarray(getattr(self, name))
            if self.field == REAL and np.iscomplexobj(value):
                if np.abs(value.imag).max(initial=0.0) > 0:
                    raise ValueError(f"{name} has complex entries but field is real")
                value = value.real
            object.__setattr__(self, name, _frozen(value, dtype))
        object.__setattr__(self, "omega", float(self.omega))
        n, m = self.n, self.m
        if self.F.shape != (n, n):
            raise ValueError(f"F must be square, got {self.F.shape}")
        if self.J.shape != (m, n):
            raise ValueError(f"J must be {m}x{n}, got {self.J.shape}")
        if self.G_V.shape != (n, n):
            raise ValueError(f"G_V must be {n}x{n}, got {self.G_V.shape}")
        if self.M_H.shape != (m, m):
            raise ValueError(f"M_H must be {m}x{m}, got {self.M_H.shape}")
        if self.omega < 0:
            raise ValueError("omega must be nonnegative")

    @property
    def n(self) -> int:
        return self.F.shape[0]

    @property
    def m(self) -> int:
        return self.M_H.shape[0]

    @property
    def V(self) -> VSpace:
        return VSpace(self.G_V)

    @property
    def H(self) -> HSpace:
        return HSpace(self.M_H)

    @property
    def is_complex(self) -> bool:
        return self.field == COMPLEX

    def pullback(self) -> np.ndarray:
        """``J^* M_H J``, the H inner product pulled back to V."""
        return self.J.conj().T @ self.M_H @ self.J

    def shifted_matrix(self, lam) -> np.ndarray:
        """Matrix of ``a(u, v) + lam (Ju|Jv)_H``."""
        return self.F + lam * self.pullback()

    def form(self, u, v):
        """Evaluate ``a(u, v) = v^* F u``."""
        return np.vdot(v, self.F @ u)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "n": self.n,
            "m": self.m,
            "omega": self.omega,
            "F": _matrix_to_json(self.F),
            "J": _matrix_to_json(self.J),
            "M_H": _matrix_to_json(self.M_H),
            "G_V": _matrix_to_json(self.G_V),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> FormTriple:
        fld = d.get("field", REAL)
        t = cls(
            F=_matrix_from_json(d["F"]),
            J=_matrix_from_json(d["J"]),
            M_H=_matrix_from_json(d["M_H"]),
            G_V=_matrix_from_json(d["G_V"]),
            omega=d.get("omega", 0.0),
            field=fld,
        )
        if "n" in d and d["n"] != t.n or "m" in d and d["m"] != t.m:
            raise ValueError("declared dimensions n, m disagree with the matrices")
        return t

    @classmethod
    def from_json(cls, text: str) -> FormTriple:
        return cls.from_dict(json.loads(text))


def _matrix_to_json(a):
    if np.iscomplexobj(a):
        return [[[float(z.real), float(z.imag)] for z in row] for row in a]
    return [[float(x) for x in row] for row in a]


def _matrix_from_json(rows):
    rows = list(rows)
    if not rows:
        return np.zeros((0, 0))
    if any(isinstance(e, (list, tuple)) for row in rows for e in row):
        return np.array([[complex(e[0], e[1]) if isinstance(e, (list, tuple)) else complex(e)
                          for e in row] for row in rows])
    return np.array(rows, dtype=float)


def identity_triple(m: int = 2, field: str = REAL) -> FormTriple:
    eye = np.eye(m)
    return FormTriple(F=eye, J=eye, M_H=eye, G_V=eye, omega=0.0, field=field)


def matrix_triple(A, M_H=None, field=None) -> FormTriple:
    """Triple whose associated operator is the given matrix ``A`` (j = identity).

    With ``a(u, v) = (Au|v)_H`` we get ``F = M_H A``.  The shift is chosen
    from the ladder so that the triple validates.
    """
    A = np.atleast_2d(np.asarray(A))
    m = A.shape[0]
    M = np.eye(m) if M_H is None else np.asarray(M_H)
    if field is None:
        field = COMPLEX if np.iscomplexobj(A) or np.iscomplexobj(M) else REAL
    t = FormTriple(F=M @ A, J=np.eye(m), M_H=M, G_V=np.eye(m), omega=0.0, field=field)
    w = suggest_omega(t)
    if w is None:
        raise NonElliptic("no shift on the ladder makes the matrix form elliptic")
    return replace(t, omega=w)


@dataclass
class ValidationReport:
    ok: bool
    rank_J: int
    dense_image: bool
    elliptic: bool
    min_herm_eig: float
    gram_V_ok: bool
    gram_H_ok: bool
    suggested_omega: float | None
    reasons: list[str]


def suggest_omega(t: FormTriple) -> float | None:
    """Smallest shift on the ladder 0, 1, 2, 4, ... making ``Herm(F_omega)`` PD."""
    pull = t.pullback()
    for w in OMEGA_LADDER:
        if _linalg.is_positive_definite(t.F + w * pull):
            return w
    return None


def _gram_ok(g):
    if not _linalg.is_hermitian(g):
        return False
    try:
        linalg.cholesky(g, lower=True)
    except linalg.LinAlgError:
        return False
    return True


def validate_triple(t: FormTriple) -> ValidationReport:
    reasons = []
    if t.J.size:
        sv = linalg.svdvals(t.J)
        rank = int(np.sum(sv > RANK_RTOL * sv[0])) if sv[0] > 0 else 0
    else:
        rank = 0
    dense = rank == t.m
    if not dense:
        reasons.append(f"j lacks dense image (rank {rank} < m={t.m})")
    f_w = t.shifted_matrix(t.omega)
    lo, _ = _linalg.min_eig_relative(f_w) if t.n else (np.inf, 1.0)
    elliptic = _linalg.is_positive_definite(f_w)
    if not elliptic:
        reasons.append(f"Hermitian part of F + omega J*M_H J not positive definite at omega={t.omega}")
    gv, gh = _gram_ok(t.G_V), _gram_ok(t.M_H)
    if not gv:
        reasons.append("G_V not Hermitian positive definite")
    if not gh:
        reasons.append("M_H not Hermitian positive definite")
    return ValidationReport(
        ok=dense and elliptic and gv and gh,
        rank_J=rank,
        dense_image=dense,
        elliptic=elliptic,
        min_herm_eig=float(lo),
        gram_V_ok=gv,
        gram_H_ok=gh,
        suggested_omega=suggest_omega(t) if gh else None,
        reasons=reasons,
    )


def form_constants(t: FormTriple) -> dict:
    """Coercivity, continuity and numerical-range constants of ``a_omega``.

    ``alpha`` and ``M_cont`` are measured in the V norm; ``theta_prime`` is the
    half-angle of the smallest closed sector containing all ``a_omega(v)``.
    """
    f_w = t.shifted_matrix(t.omega)
    h = _linalg.herm(f_w)
    alpha = float(linalg.eigh(h, t.G_V, eigvals_only=True)[0])
    if not alpha > 0:
        raise NonElliptic(f"coercivity constant alpha={alpha:.3e} is not positive")
    L = linalg.cholesky(t.G_V, lower=True)
    x = linalg.solve_triangular(L, f_w, lower=True)
    x = linalg.solve_triangular(L, x.conj().T, lower=True).conj().T
    m_cont = float(linalg.svdvals(x)[0])
    k = _linalg.skew(f_w) / 1j
    rho = float(np.abs(linalg.eigh(k, h, eigvals_only=True)).max(initial=0.0))
    return {"alpha": alpha, "M_cont": m_cont, "theta_prime": float(np.arctan(rho)), "ratio": rho}


class AssociatedOperator:
    """Operator on H associated with a validated form triple.

    Immutable after construction; resolvent factorizations are computed on
    demand and cached per spectral parameter (guarded by a lock).
    """

    def __init__(self, triple: FormTriple):
        self.triple = triple
        self.field = triple.field
        self.selfadjoint = _linalg.is_hermitian(triple.F)
        self.metric = _linalg.MetricFactor(triple.M_H)
        omega = triple.omega
        self._fw = self._factor(omega)
        if self._fw is None:
            raise NonElliptic(f"F + omega J*M_H J singular at omega={omega}")
        self.S_omega = self._solve_pullback(self._fw)
        sm = self.S_omega @ triple.M_H
        self._sm = _linalg.lu_factor_checked(sm)
        if self._sm is None:
            raise SingularSystem("S_omega M_H is singular")
        self._cache: dict[complex, Any] = {complex(omega): self._fw}
        self._lock = threading.Lock()
        self._matrix = None

    @property
    def m(self) -> int:
        return self.triple.m

    @property
    def M_H(self) -> np.ndarray:
        return self.triple.M_H

    def _factor(self, lam):
        f = self.triple.shifted_matrix(lam)
        if self.triple.n == 0:
            return None
        return _linalg.lu_factor_checked(f)

    def _solve_pullback(self, fac):
        t = self.triple
        x = linalg.lu_solve(fac, t.J.conj().T.astype(np.result_type(fac[0], t.J)))
        return t.J @ x

    def _resolvent_factor(self, lam):
        key = complex(lam)
        with self._lock:
            fac = self._cache.get(key)
        if fac is None:
            fac = self._factor(lam)
            if fac is None:
                raise SingularResolvent(lam)
            with self._lock:
                self._cache[key] = fac
        return fac

    def apply(self, x):
        x = np.asarray(x)
        if x.shape[0] != self.m:
            raise ValueError(f"expected vector(s) of length {self.m}, got shape {x.shape}")
        return linalg.lu_solve(self._sm, x.astype(np.result_type(self._sm[0], x))) - self.triple.omega * x

    @property
    def matrix(self) -> np.ndarray:
        """Dense matrix ``(S_omega M_H)^{-1} - omega I``."""
        if self._matrix is None:
            a = self.apply(np.eye(self.m))
            a.setflags(write=False)
            self._matrix = a
        return self._matrix

    def resolvent(self, lam, x):
        """``(lam + A)^{-1} x`` through ``F_lam = F + lam J^* M_H J``."""
        x = np.asarray(x)
        if x.shape[0] != self.m:
            raise ValueError(f"expected vector(s) of length {self.m}, got shape {x.shape}")
        if not self.triple.is_complex and np.iscomplexobj(lam) and complex(lam).imag != 0:
            raise ValueError("complex spectral parameter needs a complex operator (complexify first)")
        if np.isreal(lam):
            lam = float(np.real(lam))
        fac = self._resolvent_factor(lam)
        t = self.triple
        rhs = t.J.conj().T @ (t.M_H @ x)
        return t.J @ linalg.lu_solve(fac, rhs.astype(np.result_type(fac[0], rhs)))

    def resolvent_matrix(self, lam) -> np.ndarray:
        return self.resolvent(lam, np.eye(self.m))

    def m_norm(self, x) -> float:
        return self.metric.vec_norm(x)

    def op_norm(self, b) -> float:
        return self.metric.op_norm(b)


def associate(t: FormTriple) -> AssociatedOperator:
    rep = validate_triple(t)
    if not rep.ok:
        if not rep.elliptic:
            raise NonElliptic("; ".join(rep.reasons))
        raise ValueError("invalid triple: " + "; ".join(rep.reasons))
    return AssociatedOperator(t)


def apply(op: AssociatedOperator, x):
    return op.apply(x)


def resolvent(op: AssociatedOperator, lam, x):
    return op.resolvent(lam, x)


def shift_form(t: FormTriple, w: float) -> FormTriple:
    """Triple for ``a_w = a + w (j.|j.)_H``; its operator is ``A + w``."""
    if w == 0:
        return t
    meta = dict(t.meta)
    meta["shift"] = meta.get("shift", 0.0) + w
    return replace(t, F=t.F + w * t.pullback(), omega=max(t.omega - w, 0.0), meta=meta)


def compose_projection(t: FormTriple, Q, tol=1e-10) -> FormTriple:
    """Triple ``(a, P o j)`` with P the M_H-orthogonal projection onto span(Q).

    Coordinates on the range of P are taken in the basis Q, so the new H
    carries the identity Gram matrix and ``J' = Q^* M_H J``.
    """
    Q = np.asarray(Q)
    if Q.ndim == 1:
        Q = Q[:, None]
    k = Q.shape[1]
    if Q.shape[0] != t.m:
        raise ValueError(f"Q must have {t.m} rows")
    gram = Q.conj().T @ t.M_H @ Q
    if np.abs(gram - np.eye(k)).max(initial=0.0) > tol:
        raise NotOrthonormal("columns of Q are not M_H-orthonormal")
    fld = COMPLEX if t.is_complex or np.iscomplexobj(Q) else REAL
    return FormTriple(F=t.F, J=Q.conj().T @ t.M_H @ t.J, M_H=np.eye(k), G_V=t.G_V,
                      omega=t.omega, field=fld, meta=dict(t.meta))


def complexify(t: FormTriple) -> FormTriple:
    if t.is_complex:
        raise AlreadyComplex("triple is already complex")
    return replace(t, field=COMPLEX)

