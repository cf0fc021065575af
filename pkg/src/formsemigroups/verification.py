"""Executable checks of generation, contractivity and invariance properties.

Every check returns a :class:`Check` carrying the measured quantity, the
threshold it was compared against and a human-readable detail string.
Operator norms are taken in the M_H geometry.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import linalg

from . import engines
from ._linalg import MetricFactor, herm
from .errors import NonElliptic, NotNodal, SingularResolvent
from .form_core import (AssociatedOperator, FormTriple, associate, complexify, form_constants,
                        shift_form, validate_triple)

DEFAULT_RADII = tuple(np.logspace(-2, 4, 13))
NORM_TOL = 1e-8
POSITIVITY_TOL = 1e-12


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""
    applicable: bool = True
    components: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = bool(self.passed)
        d["measured"] = _num(self.measured)
        d["threshold"] = _num(self.threshold)
        d["components"] = {k: _num(v) if isinstance(v, (float, np.floating, int)) else v
                           for k, v in self.components.items()}
        return d


def _num(x):
    x = float(x)
    return x if math.isfinite(x) else str(x)


def inapplicable(name: str, reason: str) -> Check:
    return Check(name, True, float("nan"), float("nan"), f"inapplicable: {reason}", applicable=False)


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.applicable)

    def add(self, check: Check):
        self.checks.append(check)
        return check

    def to_dict(self, config: dict | None = None) -> dict:
        d = {
            "passed": self.passed,
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
            "constants": {k: _num(v) for k, v in sorted(self.constants.items())},
        }
        if config is not None:
            d["config"] = config
        return d

    def to_json(self, config: dict | None = None) -> str:
        return json.dumps(self.to_dict(config), indent=2, sort_keys=True)

    def table(self) -> str:
        lines = [f"{'check':<34} {'result':<6} {'measured':>14} {'threshold':>14}"]
        for c in sorted(self.checks, key=lambda c: c.name):
            res = "N/A" if not c.applicable else ("PASS" if c.passed else "FAIL")
            lines.append(f"{c.name:<34} {res:<6} {c.measured:>14.6e} {c.threshold:>14.6e}")
        return "\n".join(lines)


def _complex_op(op: AssociatedOperator) -> AssociatedOperator:
    if op.triple.is_complex:
        return op
    return AssociatedOperator(complexify(op.triple))


# --------------------------------------------------------------------------
# accretivity and sector bounds
# --------------------------------------------------------------------------


def numerical_range_floor(op: AssociatedOperator, phase: complex = 1.0) -> float:
    """``min Re (phase A x|x)_H / ||x||_H^2`` over nonzero x."""
    b = op.metric.to_euclid(op.matrix) * phase
    return float(linalg.eigvalsh(herm(b))[0])


def check_accretivity(op: AssociatedOperator, theta: float = 0.0, tol: float = 1e-10) -> Check:
    """Accretivity of ``exp(+-i theta) A`` and invertibility of ``I + A``."""
    if theta < 0:
        raise ValueError("theta must be >= 0")
    phases = [1.0] if theta == 0 else [np.exp(1j * theta), np.exp(-1j * theta)]
    floor = min(numerical_range_floor(op, p) for p in phases)
    scale = max(1.0, op.op_norm(op.matrix))
    thr = -tol * scale
    e = op.metric.to_euclid(op.matrix)
    cond = float(np.linalg.cond(np.eye(op.m) + e))
    surjective = math.isfinite(cond) and cond < 1e12
    ok = floor >= thr and surjective
    name = "accretive" if theta == 0 else "sector_accretive"
    return Check(name, ok, floor, thr,
                 f"theta={theta:.6g}; min Re(e^(+-i theta)Ax|x)/|x|^2={floor:.3e}; cond(I+A)={cond:.3e}",
                 components={"theta": theta, "cond_I_plus_A": cond, "surjective": surjective})


def sector_grid(theta: float, radii: Sequence[float] | None = None, angles: Sequence[float] | None = None):
    radii = DEFAULT_RADII if radii is None else tuple(radii)
    if angles is None:
        angles = (0.0, theta / 2, -theta / 2, 0.99 * theta, -0.99 * theta)
    return [r * np.exp(1j * a) for r in radii for a in angles]


def check_resolvent_sector(op: AssociatedOperator, theta: float, radial_grid=None, angular_grid=None,
                           tol: float = NORM_TOL) -> Check:
    """Sampled bound ``sup ||lam (lam + A)^{-1}||_M <= 1`` over the sector."""
    cop = _complex_op(op)
    grid = sector_grid(theta, radial_grid, angular_grid)
    worst, worst_lam = 0.0, None
    for lam in grid:
        try:
            r = cop.resolvent_matrix(lam)
        except SingularResolvent:
            return Check("resolvent_sector", False, float("inf"), 1 + tol,
                         f"SingularResolvent at lambda={complex(lam):.6g}",
                         components={"theta": theta, "grid_points": len(grid), "singular_at": str(complex(lam))})
        v = abs(lam) * cop.op_norm(r)
        if not math.isfinite(v):
            return Check("resolvent_sector", False, float("inf"), 1 + tol,
                         f"non-finite resolvent at lambda={complex(lam):.6g}", components={"theta": theta})
        if v > worst:
            worst, worst_lam = v, lam
    return Check("resolvent_sector", worst <= 1 + tol, worst, 1 + tol,
                 f"theta={theta:.6g}; {len(grid)} grid points; worst at lambda={complex(worst_lam):.4g}",
                 components={"theta": theta, "grid_points": len(grid)})


# --------------------------------------------------------------------------
# semigroup properties
# --------------------------------------------------------------------------


def check_contraction_semigroup(op: AssociatedOperator, t_grid: Sequence[float], s: float,
                                scheme: engines.SemigroupScheme, tol: float = 1e-10) -> Check:
    """``||T(t)||_M <= 1 + tol`` on the grid and ``T(t+s) = T(t)T(s)`` to scheme tolerance."""
    norms, law = [], 0.0
    ts = engines.evolve_matrix(op, s, scheme)
    for t in t_grid:
        tt = engines.evolve_matrix(op, t, scheme)
        norms.append(op.op_norm(tt))
        law = max(law, op.op_norm(engines.evolve_matrix(op, t + s, scheme) - tt @ ts))
    worst = max(norms)
    ok = worst <= 1 + tol and law <= scheme.tol
    return Check("contraction_semigroup", ok, worst, 1 + tol,
                 f"scheme={scheme.label()}; max ||T(t)||_M={worst:.12g}; semigroup-law error={law:.3e} "
                 f"(tol {scheme.tol:.1e})",
                 components={"semigroup_law_error": law, "semigroup_law_tol": scheme.tol})


def _nodal_ok(t: FormTriple) -> bool:
    J = t.J
    if np.any((J != 0) & (J != 1)):
        return False
    return bool(np.all(J.sum(axis=1) == 1) and np.all(J.sum(axis=0) <= 1))


def _diagonal(m) -> bool:
    return np.count_nonzero(m - np.diag(np.diag(m))) == 0


def check_submarkovian(op: AssociatedOperator, t_grid: Sequence[float], scheme: engines.SemigroupScheme,
                       tol: float = POSITIVITY_TOL) -> Check:
    """Entrywise positivity of T(t) and ``T(t) 1 <= 1`` (nodal, lumped H only)."""
    if not _diagonal(op.M_H):
        return inapplicable("submarkovian", "M_H is not diagonal (consistent mass)")
    ones = np.ones(op.m)
    min_entry, max_row = np.inf, -np.inf
    for t in t_grid:
        tt = np.real(engines.evolve_matrix(op, t, scheme))
        min_entry = min(min_entry, float(tt.min()))
        max_row = max(max_row, float((tt @ ones).max()))
    ok = min_entry >= -tol and max_row <= 1 + tol
    return Check("submarkovian", ok, min_entry, -tol,
                 f"scheme={scheme.label()}; min entry={min_entry:.3e}; max (T1)_i={max_row:.15g}",
                 components={"max_T1": max_row, "T1_threshold": 1 + tol})


def check_conservation(op: AssociatedOperator, t_grid: Sequence[float],
                       schemes: Sequence[engines.SemigroupScheme], tol: float = 1e-10) -> Check:
    """``||T(t) 1 - 1||_M <= tol`` for every time and scheme."""
    ones = np.ones(op.m)
    worst = 0.0
    for sch in schemes:
        for t in t_grid:
            worst = max(worst, op.m_norm(engines.evolve(op, ones, t, sch) - ones))
    return Check("conservation", worst <= tol, worst, tol,
                 f"schemes={[s.label() for s in schemes]}; times={list(t_grid)}")


def rescale_consistency(t: FormTriple, w: float, t_time: float, scheme: engines.SemigroupScheme,
                        tol: float | None = None) -> Check:
    """``T_{a_w}(t) = exp(-w t) T_a(t)``."""
    tol = scheme.tol if tol is None else tol
    op = associate(t)
    ops = associate(shift_form(t, w))
    lhs = engines.evolve_matrix(ops, t_time, scheme)
    rhs = math.exp(-w * t_time) * engines.evolve_matrix(op, t_time, scheme)
    err = op.op_norm(lhs - rhs)
    return Check("rescale_consistency", err <= tol, err, tol,
                 f"w={w:g}; t={t_time:g}; scheme={scheme.label()}")


# --------------------------------------------------------------------------
# form-level criteria
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvexSetSpec:
    """Nodally separable closed convex set in H."""

    kind: str
    lo: float = -np.inf
    hi: float = np.inf

    def __post_init__(self):
        if self.kind not in ("half_space_below_one", "nonnegative_cone", "box"):
            raise ValueError(f"unknown convex set kind {self.kind!r}")

    @classmethod
    def below_one(cls):
        return cls("half_space_below_one")

    @classmethod
    def nonnegative(cls):
        return cls("nonnegative_cone")

    @classmethod
    def box(cls, lo, hi):
        if lo > hi:
            raise ValueError("box needs lo <= hi")
        return cls("box", lo, hi)

    def bounds(self):
        if self.kind == "half_space_below_one":
            return -np.inf, 1.0
        if self.kind == "nonnegative_cone":
            return 0.0, np.inf
        return self.lo, self.hi

    def project(self, x):
        lo, hi = self.bounds()
        return np.clip(x, lo, hi)


def check_invariance(t: FormTriple, C: ConvexSetSpec, samples: int = 1000, seed: int = 0,
                     tol: float = 1e-10) -> Check:
    """Form criterion ``Re a(w, u - w) >= 0`` with ``w`` the nodal clip of u."""
    name = f"invariance[{C.kind}]"
    if not _nodal_ok(t):
        raise NotNodal("J must be a 0/1 selection map with one V node per H node")
    if not _diagonal(t.M_H):
        return inapplicable(name, "M_H is not diagonal, so the nodal clip is not the H projection")
    rng = np.random.default_rng(seed)
    lo, hi = C.bounds()
    if np.isfinite(lo) and np.isfinite(hi):
        centre = 0.5 * (lo + hi)
    elif np.isfinite(hi):
        centre = hi
    else:
        centre = lo if np.isfinite(lo) else 0.0
    worst = np.inf
    for _ in range(samples):
        u = centre + 2.0 * rng.standard_normal(t.n)
        w = C.project(u)
        worst = min(worst, float(np.real(t.form(w, u - w))))
    return Check(name, worst >= -tol, worst, -tol,
                 f"{samples} samples (seed {seed}); worst Re a(w,u-w)={worst:.3e}")


def real_sector_constants(t: FormTriple, c: float, omega: float, samples: int = 1000, seed: int = 0,
                          tol: float = 1e-10) -> Check:
    """Sampled check of ``|a(u,v) - a(v,u)| <= c(a(u)+a(v)) + omega(|ju|^2+|jv|^2)``."""
    if t.is_complex:
        raise ValueError("real_sector_constants needs a real triple")
    rng = np.random.default_rng(seed)
    L = np.linalg.cholesky(t.G_V)
    F, JMJ = t.F, t.pullback()
    worst = np.inf
    for _ in range(samples):
        u, v = (np.linalg.solve(L.T, z / np.linalg.norm(z)) for z in rng.standard_normal((2, t.n)))
        lhs = abs(v @ F @ u - u @ F @ v)
        rhs = c * (u @ F @ u + v @ F @ v) + omega * (u @ JMJ @ u + v @ JMJ @ v)
        worst = min(worst, rhs - lhs)
    return Check("real_sector_constants", worst >= -tol, worst, -tol,
                 f"c={c:g}; omega={omega:g}; {samples} unit-V pairs (seed {seed})",
                 components={"c": c, "omega": omega, "verified": bool(worst >= -tol)})


def viscosity_convergence(a: FormTriple, b: FormTriple, lam: float, f,
                          n_list: Sequence[int] = tuple(2**k for k in range(9)), ratio: float = 0.05) -> Check:
    """Resolvents of ``a + b/n`` approach the resolvent of a as n grows."""
    if not (a.J.shape == b.J.shape and np.array_equal(a.J, b.J) and np.array_equal(a.M_H, b.M_H)):
        raise ValueError("a and b must share V, H and j")
    if not validate_triple(b).ok:
        raise NonElliptic("perturbing form b is not coercive")
    f = np.asarray(f)
    ref = associate(a).resolvent(lam, f)
    metric = MetricFactor(a.M_H)
    errs = []
    for n in n_list:
        tn = replace(a, F=a.F + b.F / n, omega=a.omega + b.omega / n, meta={})
        errs.append(metric.vec_norm(associate(tn).resolvent(lam, f) - ref))
    slack = 1e-13 * max(errs[0], 1e-300)
    monotone = all(e2 <= e1 + slack for e1, e2 in zip(errs, errs[1:]))
    ok = monotone and errs[-1] <= ratio * errs[0]
    measured = errs[-1] / errs[0] if errs[0] > 0 else 0.0
    return Check("viscosity_convergence", ok, measured, ratio,
                 f"lambda={lam:g}; monotone={monotone}; errors={['%.3e' % e for e in errs]}",
                 components={"monotone": monotone, "errors": [float(e) for e in errs],
                             "n_list": [int(n) for n in n_list]})


# --------------------------------------------------------------------------
# suite
# --------------------------------------------------------------------------


def verify_triple(t: FormTriple, t_grid=(0.1, 0.5, 1.0), s: float = 0.25, scheme=None,
                  samples: int = 1000, seed: int = 0, tol: float = 1e-10, theta: float | None = None,
                  sector_constants: tuple | None = None) -> VerificationReport:
    """Run every applicable check on a triple."""
    rep = VerificationReport()
    val = validate_triple(t)
    note = ""
    if not val.elliptic and val.suggested_omega is not None:
        note = f"; shift raised from {t.omega:g} to {val.suggested_omega:g}"
        t = replace(t, omega=val.suggested_omega)
        val = validate_triple(t)
    rep.add(Check("triple_valid", val.ok, float(val.min_herm_eig), 0.0,
                  ("ok" if val.ok else "; ".join(val.reasons)) + note,
                  components={"rank_J": val.rank_J, "omega": t.omega}))
    if not val.ok:
        return rep
    op = associate(t)
    shifted = shift_form(t, t.omega)
    consts = form_constants(shifted)
    sector = math.pi / 2 - consts["theta_prime"] if theta is None else theta
    rep.constants.update(alpha=consts["alpha"], M_cont=consts["M_cont"],
                         theta_prime=consts["theta_prime"], theta=sector, omega_shift=t.omega)
    rep.add(check_accretivity(op, 0.0, tol))
    sop = associate(shifted)
    if sector > 0:
        sa = check_accretivity(_complex_op(sop), sector, tol)
        sa.name = "sector_accretive(A+omega)"
        rep.add(sa)
        rs = check_resolvent_sector(sop, sector)
        rs.name = "resolvent_sector(A+omega)"
        rep.add(rs)
    sch = scheme or (engines.SemigroupScheme.spectral() if op.selfadjoint
                     else engines.SemigroupScheme.dense_exp(tol=1e-8))
    rep.add(check_contraction_semigroup(op, t_grid, s, sch, tol))
    rep.add(rescale_consistency(t, 1.0, t_grid[-1], sch, tol=max(sch.tol, 1e-9)))
    if sector_constants is None and "sector_c" in t.meta:
        sector_constants = (t.meta["sector_c"], t.meta["sector_omega"])
    if sector_constants is not None and not t.is_complex:
        c, w = sector_constants
        rep.constants.update(c=c, omega=w)
        rep.add(real_sector_constants(t, c, w, samples, seed))
    if _nodal_ok(t):
        for C in (ConvexSetSpec.below_one(), ConvexSetSpec.nonnegative()):
            rep.add(check_invariance(t, C, samples, seed))
        rep.add(check_submarkovian(op, t_grid, sch))
    return rep
