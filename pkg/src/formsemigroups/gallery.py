"""P1 finite-element form triples for degenerate diffusion, Black-Scholes and
the Dirichlet-to-Neumann operator, plus independent reference oracles.

Element integrals use one-point quadrature: coefficients are sampled at the
element midpoint (1D) or centroid (2D).  Zeroth-order terms and the L2 mass
are lumped (trapezoidal nodal quadrature) unless ``lumped=False``.

Matrix convention: ``F[i, k] = a(phi_k, phi_i)`` (trial column, test row).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _linalg
from .errors import CoefficientViolation, DisconnectedMesh, SingularInterior
from .form_core import OMEGA_LADDER, FormTriple

DIRICHLET = "dirichlet"
NEUMANN = "neumann"


def _check_bc(bc):
    bc = bc.lower()
    if bc not in (DIRICHLET, NEUMANN):
        raise ValueError(f"bc must be 'dirichlet' or 'neumann', got {bc!r}")
    return bc


# --------------------------------------------------------------------------
# meshes and coefficients
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Mesh1D:
    nodes: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.nodes, dtype=float)
        if x.ndim != 1 or x.size < 3:
            raise ValueError("Mesh1D needs at least three nodes (N >= 2 elements)")
        if np.any(np.diff(x) <= 0):
            raise ValueError("nodes must be strictly increasing")
        x.setflags(write=False)
        object.__setattr__(self, "nodes", x)

    @classmethod
    def uniform(cls, a: float, b: float, n_cells: int) -> Mesh1D:
        return cls(np.linspace(a, b, n_cells + 1))

    @property
    def n_cells(self) -> int:
        return self.nodes.size - 1

    @property
    def h(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.nodes[1:] + self.nodes[:-1])


@dataclass(frozen=True, eq=False)
class Coefficients1D:
    """Per-element values of alpha, beta, gamma with ``beta^2 <= c1 alpha``."""

    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    c1: float = 0.0
    gamma_minus_inf: float | None = None

    def __post_init__(self):
        a, b, g = (np.asarray(v, dtype=float) for v in (self.alpha, self.beta, self.gamma))
        if not (a.shape == b.shape == g.shape) or a.ndim != 1:
            raise ValueError("alpha, beta, gamma must be 1D arrays of equal length")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "gamma", g)
        gm = float(np.max(np.maximum(-g, 0.0), initial=0.0))
        if self.gamma_minus_inf is None:
            object.__setattr__(self, "gamma_minus_inf", gm)
        elif gm > self.gamma_minus_inf * (1 + 1e-12):
            raise CoefficientViolation("gamma^- exceeds the declared bound gamma_minus_inf")
        self.check()

    @classmethod
    def from_functions(cls, mesh: Mesh1D, alpha, beta=0.0, gamma=0.0, c1: float = 0.0) -> Coefficients1D:
        xm = mesh.midpoints
        ev = [np.broadcast_to(f(xm) if callable(f) else f, xm.shape).astype(float) for f in (alpha, beta, gamma)]
        return cls(*ev, c1=c1)

    def check(self, rtol: float = 1e-10):
        if np.any(self.alpha < 0):
            raise CoefficientViolation("alpha must be nonnegative")
        bound = self.c1 * self.alpha
        viol = self.beta**2 - bound
        if np.any(viol > rtol * np.maximum(bound, 1e-300)):
            k = int(np.argmax(viol))
            raise CoefficientViolation(
                f"beta^2 <= c1*alpha fails on element {k}: beta^2={self.beta[k]**2:.6g}, c1*alpha={bound[k]:.6g}")


@dataclass(frozen=True, eq=False)
class Mesh2D:
    """Structured triangulation of a rectangle; each cell split along its
    lower-left to upper-right diagonal."""

    x0: float
    x1: float
    y0: float
    y1: float
    nx: int
    ny: int
    points: np.ndarray = field(init=False, repr=False)
    triangles: np.ndarray = field(init=False, repr=False)
    boundary: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1 or not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("Mesh2D needs positive cell counts and sizes")
        xs = np.linspace(self.x0, self.x1, self.nx + 1)
        ys = np.linspace(self.y0, self.y1, self.ny + 1)
        X, Y = np.meshgrid(xs, ys)
        pts = np.column_stack([X.ravel(), Y.ravel()])
        idx = np.arange((self.nx + 1) * (self.ny + 1)).reshape(self.ny + 1, self.nx + 1)
        p00, p10 = idx[:-1, :-1].ravel(), idx[:-1, 1:].ravel()
        p01, p11 = idx[1:, :-1].ravel(), idx[1:, 1:].ravel()
        tris = np.concatenate([np.column_stack([p00, p10, p11]), np.column_stack([p00, p11, p01])])
        on_b = (np.isclose(pts[:, 0], self.x0) | np.isclose(pts[:, 0], self.x1)
                | np.isclose(pts[:, 1], self.y0) | np.isclose(pts[:, 1], self.y1))
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "triangles", tris)
        object.__setattr__(self, "boundary", np.flatnonzero(on_b))

    @classmethod
    def unit_square(cls, nx: int, ny: int | None = None) -> Mesh2D:
        return cls(0.0, 1.0, 0.0, 1.0, nx, ny or nx)

    @property
    def n_nodes(self) -> int:
        return self.points.shape[0]

    @property
    def interior(self) -> np.ndarray:
        return np.setdiff1d(np.arange(self.n_nodes), self.boundary)

    @property
    def centroids(self) -> np.ndarray:
        return self.points[self.triangles].mean(axis=1)

    def boundary_edges(self) -> np.ndarray:
        """Pairs of boundary nodes joined by an edge lying on the boundary."""
        idx = np.arange(self.n_nodes).reshape(self.ny + 1, self.nx + 1)
        edges = []
        for line in (idx[0, :], idx[-1, :], idx[:, 0], idx[:, -1]):
            edges.append(np.column_stack([line[:-1], line[1:]]))
        return np.concatenate(edges)


@dataclass(frozen=True, eq=False)
class Coefficients2D:
    """Per-triangle values: ``a`` (E,2,2), ``b`` (E,2), ``c`` (E,)."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    c1: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float))
        e = self.a.shape[0]
        if self.a.shape != (e, 2, 2) or self.b.shape != (e, 2) or self.c.shape != (e,):
            raise ValueError("coefficient arrays have inconsistent shapes")

    @classmethod
    def from_functions(cls, mesh: Mesh2D, a=None, b=None, c=None, c1: float = 0.0) -> Coefficients2D:
        cen = mesh.centroids
        e = cen.shape[0]

        def ev(f, shape, default):
            if f is None:
                return np.broadcast_to(default, (e,) + shape).astype(float)
            if callable(f):
                return np.asarray([f(x, y) for x, y in cen], dtype=float).reshape((e,) + shape)
            return np.broadcast_to(np.asarray(f, dtype=float), (e,) + shape).copy()

        return cls(ev(a, (2, 2), np.eye(2)), ev(b, (2,), 0.0), ev(c, (), 0.0), c1=c1)

    def check(self, tol: float = 1e-10):
        sym = 0.5 * (self.a + self.a.transpose(0, 2, 1))
        scale = max(np.abs(self.a).max(initial=0.0), 1.0)
        if np.linalg.eigvalsh(sym).min(initial=0.0) < -tol * scale:
            raise CoefficientViolation("symmetric part of a_ij is not positive semidefinite")
        if np.any(self.b != 0):
            if np.any(np.abs(self.a - self.a.transpose(0, 2, 1)) > tol * scale):
                raise CoefficientViolation("a_ij must be symmetric when first-order terms are present")
            d = self.c1 * sym - np.einsum("ei,ij->eij", self.b**2, np.eye(2))
            if np.linalg.eigvalsh(d).min() < -tol * max(scale, np.abs(self.b).max() ** 2):
                raise CoefficientViolation("c1*A(x) - B(x)^2 is not positive semidefinite")


# --------------------------------------------------------------------------
# 1D assembly
# --------------------------------------------------------------------------


def derive_sectorial_constants_1d(co: Coefficients1D, c: float = 1.0) -> dict:
    """Constants (c, omega) for the real sectoriality inequality of the 1D form.

    Young's inequality with ``eps = delta = c/(2 c1)`` gives
    ``omega = c ||gamma^-|| + c c1/2 + c1/(2c)``.
    """
    if not c > 0:
        raise ValueError("c must be positive")
    gm = float(co.gamma_minus_inf)
    if co.c1 == 0:
        return {"c": c, "omega": c * gm}
    return {"c": c, "omega": c * gm + c * co.c1 / 2 + co.c1 / (2 * c)}


def _interval_matrices(mesh: Mesh1D, co: Coefficients1D, lumped: bool):
    n = mesh.nodes.size
    h = mesh.h
    e = np.arange(mesh.n_cells)
    rows = np.stack([e, e, e + 1, e + 1], axis=1)
    cols = np.stack([e, e + 1, e, e + 1], axis=1)

    def scatter(local):
        out = np.zeros((n, n))
        np.add.at(out, (rows.ravel(), cols.ravel()), local.reshape(-1))
        return out

    ones = np.array([1.0, -1.0, -1.0, 1.0])
    stiff_alpha = scatter((co.alpha / h)[:, None] * ones)
    stiff_one = scatter((1.0 / h)[:, None] * ones)
    # F[i,k] = int beta phi_k' phi_i, with phi_i(mid) = 1/2
    drift = scatter((co.beta / 2)[:, None] * np.array([-1.0, 1.0, -1.0, 1.0]))
    lump = np.zeros(n)
    np.add.at(lump, e, h / 2)
    np.add.at(lump, e + 1, h / 2)
    react = np.zeros(n)
    np.add.at(react, e, co.gamma * h / 2)
    np.add.at(react, e + 1, co.gamma * h / 2)
    if lumped:
        mass = np.diag(lump)
    else:
        mass = scatter((h / 6)[:, None] * np.array([2.0, 1.0, 1.0, 2.0]))
    F = stiff_alpha + drift + np.diag(react)
    return F, mass, stiff_one


def _pick_omega(F, pull, first):
    for w in (first,) + tuple(w for w in OMEGA_LADDER if w > first):
        if _linalg.is_positive_definite(F + w * pull):
            return w
    return None


def assemble_interval(mesh: Mesh1D, co: Coefficients1D, bc: str = DIRICHLET,
                      lumped: bool = True, c: float = 1.0) -> FormTriple:
    """Triple for ``int alpha u'v' + beta u'v + gamma uv`` on a 1D mesh.

    Dirichlet drops both endpoint nodes; Neumann keeps every node.  The
    shift is the derived sectoriality omega when that already makes the form
    elliptic, otherwise the next value on the shift ladder.
    """
    bc = _check_bc(bc)
    if co.alpha.size != mesh.n_cells:
        raise ValueError("coefficients must have one value per element")
    co.check()
    F, mass, stiff_one = _interval_matrices(mesh, co, lumped)
    keep = np.arange(1, mesh.nodes.size - 1) if bc == DIRICHLET else np.arange(mesh.nodes.size)
    sel = np.ix_(keep, keep)
    F, M = F[sel], mass[sel]
    G = stiff_one[sel] + M
    consts = derive_sectorial_constants_1d(co, c)
    w = _pick_omega(F, M, consts["omega"])
    if w is None:
        raise CoefficientViolation("no shift makes the assembled form elliptic")
    meta = {"kind": "interval", "bc": bc, "lumped": lumped, "nodes": mesh.nodes[keep],
            "c1": co.c1, "sector_c": consts["c"], "sector_omega": consts["omega"]}
    return FormTriple(F=F, J=np.eye(keep.size), M_H=M, G_V=G, omega=w, meta=meta)


def dirichlet_heat_1d(n_cells: int, a: float = 0.0, b: float = 1.0, lumped: bool = True) -> FormTriple:
    """Dirichlet Laplacian ``-u''`` on (a, b)."""
    mesh = Mesh1D.uniform(a, b, n_cells)
    co = Coefficients1D.from_functions(mesh, 1.0)
    return assemble_interval(mesh, co, DIRICHLET, lumped)


def drift_triple_1d(n_cells: int, alpha=1.0, beta=1.0, gamma=0.0, c1: float = 1.0,
                    bc: str = DIRICHLET) -> FormTriple:
    """Degenerate-diffusion example on (0, 1) with first-order drift."""
    mesh = Mesh1D.uniform(0.0, 1.0, n_cells)
    co = Coefficients1D.from_functions(mesh, alpha, beta, gamma, c1=c1)
    return assemble_interval(mesh, co, bc)


# --------------------------------------------------------------------------
# Black-Scholes
# --------------------------------------------------------------------------


def black_scholes_c1(sigma: float, r: float) -> float:
    return 2 * (sigma**2 - r) ** 2 / sigma**2


def assemble_black_scholes(sigma: float, r: float, s_min: float, s_max: float, n_cells: int,
                           lumped: bool = True) -> FormTriple:
    """``int sigma^2/2 x^2 u'v' + (sigma^2 - r) x u'v + r uv`` on [s_min, s_max].

    Homogeneous Dirichlet data at both ends stand in for compact support.
    """
    if not (0 < s_min < s_max) or not sigma > 0:
        raise ValueError("need 0 < s_min < s_max and sigma > 0")
    mesh = Mesh1D.uniform(s_min, s_max, n_cells)
    c1 = black_scholes_c1(sigma, r)
    co = Coefficients1D.from_functions(
        mesh,
        lambda x: 0.5 * sigma**2 * x**2,
        lambda x: (sigma**2 - r) * x,
        r,
        c1=c1,
    )
    t = assemble_interval(mesh, co, DIRICHLET, lumped)
    t.meta.update(kind="black_scholes", sigma=sigma, r=r)
    return t


def _norm_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def bs_reference_price(S0: float, K: float, T: float, sigma: float, r: float) -> float:
    """Closed-form European call value."""
    if T <= 0:
        return max(S0 - K, 0.0)
    disc = K * math.exp(-r * T)
    if sigma <= 0:
        return max(S0 - disc, 0.0)
    sq = sigma * math.sqrt(T)
    d1 = (math.log(S0 / K) + (r + 0.5 * sigma**2) * T) / sq
    d2 = d1 - sq
    return S0 * _norm_cdf(d1) - disc * _norm_cdf(d2)


def call_payoff(nodes, K: float) -> np.ndarray:
    return np.maximum(np.asarray(nodes) - K, 0.0)


def bs_pde_price(S0: float, K: float, T: float, sigma: float, r: float,
                 s_min: float | None = None, s_max: float | None = None,
                 n_cells: int = 400, scheme=None) -> float:
    """European call value from the semigroup applied to the payoff.

    The payoff is interpolated at the nodes and the evolved state is read
    off at ``S0`` by linear interpolation.
    """
    from . import engines
    from .form_core import associate

    s_min = K / 8 if s_min is None else s_min
    s_max = 4 * K if s_max is None else s_max
    t = assemble_black_scholes(sigma, r, s_min, s_max, n_cells)
    op = associate(t)
    nodes = t.meta["nodes"]
    u0 = call_payoff(nodes, K)
    if scheme is None:
        scheme = engines.SemigroupScheme.spectral() if op.selfadjoint else engines.SemigroupScheme.dense_exp()
    uT = engines.evolve(op, u0, T, scheme)
    xs = np.concatenate([[s_min], nodes, [s_max]])
    ys = np.concatenate([[0.0], np.real(uT), [0.0]])
    return float(np.interp(S0, xs, ys))


# --------------------------------------------------------------------------
# 2D assembly
# --------------------------------------------------------------------------


def _triangle_geometry(mesh: Mesh2D):
    p = mesh.points[mesh.triangles]  # (E, 3, 2)
    d1 = p[:, 1] - p[:, 0]
    d2 = p[:, 2] - p[:, 0]
    det = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    area = 0.5 * np.abs(det)
    # gradients of barycentric coordinates, shape (E, 3, 2)
    g1 = np.column_stack([d2[:, 1], -d2[:, 0]]) / det[:, None]
    g2 = np.column_stack([-d1[:, 1], d1[:, 0]]) / det[:, None]
    grads = np.stack([-g1 - g2, g1, g2], axis=1)
    return area, grads


def _scatter2d(mesh: Mesh2D, local):
    n = mesh.n_nodes
    t = mesh.triangles
    rows = np.repeat(t, 3, axis=1)
    cols = np.tile(t, (1, 3))
    out = np.zeros((n, n))
    np.add.at(out, (rows.ravel(), cols.ravel()), local.reshape(-1))
    return out


def rect_matrices(mesh: Mesh2D, co: Coefficients2D, lumped: bool = True):
    """Full-node matrices (F, mass, unit stiffness) before boundary treatment."""
    area, g = _triangle_geometry(mesh)
    # F_loc[l, k] = area * g_k^T A g_l
    stiff = area[:, None, None] * np.einsum("eki,eij,elj->elk", g, co.a, g)
    drift = (area / 3)[:, None, None] * np.broadcast_to(
        np.einsum("ej,ekj->ek", co.b, g)[:, None, :], (area.size, 3, 3))
    react = np.einsum("e,ij->eij", co.c * area / 3, np.eye(3))
    F = _scatter2d(mesh, stiff + drift + react)
    unit = _scatter2d(mesh, area[:, None, None] * np.einsum("eki,eli->elk", g, g))
    if lumped:
        mass = _scatter2d(mesh, np.einsum("e,ij->eij", area / 3, np.eye(3)))
    else:
        mass = _scatter2d(mesh, np.einsum("e,ij->eij", area / 12, np.ones((3, 3)) + np.eye(3)))
    return F, mass, unit


def assemble_rect(mesh: Mesh2D, co: Coefficients2D, bc: str = DIRICHLET, lumped: bool = True) -> FormTriple:
    bc = _check_bc(bc)
    co.check()
    F, mass, unit = rect_matrices(mesh, co, lumped)
    keep = mesh.interior if bc == DIRICHLET else np.arange(mesh.n_nodes)
    sel = np.ix_(keep, keep)
    F, M = F[sel], mass[sel]
    w = _pick_omega(F, M, 0.0)
    if w is None:
        raise CoefficientViolation("no shift makes the assembled form elliptic")
    meta = {"kind": "rect", "bc": bc, "lumped": lumped, "nodes": mesh.points[keep]}
    return FormTriple(F=F, J=np.eye(keep.size), M_H=M, G_V=unit[sel] + M, omega=w, meta=meta)


def neumann_heat_2d(nx: int, ny: int | None = None, lumped: bool = True) -> FormTriple:
    mesh = Mesh2D.unit_square(nx, ny)
    return assemble_rect(mesh, Coefficients2D.from_functions(mesh), NEUMANN, lumped)


def partially_degenerate_2d(nx: int, ny: int | None = None, x_cut: float = 0.5) -> FormTriple:
    """Neumann diffusion on the unit square with ``a_ij = 0`` left of ``x_cut``."""
    mesh = Mesh2D.unit_square(nx, ny)
    co = Coefficients2D.from_functions(mesh, a=lambda x, y: np.eye(2) * (x > x_cut))
    return assemble_rect(mesh, co, NEUMANN)


def element_cone_angle(co: Coefficients2D) -> float:
    """Largest half-angle of the sets ``{xi^* A(x) xi}`` over all elements."""
    worst = 0.0
    for a in co.a:
        h = 0.5 * (a + a.T)
        k = (0.5 * (a - a.T)) / 1j
        if np.allclose(k, 0):
            continue
        w = np.linalg.eigvalsh(h)
        if w[0] <= 0:
            return math.pi / 2
        lh = np.linalg.cholesky(h)
        li = np.linalg.inv(lh)
        rho = np.abs(np.linalg.eigvalsh(li @ k @ li.conj().T)).max()
        worst = max(worst, math.atan(rho))
    return worst


# --------------------------------------------------------------------------
# Dirichlet-to-Neumann
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DtNProblem:
    """Mesh plus the boundary measure realized as a boundary mass matrix."""

    mesh: Mesh1D | Mesh2D
    boundary_mass: np.ndarray

    @property
    def boundary(self) -> np.ndarray:
        if isinstance(self.mesh, Mesh1D):
            return np.array([0, self.mesh.nodes.size - 1])
        return self.mesh.boundary

    @classmethod
    def from_mesh(cls, mesh, lumped: bool = True) -> DtNProblem:
        """Counting measure on the two endpoints in 1D; P1 edge mass in 2D."""
        if isinstance(mesh, Mesh1D):
            return cls(mesh, np.eye(2))
        b = mesh.boundary
        pos = {node: k for k, node in enumerate(b)}
        mb = np.zeros((b.size, b.size))
        for i, j in mesh.boundary_edges():
            ln = float(np.linalg.norm(mesh.points[i] - mesh.points[j]))
            p, q = pos[i], pos[j]
            if lumped:
                mb[p, p] += ln / 2
                mb[q, q] += ln / 2
            else:
                mb[np.ix_([p, q], [p, q])] += ln / 6 * np.array([[2.0, 1.0], [1.0, 2.0]])
        return cls(mesh, mb)


def _full_stiffness(mesh):
    if isinstance(mesh, Mesh1D):
        co = Coefficients1D.from_functions(mesh, 1.0)
        _, mass, stiff = _interval_matrices(mesh, co, True)
        return stiff, mass
    co = Coefficients2D.from_functions(mesh)
    _, mass, unit = rect_matrices(mesh, co, True)
    return unit, mass


def assemble_dtn(p: DtNProblem) -> FormTriple:
    """Triple ``(int grad u . grad v, u -> u|boundary)`` on L2 of the boundary.

    ``j`` discards interior values, so it is far from injective.
    """
    K, mass = _full_stiffness(p.mesh)
    b = p.boundary
    n = K.shape[0]
    J = np.zeros((b.size, n))
    J[np.arange(b.size), b] = 1.0
    mb = np.asarray(p.boundary_mass, dtype=float)
    if not _linalg.is_positive_definite(K + J.T @ mb @ J):
        raise DisconnectedMesh("stiffness plus boundary mass is not positive definite")
    meta = {"kind": "dtn", "boundary": b, "points": (p.mesh.nodes[b] if isinstance(p.mesh, Mesh1D)
                                                      else p.mesh.points[b])}
    return FormTriple(F=K, J=J, M_H=mb, G_V=K + mass, omega=1.0, meta=meta)


def dtn_schur_reference(F, boundary, M_boundary=None) -> np.ndarray:
    """``M^{-1}(F_bb - F_bi F_ii^{-1} F_ib)`` by dense block elimination."""
    F = np.asarray(F)
    b = np.asarray(boundary, dtype=int)
    i = np.setdiff1d(np.arange(F.shape[0]), b)
    s = F[np.ix_(b, b)]
    if i.size:
        fii = F[np.ix_(i, i)]
        if np.linalg.matrix_rank(fii) < i.size:
            raise SingularInterior("interior block is singular")
        s = s - F[np.ix_(b, i)] @ np.linalg.solve(fii, F[np.ix_(i, b)])
    if M_boundary is not None:
        s = np.linalg.solve(M_boundary, s)
    return s


# --------------------------------------------------------------------------
# JSON problem descriptions
# --------------------------------------------------------------------------

PROBLEM_KINDS = ("interval", "black_scholes", "rect", "dtn")


def _per_element(value, count, name):
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        return np.full(count, float(arr))
    if arr.shape != (count,):
        raise ValueError(f"coefficient {name!r} needs a scalar or {count} per-element values")
    return arr


def mesh_from_dict(d: dict):
    """``{"domain": [a, b], "cells": N}`` or ``{"nodes": [...]}`` in 1D;
    ``{"domain": [[x0, x1], [y0, y1]], "cells": [nx, ny]}`` in 2D."""
    if "nodes" in d:
        return Mesh1D(np.asarray(d["nodes"], dtype=float))
    dom = d.get("domain", [0.0, 1.0])
    cells = d.get("cells", 16)
    if np.ndim(dom) == 1:
        return Mesh1D.uniform(float(dom[0]), float(dom[1]), int(cells))
    (x0, x1), (y0, y1) = dom
    nx, ny = (cells, cells) if np.ndim(cells) == 0 else cells
    return Mesh2D(float(x0), float(x1), float(y0), float(y1), int(nx), int(ny))


def triple_from_problem(d: dict) -> FormTriple:
    """Assemble a triple from a JSON problem description.

    ``problem`` selects the kind: ``interval`` (coefficients ``alpha``,
    ``beta``, ``gamma``, ``c1``), ``rect`` (``a_ij``, ``b``, ``c``, ``c1``),
    ``black_scholes`` (``sigma``, ``r``, ``K``) or ``dtn``.  Coefficients are
    scalars or per-element lists.
    """
    kind = d.get("problem", "interval")
    if kind not in PROBLEM_KINDS:
        raise ValueError(f"unknown problem {kind!r}; expected one of {PROBLEM_KINDS}")
    lumped = bool(d.get("lumped", True))
    co = d.get("coefficients", {})
    if kind == "black_scholes":
        K = float(d.get("K", 100.0))
        lo, hi = d.get("domain", [K / 8, 4 * K])
        return assemble_black_scholes(float(d["sigma"]), float(d["r"]), float(lo), float(hi),
                                      int(d.get("cells", 400)), lumped)
    mesh = mesh_from_dict(d)
    if kind == "dtn":
        return assemble_dtn(DtNProblem.from_mesh(mesh, lumped))
    bc = d.get("bc", DIRICHLET)
    if kind == "interval":
        if not isinstance(mesh, Mesh1D):
            raise ValueError("interval problem needs a 1D domain")
        n = mesh.n_cells
        coeffs = Coefficients1D(_per_element(co.get("alpha", 1.0), n, "alpha"),
                                _per_element(co.get("beta", 0.0), n, "beta"),
                                _per_element(co.get("gamma", 0.0), n, "gamma"),
                                c1=float(co.get("c1", 0.0)))
        return assemble_interval(mesh, coeffs, bc, lumped, c=float(d.get("c", 1.0)))
    if not isinstance(mesh, Mesh2D):
        raise ValueError("rect problem needs a 2D domain")
    e = mesh.triangles.shape[0]
    a = np.asarray(co.get("a_ij", np.eye(2)), dtype=float)
    b = np.asarray(co.get("b", [0.0, 0.0]), dtype=float)
    c = _per_element(co.get("c", 0.0), e, "c")
    a = np.broadcast_to(a, (e, 2, 2)) if a.shape == (2, 2) else a
    b = np.broadcast_to(b, (e, 2)) if b.shape == (2,) else b
    return assemble_rect(mesh, Coefficients2D(a, b, c, c1=float(co.get("c1", 0.0))), bc, lumped)
