"""Command-line front end.

Subcommands: ``verify``, ``evolve``, ``dtn``, ``bs``, ``convergence``.
Configuration precedence is flags > ``--config`` file > built-in defaults.
Exit codes: 0 success, 1 a check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import engines, gallery, verification
from .errors import FormError
from .form_core import FormTriple, associate

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    problem: str | None = None
    scheme: str | None = None
    steps: int = 64
    lam: float = 1000.0
    t: list = field(default_factory=lambda: [0.1, 0.5, 1.0])
    theta: float | None = None
    tol: float = 1e-10
    seed: int = 0
    out: str | None = None
    x0: str | None = None
    compare: str | None = None
    samples: int = 1000
    sigma: float = 0.2
    r: float = 0.05
    K: float = 100.0
    T: float = 1.0
    S0: float = 100.0
    cells: int = 400
    bound: float = 0.01

    def __post_init__(self):
        if not self.t:
            raise InputError("time grid must be nonempty")
        if any(v < 0 for v in self.t):
            raise InputError("times must be nonnegative")


def _parse_times(text):
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"bad time grid {text!r}") from exc


def load_json_arg(text: str):
    """Inline JSON (starting with ``{`` or ``[``) or a path to a JSON file."""
    s = text.strip()
    try:
        if s.startswith("{") or s.startswith("["):
            return json.loads(s)
        return json.loads(Path(s).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {text!r}: {exc}") from exc


def load_triple(problem: str | None) -> tuple[FormTriple, dict]:
    if problem is None:
        raise InputError("--problem is required")
    d = load_json_arg(problem)
    if not isinstance(d, dict):
        raise InputError("problem must be a JSON object")
    try:
        if "F" in d:
            return FormTriple.from_dict(d), d
        return gallery.triple_from_problem(d), d
    except (KeyError, TypeError, ValueError, FormError) as exc:
        raise InputError(f"invalid problem: {exc}") from exc


def make_scheme(cfg: RunConfig, op=None, t=1.0, name=None):
    name = name or cfg.scheme
    if name is None:
        return engines.default_scheme(op, t, cfg.tol)
    if name == "euler":
        return engines.SemigroupScheme.euler(cfg.steps, tol=max(cfg.tol, 1.0 / cfg.steps))
    if name == "yosida":
        return engines.SemigroupScheme.yosida(cfg.lam, tol=max(cfg.tol, 1.0 / cfg.lam))
    if name == "spectral":
        return engines.SemigroupScheme.spectral(cfg.tol)
    if name == "exp":
        return engines.SemigroupScheme.dense_exp(max(cfg.tol, 1e-8))
    raise InputError(f"unknown scheme {name!r}")


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _config_dict(cfg: RunConfig) -> dict:
    return {k: v for k, v in asdict(cfg).items() if v is not None}


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_verify(cfg: RunConfig) -> int:
    triple, _ = load_triple(cfg.problem)
    scheme = None
    if cfg.scheme is not None:
        scheme = make_scheme(cfg)
    rep = verification.verify_triple(triple, t_grid=tuple(cfg.t), scheme=scheme, samples=cfg.samples,
                                     seed=cfg.seed, tol=cfg.tol, theta=cfg.theta)
    print(rep.table())
    text = rep.to_json(config=_config_dict(cfg))
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _initial_state(cfg: RunConfig, op, triple):
    kind = cfg.x0 or "ones"
    if kind == "ones":
        return np.ones(op.m)
    if kind == "eigen1":
        return engines.spectral_decompose(op).eigenvectors[:, 0]
    if kind == "payoff":
        return gallery.call_payoff(triple.meta["nodes"], cfg.K)
    x = np.asarray(load_json_arg(kind), dtype=float)
    if x.shape != (op.m,):
        raise InputError(f"x0 must have length {op.m}")
    return x


def cmd_evolve(cfg: RunConfig) -> int:
    triple, _ = load_triple(cfg.problem)
    op = associate(triple)
    try:
        x0 = _initial_state(cfg, op, triple)
    except (KeyError, FormError) as exc:
        raise InputError(f"cannot build initial state {cfg.x0!r}: {exc}") from exc
    times = sorted(set(cfg.t))
    scheme = make_scheme(cfg, op, max(times))
    res = engines.evolve_grid(op, x0, times, scheme)
    extra = {"m_norm": [op.m_norm(x) for x in res.states]}
    if cfg.compare:
        other = make_scheme(cfg, op, max(times), cfg.compare)
        alt = engines.evolve_grid(op, x0, times, other)
        extra[f"delta_{cfg.compare}"] = [op.m_norm(a - b) for a, b in zip(alt.states, res.states)]
    _emit(cfg, res.to_csv(extra))
    return EXIT_OK


def cmd_dtn(cfg: RunConfig) -> int:
    d = load_json_arg(cfg.problem) if cfg.problem else {"domain": [[0, 1], [0, 1]], "cells": [8, 8]}
    d = dict(d, problem="dtn")
    try:
        triple = gallery.triple_from_problem(d)
    except (KeyError, TypeError, ValueError, FormError) as exc:
        raise InputError(f"invalid problem: {exc}") from exc
    op = associate(triple)
    d0 = op.matrix
    ref = gallery.dtn_schur_reference(triple.F, triple.meta["boundary"], triple.M_H)
    delta = float(np.abs(d0 - ref).max())
    eigs = engines.spectral_decompose(op).eigenvalues
    n_zero = int(np.sum(np.abs(eigs) <= 1e-10))
    sub = verification.check_submarkovian(op, cfg.t, engines.SemigroupScheme.spectral())
    ok = delta <= 1e-9 and n_zero == 1 and eigs.min() >= -1e-10 and sub.passed
    out = {
        "matrix": d0.tolist(),
        "spectrum": eigs.tolist(),
        "schur_delta": delta,
        "zero_eigenvalues": n_zero,
        "checks": [sub.to_dict()],
        "passed": bool(ok),
        "config": _config_dict(cfg),
    }
    _emit(cfg, json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bs(cfg: RunConfig) -> int:
    if cfg.problem:
        d = load_json_arg(cfg.problem)
        for k in ("sigma", "r", "K", "T", "S0", "cells"):
            if k in d:
                setattr(cfg, k, type(getattr(cfg, k))(d[k]))
    if min(cfg.sigma, cfg.K, cfg.S0) <= 0 or cfg.T < 0:
        raise InputError("sigma, K, S0 must be positive and T nonnegative")
    ref = gallery.bs_reference_price(cfg.S0, cfg.K, cfg.T, cfg.sigma, cfg.r)
    t = gallery.assemble_black_scholes(cfg.sigma, cfg.r, cfg.K / 8, 4 * cfg.K, cfg.cells)
    op = associate(t)
    scheme = make_scheme(cfg, op, cfg.T, cfg.scheme or ("spectral" if op.selfadjoint else "exp"))
    price = gallery.bs_pde_price(cfg.S0, cfg.K, cfg.T, cfg.sigma, cfg.r, n_cells=cfg.cells, scheme=scheme)
    err = abs(price - ref) / ref if ref > 0 else abs(price - ref)
    out = {"pde_price": price, "reference_price": ref, "relative_error": err, "bound": cfg.bound,
           "symmetric": bool(op.selfadjoint), "scheme": scheme.label(), "config": _config_dict(cfg)}
    _emit(cfg, json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK if err <= cfg.bound else EXIT_FAIL


def cmd_convergence(cfg: RunConfig) -> int:
    """Error table of Euler and Yosida against the exact semigroup."""
    triple, _ = load_triple(cfg.problem)
    op = associate(triple)
    t = cfg.t[0]
    exact_scheme = engines.SemigroupScheme.spectral() if op.selfadjoint else engines.SemigroupScheme.dense_exp()
    x0 = _initial_state(cfg, op, triple) if cfg.x0 or not op.selfadjoint else \
        engines.spectral_decompose(op).eigenvectors[:, 0]
    exact = engines.evolve(op, x0, t, exact_scheme)
    rows = ["scheme,parameter,error,ratio"]
    prev = None
    for n in (cfg.steps * 2**k for k in range(4)):
        e = op.m_norm(engines.euler_evolve(op, x0, t, n) - exact)
        rows.append(f"euler,{n},{e:.17g},{(prev / e) if prev and e else float('nan'):.17g}")
        prev = e
    prev = None
    for lam in (cfg.lam / 100, cfg.lam / 10, cfg.lam):
        e = op.m_norm(engines.yosida_evolve(op, x0, t, lam) - exact)
        rows.append(f"yosida,{lam:g},{e:.17g},{(prev / e) if prev and e else float('nan'):.17g}")
        prev = e
    _emit(cfg, "\n".join(rows) + "\n")
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "evolve": cmd_evolve, "dtn": cmd_dtn, "bs": cmd_bs,
            "convergence": cmd_convergence}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="formsemigroups", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="JSON file with default settings")
    p.add_argument("--problem", help="problem JSON (inline or path)")
    p.add_argument("--scheme", choices=["euler", "yosida", "spectral", "exp"])
    p.add_argument("--steps", type=int)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--t", help="comma-separated time grid")
    p.add_argument("--theta", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--x0", help="ones | eigen1 | payoff | JSON vector")
    p.add_argument("--compare", choices=["euler", "yosida", "spectral", "exp"])
    p.add_argument("--samples", type=int)
    p.add_argument("--sigma", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--K", type=float)
    p.add_argument("--T", type=float)
    p.add_argument("--S0", type=float)
    p.add_argument("--cells", type=int)
    p.add_argument("--bound", type=float)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    merged = {}
    if ns.config:
        file_cfg = load_json_arg(ns.config)
        if not isinstance(file_cfg, dict):
            raise InputError("--config must hold a JSON object")
        merged.update(file_cfg)
    for k, v in vars(ns).items():
        if k not in ("config", "command") and v is not None:
            merged[k] = v
    if "lambda" in merged:
        merged["lam"] = merged.pop("lambda")
    if isinstance(merged.get("t"), str):
        merged["t"] = _parse_times(merged["t"])
    if isinstance(merged.get("problem"), dict):
        merged["problem"] = json.dumps(merged["problem"])
    known = set(RunConfig.__dataclass_fields__) - {"command"}
    unknown = set(merged) - known
    if unknown:
        raise InputError(f"unknown configuration keys: {sorted(unknown)}")
    return RunConfig(command=ns.command, **merged)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FormError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
