import json

import numpy as np
import pytest

from formsemigroups import FormTriple, identity_triple
from formsemigroups.cli import main

DRIFT = json.dumps({"problem": "interval", "domain": [0, 1], "cells": 16,
                    "coefficients": {"alpha": 1, "beta": 1, "gamma": 0, "c1": 1}})
HEAT = json.dumps({"problem": "interval", "domain": [0, 1], "cells": 16})


def test_verify_identity_exit_0(capsys):
    assert main(["verify", "--problem", identity_triple(2).to_json()]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "PASS" in out


def test_verify_minus_identity_exit_1(capsys):
    t = FormTriple(F=-np.eye(2), J=np.eye(2), M_H=np.eye(2), G_V=np.eye(2), omega=2.0)
    assert main(["verify", "--problem", t.to_json()]) == 1
    table = capsys.readouterr().out
    assert any(line.startswith("accretive") and "FAIL" in line for line in table.splitlines())


def test_verify_drift_exit_0(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--problem", DRIFT, "--out", str(out), "--seed", "7"]) == 0
    d = json.loads(out.read_text())
    assert d["config"]["seed"] == 7 and d["passed"]


def test_verify_deterministic(tmp_path):
    p = tmp_path / "r.json"
    runs = []
    for _ in range(2):
        main(["verify", "--problem", DRIFT, "--out", str(p), "--seed", "1", "--samples", "50"])
        runs.append(p.read_bytes())
    assert runs[0] == runs[1]


@pytest.mark.parametrize("argv", [
    ["verify", "--problem", "{broken"],
    ["verify", "--problem", "/nonexistent/problem.json"],
    ["verify"],
    ["evolve", "--problem", HEAT, "--t", "a,b"],
    ["verify", "--problem", HEAT, "--scheme", "rk4"],
    ["frobnicate"],
])
def test_input_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"problem": HEAT, "t": "0.5", "scheme": "exp"}))
    assert main(["evolve", "--config", str(cfg), "--t", "0.1,0.2"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert [r.split(",")[0] for r in rows[1:]] == ["0.10000000000000001", "0.20000000000000001"]
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["evolve", "--config", str(cfg)]) == 2


def test_evolve_zero_operator_constant(capsys):
    t = FormTriple(F=np.zeros((2, 2)), J=np.eye(2), M_H=np.eye(2), G_V=np.eye(2), omega=1.0)
    assert main(["evolve", "--problem", t.to_json(), "--t", "0,1,10", "--scheme", "exp"]) == 0
    rows = [r.split(",") for r in capsys.readouterr().out.splitlines()[1:]]
    assert all(r[1:3] == ["1", "1"] for r in rows)


def test_evolve_heat_norm_decays_and_compare(capsys):
    assert main(["evolve", "--problem", HEAT, "--scheme", "spectral", "--t", "0.1,0.2,0.4",
                 "--compare", "spectral"]) == 0
    lines = capsys.readouterr().out.splitlines()
    header = lines[0].split(",")
    assert header[-2:] == ["m_norm", "delta_spectral"]
    norms = [float(r.split(",")[-2]) for r in lines[1:]]
    assert norms[0] > norms[1] > norms[2]
    assert all(float(r.split(",")[-1]) == 0.0 for r in lines[1:])


def test_evolve_payoff_state(capsys):
    p = json.dumps({"problem": "black_scholes", "sigma": 0.2, "r": 0.05, "cells": 40})
    assert main(["evolve", "--problem", p, "--x0", "payoff", "--scheme", "exp", "--t", "0.5"]) == 0


def test_dtn_1d_and_2d(tmp_path):
    out = tmp_path / "d.json"
    assert main(["dtn", "--problem", json.dumps({"domain": [0, 1], "cells": 5}), "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert np.allclose(d["matrix"], [[1, -1], [-1, 1]], atol=1e-12) and d["schur_delta"] <= 1e-12
    assert main(["dtn", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["schur_delta"] <= 1e-9 and d["zero_eigenvalues"] == 1


def test_bs_acceptance_and_bounds(tmp_path):
    out = tmp_path / "bs.json"
    assert main(["bs", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["relative_error"] <= 0.01
    assert main(["bs", "--bound", "1e-9", "--out", str(out)]) == 1
    assert main(["bs", "--sigma", "-1"]) == 2


def test_bs_zero_maturity(tmp_path):
    out = tmp_path / "bs.json"
    assert main(["bs", "--T", "0", "--S0", "110", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["relative_error"] <= 1e-6


def test_bs_symmetric_fast_path(tmp_path):
    out = tmp_path / "bs.json"
    main(["bs", "--sigma", "0.2", "--r", "0.04", "--out", str(out)])
    d = json.loads(out.read_text())
    assert d["symmetric"] and d["scheme"] == "spectral"


def test_convergence_table(capsys):
    assert main(["convergence", "--problem", HEAT, "--steps", "8", "--t", "0.1"]) == 0
    rows = capsys.readouterr().out.splitlines()
    ratios = [float(r.split(",")[3]) for r in rows if r.startswith("euler")][1:]
    assert all(1.5 <= q <= 2.5 for q in ratios)
