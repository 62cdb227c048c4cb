"""Command line interface: exit codes, artifacts, determinism."""

import json

import pytest

from robustcoord.cli import main
from robustcoord.scenarios import load_scenario
from robustcoord.seqpolicy import check_policy, policy_from_json


def run_cli(command, scenario, out, *extra):
    return main([command, "--scenario", scenario, "--out", str(out), *extra])


def test_design_artifacts(tmp_path):
    assert run_cli("design", "case1", tmp_path) == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert names == {"design.json", "policy.json", "figdata_scores.csv", "manifest.json"}

    dsn = json.loads((tmp_path / "design.json").read_text())
    assert dsn["threshold_label"] == "L"
    assert dsn["mixing_weight"] == pytest.approx(0.6842105263157894, abs=1e-15)
    assert dsn["expected_welfare"] == pytest.approx(8.052631578947368, abs=1e-12)
    assert dsn["invite_probabilities"][1] == 1.0

    scores = (tmp_path / "figdata_scores.csv").read_text().splitlines()
    assert scores[0] == "state,score,invite_prob"
    assert scores[1].startswith("L,-0.475")
    assert len(scores) == 3


def test_policy_json_round_trips(tmp_path):
    run_cli("design", "case1", tmp_path)
    pol = policy_from_json((tmp_path / "policy.json").read_text())
    env = load_scenario("case1").env
    assert check_policy(pol, env, tol=1e-9).passed


def test_check_artifacts(tmp_path):
    assert run_cli("check", "case1", tmp_path) == 0
    rep = json.loads((tmp_path / "obedience.json").read_text())
    assert rep["pass"] is True
    assert rep["feasible"] is True
    assert rep["tol"] == 1e-9


def test_lp_artifacts(tmp_path):
    assert run_cli("lp", "case1", tmp_path) == 0
    lp = json.loads((tmp_path / "lp.json").read_text())
    assert lp["status"] == "OPTIMAL"
    assert lp["value"] == pytest.approx(8.052631578947368, abs=1e-9)
    assert lp["agreement_gap"] <= 1e-9
    assert lp["n_vars"] == 32
    assert all(set(a) == {"state", "sequence", "prob"} for a in lp["assignment"])


def test_evaluate_artifacts(tmp_path):
    assert run_cli("evaluate", "case1", tmp_path) == 0
    pub = json.loads((tmp_path / "public.json").read_text())
    assert pub["private_sequential"]["welfare"] == pytest.approx(
        8.052631578947368, abs=1e-12
    )
    assert pub["public_counterfactual"]["welfare"] == 0.0
    assert pub["welfare_shortfall"] == pytest.approx(8.052631578947368, abs=1e-12)


def test_compare_artifacts(tmp_path):
    assert run_cli("compare", "case1", tmp_path) == 0
    lines = (tmp_path / "comparison.csv").read_text().splitlines()
    assert lines[0] == (
        "cost,robust_welfare,bce_predicted,bce_realized,theta_star,p_star,bce_threshold"
    )
    assert lines[1] == "2,8.052631579,9,0,L,0.6842105263,L"
    assert len(lines) == 2


def test_sweep_artifacts(tmp_path):
    assert run_cli("sweep", "case1", tmp_path) == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert names == {
        "sweep.csv",
        "figdata_welfare.csv",
        "sweep_summary.json",
        "manifest.json",
    }
    rows = (tmp_path / "sweep.csv").read_text().splitlines()[1:]
    assert len(rows) == 45
    robust = [float(r.split(",")[1]) for r in rows]
    assert all(a >= b for a, b in zip(robust, robust[1:]))

    summary = json.loads((tmp_path / "sweep_summary.json").read_text())
    assert summary["coincide_max_cost"] == 1.65
    assert summary["optimistic_zero_min_cost"] == 2.9

    fig = (tmp_path / "figdata_welfare.csv").read_text().splitlines()
    assert fig[0] == "cost,robust,bce_predicted,bce_realized"
    assert len(fig) == 46


def test_run_executes_all_modes(tmp_path):
    assert run_cli("run", "case1", tmp_path) == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert names == {
        "design.json",
        "policy.json",
        "figdata_scores.csv",
        "obedience.json",
        "lp.json",
        "comparison.csv",
        "public.json",
        "sweep.csv",
        "figdata_welfare.csv",
        "sweep_summary.json",
        "manifest.json",
    }
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["scenario"] == "case1"
    assert man["command"] == "run"
    assert man["modes"] == ["design", "check", "lp", "baselines", "public-counterfactual"]
    assert man["artifacts"] == sorted(names - {"manifest.json"})
    assert man["flags"] == {"tol": 1e-9, "strict": False, "seed": 0}
    assert "timestamp" in man


def test_manifest_written_even_for_empty_modes(tmp_path):
    cfg = {
        "schema": 1,
        "name": "noop",
        "n_agents": 2,
        "states": [{"label": "x", "prob": 1.0, "b": 2.0, "lambda": 0.5, "alpha": 1.0}],
        "cost": 1.0,
        "beta": 1.0,
        "modes": [],
    }
    path = tmp_path / "noop.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / "out"
    assert run_cli("run", str(path), out) == 0
    assert [p.name for p in out.iterdir()] == ["manifest.json"]


def test_repeat_runs_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run_cli("run", "case2", a) == 0
    assert run_cli("run", "case2", b) == 0
    for pa in sorted(a.iterdir()):
        pb = b / pa.name
        if pa.name == "manifest.json":
            da, db = json.loads(pa.read_text()), json.loads(pb.read_text())
            da.pop("timestamp"), db.pop("timestamp")
            assert da == db
        else:
            assert pa.read_bytes() == pb.read_bytes(), pa.name


def test_strict_assumption_failure_exits_1(tmp_path, capsys):
    # at cost 2 no grid state has benefit above cost, so dominance fails
    assert run_cli("design", "case2", tmp_path, "--strict") == 1
    assert "error:" in capsys.readouterr().err
    assert not (tmp_path / "manifest.json").exists()


def test_capacity_guard_exits_3(tmp_path):
    # case2 has ten agents; the ordered-sequence space exceeds the LP guard
    assert run_cli("lp", "case2", tmp_path) == 3


def test_input_errors_exit_2(tmp_path, capsys):
    assert run_cli("design", "nonesuch", tmp_path) == 2
    assert "unknown scenario" in capsys.readouterr().err

    cfg = {
        "schema": 1,
        "name": "bad",
        "n_agents": 2,
        "states": [{"label": "x", "prob": 0.7, "b": 2.0, "lambda": 0.5, "alpha": 1.0}],
        "cost": 1.0,
        "beta": 1.0,
        "modes": ["design"],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    assert run_cli("design", str(path), tmp_path / "o1") == 2
    assert "prior must sum to 1" in capsys.readouterr().err

    cfg["states"][0]["prob"] = 1.0
    cfg["surprise"] = True
    path.write_text(json.dumps(cfg))
    assert run_cli("design", str(path), tmp_path / "o2") == 2
    assert "surprise" in capsys.readouterr().err


def test_sweep_without_block_exits_2(tmp_path, capsys):
    cfg = {
        "schema": 1,
        "name": "nosweep",
        "n_agents": 2,
        "states": [{"label": "x", "prob": 1.0, "b": 2.0, "lambda": 0.5, "alpha": 1.0}],
        "cost": 1.0,
        "beta": 1.0,
        "modes": ["design"],
    }
    path = tmp_path / "scn.json"
    path.write_text(json.dumps(cfg))
    assert run_cli("sweep", str(path), tmp_path / "out") == 2
    assert "no sweep block" in capsys.readouterr().err


def test_tol_flag_reaches_checker(tmp_path):
    # an absurdly tight tolerance flips the obedience verdict on float dust
    assert run_cli("check", "case1", tmp_path, "--tol", "1e-18") == 0
    rep = json.loads((tmp_path / "obedience.json").read_text())
    assert rep["tol"] == 1e-18
