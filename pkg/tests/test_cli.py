"""Front-end behavior: JSON results, CSV output, error payloads, exit codes."""

import json
import subprocess
import sys

import numpy as np
import pytest

from wsngain.cli import main


def run_cli(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_optimize_default_json_shape(capsys):
    rc, out, err = run_cli(capsys, "optimize", "--n", "6", "--m", "2", "--seed", "3")
    assert rc == 0 and err == ""
    doc = json.loads(out)
    assert set(doc) == {"gains", "constraint", "variance", "eta_trace",
                        "outer_iters", "inner_iters_total", "wall_time_s"}
    assert doc["constraint"] == "energy"
    assert len(doc["gains"]) == 6
    gains = np.array([re + 1j * im for re, im in doc["gains"]])
    assert np.linalg.norm(gains) ** 2 == pytest.approx(6.0, rel=1e-9)
    etas = doc["eta_trace"]
    assert all(b <= a * (1 + 1e-9) for a, b in zip(etas, etas[1:]))
    assert doc["variance"] > 0


def test_optimize_phase_constraint(capsys):
    rc, out, _ = run_cli(capsys, "optimize", "--n", "5", "--m", "2",
                         "--constraint", "phase", "--seed", "1")
    assert rc == 0
    doc = json.loads(out)
    assert doc["constraint"] == "phase"
    mags = [abs(complex(re, im)) for re, im in doc["gains"]]
    assert mags == pytest.approx([1.0] * 5)


def test_gen_scenario_roundtrip_through_optimize(tmp_path, capsys):
    path = tmp_path / "scen.json"
    rc, out, _ = run_cli(capsys, "gen-scenario", "--n", "5", "--m", "3",
                         "--seed", "9", "--out", str(path))
    assert rc == 0
    doc = json.loads(path.read_text())
    assert doc["kind"] == "centralized" and doc["N"] == 5 and doc["M"] == 3
    results = []
    for _ in range(2):
        rc, out, _ = run_cli(capsys, "optimize", "--scenario", str(path),
                             "--constraint", "quant:4", "--seed", "2")
        assert rc == 0
        doc = json.loads(out)
        doc.pop("wall_time_s")
        results.append(doc)
    assert results[0] == results[1]


def test_gen_scenario_stdout(capsys):
    rc, out, _ = run_cli(capsys, "gen-scenario", "--kind", "decentralized",
                         "--n", "6", "--seed", "4")
    assert rc == 0
    doc = json.loads(out)
    assert doc["kind"] == "decentralized"
    assert len(doc["edges"]) >= 5


def test_optimize_decentralized_dump_plan(tmp_path, capsys):
    path = tmp_path / "scen.json"
    run_cli(capsys, "gen-scenario", "--kind", "decentralized", "--n", "7",
            "--seed", "5", "--out", str(path))
    rc, out, _ = run_cli(capsys, "optimize", "--scenario", str(path),
                         "--constraint", "energy", "--seed", "1", "--dump-plan")
    assert rc == 0
    doc = json.loads(out)
    plan = doc["plan"]
    assert set(plan) == {"carrier", "r", "m_dim"}
    assert plan["m_dim"] == 7
    assert len(plan["carrier"]) == 7


def test_simulate_consensus_csv_and_summary(tmp_path, capsys):
    csv_path = tmp_path / "trace.csv"
    rc, out, err = run_cli(capsys, "simulate-consensus", "--n", "6", "--seed", "2",
                           "--theta", "10", "--out", str(csv_path), "--dump-plan")
    assert rc == 0
    summary = json.loads(out)
    assert {"theta_hat", "analytic_variance", "iterations_to_tol"} <= set(summary)
    plan = json.loads(err)
    assert set(plan) == {"carrier", "r", "m_dim"}
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "iter,node,theta_hat_re,theta_hat_im,abs_err"
    assert len(lines) == 1 + 6 * (summary["iterations_to_tol"] + 1)


def test_simulate_consensus_rejects_centralized_scenario(tmp_path, capsys):
    path = tmp_path / "scen.json"
    run_cli(capsys, "gen-scenario", "--n", "4", "--seed", "1", "--out", str(path))
    rc, _, err = run_cli(capsys, "simulate-consensus", "--scenario", str(path))
    assert rc == 1
    payload = json.loads(err)
    assert payload["error"] == "InvalidConfig"
    assert "decentralized" in payload["message"]


def test_sweep_csv_is_byte_stable_without_runtime(tmp_path, capsys):
    texts = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        rc, out, _ = run_cli(capsys, "sweep", "--n", "4", "--realizations", "2",
                             "--seed", "6", "--no-runtime", "--out", str(path))
        assert rc == 0
        texts.append(path.read_bytes())
    assert texts[0] == texts[1]
    header = texts[0].decode().splitlines()[0]
    assert header == "N,method,mean_variance,mean_runtime_s,realizations,failures"


def test_oracle_gap_comment_line(capsys):
    rc, out, _ = run_cli(capsys, "oracle-gap", "--n", "2", "--realizations", "2",
                         "--seed", "3")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0].startswith("# oracle: ")
    assert "success_rate" in lines[0]
    assert lines[1] == "seed,N,variance_opt,variance_best,ratio,hit"
    assert len(lines) == 4


def test_select_subcommand_runs_small(capsys):
    rc, out, _ = run_cli(capsys, "select", "--n", "6", "--sigma-grid", "1.0",
                         "--realizations", "2", "--constraint", "select:2", "--seed", "4")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "sigma_n2,method,mean_variance"
    methods = [line.split(",")[1] for line in lines[1:]]
    assert methods == ["proposed", "greedy", "min-sensor-noise", "all-N"]


def test_config_file_overrides(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"restarts": 3, "channel_noise_var": 2.0}))
    rc, out, _ = run_cli(capsys, "optimize", "--n", "4", "--m", "2",
                         "--config", str(cfg), "--seed", "1")
    assert rc == 0
    assert json.loads(out)["variance"] > 0


def test_unknown_config_key_fails_cleanly(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"restarts": 3, "warp_factor": 9}))
    rc, _, err = run_cli(capsys, "optimize", "--n", "4", "--config", str(cfg))
    assert rc == 1
    payload = json.loads(err)
    assert payload["error"] == "InvalidConfig"
    assert "warp_factor" in payload["message"]


def test_bad_constraint_string_fails_cleanly(capsys):
    rc, _, err = run_cli(capsys, "optimize", "--n", "4", "--constraint", "power:2")
    assert rc == 1
    assert json.loads(err)["error"] == "InvalidConfig"


def test_console_entry_point():
    proc = subprocess.run(
        ["wsngain", "optimize", "--n", "3", "--m", "2", "--constraint", "phase"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["constraint"] == "phase"


def test_module_main_guard_matches_entry():
    # the parser is importable and wired to the same main used by the script
    from wsngain.cli import build_parser

    parser = build_parser()
    with pytest.raises(SystemExit):
        parser.parse_args(["no-such-command"])
    assert sys.modules["wsngain.cli"].main is main
