import csv
import json

import pytest

from arnold_torus import cli
from arnold_torus.dynamics import NoConvergence
from arnold_torus.report import canonical

SMALL = "n: 1\nN: 4\nhamiltonian: {h}\ngrid: 3\nrandom_seeds: 1\nbound_samples: 200\nlambda_grid: [0, 0.5, 1]\n"


@pytest.fixture
def config(tmp_path):
    def make(h="cosine-morse", extra=""):
        p = tmp_path / f"{h}.yaml"
        p.write_text(SMALL.format(h=h) + extra)
        return p
    return make


def _run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("command", ["solve", "homotopy", "bound", "filtration"])
def test_commands_pass(command, config, tmp_path, capsys):
    out = tmp_path / f"{command}.json"
    code, _, err = _run([command, "--config", config(), "--out", out], capsys)
    assert code == 0, err
    rep = json.loads(out.read_text())
    assert rep["verdict"] == "pass" and rep["status"] == "ok"
    assert all(rep["checks"].values())
    assert "timing" in rep and rep["config"]["N"] == 4
    assert "verdict: pass" in err


def test_solve_report_contents(config, tmp_path, capsys):
    out = tmp_path / "r.json"
    _run(["solve", "--config", config(), "--out", out], capsys)
    rep = json.loads(out.read_text())
    assert rep["arnold"]["count"] == 4 and rep["arnold"]["lower_bound"] == 3
    assert rep["orbits"]["count"] == 4
    assert rep["bound"]["R"] >= rep["orbits"]["max_norm"]
    assert rep["cuplength"]["torus"]["value"] == 3
    assert rep["versions"]["arnold_torus"]
    assert rep["schema_version"] == 1


def test_cuplength_without_config(capsys):
    code, out, _ = _run(["cuplength", "--n", "2"], capsys)
    assert code == 0
    assert json.loads(out)["cuplength"]["certificates"]["torus"]["value"] == 5


def test_selfcheck(capsys):
    code, out, _ = _run(["selfcheck"], capsys)
    assert code == 0
    assert {r["name"] for r in json.loads(out)["selfcheck"]} >= {"loops", "action", "topology"}


def test_missing_field_is_usage_error(tmp_path, capsys):
    p = tmp_path / "bad.yaml"
    p.write_text("n: 1\nhamiltonian: zero\n")
    code, _, err = _run(["solve", "--config", p], capsys)
    assert code == 2
    assert "N" in err and "missing" in err


def test_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["solve"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        cli.main(["frobnicate"])
    code, _, _ = _run(["solve", "--config", tmp_path / "nope.yaml"], capsys)
    assert code == 2


def test_bad_thread_env(config, monkeypatch, capsys):
    monkeypatch.setenv(cli.THREADS_ENV, "many")
    code, _, err = _run(["solve", "--config", config()], capsys)
    assert code == 2 and cli.THREADS_ENV in err


def test_thread_precedence(config, monkeypatch, tmp_path, capsys):
    seen = []
    real = cli.run

    def spy(command, cfg, n=1):
        seen.append(cfg.threads)
        return real(command, cfg, n)

    monkeypatch.setattr(cli, "run", spy)
    cfg = config(extra="threads: 2\n")
    _run(["cuplength", "--config", cfg], capsys)
    monkeypatch.setenv(cli.THREADS_ENV, "3")
    _run(["cuplength", "--config", cfg], capsys)
    _run(["cuplength", "--config", cfg, "--threads", "4"], capsys)
    assert seen == [2, 3, 4]


def test_numerical_failure_writes_partial_report(config, monkeypatch, tmp_path, capsys):
    def boom(*a, **k):
        raise NoConvergence("synthetic", 1.0, 3)

    monkeypatch.setattr(cli, "verify_orbit", boom)
    out = tmp_path / "r.json"
    code, _, _ = _run(["solve", "--config", config(), "--out", out], capsys)
    assert code == 3
    rep = json.loads(out.read_text())
    assert rep["status"] == "numerical-failure" and "synthetic" in rep["error"]
    assert rep["verdict"] == "fail"
    assert "orbits" not in rep  # assembled only after verification


def test_verdict_failure_exit_code(config, monkeypatch, capsys):
    real = cli.cmd_cuplength

    def broken(cfg, report, n=1):
        real(cfg, report, n)
        report.checks["cuplength_torus"] = False

    monkeypatch.setattr(cli, "cmd_cuplength", broken)
    code, _, err = _run(["cuplength"], capsys)
    assert code == 1
    assert "FAIL cuplength_torus" in err


def test_csv_and_figures(config, tmp_path, capsys):
    d = tmp_path / "csv"
    code, _, _ = _run(["solve", "--config", config(), "--out", tmp_path / "r.json", "--csv", d], capsys)
    assert code == 0
    rows = list(csv.DictReader((d / "orbits.csv").open()))
    assert len(rows) == 4 and {"action", "residual", "x0_1", "x0_2"} <= set(rows[0])
    traj = [float(r["action"]) for r in csv.DictReader((d / "trajectory.csv").open())]
    assert all(b <= a + 1e-10 * (1 + abs(a)) for a, b in zip(traj, traj[1:]))
    assert (d / "orbits.png").stat().st_size > 0 and (d / "trajectory.png").exists()

    d2 = tmp_path / "csv2"
    _run(["homotopy", "--config", config(), "--out", tmp_path / "h.json", "--csv", d2, "--no-figures"], capsys)
    assert (d2 / "homotopy.csv").exists() and not list(d2.glob("*.png"))


def test_determinism_via_cli(config, tmp_path, capsys, monkeypatch):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    _run(["solve", "--config", config("time-driven"), "--out", a], capsys)
    monkeypatch.setenv(cli.THREADS_ENV, "4")
    _run(["solve", "--config", config("time-driven"), "--out", b], capsys)
    assert canonical(a.read_text()) == canonical(b.read_text())
