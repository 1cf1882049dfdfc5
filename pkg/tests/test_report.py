import json

import numpy as np
import pytest

from arnold_torus.config import SolverConfig
from arnold_torus.dynamics import OrbitSet, find_all
from arnold_torus.hamiltonian import cosine_morse
from arnold_torus.loops import FourierLoop
from arnold_torus.plotting import render_all
from arnold_torus.report import RunReport, canonical, export_csv, loop_from_record, loop_record, orbit_set_record


def test_loop_record_round_trip():
    x = FourierLoop.random(2, 3, np.random.default_rng(0))
    rec = json.loads(json.dumps(loop_record(x)))
    np.testing.assert_array_equal(loop_from_record(rec).coeffs, x.coeffs)


def test_verdict_tracks_checks():
    r = RunReport("solve", None, checks={"a": True, "b": True})
    assert r.verdict == "pass"
    r.checks["b"] = False
    assert r.verdict == "fail"
    r = RunReport("solve", None, checks={"a": True}, status="numerical-failure")
    assert not r.passed


def test_canonical_drops_timing_only():
    r = RunReport("solve", {"N": 1}, sections={"x": [1, 2]}, checks={"a": True})
    r.timing["total"] = 1.0
    a = r.to_json()
    r.timing["total"] = 2.0
    assert a != r.to_json()
    assert canonical(a) == canonical(r.to_json())
    assert "timing" not in json.loads(canonical(a))
    assert json.loads(canonical(a))["x"] == [1, 2]


def test_json_rejects_nan():
    with pytest.raises(ValueError):
        RunReport("solve", None, sections={"x": float("nan")}).to_json()


def test_empty_orbit_csv_is_header_only(tmp_path):
    report = {"config": {"n": 2}, "orbits": orbit_set_record(OrbitSet([], 1e-3, [], 0.0))}
    p = export_csv(report, "orbits", tmp_path)
    lines = p.read_text().splitlines()
    assert lines == ["index,action,residual,period_residual,norm,kernel_dim,x0_1,x0_2,x0_3,x0_4"]


def test_export_errors(tmp_path):
    with pytest.raises(KeyError):
        export_csv({"config": None}, "orbits", tmp_path)
    with pytest.raises(KeyError):
        export_csv({"config": None}, "trajectory", tmp_path)
    with pytest.raises(ValueError):
        export_csv({"config": None}, "spectra", tmp_path)


def test_figures_from_report(tmp_path):
    cfg = SolverConfig(N=4, hamiltonian="cosine-morse", grid=3, random_seeds=0)
    S = find_all(cosine_morse(1), cfg)
    report = {"config": cfg.to_dict(), "orbits": orbit_set_record(S)}
    paths = render_all(report, tmp_path)
    assert [p.name for p in paths] == ["orbits.png"]
    assert paths[0].read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
