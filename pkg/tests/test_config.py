import json

import pytest

from arnold_torus.config import SCHEMA_VERSION, ConfigError, SolverConfig, dumps, from_mapping, load


def test_defaults_and_samples():
    cfg = SolverConfig(N=5, hamiltonian="cosine-morse")
    assert cfg.samples == 40
    assert cfg.replace(M=11).samples == 11
    assert cfg.schema_version == SCHEMA_VERSION


@pytest.mark.parametrize("data,field", [
    ({"hamiltonian": "zero"}, "N"),
    ({"N": 3}, "hamiltonian"),
    ({"N": 0, "hamiltonian": "zero"}, "N"),
    ({"N": 3, "M": 6, "hamiltonian": "zero"}, "M"),
    ({"N": 3, "hamiltonian": "zero", "tol_ode": 0}, "tol_ode"),
    ({"N": 3, "hamiltonian": "zero", "lambda_grid": [0.5, 0.1]}, "lambda_grid"),
    ({"N": 3, "hamiltonian": "zero", "bogus": 1}, "bogus"),
    ({"N": 3, "hamiltonian": "unknown"}, "hamiltonian"),
    ({"N": 3, "hamiltonian": {"terms": [{"c": 1.0, "m": [1]}]}}, "hamiltonian"),
    ({"N": 3, "hamiltonian": "zero", "schema_version": 99}, "schema_version"),
])
def test_errors_name_the_field(data, field):
    with pytest.raises(ConfigError) as exc:
        from_mapping(data)
    assert exc.value.path.startswith(field)


def test_yaml_load_and_string_floats(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text("N: 4\nhamiltonian: time-driven\ntol_residual: 1e-11\nlambda_grid: [0, 0.5, 1]\n")
    cfg = load(p)
    assert cfg.tol_residual == 1e-11
    assert cfg.lambda_grid == (0.0, 0.5, 1.0)
    assert cfg.build_hamiltonian().n == 1


def test_json_accepted_and_round_trip(tmp_path):
    cfg = SolverConfig(N=3, n=2, hamiltonian={"terms": [{"c": 0.1, "m": [1, 0, 0, 0]}]})
    p = tmp_path / "c.json"
    p.write_text(dumps(cfg))
    assert load(p) == cfg
    assert json.loads(dumps(cfg))["n"] == 2


def test_unparseable(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text("N: [1,\n")
    with pytest.raises(ConfigError):
        load(p)
    p.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        load(p)
