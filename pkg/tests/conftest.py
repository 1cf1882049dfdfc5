import pytest

from arnold_torus.config import SolverConfig

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, title): acceptance criterion k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    k, title = mark.args
    ok, _ = _results.get(k, (True, title))
    if rep.failed or (rep.when == "call" and not rep.passed):
        ok = False
    _results[k] = (ok, title)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_results):
        ok, title = _results[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture
def cfg1():
    return SolverConfig(N=8, hamiltonian="cosine-morse")


@pytest.fixture
def cfg_small():
    return SolverConfig(N=4, hamiltonian="time-driven", grid=3, random_seeds=1)
