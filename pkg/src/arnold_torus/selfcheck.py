"""Cheap invariant suites, one per module, run by ``arnold-torus selfcheck``.

Each check returns a :class:`CheckResult`; nothing here raises on failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List

import numpy as np


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _loops():
    from .loops import FourierLoop, evaluate, h12_inner, project, transform

    rng = np.random.default_rng(1)
    x = FourierLoop.random(2, 5, rng)
    y = FourierLoop.random(2, 5, rng)
    parts = [project(x, p) for p in ("zero", "plus", "minus")]
    recon = float(np.max(np.abs((parts[0] + parts[1] + parts[2]).coeffs - x.coeffs)))
    ortho = max(abs(h12_inner(parts[i], parts[j])) for i in range(3) for j in range(3) if i < j)
    sym = abs(h12_inner(x, y) - h12_inner(y, x))
    rt = float(np.max(np.abs(transform(evaluate(x, 32), 2, 5).coeffs - x.coeffs)))
    worst = max(recon, ortho, sym, rt)
    return worst < 1e-12, f"projection/orthogonality/roundtrip defect {worst:.2e}"


def _hamiltonian():
    from .hamiltonian import time_driven

    H = time_driven(1)
    rng = np.random.default_rng(2)
    x = rng.uniform(0, 1, 2)
    t = 0.3
    h = 1e-6
    fd = np.array([(H.eval(t, x + h * e) - H.eval(t, x - h * e)) / (2 * h) for e in np.eye(2)])
    err = float(np.max(np.abs(fd - H.grad(t, x))))
    period = abs(H.eval(t, x + np.array([1.0, -2.0])) - H.eval(t + 1.0, x))
    ok = err < 1e-8 and period < 1e-12 and abs(H.eval(t, x)) <= H.bounds().sup_h
    return ok, f"grad fd error {err:.2e}, periodicity defect {period:.2e}"


def _action():
    from .action import action_value, gradient
    from .hamiltonian import time_driven
    from .loops import FourierLoop, h12_inner

    H = time_driven(1)
    rng = np.random.default_rng(3)
    x = FourierLoop.random(1, 4, rng, scale=0.2)
    v = FourierLoop.random(1, 4, rng)
    h = 1e-6
    fd = (action_value(H, x + v * h) - action_value(H, x - v * h)) / (2 * h)
    an = h12_inner(gradient(H, x), v)
    rel = abs(fd - an) / max(abs(an), 1e-12)
    return rel < 1e-6, f"directional derivative relative error {rel:.2e}"


def _dynamics():
    from .config import SolverConfig
    from .dynamics import find_orbit
    from .hamiltonian import cosine_morse
    from .loops import FourierLoop

    cfg = SolverConfig(N=4, hamiltonian="cosine-morse")
    o = find_orbit(cosine_morse(1), FourierLoop.constant([0.48, 0.03], 4), cfg)
    dist = float(np.max(np.abs(o.loop.x0 - np.array([0.5, 0.0]))))
    return o.residual < cfg.tol_residual and dist < 1e-8, f"Newton residual {o.residual:.2e}, offset {dist:.2e}"


def _bounds():
    from .bounds import OmegaSpec, apriori_radius, soundness_check
    from .hamiltonian import HomotopyFamily, time_driven

    fam = HomotopyFamily(time_driven(1))
    om = OmegaSpec(4)
    b = apriori_radius(fam, 0.5, om)
    rep = soundness_check(fam, 0.5, om, samples=200, seed=4, lambdas=(0.0, 0.5))
    ok = rep.passed and b.R >= 2 * b.r0 > 0
    return ok, f"R = {b.R:.3f}, {rep.violations} violations in {rep.samples} samples"


def _topology():
    from .topology import GF2, cup_length, exterior_algebra, suspension_model, torus_index_module

    values = [cup_length(torus_index_module(n)[1]).value for n in (1, 2)]
    gf2 = cup_length(exterior_algebra(2, GF2).as_module()).value
    table = suspension_model(1, [0, 1, 2]).stable
    ok = values == [3, 5] and gf2 == 3 and table
    return ok, f"torus cup-lengths {values}, GF(2) {gf2}, suspension stable {table}"


def _config():
    from .config import ConfigError, SolverConfig, from_mapping

    cfg = from_mapping({"N": 3, "hamiltonian": "zero"})
    try:
        from_mapping({"hamiltonian": "zero"})
    except ConfigError as exc:
        named = exc.path == "N"
    else:
        named = False
    same = from_mapping(cfg.to_dict()) == cfg
    return named and same and isinstance(cfg, SolverConfig), f"round trip {same}, missing field named {named}"


SUITES: List[tuple] = [
    ("loops", _loops),
    ("hamiltonian", _hamiltonian),
    ("action", _action),
    ("dynamics", _dynamics),
    ("bounds", _bounds),
    ("topology", _topology),
    ("config", _config),
]


def run_one(name: str, fn: Callable) -> CheckResult:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crashing suite is a failing suite
        return CheckResult(name, False, f"{type(exc).__name__}: {exc}")
    return CheckResult(name, bool(ok), detail)


def run_all() -> List[CheckResult]:
    return [run_one(name, fn) for name, fn in SUITES]


if __name__ == "__main__":
    for r in run_all():
        print(f"{'ok  ' if r.passed else 'FAIL'} {r.name}: {r.detail}")
