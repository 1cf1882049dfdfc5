"""Run reports: JSON records, CSV exports.

Reports are plain JSON with sorted keys.  Everything that varies between
identical runs lives under ``"timing"``; :func:`canonical` drops it, so two
runs with the same config compare byte for byte.
"""

from __future__ import annotations

import csv
import json
import math
import platform
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .config import SCHEMA_VERSION
from .loops import FourierLoop, mode_indices


def _num(v: float) -> Optional[float]:
    v = float(v)
    return v if math.isfinite(v) else None


def loop_record(x: FourierLoop) -> dict:
    return {
        "n": x.n,
        "N": x.N,
        "x0": [float(v) for v in x.x0],
        "coeffs": [{"k": int(k), "x": [float(v) for v in x.mode(int(k))]} for k in mode_indices(x.N) if k != 0],
    }


def loop_from_record(rec: dict) -> FourierLoop:
    return FourierLoop.from_modes(rec["n"], rec["N"], rec["x0"], {c["k"]: c["x"] for c in rec["coeffs"]})


def orbit_record(o, check=None) -> dict:
    rec = {
        "x0": [float(v) for v in o.loop.x0],
        "action": float(o.action),
        "residual": float(o.residual),
        "signature": list(o.signature),
        "degenerate": o.degenerate,
        "kernel_dim": o.kernel_dim,
        "norm": float(o.norm),
        "seed": o.seed_id,
        "loop": loop_record(o.loop),
    }
    if check is not None:
        rec["period_residual"] = float(check.period_residual)
        rec["max_deviation"] = float(check.max_deviation)
    return rec


def orbit_set_record(S, checks=None) -> dict:
    checks = checks or [None] * len(S.orbits)
    return {
        "count": len(S.orbits),
        "delta": S.delta,
        "critical_values": [float(c) for c in S.critical_values],
        "value_tol": S.value_tol,
        "degenerate": S.degenerate,
        "kernel_dim": S.kernel_dim,
        "max_norm": float(S.max_norm),
        "seeds_tried": S.seeds_tried,
        "seeds_failed": S.seeds_failed,
        "warnings": list(S.warnings),
        "orbits": [orbit_record(o, c) for o, c in zip(S.orbits, checks)],
    }


def filtration_record(F) -> dict:
    return {
        "k": F.k,
        "critical_values": [float(c) for c in F.critical_values],
        "regular_values": [_num(b) for b in F.regular_values],
        "group_sizes": [len(g) for g in F.groups],
        "groups": F.groups,
        "min_level_gradient": [_num(g) for g in F.min_level_gradient],
        "regular": F.regular,
        "warnings": list(F.warnings),
    }


def trajectory_rows(traj) -> List[dict]:
    return [{"t": float(t), "action": float(a), "norm": float(nm)} for t, a, nm in zip(traj.times, traj.actions, traj.norms)]


def versions() -> dict:
    import scipy
    from . import __version__

    return {"arnold_torus": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


@dataclass
class RunReport:
    command: str
    config: Optional[dict]
    sections: Dict[str, Any] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    timing: Dict[str, float] = field(default_factory=dict)
    status: str = "ok"  # "ok" or "numerical-failure"
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == "ok" and all(self.checks.values())

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "status": self.status,
            "error": self.error,
            "checks": dict(self.checks),
            "verdict": self.verdict,
            "versions": versions(),
            **self.sections,
        }
        if timing:
            d["timing"] = dict(self.timing)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True, allow_nan=False) + "\n"


def canonical(text: str) -> str:
    """Report JSON with the timing section removed."""
    d = json.loads(text)
    d.pop("timing", None)
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


ORBIT_COLUMNS = ["index", "action", "residual", "period_residual", "norm", "kernel_dim"]


def export_csv(report: dict, what: str, directory) -> Path:
    """Write ``orbits.csv`` or ``trajectory.csv`` from a report dict.

    ``orbits``: one row per orbit with ``action, residual, period_residual,
    norm, kernel_dim`` and the mean coordinates ``x0_1..x0_2n``.
    ``trajectory``: ``t, action, norm`` along the diagnostic flow line.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if what == "orbits":
        if "orbits" not in report:
            raise KeyError("report has no orbit set")
        S = report["orbits"]
        n2 = 2 * (report["config"] or {}).get("n", 1)
        path = directory / "orbits.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(ORBIT_COLUMNS + [f"x0_{i + 1}" for i in range(n2)])
            for i, o in enumerate(S["orbits"]):
                w.writerow([i, repr(o["action"]), repr(o["residual"]), repr(o.get("period_residual", "")),
                            repr(o["norm"]), o["kernel_dim"]] + [repr(v) for v in o["x0"]])
        return path
    if what == "trajectory":
        if "trajectory" not in report:
            raise KeyError("report has no trajectory")
        path = directory / "trajectory.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "action", "norm"])
            for r in report["trajectory"]["rows"]:
                w.writerow([repr(r["t"]), repr(r["action"]), repr(r["norm"])])
        return path
    if what == "homotopy":
        if "homotopy" not in report:
            raise KeyError("report has no homotopy track")
        path = directory / "homotopy.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["lambda", "count", "degenerate", "kernel_dim", "max_norm"])
            for s in report["homotopy"]["steps"]:
                w.writerow([repr(s["lambda"]), s["count"], s["degenerate"], s["kernel_dim"], repr(s["max_norm"])])
        return path
    raise ValueError(f"unknown export {what!r}; expected 'orbits', 'trajectory' or 'homotopy'")
