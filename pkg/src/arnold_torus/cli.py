"""Command-line entry point.

    arnold-torus {solve,homotopy,bound,cuplength,filtration,selfcheck}
                 [--config PATH] [--out PATH] [--csv DIR] [--threads K] [--verbose]

Exit status: 0 when every asserted inequality holds, 1 when a verdict
fails, 2 for usage or config errors, 3 for numerical failures (a partial
report is still written).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import config as config_mod
from .action import residual
from .bounds import OmegaSpec, apriori_radius, soundness_check
from .config import ConfigError, SolverConfig
from .dynamics import (
    find_all,
    homotopy_track,
    integrate_flow,
    morse_filtration,
    verify_orbit,
)
from .hamiltonian import HomotopyFamily
from .loops import FourierLoop, mode_indices
from .report import (
    RunReport,
    export_csv,
    filtration_record,
    orbit_set_record,
    trajectory_rows,
)
from .topology import (
    cup_length,
    degree_zero_inclusion,
    morse_levels_check,
    point_ring,
    positive_ideal_filtration,
    restriction_check,
    sphere_ring,
    subadditivity_check,
    torus_index_module,
    zero_module,
)

THREADS_ENV = "ARNOLD_TORUS_THREADS"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3

log = logging.getLogger("arnold_torus")


@contextmanager
def _timed(report: RunReport, key: str):
    t = time.perf_counter()
    try:
        yield
    finally:
        report.timing[key] = time.perf_counter() - t


def _config_echo(cfg: SolverConfig) -> dict:
    d = cfg.to_dict()
    d.pop("threads")  # runtime only; reports must not depend on it
    return d


def _flow_diagnostic(H, S, cfg):
    """Flow from a point near the lowest-action orbit, perturbed only in its stable modes."""
    if not S.orbits:
        return None
    o = S.orbits[0]
    rng = np.random.default_rng(cfg.rng_seed)
    c = np.zeros_like(o.loop.coeffs)
    stable = mode_indices(o.loop.N) >= 0
    c[stable] = 0.02 * rng.standard_normal((int(stable.sum()), c.shape[1]))
    start = o.loop + FourierLoop(c)
    traj = integrate_flow(H, start, cfg.flow_time, cfg.flow_dt, cfg.samples, cfg.guard_radius)
    end = traj.states[-1]
    monotone = all(b <= a + 1e-10 * (1 + abs(a)) for a, b in zip(traj.actions, traj.actions[1:]))
    return {
        "start_orbit": 0,
        "escaped": traj.escaped,
        "monotone": monotone,
        "rejected_steps": traj.rejected_steps,
        "final_residual": residual(H, end, cfg.samples),
        "rows": trajectory_rows(traj),
    }


def cmd_solve(cfg: SolverConfig, report: RunReport):
    H = cfg.build_hamiltonian()
    lower = 2 * cfg.n + 1
    with _timed(report, "find_all"):
        S = find_all(H, cfg)
    with _timed(report, "verify"):
        checks = [verify_orbit(H, o, cfg.tol_ode, cfg.ode_steps) for o in S.orbits]
    report.sections["orbits"] = orbit_set_record(S, checks)
    values = [o.action for o in S.orbits] or None
    bound = apriori_radius(H, cfg.epsilon, OmegaSpec(cfg.N), values)
    report.sections["bound"] = bound.to_dict()
    _, T = torus_index_module(cfg.n)
    cert = cup_length(T)
    report.sections["cuplength"] = {"torus": cert.to_dict()}
    k = len(S.critical_values)
    report.sections["arnold"] = {"count": len(S), "lower_bound": lower, "critical_values": k,
                                 "degenerate": S.degenerate}
    report.checks["arnold_count"] = len(S) >= lower
    report.checks["gradient_residuals"] = all(o.residual < cfg.tol_residual for o in S.orbits)
    report.checks["period_map_residuals"] = all(c.passed for c in checks)
    report.checks["apriori_bound"] = S.max_norm <= bound.R
    if not S.degenerate:
        report.checks["critical_values_vs_cuplength"] = k >= cert.value
    with _timed(report, "flow"):
        flow = _flow_diagnostic(H, S, cfg) if not S.degenerate else None
    if flow is not None:
        report.sections["trajectory"] = flow
        report.checks["flow_monotone"] = flow["monotone"]


def cmd_homotopy(cfg: SolverConfig, report: RunReport):
    family = HomotopyFamily(cfg.build_hamiltonian())
    lower = 2 * cfg.n + 1
    with _timed(report, "homotopy_track"):
        steps = homotopy_track(family, cfg.lambda_grid, cfg)
    per_lambda = [[o.action for o in s.orbits.orbits] for s in steps if s.orbits is not None and s.count]
    bound = apriori_radius(family, cfg.epsilon, OmegaSpec(cfg.N), per_lambda or None)
    report.sections["bound"] = bound.to_dict()
    recs = []
    for s in steps:
        recs.append({
            "lambda": s.lam,
            "count": s.count,
            "degenerate": s.degenerate,
            "kernel_dim": s.orbits.kernel_dim if s.orbits is not None else None,
            "max_norm": s.max_norm,
            "critical_values": [float(c) for c in s.orbits.critical_values] if s.orbits is not None else [],
            "error": s.error,
        })
    report.sections["homotopy"] = {"lower_bound": lower, "steps": recs}
    report.checks["no_step_errors"] = all(s.error is None for s in steps)
    report.checks["count_lower_bound"] = all(s.count >= lower and not s.degenerate for s in steps if s.lam < 1.0)
    if any(s.lam == 1.0 for s in steps):
        end = next(s for s in steps if s.lam == 1.0)
        report.checks["endpoint_degenerate"] = end.degenerate and end.orbits.kernel_dim == 2 * cfg.n
    report.checks["apriori_bound"] = all(s.max_norm <= bound.R for s in steps)


def cmd_bound(cfg: SolverConfig, report: RunReport):
    family = HomotopyFamily(cfg.build_hamiltonian())
    omega = OmegaSpec(cfg.N)
    bound = apriori_radius(family, cfg.epsilon, omega)
    report.sections["bound"] = bound.to_dict()
    with _timed(report, "soundness"):
        snd = soundness_check(family, cfg.epsilon, omega, cfg.bound_samples, cfg.rng_seed, cfg.lambda_grid, cfg.samples)
    report.sections["soundness"] = {"samples": snd.samples, "violations": snd.violations,
                                    "min_gradient": snd.min_gradient, "r0": snd.r0}
    report.checks["wbd_soundness"] = snd.passed
    report.checks["R_dominates_2r0"] = bound.R >= 2 * bound.r0


def cuplength_section(n: int):
    _, T = torus_index_module(n)
    S = sphere_ring()
    P = point_ring()
    certs = {
        "torus": cup_length(T).to_dict(),
        "sphere": cup_length(S.as_module()).to_dict(),
        "point": cup_length(P.as_module()).to_dict(),
        "zero": cup_length(zero_module(P)).to_dict(),
    }
    expected = {"torus": 2 * n + 1, "sphere": 2, "point": 1, "zero": 0}
    return certs, expected


def cmd_cuplength(cfg: Optional[SolverConfig], report: RunReport, n: int = 1):
    n = cfg.n if cfg is not None else n
    certs, expected = cuplength_section(n)
    report.sections["cuplength"] = {"n": n, "certificates": certs, "expected": expected}
    for key, v in expected.items():
        report.checks[f"cuplength_{key}"] = certs[key]["value"] == v


def cmd_filtration(cfg: SolverConfig, report: RunReport):
    H = cfg.build_hamiltonian()
    with _timed(report, "find_all"):
        S = find_all(H, cfg)
    report.sections["orbits"] = orbit_set_record(S)
    F = morse_filtration(H, S, cfg)
    report.sections["filtration"] = filtration_record(F)
    morse = morse_levels_check([len(g) for g in F.groups], cfg.n)
    R = torus_index_module(cfg.n)[0]
    I, Q, T = positive_ideal_filtration(R)
    ideal = subadditivity_check([I, Q], T)
    S0, phi = degree_zero_inclusion(R)
    restr = restriction_check(T, S0, phi)
    report.sections["subadditivity"] = {"morse": morse.to_dict(), "ideal": ideal.to_dict(),
                                        "restriction": restr.to_dict()}
    report.checks["levels_regular"] = F.regular
    report.checks["critical_values_vs_cuplength"] = morse.holds
    report.checks["subadditivity"] = ideal.holds and restr.holds


def cmd_selfcheck(cfg: Optional[SolverConfig], report: RunReport):
    from .selfcheck import run_all

    results = run_all()
    report.sections["selfcheck"] = [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]
    for r in results:
        report.checks[r.name] = r.passed


COMMANDS = {
    "solve": cmd_solve,
    "homotopy": cmd_homotopy,
    "bound": cmd_bound,
    "cuplength": cmd_cuplength,
    "filtration": cmd_filtration,
    "selfcheck": cmd_selfcheck,
}
NEEDS_CONFIG = {"solve", "homotopy", "bound", "filtration"}


def run(command: str, cfg: Optional[SolverConfig], n: int = 1) -> RunReport:
    """Execute one subcommand into a report; numerical errors are captured, not raised."""
    report = RunReport(command, _config_echo(cfg) if cfg is not None else None)
    t = time.perf_counter()
    try:
        if command == "cuplength":
            cmd_cuplength(cfg, report, n)
        else:
            COMMANDS[command](cfg, report)
    except (ArithmeticError, RuntimeError, ValueError, np.linalg.LinAlgError) as exc:
        log.exception("numerical failure")
        report.status = "numerical-failure"
        report.error = f"{type(exc).__name__}: {exc}"
    report.timing["total"] = time.perf_counter() - t
    return report


def exit_code(report: RunReport) -> int:
    if report.status != "ok":
        return EXIT_NUMERICAL
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arnold-torus", description="Count contractible 1-periodic orbits on T^2n.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", type=Path, help="YAML/JSON solver config")
    p.add_argument("--out", type=Path, help="write the JSON report here (default: stdout)")
    p.add_argument("--csv", type=Path, help="directory for CSV tables and figures")
    p.add_argument("--no-figures", action="store_true", help="skip PNG figures under --csv")
    p.add_argument("--threads", type=int, help=f"worker threads (overrides ${THREADS_ENV})")
    p.add_argument("--n", type=int, default=1, help="torus half-dimension for cuplength without a config")
    p.add_argument("--verbose", "-v", action="count", default=0)
    return p


def _threads(args) -> Optional[int]:
    if args.threads is not None:
        return args.threads
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(THREADS_ENV, f"not an integer: {env!r}") from None
    return None


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    cfg = None
    try:
        if args.config is not None:
            cfg = config_mod.load(args.config)
        elif args.command in NEEDS_CONFIG:
            parser.error(f"{args.command} needs --config")
        threads = _threads(args)
        if cfg is not None and threads is not None:
            cfg = cfg.replace(threads=threads)
    except ConfigError as exc:
        print(f"arnold-torus: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"arnold-torus: {exc}", file=sys.stderr)
        return EXIT_USAGE

    report = run(args.command, cfg, args.n)
    text = report.to_json()
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    if args.csv is not None:
        data = report.to_dict()
        for what in ("orbits", "trajectory", "homotopy"):
            if what in data:
                export_csv(data, what, args.csv)
        if not args.no_figures:
            from .plotting import render_all

            render_all(data, args.csv)
    for name, ok in report.checks.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}", file=sys.stderr)
    print(f"verdict: {report.verdict}", file=sys.stderr)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
