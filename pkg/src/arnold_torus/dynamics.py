"""Critical-orbit search and flow diagnostics for the truncated action.

Orbits are found by damped Newton on ``gradient(H, x) = 0`` from a grid of
constant loops plus randomly perturbed copies, then deduplicated modulo the
lattice.  The negative gradient flow is used for diagnostics only: it
cannot reach the saddles of an indefinite functional.
"""

from __future__ import annotations

import itertools
import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from .action import action_value, apply_L, coefficient_system, gradient, nonlinearity
from .config import SolverConfig
from .hamiltonian import HamiltonianSpec, HomotopyFamily
from .loops import TWO_PI, FourierLoop, evaluate, h12_norm, h12_weights, mode_indices

log = logging.getLogger(__name__)


class NoConvergence(RuntimeError):
    """Newton failed to reach the residual tolerance."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True, eq=False)
class CriticalOrbit:
    loop: FourierLoop
    residual: float
    action: float
    signature: Tuple[int, int, int]  # (negative, zero, positive) Hessian eigenvalue counts
    seed_id: str = ""
    iterations: int = 0

    @property
    def kernel_dim(self) -> int:
        return self.signature[1]

    @property
    def degenerate(self) -> bool:
        return self.signature[1] > 0

    @property
    def norm(self) -> float:
        return h12_norm(self.loop)

    @property
    def is_constant(self) -> bool:
        return bool(np.allclose(np.delete(self.loop.coeffs, self.loop.N, axis=0), 0.0, atol=1e-12))


@dataclass
class OrbitSet:
    orbits: List[CriticalOrbit]
    delta: float
    critical_values: List[float]
    value_tol: float
    seeds_tried: int = 0
    seeds_failed: int = 0
    warnings: List[str] = field(default_factory=list)

    def __len__(self):
        return len(self.orbits)

    @property
    def degenerate(self) -> bool:
        return any(o.degenerate for o in self.orbits)

    @property
    def kernel_dim(self) -> int:
        return max((o.kernel_dim for o in self.orbits), default=0)

    @property
    def max_norm(self) -> float:
        return max((o.norm for o in self.orbits), default=0.0)


@dataclass
class FlowTrajectory:
    times: List[float]
    states: List[FourierLoop]
    actions: List[float]
    escaped: bool = False
    rejected_steps: int = 0

    @property
    def norms(self) -> List[float]:
        return [h12_norm(x) for x in self.states]


@dataclass
class Filtration:
    critical_values: List[float]
    regular_values: List[float]  # b_1 < ... < b_{k-1}, then inf
    groups: List[List[int]]  # orbit indices per critical value
    min_level_gradient: List[float]  # smallest |grad| sampled on each finite level set
    warnings: List[str] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.critical_values)

    @property
    def regular(self) -> bool:
        return all(g > 0.0 for g in self.min_level_gradient)


# lattice normalization and distances


def normalize_loop(x: FourierLoop) -> FourierLoop:
    """Reduce the mean into ``[0, 1)^{2n}``; idempotent."""
    x0 = np.array(x.x0)
    r = np.round(x0)
    x0 = np.where(np.abs(x0 - r) < 1e-11, r, x0)
    x0 = x0 - np.floor(x0)
    return x.with_x0(x0)


def torus_distance(x: FourierLoop, y: FourierLoop) -> float:
    """H^{1/2} distance with the means compared modulo the lattice."""
    d = x.coeffs - y.coeffs
    d[x.N] -= np.round(d[x.N])
    return float(np.sqrt(np.einsum("k,ki,ki->", h12_weights(x.N), d, d)))


# gradient flow


def integrate_flow(
    H: HamiltonianSpec,
    x0: FourierLoop,
    T: float,
    dt: float,
    M: Optional[int] = None,
    guard_radius: float = 1e3,
    rtol: float = 1e-10,
    max_halvings: int = 30,
) -> FlowTrajectory:
    """Negative gradient flow ``dx/dt = -(L x + K(x))``.

    Each mode's linear part is integrated exactly (``exp(-dt)`` on ``Z^+``,
    ``exp(dt)`` on ``Z^-``, identity on ``Z_0``) with ``K`` held fixed over
    the step.  A step that raises the action by more than ``rtol`` relative is
    retried at half the size.
    """
    if dt <= 0 or T < 0:
        raise ValueError("need dt > 0 and T >= 0")
    s = np.sign(mode_indices(x0.N)).astype(float)[:, None]

    def step(x, h):
        decay = np.exp(-s * h)
        phi = np.where(s == 0, h, (1.0 - decay) / np.where(s == 0, 1.0, s))
        return FourierLoop(decay * x.coeffs - phi * nonlinearity(H, x, M).coeffs)

    t, x = 0.0, x0
    a = action_value(H, x, M)
    traj = FlowTrajectory([t], [x], [a])
    while t < T - 1e-12:
        h = min(dt, T - t)
        for _ in range(max_halvings):
            y = step(x, h)
            b = action_value(H, y, M)
            if b <= a + rtol * (1.0 + abs(a)):
                break
            traj.rejected_steps += 1
            h *= 0.5
        else:
            raise RuntimeError(f"flow step rejected {max_halvings} times at t={t}")
        t, x, a = t + h, y, b
        traj.times.append(t)
        traj.states.append(x)
        traj.actions.append(a)
        if h12_norm(x) > guard_radius:
            traj.escaped = True
            break
    return traj


# Newton search


def _spectral(S: np.ndarray, w: np.ndarray):
    """Eigenpairs of ``S`` relative to the metric ``diag(w)``."""
    r = 1.0 / np.sqrt(w)
    mu, V = np.linalg.eigh(r[:, None] * S * r[None, :])
    return mu, V, r


def hessian_signature(H: HamiltonianSpec, x: FourierLoop, M: Optional[int], tol_deg: float):
    _, S, w = coefficient_system(H, x, M)
    mu, _, _ = _spectral(S, w)
    return (int(np.sum(mu < -tol_deg)), int(np.sum(np.abs(mu) <= tol_deg)), int(np.sum(mu > tol_deg)))


def find_orbit(H: HamiltonianSpec, seed: FourierLoop, cfg: SolverConfig, seed_id: str = "") -> CriticalOrbit:
    """Damped Newton from ``seed``; raises :class:`NoConvergence` on failure.

    Steps solve the symmetric truncated Hessian system, with eigen-directions
    inside ``[-tol_deg, tol_deg]`` dropped, are capped at ``max_step`` in the
    H^{1/2} norm, and are backtracked until the residual norm decreases.
    """
    M = cfg.samples
    x = seed
    n, N = seed.n, seed.N
    for it in range(cfg.max_iter + 1):
        g, S, w = coefficient_system(H, x, M)
        res = float(np.sqrt(np.sum(g * g / w)))
        mu, V, r = _spectral(S, w)
        if res < cfg.tol_residual:
            sig = (int(np.sum(mu < -cfg.tol_deg)), int(np.sum(np.abs(mu) <= cfg.tol_deg)),
                   int(np.sum(mu > cfg.tol_deg)))
            loop = normalize_loop(x)
            return CriticalOrbit(loop, res, action_value(H, loop, M), sig, seed_id, it)
        if it == cfg.max_iter:
            break
        keep = np.abs(mu) > cfg.tol_deg
        coef = np.where(keep, (V.T @ (r * g)) / np.where(keep, mu, 1.0), 0.0)
        d = -r * (V @ coef)
        dn = float(np.sqrt(np.sum(w * d * d)))
        if dn > cfg.max_step:
            d *= cfg.max_step / dn
        alpha = 1.0
        xv = x.to_vector()
        for _ in range(40):
            y = FourierLoop.from_vector(xv + alpha * d, n, N)
            gy = gradient(H, y, M)
            ry = h12_norm(gy)
            if ry < (1.0 - 1e-4 * alpha) * res:
                break
            alpha *= 0.5
        else:
            raise NoConvergence(f"line search stalled at residual {res:.3e}", res, it)
        x = y
        if h12_norm(x - x.with_x0(np.zeros(2 * n))) > cfg.guard_radius:
            raise NoConvergence("iterate left the guard radius", ry, it)
    raise NoConvergence(f"no convergence in {cfg.max_iter} iterations (residual {res:.3e})", res, cfg.max_iter)


def generate_seeds(n: int, cfg: SolverConfig) -> List[Tuple[str, FourierLoop]]:
    """Constant loops at the cell centres of a ``grid**(2n)`` torus grid, each
    followed by ``random_seeds`` Fourier-perturbed copies."""
    rng = np.random.default_rng(cfg.rng_seed)
    N = cfg.N
    pts = (np.arange(cfg.grid) + 0.5) / cfg.grid
    kmax = min(N, 3)
    seeds = []
    for i, p in enumerate(itertools.product(pts, repeat=2 * n)):
        base = FourierLoop.constant(np.array(p), N)
        seeds.append((f"grid:{i}", base))
        for j in range(cfg.random_seeds):
            c = np.zeros((2 * N + 1, 2 * n))
            idx = mode_indices(N)
            sel = np.abs(idx) <= kmax
            c[sel] = cfg.perturbation * rng.standard_normal((int(sel.sum()), 2 * n))
            seeds.append((f"pert:{i}:{j}", base + FourierLoop(c)))
    return seeds


def _try(H, seed, cfg, sid):
    try:
        return find_orbit(H, seed, cfg, sid)
    except NoConvergence as exc:
        log.debug("seed %s: %s", sid, exc)
        return None


def cluster_values(values: Sequence[float], tol: float) -> List[float]:
    """Sorted distinct values; runs with gaps ``<= tol`` collapse to their mean."""
    vals = sorted(values)
    groups: List[List[float]] = []
    for v in vals:
        if groups and v - groups[-1][-1] <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return [float(np.mean(g)) for g in groups]


def _order_key(o: CriticalOrbit):
    return (round(o.action, 12), tuple(np.round(o.loop.x0, 12)), o.seed_id)


def dedup(orbits: Sequence[CriticalOrbit], delta: float, value_tol: Optional[float] = None) -> OrbitSet:
    """Merge orbits within ``delta`` of each other modulo the lattice.

    The lowest-residual member of each cluster is kept; the result is ordered
    by action, then by normalized mean.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    normed = [
        CriticalOrbit(normalize_loop(o.loop), o.residual, o.action, o.signature, o.seed_id, o.iterations)
        for o in orbits
    ]
    normed.sort(key=lambda o: (o.residual, _order_key(o)))
    kept: List[CriticalOrbit] = []
    for o in normed:
        if all(torus_distance(o.loop, k.loop) > delta for k in kept):
            kept.append(o)
    kept.sort(key=_order_key)
    tol = value_tol if value_tol is not None else 0.0
    return OrbitSet(kept, delta, cluster_values([o.action for o in kept], tol), tol)


def find_all(
    H: HamiltonianSpec,
    cfg: SolverConfig,
    extra_seeds: Sequence[Tuple[str, FourierLoop]] = (),
    threads: Optional[int] = None,
) -> OrbitSet:
    """Multi-start Newton plus dedup; deterministic given ``cfg.rng_seed``."""
    seeds = generate_seeds(H.n, cfg) + list(extra_seeds)
    threads = cfg.threads if threads is None else threads
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda s: _try(H, s[1], cfg, s[0]), seeds))
    else:
        results = [_try(H, l, cfg, sid) for sid, l in seeds]
    found = [r for r in results if r is not None]
    out = dedup(found, cfg.delta, 10.0 * cfg.tol_residual)
    out.seeds_tried = len(seeds)
    out.seeds_failed = len(seeds) - len(found)
    if not out.orbits:
        msg = "no critical orbits found; at least 2n+1 are expected for any Hamiltonian"
        out.warnings.append(msg)
        warnings.warn(msg, RuntimeWarning)
    return out


# Morse filtration


def _level_point(H, b, x0, N, M, slope_dir, rng):
    """A loop ``x0 + s v`` on the level set ``action = b``; ``v`` a unit mode in ``Z^+`` or ``Z^-``."""
    v = np.zeros((2 * N + 1, x0.size))
    u = rng.standard_normal(x0.size)
    v[N + slope_dir] = u / np.linalg.norm(u)
    base = FourierLoop.constant(x0, N)
    V = FourierLoop(v)
    f = lambda s: action_value(H, base + s * V, M) - b
    smax = 1.0
    while f(smax) * f(0.0) > 0:
        smax *= 2.0
        if smax > 1e6:
            return None
    return base + brentq(f, 0.0, smax, xtol=1e-14) * V


def morse_filtration(H: HamiltonianSpec, S: OrbitSet, cfg: SolverConfig, level_samples: int = 16) -> Filtration:
    """Group orbits by critical value and probe the separating regular levels.

    ``b_i`` is the midpoint of ``c_i`` and ``c_{i+1}``; on each such level the
    gradient norm is sampled along loops built from random constants pushed
    along a ``Z^+`` or ``Z^-`` mode.  A positive minimum means the action
    strictly decreases through the level under the flow.
    """
    if not S.orbits:
        raise ValueError("filtration of an empty orbit set")
    if S.degenerate:
        raise ValueError("filtration needs non-degenerate critical points")
    tol = 10.0 * cfg.tol_residual
    warn: List[str] = []
    values = cluster_values([o.action for o in S.orbits], tol)
    if len(values) < len(set(round(o.action, 15) for o in S.orbits)):
        warn.append(f"critical values within {tol:.1e} merged")
    groups: List[List[int]] = [[] for _ in values]
    for i, o in enumerate(S.orbits):
        groups[int(np.argmin([abs(o.action - c) for c in values]))].append(i)
    regular = [0.5 * (a + b) for a, b in zip(values[:-1], values[1:])] + [math.inf]
    rng = np.random.default_rng(cfg.rng_seed + 1)
    n, N, M = H.n, S.orbits[0].loop.N, cfg.samples
    mins = []
    for b in regular[:-1]:
        gmin = math.inf
        for _ in range(level_samples):
            x0 = rng.random(2 * n)
            a0 = action_value(H, FourierLoop.constant(x0, N), M)
            x = _level_point(H, b, x0, N, M, 1 if a0 < b else -1, rng)
            if x is not None:
                gmin = min(gmin, h12_norm(gradient(H, x, M)))
        mins.append(gmin)
    return Filtration(values, regular, groups, mins, warn)


# homotopy continuation


@dataclass
class HomotopyStep:
    lam: float
    orbits: Optional[OrbitSet]
    error: Optional[str] = None

    @property
    def count(self) -> int:
        return len(self.orbits) if self.orbits is not None else 0

    @property
    def degenerate(self) -> bool:
        return self.orbits is not None and self.orbits.degenerate

    @property
    def max_norm(self) -> float:
        return self.orbits.max_norm if self.orbits is not None else 0.0


def homotopy_track(family: HomotopyFamily, lambda_grid: Sequence[float], cfg: SolverConfig) -> List[HomotopyStep]:
    """``find_all`` along ``H_lambda``, seeding each step with the previous orbits."""
    grid = list(lambda_grid)
    if grid != sorted(grid) or any(not 0.0 <= v <= 1.0 for v in grid):
        raise ValueError("lambda grid must be sorted inside [0, 1]")
    steps: List[HomotopyStep] = []
    prev: List[Tuple[str, FourierLoop]] = []
    for lam in grid:
        try:
            S = find_all(family.at(lam), cfg, extra_seeds=prev)
        except Exception as exc:  # recorded per step, never fatal
            steps.append(HomotopyStep(lam, None, f"{type(exc).__name__}: {exc}"))
            continue
        steps.append(HomotopyStep(lam, S))
        prev = [(f"warm:{lam}:{i}", o.loop) for i, o in enumerate(S.orbits)]
    return steps


# independent check by time stepping


@dataclass
class OrbitCheck:
    period_residual: float
    max_deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.period_residual < self.tol


def rk4_period_map(H: HamiltonianSpec, x0: np.ndarray, steps: int) -> np.ndarray:
    """Classical RK4 for ``dx/dt = X_H(t, x)`` on ``[0, 1]``; returns all ``steps + 1`` states."""
    h = 1.0 / steps
    out = np.empty((steps + 1, x0.size))
    x = np.array(x0, dtype=float)
    out[0] = x
    for i in range(steps):
        t = i * h
        k1 = H.vector_field(t, x)
        k2 = H.vector_field(t + h / 2, x + h / 2 * k1)
        k3 = H.vector_field(t + h / 2, x + h / 2 * k2)
        k4 = H.vector_field(t + h, x + h * k3)
        x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i + 1] = x
    return out


def verify_orbit(H: HamiltonianSpec, orbit, tol: float = 1e-4, steps: int = 2000) -> OrbitCheck:
    """Period-map residual ``|x(1) - x(0)|`` of the ODE started at the orbit's ``x(0)``."""
    loop = orbit.loop if isinstance(orbit, CriticalOrbit) else orbit
    path = rk4_period_map(H, loop.coeffs.sum(axis=0), steps)
    fourier = evaluate(loop, steps)
    dev = float(np.max(np.linalg.norm(path[:-1] - fourier, axis=1)))
    return OrbitCheck(float(np.linalg.norm(path[-1] - path[0])), dev, tol)
