"""A-priori radii for the invariant set of the embedded action gradient.

On ``Omega = A^{2n} x Z^+ x Z^-`` (``A`` the annulus ``1/2 <= r <= 3/2``):

* ``r0`` bounds every point whose gradient norm is at most ``eps``, from
  ``|F(x)| >= (|P+ x| + |P- x|)/2 - kappa`` plus the bounded planar block;
* ``r1 = (max c - min c) / eps`` over critical values;
* ``R = 2 r0 + r1`` bounds the whole invariant set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from .action import EmbeddedPoint, compactness_constant, embedded_gradient
from .hamiltonian import HamiltonianSpec, HomotopyFamily
from .loops import FourierLoop, h12_norm, h12_weights, mode_indices

Model = Union[HamiltonianSpec, HomotopyFamily]


@dataclass(frozen=True)
class OmegaSpec:
    N: int
    inner: float = 0.5
    outer: float = 1.5
    ball: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.inner < 1.0 < self.outer < 2.0:
            raise ValueError("annulus radii must satisfy 0 < inner < 1 < outer < 2")


@dataclass(frozen=True)
class AprioriBound:
    epsilon: float
    kappa: float
    r0: float
    r1: float
    provenance: Dict[str, str] = field(default_factory=dict)

    @property
    def R(self) -> float:
        return 2.0 * self.r0 + self.r1

    def to_dict(self):
        return {"epsilon": self.epsilon, "kappa": self.kappa, "r0": self.r0, "r1": self.r1,
                "R": self.R, "provenance": dict(self.provenance)}


def _base(model: Model) -> HamiltonianSpec:
    return model.base if isinstance(model, HomotopyFamily) else model


def kappa(model: Model, omega: OmegaSpec) -> Dict[str, float]:
    """Uniform bound on the compact part of the embedded gradient.

    The Hamiltonian contribution is ``sup|grad H|`` through the ``j*``
    weights, or through ``1/(2 pi r)`` in the angular planar directions,
    whichever is larger.  The penalty ``sum (1 - r_i)^2`` contributes at most
    ``2 sqrt(2n)`` on ``0 < r_i < 2``.  For a family the base amplitudes
    dominate every member.
    """
    H = _base(model)
    n = H.n
    sup_grad = H.bounds().sup_grad
    ham = sup_grad * max(compactness_constant(omega.N), 1.0 / (2.0 * math.pi * omega.inner))
    pen = 2.0 * math.sqrt(2 * n)
    return {"hamiltonian": ham, "penalty": pen, "total": ham + pen}


def planar_radius(n: int, omega: OmegaSpec) -> float:
    return math.sqrt(2 * n) * omega.outer


def wbd_radius(model: Model, eps: float, omega: OmegaSpec) -> float:
    """``r0`` with ``|F(x)| <= eps`` and ``x`` in Omega implying ``|x| <= r0``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    k = kappa(model, omega)["total"]
    return planar_radius(_base(model).n, omega) + 2.0 * (eps + k)


def action_range_bound(model: Model, r0: float) -> float:
    """``sup - inf`` of the action over ``B(r0)``: ``|a| <= r0^2/2`` and ``|b| <= sup|H|``."""
    return r0**2 + 2.0 * _base(model).bounds().sup_h


def critical_spread(eps: float, values=None, model: Optional[Model] = None, r0: Optional[float] = None) -> float:
    """``r1`` from critical values, or from the coefficient bound when none are given.

    ``values`` may be a flat list or a list of lists (one per homotopy
    parameter); the spread is then the largest per-list spread.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if values is not None:
        lists = values if values and isinstance(values[0], (list, tuple)) else [values]
        lists = [list(v) for v in lists if len(v)]
        if not lists:
            raise ValueError("no critical values supplied")
        return max(max(v) - min(v) for v in lists) / eps
    if model is None or r0 is None:
        raise ValueError("need critical values or a model with r0")
    return action_range_bound(model, r0) / eps


def apriori_radius(model: Model, eps: float, omega: OmegaSpec, values=None) -> AprioriBound:
    r0 = wbd_radius(model, eps, omega)
    r1 = critical_spread(eps, values, model, r0)
    k = kappa(model, omega)["total"]
    prov = {
        "kappa": "sup|grad H| * max(C(N), 1/(2 pi r_in)) + 2 sqrt(2n)",
        "r0": "sqrt(2n) r_out + 2 (eps + kappa)",
        "r1": "critical values" if values is not None else "coefficient bound over B(r0)",
    }
    if isinstance(model, HomotopyFamily):
        prov["uniform"] = "base amplitudes bound every member of the family"
    return AprioriBound(eps, k, r0, r1, prov)


@dataclass
class SoundnessReport:
    samples: int
    violations: int
    min_gradient: float
    epsilon: float
    r0: float

    @property
    def passed(self) -> bool:
        return self.violations == 0


def sample_omega(n: int, N: int, omega: OmegaSpec, rmin: float, rmax: float, rng) -> EmbeddedPoint:
    """A random point of Omega with norm in ``(rmin, rmax]``."""
    radii = rng.uniform(omega.inner, omega.outer, 2 * n)
    angles = rng.uniform(0.0, 2.0 * math.pi, 2 * n)
    c = rng.standard_normal((2 * N + 1, 2 * n))
    c[N] = 0.0
    # random split between Z^+ and Z^-, so both halves get explored
    side = mode_indices(N) > 0
    c[side] *= rng.uniform(0.0, 2.0)
    loop = FourierLoop(c)
    target = rng.uniform(rmin, rmax)
    rest = math.sqrt(max(target**2 - float(np.sum(radii**2)), 0.0))
    loop = loop * (rest / h12_norm(loop))
    return EmbeddedPoint(radii, angles, loop)


def soundness_check(model: Model, eps: float, omega: OmegaSpec, samples: int = 10_000, seed: int = 0,
                    lambdas: Sequence[float] = (0.0,), M: Optional[int] = None) -> SoundnessReport:
    """Sample Omega outside ``B(r0)`` and count points with ``|grad| <= eps``."""
    H0 = _base(model)
    family = model if isinstance(model, HomotopyFamily) else HomotopyFamily(H0)
    r0 = wbd_radius(model, eps, omega)
    rng = np.random.default_rng(seed)
    bad, gmin = 0, math.inf
    for i in range(samples):
        H = family.at(lambdas[i % len(lambdas)])
        p = sample_omega(H0.n, omega.N, omega, r0 * (1 + 1e-9), 3.0 * r0, rng)
        g = embedded_gradient(H, p, M).norm()
        gmin = min(gmin, g)
        bad += g <= eps
    return SoundnessReport(samples, int(bad), gmin, eps, r0)


@dataclass
class CompactnessReport:
    count: int
    radius: float
    bound: float
    clusters: int
    max_cluster_residual: float
    tol: float

    @property
    def bounded(self) -> bool:
        return self.radius <= self.bound

    @property
    def closed(self) -> bool:
        return self.max_cluster_residual <= self.tol

    @property
    def passed(self) -> bool:
        return self.bounded and self.closed


def compactness_check(family: HomotopyFamily, budget: int, cfg, bound: Optional[float] = None,
                      cluster_radius: float = 1e-3) -> CompactnessReport:
    """Collect near-zeros of ``grad Phi_lambda`` at random ``lambda`` and check
    that they stay bounded and that their cluster points are again near-zeros.

    Cluster points are the means of groups within ``cluster_radius`` of each
    other (modulo the lattice), evaluated at the group's mean ``lambda``.
    """
    from .action import residual
    from .dynamics import NoConvergence, find_orbit, generate_seeds, torus_distance

    rng = np.random.default_rng(cfg.rng_seed)
    seeds = generate_seeds(family.base.n, cfg)
    zeros = []
    for i in range(budget):
        lam = float(rng.uniform(0.0, 1.0))
        sid, seed = seeds[int(rng.integers(len(seeds)))]
        try:
            o = find_orbit(family.at(lam), seed, cfg, sid)
        except NoConvergence:
            continue
        zeros.append((lam, o))
    radius = max((o.norm for _, o in zeros), default=0.0)
    if bound is None:
        bound = apriori_radius(family, cfg.epsilon, OmegaSpec(cfg.N)).R

    clusters: List[List[int]] = []
    for i, (_, o) in enumerate(zeros):
        for cl in clusters:
            if torus_distance(o.loop, zeros[cl[0]][1].loop) <= cluster_radius:
                cl.append(i)
                break
        else:
            clusters.append([i])
    worst = 0.0
    for cl in clusters:
        if len(cl) < 2:
            continue
        ref = zeros[cl[0]][1].loop
        coeffs = []
        for j in cl:
            c = np.array(zeros[j][1].loop.coeffs)
            c[ref.N] = ref.x0 + (c[ref.N] - ref.x0 - np.round(c[ref.N] - ref.x0))
            coeffs.append(c)
        lam = float(np.mean([zeros[j][0] for j in cl]))
        limit = FourierLoop(np.mean(coeffs, axis=0))
        spread = max(torus_distance(limit, zeros[j][1].loop) for j in cl)
        # a limit of near-zeros is a near-zero up to the Lipschitz constant of the gradient
        lip = 1.0 + family.base.bounds().sup_hess
        worst = max(worst, residual(family.at(lam), limit, cfg.samples) / max(lip * spread, cfg.tol_residual))
    return CompactnessReport(len(zeros), radius, float(bound), len(clusters), worst, 1.0)
