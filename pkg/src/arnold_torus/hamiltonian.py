"""Lattice-periodic, time-periodic trigonometric Hamiltonians.

A Hamiltonian is a finite sum of terms

    c * cos(2*pi*(<m, x> + nu*t) + phi)

with ``m`` in Z^{2n} and ``nu`` in Z, so it is exactly 1-periodic in time and
invariant under integer translations of ``x``.  Derivatives and sup-norm
bounds are available in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Tuple

import numpy as np

TWO_PI = 2.0 * np.pi


class Term(NamedTuple):
    c: float
    m: Tuple[int, ...]
    nu: int = 0
    phi: float = 0.0


class Bounds(NamedTuple):
    sup_h: float
    sup_grad: float
    sup_hess: float


@dataclass(frozen=True)
class HamiltonianSpec:
    n: int
    terms: Tuple[Term, ...] = ()

    def __post_init__(self):
        terms = []
        for t in self.terms:
            t = Term(*t) if not isinstance(t, Term) else t
            m = tuple(int(v) for v in t.m)
            if len(m) != 2 * self.n:
                raise ValueError(f"spatial frequency {m} has length {len(m)}, expected {2 * self.n}")
            if any(v != mv for v, mv in zip(m, t.m)) or int(t.nu) != t.nu:
                raise ValueError("spatial and temporal frequencies must be integers")
            terms.append(Term(float(t.c), m, int(t.nu), float(t.phi)))
        object.__setattr__(self, "terms", tuple(terms))

    # packed arrays for vectorized evaluation
    @property
    def _arrays(self):
        if not self.terms:
            return np.zeros(0), np.zeros((0, 2 * self.n)), np.zeros(0), np.zeros(0)
        c = np.array([t.c for t in self.terms])
        m = np.array([t.m for t in self.terms], dtype=float)
        nu = np.array([t.nu for t in self.terms], dtype=float)
        phi = np.array([t.phi for t in self.terms])
        return c, m, nu, phi

    def _phase(self, t, x):
        c, m, nu, phi = self._arrays
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        theta = TWO_PI * (x @ m.T + t[..., None] * nu) + phi
        return c, m, theta

    def eval(self, t, x):
        """``H(t, x)``; ``x`` may carry leading batch axes, ``t`` broadcasts."""
        c, _, theta = self._phase(t, x)
        return np.cos(theta) @ c

    def grad(self, t, x):
        c, m, theta = self._phase(t, x)
        return -TWO_PI * (np.sin(theta) * c) @ m

    def hess(self, t, x):
        c, m, theta = self._phase(t, x)
        w = -(TWO_PI**2) * np.cos(theta) * c
        return np.einsum("...a,ai,aj->...ij", w, m, m)

    def vector_field(self, t, x):
        """``X_H = J grad H``: the flow whose 1-periodic loops are critical for the action."""
        g = np.asarray(self.grad(t, x))
        out = np.empty_like(g)
        out[..., 0::2] = -g[..., 1::2]
        out[..., 1::2] = g[..., 0::2]
        return out

    def bounds(self) -> Bounds:
        if not self.terms:
            return Bounds(0.0, 0.0, 0.0)
        c, m, _, _ = self._arrays
        a = np.abs(c)
        mm = np.linalg.norm(m, axis=1)
        return Bounds(float(a.sum()), float(TWO_PI * (a * mm).sum()), float(TWO_PI**2 * (a * mm**2).sum()))

    @property
    def is_autonomous(self) -> bool:
        return all(t.nu == 0 for t in self.terms)

    @property
    def max_spatial_frequency(self) -> float:
        return max((float(np.abs(t.m).sum()) for t in self.terms), default=0.0)

    def scaled(self, s: float) -> "HamiltonianSpec":
        return HamiltonianSpec(self.n, tuple(Term(s * t.c, t.m, t.nu, t.phi) for t in self.terms))

    def shifted(self, e: Sequence[float]) -> "HamiltonianSpec":
        """``x -> H(t, x + e)``; identical to ``self`` for lattice vectors."""
        e = np.asarray(e, dtype=float)
        return HamiltonianSpec(
            self.n,
            tuple(Term(t.c, t.m, t.nu, t.phi + TWO_PI * float(np.dot(t.m, e))) for t in self.terms),
        )

    def __add__(self, other: "HamiltonianSpec") -> "HamiltonianSpec":
        if other.n != self.n:
            raise ValueError("Hamiltonians on tori of different dimension")
        return HamiltonianSpec(self.n, self.terms + other.terms)

    def to_records(self):
        return [{"c": t.c, "m": list(t.m), "nu": t.nu, "phi": t.phi} for t in self.terms]

    @classmethod
    def from_records(cls, n: int, records: Iterable[dict]) -> "HamiltonianSpec":
        terms = []
        for i, r in enumerate(records):
            try:
                terms.append(Term(r["c"], tuple(r["m"]), r.get("nu", 0), r.get("phi", 0.0)))
            except (KeyError, TypeError) as exc:
                raise ValueError(f"terms[{i}]: malformed term record {r!r}") from exc
        return cls(n, tuple(terms))


@dataclass(frozen=True)
class HomotopyFamily:
    """The linear family ``lambda -> (1 - lambda) * base``."""

    base: HamiltonianSpec

    def at(self, lam: float) -> HamiltonianSpec:
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"homotopy parameter {lam} outside [0, 1]")
        return self.base.scaled(1.0 - lam)

    def bounds(self) -> Bounds:
        # amplitudes scale by (1 - lambda) <= 1
        return self.base.bounds()


def _unit(n: int, i: int) -> Tuple[int, ...]:
    m = [0] * (2 * n)
    m[i] = 1
    return tuple(m)


def cosine_morse(n: int, eps: float = 0.1) -> HamiltonianSpec:
    """``eps * sum_i cos(2*pi*x_i)``: a Morse function with 4**n critical points."""
    return HamiltonianSpec(n, tuple(Term(eps, _unit(n, i)) for i in range(2 * n)))


def time_driven(n: int, eps: float = 0.1, drive: float = 0.05) -> HamiltonianSpec:
    """``cosine_morse`` plus ``drive * cos(2*pi*(q_1 + p_1 + t))``."""
    m = [0] * (2 * n)
    m[0] = m[1] = 1
    return cosine_morse(n, eps) + HamiltonianSpec(n, (Term(drive, tuple(m), 1, 0.0),))


CATALOG = {
    "zero": lambda n: HamiltonianSpec(n, ()),
    "cosine-morse": cosine_morse,
    "time-driven": time_driven,
}


def from_catalog(key: str, n: int) -> HamiltonianSpec:
    try:
        return CATALOG[key](n)
    except KeyError:
        raise KeyError(f"unknown catalog Hamiltonian {key!r}; known: {sorted(CATALOG)}") from None
