"""Action functional on the truncated loop space and its H^{1/2} derivatives.

``action_value`` evaluates ``a(x) - b(x)`` with the symplectic area ``a`` in
spectral form and ``b(x) = mean_j H(t_j, x(t_j))`` on the uniform grid
``t_j = j/M``.  The gradient is ``L x + K(x)``, where ``L`` is ``+1`` on
``Z^+``, ``-1`` on ``Z^-`` and ``0`` on ``Z_0``, and ``K = -j* grad H``.  Its
coefficients are those of ``grad H`` along the loop, divided by the
H^{1/2} weights.

All quantities are exact derivatives of the discretized action, so
finite-difference checks hold to rounding when the same ``M`` is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .hamiltonian import HamiltonianSpec
from .loops import (
    TWO_PI,
    FourierLoop,
    SpectralDecomposition,
    default_samples,
    evaluate,
    evaluation_matrix,
    h12_norm,
    h12_weights,
    mode_indices,
    project,
    transform,
)


class DomainError(ValueError):
    """Raised for embedded points with a radius outside (0, 2)."""


def _samples(x: FourierLoop, M: Optional[int]) -> int:
    M = default_samples(x.N) if M is None else int(M)
    if M < 2 * x.N + 1:
        raise ValueError(f"quadrature with M={M} cannot resolve cutoff N={x.N}")
    return M


def sign_of_modes(N: int) -> np.ndarray:
    return np.sign(mode_indices(N)).astype(float)


def area(x: FourierLoop) -> float:
    """``a(x) = (|P+ x|_s^2 - |P- x|_s^2) / 2 = pi * sum_k k |x_k|^2``."""
    k = mode_indices(x.N).astype(float)
    return float(np.pi * np.sum(k * np.sum(x.coeffs**2, axis=1)))


def hamiltonian_mean(H: HamiltonianSpec, x: FourierLoop, M: Optional[int] = None) -> float:
    M = _samples(x, M)
    t = np.arange(M) / M
    return float(np.mean(H.eval(t, evaluate(x, M))))


def action_value(H: HamiltonianSpec, x: FourierLoop, M: Optional[int] = None) -> float:
    return area(x) - hamiltonian_mean(H, x, M)


def apply_L(x: FourierLoop) -> FourierLoop:
    return FourierLoop(sign_of_modes(x.N)[:, None] * x.coeffs)


def apply_Lhat(x: FourierLoop) -> FourierLoop:
    """``L + P_0``: the identity on ``Z_0 + Z^+`` and ``-1`` on ``Z^-``."""
    s = sign_of_modes(x.N)
    s[x.N] = 1.0
    return FourierLoop(s[:, None] * x.coeffs)


def l2_coefficients(H: HamiltonianSpec, x: FourierLoop, M: Optional[int] = None) -> FourierLoop:
    """Fourier coefficients of ``t -> grad H(t, x(t))`` at cutoff ``x.N``."""
    M = _samples(x, M)
    t = np.arange(M) / M
    return transform(H.grad(t, evaluate(x, M)), x.n, x.N)


def nonlinearity(H: HamiltonianSpec, x: FourierLoop, M: Optional[int] = None) -> FourierLoop:
    """``K(x) = -j* grad H``."""
    g = l2_coefficients(H, x, M)
    return FourierLoop(-g.coeffs / h12_weights(x.N)[:, None])


def gradient(H: HamiltonianSpec, x: FourierLoop, M: Optional[int] = None) -> FourierLoop:
    """H^{1/2} gradient ``L x + K(x)`` of the action."""
    return apply_L(x) + nonlinearity(H, x, M)


def residual(H: HamiltonianSpec, x: FourierLoop, M: Optional[int] = None) -> float:
    return h12_norm(gradient(H, x, M))


def hessian_vec(H: HamiltonianSpec, x: FourierLoop, v: FourierLoop, M: Optional[int] = None) -> FourierLoop:
    """``L v + DK(x) v``, with ``H''`` sampled along ``x`` acting on ``v(t)``."""
    M = _samples(x, M)
    t = np.arange(M) / M
    hv = np.einsum("jab,jb->ja", H.hess(t, evaluate(x, M)), evaluate(v, M))
    g = transform(hv, x.n, x.N)
    return apply_L(v) + FourierLoop(-g.coeffs / h12_weights(x.N)[:, None])


@lru_cache(maxsize=32)
def _evaluation_matrix(n: int, N: int, M: int) -> np.ndarray:
    E = evaluation_matrix(n, N, M)
    E.setflags(write=False)
    return E


def coefficient_system(H: HamiltonianSpec, x: FourierLoop, M: Optional[int] = None):
    """Coefficient-space gradient ``g``, Hessian ``S`` and metric diagonal ``w``.

    The H^{1/2} gradient is ``g / w`` and the Hessian operator is ``S``
    relative to ``diag(w)``; ``S`` is symmetric.
    """
    M = _samples(x, M)
    n, N = x.n, x.N
    t = np.arange(M) / M
    E = _evaluation_matrix(n, N, M)
    samples = evaluate(x, M)
    k = np.repeat(mode_indices(N).astype(float), 2 * n)
    w = np.repeat(h12_weights(N), 2 * n)
    grad_samples = H.grad(t, samples).reshape(-1)
    g = TWO_PI * k * x.to_vector() - E.T @ grad_samples / M
    if H.terms:
        B = H.hess(t, samples)
        EB = np.einsum("jab,jbd->jad", B, E.reshape(M, 2 * n, -1)).reshape(M * 2 * n, -1)
        S = np.diag(TWO_PI * k) - E.T @ EB / M
        S = 0.5 * (S + S.T)
    else:
        S = np.diag(TWO_PI * k)
    return g, S, w


@dataclass(frozen=True)
class LSField:
    """The splitting of the action gradient into linear and compact parts.

    ``gradient = L x + K(x) = Lhat x + Khat(x)`` with ``Lhat = L + P_0``
    invertible and ``Khat = K - P_0``.
    """

    H: HamiltonianSpec
    M: Optional[int] = None

    def L(self, x):
        return apply_L(x)

    def K(self, x):
        return nonlinearity(self.H, x, self.M)

    def Lhat(self, x):
        return apply_Lhat(x)

    def Khat(self, x):
        return self.K(x) - project(x, "zero")

    def __call__(self, x):
        return gradient(self.H, x, self.M)

    @staticmethod
    def spectral_dims(n: int, N: int):
        """Dimensions of the positive and negative spectral subspaces of ``Lhat``."""
        d = SpectralDecomposition(n, N)
        return {"positive": d.dim("zero") + d.dim("plus"), "negative": d.dim("minus")}


def compactness_constant(N: int) -> float:
    """``C(N)`` with ``|j* g|_s <= C(N) |g|_{L^2}`` on the truncation."""
    w = h12_weights(N)
    return float(np.sqrt(np.max(1.0 / w)))


# Embedded penalized functional on D_0^{2n} x Z^+ x Z^-.


@dataclass(frozen=True, eq=False)
class EmbeddedPoint:
    """A point of ``U``: one planar point per torus coordinate, plus ``Z^+``, ``Z^-`` data.

    ``radii`` and ``angles`` have length ``2n``.  ``loop`` supplies the
    ``Z^+`` and ``Z^-`` blocks; its mean is ignored.
    """

    radii: np.ndarray
    angles: np.ndarray
    loop: FourierLoop

    def __post_init__(self):
        r = np.array(self.radii, dtype=float)
        a = np.array(self.angles, dtype=float)
        if r.shape != (2 * self.loop.n,) or a.shape != r.shape:
            raise ValueError(f"need {2 * self.loop.n} radii and angles")
        if np.any(r <= 0.0) or np.any(r >= 2.0):
            raise DomainError(f"radii must lie in (0, 2), got {r}")
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "angles", a)

    @classmethod
    def from_loop(cls, x: FourierLoop, radii=None) -> "EmbeddedPoint":
        r = np.ones(2 * x.n) if radii is None else radii
        return cls(r, TWO_PI * x.x0, x)

    @property
    def planar(self) -> np.ndarray:
        return np.stack([self.radii * np.cos(self.angles), self.radii * np.sin(self.angles)], axis=1)

    def norm(self) -> float:
        """Norm in ``R^{4n} x Z^+ x Z^-``."""
        rest = h12_norm(self.loop.with_x0(np.zeros(2 * self.loop.n)))
        return float(np.sqrt(np.sum(self.radii**2) + rest**2))


@dataclass(frozen=True, eq=False)
class EmbeddedTangent:
    planar: np.ndarray  # (2n, 2) Euclidean gradient in each plane
    radial: np.ndarray
    angular: np.ndarray  # derivative along the unit angular direction
    loop: FourierLoop  # Z^+ and Z^- blocks; mean zero

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.planar**2) + h12_norm(self.loop) ** 2))


def embedded_projection(p: EmbeddedPoint) -> FourierLoop:
    """Forget the radii and read the torus coordinates from the angles."""
    return p.loop.with_x0(p.angles / TWO_PI)


def penalty(p: EmbeddedPoint) -> float:
    return float(np.sum((1.0 - p.radii) ** 2))


def embedded_value(H: HamiltonianSpec, p: EmbeddedPoint, M: Optional[int] = None) -> float:
    return action_value(H, embedded_projection(p), M) + penalty(p)


def embedded_gradient(H: HamiltonianSpec, p: EmbeddedPoint, M: Optional[int] = None) -> EmbeddedTangent:
    x = embedded_projection(p)
    G = gradient(H, x, M)
    # d/dtheta_i = (1/2pi) d/dx0_i and the Euclidean x0-derivative is G_0
    angular = G.x0 / (TWO_PI * p.radii)
    radial = 2.0 * (p.radii - 1.0)
    c, s = np.cos(p.angles), np.sin(p.angles)
    planar = np.stack([radial * c - angular * s, radial * s + angular * c], axis=1)
    return EmbeddedTangent(planar, radial, angular, G.with_x0(np.zeros(2 * x.n)))
