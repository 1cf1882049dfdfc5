"""Truncated Fourier model of the loop space H^{1/2}(S^1, R^{2n}).

A loop is stored by real coefficient vectors against the rotation basis
``e_k(t) = exp(2*pi*k*t*J)``, with ``J`` the block matrix ``[[0, -1], [1, 0]]``
repeated over the ``n`` symplectic pairs, so that

    x(t) = x_0 + sum_{0 < |k| <= N} e_k(t) x_k.

Coordinates are interleaved, ``(q_1, p_1, ..., q_n, p_n)``.  On a single pair
``e_k(t)`` is the rotation by ``2*pi*k*t``, which is multiplication of
``z = q + i p`` by ``exp(2*pi*i*k*t)``.  Evaluation and transforms therefore
reduce to a complex FFT per pair.

At a fixed cutoff every space here is finite-dimensional, so weak and
strong topologies coincide.  The distinction only matters in the limit
``N -> infinity``, which nothing in this package takes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional

import numpy as np

TWO_PI = 2.0 * np.pi

PARTS = ("zero", "plus", "minus")


class ShapeError(ValueError):
    """Raised when loops of different dimension or cutoff are combined."""


class AliasingError(ValueError):
    """Raised when a sample count cannot resolve the requested modes."""


def symplectic_matrix(n: int) -> np.ndarray:
    """The block-diagonal ``J`` with blocks ``[[0, -1], [1, 0]]``."""
    J = np.zeros((2 * n, 2 * n))
    for i in range(n):
        J[2 * i, 2 * i + 1] = -1.0
        J[2 * i + 1, 2 * i] = 1.0
    return J


def rotation(n: int, k: int, t: float) -> np.ndarray:
    """Matrix of ``e_k(t)`` acting on R^{2n}."""
    c, s = np.cos(TWO_PI * k * t), np.sin(TWO_PI * k * t)
    R = np.zeros((2 * n, 2 * n))
    for i in range(n):
        R[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = [[c, -s], [s, c]]
    return R


def mode_indices(N: int) -> np.ndarray:
    """Fourier indices ``-N..N``; row ``k + N`` of a coefficient array."""
    return np.arange(-N, N + 1)


def h12_weights(N: int) -> np.ndarray:
    """Per-mode weights of the H^{1/2} product: 1 at k=0, 2*pi*|k| otherwise."""
    k = np.abs(mode_indices(N)).astype(float)
    w = TWO_PI * k
    w[N] = 1.0
    return w


def default_samples(N: int) -> int:
    return 8 * N


@dataclass(frozen=True)
class SpectralDecomposition:
    """Index sets of the splitting ``Z_0 + Z^+ + Z^-`` at cutoff ``N``."""

    n: int
    N: int

    def mask(self, part: str) -> np.ndarray:
        k = mode_indices(self.N)
        if part == "zero":
            return k == 0
        if part == "plus":
            return k > 0
        if part == "minus":
            return k < 0
        raise ValueError(f"unknown part {part!r}; expected one of {PARTS}")

    def dim(self, part: str) -> int:
        return int(self.mask(part).sum()) * 2 * self.n

    @property
    def total_dim(self) -> int:
        return (2 * self.N + 1) * 2 * self.n


@dataclass(frozen=True, eq=False)
class FourierLoop:
    """A loop in R^{2n} truncated at Fourier cutoff ``N``.

    ``coeffs`` has shape ``(2N+1, 2n)``; row ``k + N`` holds ``x_k`` and the
    middle row is the mean ``x_0``.  The array is copied and frozen.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] % 2 != 1 or c.shape[1] % 2 != 0 or c.shape[1] == 0:
            raise ShapeError(f"coefficient array must have shape (2N+1, 2n), got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # construction

    @classmethod
    def zeros(cls, n: int, N: int) -> "FourierLoop":
        return cls(np.zeros((2 * N + 1, 2 * n)))

    @classmethod
    def constant(cls, x0, N: int) -> "FourierLoop":
        x0 = np.asarray(x0, dtype=float)
        c = np.zeros((2 * N + 1, x0.size))
        c[N] = x0
        return cls(c)

    @classmethod
    def from_modes(
        cls, n: int, N: int, x0=None, modes: Optional[Mapping[int, Iterable[float]]] = None
    ) -> "FourierLoop":
        c = np.zeros((2 * N + 1, 2 * n))
        if x0 is not None:
            c[N] = np.asarray(x0, dtype=float)
        for k, v in (modes or {}).items():
            if k == 0 or abs(k) > N:
                raise ShapeError(f"mode {k} outside 0 < |k| <= {N}")
            c[k + N] = np.asarray(v, dtype=float)
        return cls(c)

    @classmethod
    def from_vector(cls, vec, n: int, N: int) -> "FourierLoop":
        return cls(np.asarray(vec, dtype=float).reshape(2 * N + 1, 2 * n))

    @classmethod
    def random(cls, n: int, N: int, rng: np.random.Generator, scale: float = 1.0, decay: float = 1.0):
        """Gaussian coefficients with standard deviation ``scale / (1+|k|)**decay``."""
        k = np.abs(mode_indices(N))[:, None]
        return cls(scale * rng.standard_normal((2 * N + 1, 2 * n)) / (1.0 + k) ** decay)

    # views

    @property
    def n(self) -> int:
        return self.coeffs.shape[1] // 2

    @property
    def N(self) -> int:
        return self.coeffs.shape[0] // 2

    @property
    def x0(self) -> np.ndarray:
        return self.coeffs[self.N]

    def mode(self, k: int) -> np.ndarray:
        if abs(k) > self.N:
            raise ShapeError(f"mode {k} beyond cutoff {self.N}")
        return self.coeffs[k + self.N]

    def modes(self) -> Dict[int, np.ndarray]:
        """The nonzero-index coefficients as a ``{k: x_k}`` map."""
        return {int(k): self.coeffs[k + self.N] for k in mode_indices(self.N) if k != 0}

    def to_vector(self) -> np.ndarray:
        return self.coeffs.reshape(-1).copy()

    def with_x0(self, x0) -> "FourierLoop":
        c = self.coeffs.copy()
        c[self.N] = x0
        return FourierLoop(c)

    def resized(self, N: int) -> "FourierLoop":
        """Zero-pad or truncate to cutoff ``N``."""
        out = np.zeros((2 * N + 1, 2 * self.n))
        m = min(N, self.N)
        out[N - m : N + m + 1] = self.coeffs[self.N - m : self.N + m + 1]
        return FourierLoop(out)

    # arithmetic

    def _check(self, other: "FourierLoop"):
        if not isinstance(other, FourierLoop):
            return NotImplemented
        if other.coeffs.shape != self.coeffs.shape:
            raise ShapeError(
                f"loops differ in shape: (n={self.n}, N={self.N}) vs (n={other.n}, N={other.N})"
            )

    def __add__(self, other):
        self._check(other)
        return FourierLoop(self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return FourierLoop(self.coeffs - other.coeffs)

    def __mul__(self, s: float):
        return FourierLoop(float(s) * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self):
        return FourierLoop(-self.coeffs)

    def __repr__(self):
        return f"FourierLoop(n={self.n}, N={self.N}, x0={np.array2string(self.x0, precision=6)})"


def _check_pair(x: FourierLoop, y: FourierLoop):
    if x.coeffs.shape != y.coeffs.shape:
        raise ShapeError(f"loops differ in shape: (n={x.n}, N={x.N}) vs (n={y.n}, N={y.N})")


def h12_inner(x: FourierLoop, y: FourierLoop) -> float:
    """``<x0, y0> + 2*pi * sum_k |k| <x_k, y_k>``."""
    _check_pair(x, y)
    w = h12_weights(x.N)
    return float(np.einsum("k,ki,ki->", w, x.coeffs, y.coeffs))


def h12_norm(x: FourierLoop) -> float:
    return float(np.sqrt(max(h12_inner(x, x), 0.0)))


def project(x: FourierLoop, part: str) -> FourierLoop:
    """Orthogonal projection onto ``Z_0`` (``"zero"``), ``Z^+`` or ``Z^-``."""
    mask = SpectralDecomposition(x.n, x.N).mask(part)
    return FourierLoop(np.where(mask[:, None], x.coeffs, 0.0))


def to_complex(coeffs: np.ndarray) -> np.ndarray:
    """Real pair blocks ``(a, b)`` to ``a + i b``; shape ``(..., n)``."""
    return coeffs[..., 0::2] + 1j * coeffs[..., 1::2]


def from_complex(z: np.ndarray) -> np.ndarray:
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def evaluate(x: FourierLoop, M: int) -> np.ndarray:
    """Values ``x(j/M)``, ``j = 0..M-1``, as an ``(M, 2n)`` array."""
    if M < 2 * x.N + 1:
        raise AliasingError(f"M={M} samples cannot resolve cutoff N={x.N}; need M >= {2 * x.N + 1}")
    z = to_complex(x.coeffs)
    bins = np.zeros((M, x.n), dtype=complex)
    bins[mode_indices(x.N) % M] = z
    return from_complex(M * np.fft.ifft(bins, axis=0))


def transform(samples, n: int, N: int, strict: bool = False, atol: float = 1e-9) -> FourierLoop:
    """Discrete projection of ``M`` equispaced samples onto modes ``|k| <= N``.

    Content at ``|k| > N`` folds onto the bin ``k mod M``; when that bin lies
    inside ``-N..N`` it contaminates the coefficient there, otherwise it is
    discarded.  With ``strict=True`` any sample content not reproduced by the
    returned loop raises :class:`AliasingError`.
    """
    s = np.asarray(samples, dtype=float)
    M = s.shape[0]
    if s.ndim != 2 or s.shape[1] != 2 * n:
        raise ShapeError(f"samples must have shape (M, {2 * n}), got {s.shape}")
    if M < 2 * N + 1:
        raise AliasingError(f"M={M} samples cannot resolve cutoff N={N}; need M >= {2 * N + 1}")
    zhat = np.fft.fft(to_complex(s), axis=0) / M
    loop = FourierLoop(from_complex(zhat[mode_indices(N) % M]))
    if strict:
        resid = np.max(np.abs(evaluate(loop, M) - s)) if M else 0.0
        if resid > atol * max(1.0, np.max(np.abs(s))):
            raise AliasingError(f"samples carry content beyond cutoff N={N} (residual {resid:.3e})")
    return loop


def evaluation_matrix(n: int, N: int, M: int) -> np.ndarray:
    """Linear map from ``to_vector()`` coordinates to stacked samples.

    Row ``j*2n + i`` gives coordinate ``i`` of ``x(j/M)``.
    """
    if M < 2 * N + 1:
        raise AliasingError(f"M={M} samples cannot resolve cutoff N={N}")
    D = (2 * N + 1) * 2 * n
    E = np.zeros((M, 2 * n, D))
    t = np.arange(M) / M
    for r, k in enumerate(mode_indices(N)):
        c, s = np.cos(TWO_PI * k * t), np.sin(TWO_PI * k * t)
        for i in range(n):
            col_a = r * 2 * n + 2 * i
            col_b = col_a + 1
            E[:, 2 * i, col_a] = c
            E[:, 2 * i + 1, col_a] = s
            E[:, 2 * i, col_b] = -s
            E[:, 2 * i + 1, col_b] = c
    return E.reshape(M * 2 * n, D)


def time_derivative(x: FourierLoop) -> FourierLoop:
    """Coefficients of ``dx/dt``: mode ``k`` maps to ``2*pi*k*J x_k``."""
    k = mode_indices(x.N).astype(float)
    J = symplectic_matrix(x.n)
    return FourierLoop(TWO_PI * k[:, None] * (x.coeffs @ J.T))
