"""Finite graded algebra models for cup-length bookkeeping.

Rings and modules are given by structure constants over the rationals
(exact ``Fraction`` arithmetic) or the two-element field.  The cup-length of
a module ``M`` over a ring ``R`` is the largest ``k`` such that some
``m * a_1 * ... * a_{k-1}`` is nonzero with every ``a_i`` of positive
degree (``0`` for the zero module).  Products are multilinear, so a nonzero
chain of general elements expands into a nonzero chain of basis elements,
and the search over basis chains is exhaustive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np


class AlgebraError(ValueError):
    """Structure constants violate an axiom, or elements of different algebras were mixed."""


@dataclass(frozen=True)
class Field:
    name: str
    characteristic: int

    def coerce(self, v):
        if self.characteristic == 2:
            return int(v) % 2
        return Fraction(v)

    def sign(self, s: int):
        return 1 if self.characteristic == 2 else s

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        if self.characteristic == 2:
            return np.vectorize(lambda v: int(v) % 2, otypes=[object])(arr) if arr.size else arr
        return arr

    def inv(self, v):
        if v == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 if self.characteristic == 2 else 1 / Fraction(v)


QQ = Field("QQ", 0)
GF2 = Field("GF2", 2)


def _numeric(arr: np.ndarray) -> Optional[np.ndarray]:
    """Float copy of an integral array with small entries (exact in float64), else None."""
    try:
        out = arr.astype(float)
    except (TypeError, ValueError, OverflowError):
        return None
    if out.size and (np.max(np.abs(out)) >= 2**20 or np.any(out != np.round(out))):
        return None
    return out


def _associativity_defect(A: np.ndarray, B: np.ndarray, T: np.ndarray, field: Field):
    """First ``(i, a, b)`` with ``(e_i A_a) B_b != e_i (T[a, b])`` under ``A``, or None.

    ``A[i, a, :]`` is the action of basis ``a`` on basis ``i``; ``B`` applies
    next and ``T`` is the ring table.  For rings all three coincide.
    """
    d, r = A.shape[0], A.shape[1]
    fa = _numeric(A)
    fb = fa if B is A else _numeric(B)
    ft = fa if T is A else _numeric(T)
    for i in range(d):
        if fa is not None and fb is not None and ft is not None:
            # left[a, b, :] = sum_l A[i, a, l] B[l, b, :]; right[a, b, :] = sum_c T[a, b, c] A[i, c, :]
            left = (fa[i] @ fb.reshape(fb.shape[0], -1)).reshape(r, r, -1)
            right = (ft.reshape(r * r, r) @ fa[i]).reshape(r, r, -1)
            diff = left - right
            if field.characteristic:
                diff = np.mod(diff, field.characteristic)
            if not diff.any():
                continue
            nz = np.argwhere(diff != 0)
        else:
            left = np.tensordot(A[i], B, axes=([1], [0]))
            right = np.tensordot(T, A[i], axes=([2], [0]))
            nz = np.argwhere(field.reduce(left - right) != 0)
        if len(nz):
            return (i, int(nz[0][0]), int(nz[0][1]))
    return None


def _sparse(action: np.ndarray) -> List[List[List[Tuple[int, object]]]]:
    """``out[a][i]`` lists the nonzero ``(k, c)`` of ``basis_i * basis_a``."""
    d, r, _ = action.shape
    return [[[(int(k), action[i, a, k]) for k in np.nonzero(action[i, a] != 0)[0]] for i in range(d)]
            for a in range(r)]


def _sparse_act(vec: Dict[int, object], rows, field: Field) -> Dict[int, object]:
    out: Dict[int, object] = {}
    for i, ci in vec.items():
        for k, c in rows[i]:
            out[k] = out.get(k, 0) + ci * c
    if field.characteristic:
        out = {k: v % field.characteristic for k, v in out.items()}
    return {k: v for k, v in out.items() if v != 0}


def _normalize_sparse(vec: Dict[int, object], field: Field) -> Tuple:
    k0 = min(vec)
    inv = field.inv(vec[k0])
    return tuple((k, field.coerce(v * inv)) for k, v in sorted(vec.items()))


def _zeros(shape) -> np.ndarray:
    a = np.empty(shape, dtype=object)
    a.fill(0)
    return a


@dataclass(frozen=True, eq=False)
class Element:
    """A vector in a ring or module, tagged with its parent."""

    parent: object
    coeffs: Tuple

    def __add__(self, other: "Element") -> "Element":
        _same(self, other)
        v = self.parent.field.reduce(np.array(self.coeffs, dtype=object) + np.array(other.coeffs, dtype=object))
        return Element(self.parent, tuple(v))

    def scale(self, c) -> "Element":
        v = self.parent.field.reduce(np.array(self.coeffs, dtype=object) * self.parent.field.coerce(c))
        return Element(self.parent, tuple(v))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.parent is other.parent and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def support(self) -> List[int]:
        return [i for i, c in enumerate(self.coeffs) if c != 0]

    def __repr__(self):
        terms = [f"{c}*{self.parent.labels[i]}" for i, c in enumerate(self.coeffs) if c != 0]
        return " + ".join(terms) or "0"


def _same(a: Element, b: Element):
    if a.parent is not b.parent:
        raise AlgebraError("elements belong to different algebras")


class GradedRing:
    """Associative unital graded algebra with a finite basis.

    ``table[i, j]`` is the coefficient vector of ``b_i * b_j``.  Basis 0 must
    be the unit, in degree 0.  Axioms are verified exhaustively on basis
    triples at construction (use ``check=False`` only for trusted input).
    """

    def __init__(self, field: Field, labels: Sequence[str], degrees: Sequence[int], table: np.ndarray,
                 commutative_signs: bool = True, check: bool = True):
        self.field = field
        self.labels = list(labels)
        self.degrees = np.array(degrees, dtype=int)
        d = len(self.labels)
        self.table = field.reduce(np.asarray(table, dtype=object).reshape(d, d, d))
        self.commutative_signs = commutative_signs
        if check:
            self.check_axioms()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def check_axioms(self):
        T, deg, d = self.table, self.degrees, self.dim
        if d == 0 or deg[0] != 0:
            raise AlgebraError("basis element 0 must be the unit in degree 0")
        unit = np.zeros(d, dtype=object)
        unit[0] = 1
        for i in range(d):
            e = np.zeros(d, dtype=object)
            e[i] = 1
            if not (np.array_equal(T[0, i], e) and np.array_equal(T[i, 0], e)):
                raise AlgebraError(f"basis 0 is not a two-sided unit on {self.labels[i]}")
        nz = np.argwhere(T != 0)
        off = nz[deg[nz[:, 2]] != deg[nz[:, 0]] + deg[nz[:, 1]]]
        if len(off):
            i, j, _ = off[0]
            raise AlgebraError(f"{self.labels[i]}*{self.labels[j]} leaves degree {deg[i] + deg[j]}")
        if self.commutative_signs:
            sign = np.array([[self.field.sign((-1) ** (int(a) * int(b))) for b in deg] for a in deg], dtype=object)
            diff = self.field.reduce(T - sign[:, :, None] * T.transpose(1, 0, 2))
            bad = np.argwhere(diff != 0)
            if len(bad):
                i, j, _ = bad[0]
                raise AlgebraError(f"{self.labels[i]}, {self.labels[j]} not graded-commutative")
        # (b_i b_j) b_k = b_i (b_j b_k) for all triples
        bad = _associativity_defect(T, T, T, self.field)
        if bad is not None:
            i, j, k = bad
            raise AlgebraError(f"associativity fails on ({self.labels[i]}, {self.labels[j]}, {self.labels[k]})")

    def basis(self, i: int) -> Element:
        c = [0] * self.dim
        c[i] = self.field.coerce(1)
        return Element(self, tuple(c))

    def element(self, coeffs) -> Element:
        if len(coeffs) != self.dim:
            raise AlgebraError(f"expected {self.dim} coefficients")
        return Element(self, tuple(self.field.coerce(c) for c in coeffs))

    @property
    def one(self) -> Element:
        return self.basis(0)

    def positive_basis(self) -> List[int]:
        return [i for i in range(self.dim) if self.degrees[i] > 0]

    def mul_vec(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=object)
        b = np.asarray(b, dtype=object)
        return self.field.reduce(np.tensordot(np.tensordot(a, self.table, axes=([0], [0])), b, axes=([0], [0])))

    def subring(self, indices: Sequence[int]) -> "GradedRing":
        """The subalgebra on a basis subset that is closed under products."""
        idx = list(indices)
        if idx[:1] != [0]:
            raise AlgebraError("a subring must contain the unit as its first basis element")
        T = self.table[np.ix_(idx, idx, range(self.dim))]
        outside = [k for k in range(self.dim) if k not in idx]
        if np.any(T[:, :, outside] != 0):
            raise AlgebraError("basis subset is not closed under multiplication")
        return GradedRing(self.field, [self.labels[i] for i in idx], self.degrees[idx], T[:, :, idx],
                          self.commutative_signs)

    def as_module(self) -> "GradedModule":
        return GradedModule(self, self.labels, self.degrees, self.table)


def cup(a: Element, b: Element) -> Element:
    _same(a, b)
    R = a.parent
    if not isinstance(R, GradedRing):
        raise AlgebraError("cup is defined on ring elements; use module_act for modules")
    return Element(R, tuple(R.mul_vec(a.coeffs, b.coeffs)))


class GradedModule:
    """Right module over a :class:`GradedRing`.

    ``action[i, a]`` is the coefficient vector of ``m_i * r_a``.
    """

    def __init__(self, ring: GradedRing, labels: Sequence[str], degrees: Sequence[int], action,
                 check: bool = True):
        self.ring = ring
        self.field = ring.field
        self.labels = list(labels)
        self.degrees = np.array(degrees, dtype=int)
        d = len(self.labels)
        self.action = self.field.reduce(np.asarray(action, dtype=object).reshape(d, ring.dim, d)) if d else \
            _zeros((0, ring.dim, 0))
        if check:
            self.check_axioms()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def check_axioms(self):
        A, d, R = self.action, self.dim, self.ring
        if d == 0:
            return
        for i in range(d):
            e = np.zeros(d, dtype=object)
            e[i] = 1
            if not np.array_equal(A[i, 0], e):
                raise AlgebraError(f"unit does not act as the identity on {self.labels[i]}")
        nz = np.argwhere(A != 0)
        off = nz[self.degrees[nz[:, 2]] != self.degrees[nz[:, 0]] + R.degrees[nz[:, 1]]]
        if len(off):
            i, a, _ = off[0]
            raise AlgebraError(f"{self.labels[i]}*{R.labels[a]} leaves degree")
        # (m a) b = m (a b)
        if _associativity_defect(A, A, R.table, self.field) is not None:
            raise AlgebraError("module action is not associative")

    def basis(self, i: int) -> Element:
        c = [0] * self.dim
        c[i] = self.field.coerce(1)
        return Element(self, tuple(c))

    def element(self, coeffs) -> Element:
        if len(coeffs) != self.dim:
            raise AlgebraError(f"expected {self.dim} coefficients")
        return Element(self, tuple(self.field.coerce(c) for c in coeffs))

    def act_vec(self, m, a) -> np.ndarray:
        m = np.asarray(m, dtype=object)
        a = np.asarray(a, dtype=object)
        return self.field.reduce(np.tensordot(np.tensordot(m, self.action, axes=([0], [0])), a, axes=([0], [0])))

    def submodule(self, indices: Sequence[int]) -> "GradedModule":
        """Span of a basis subset closed under the action."""
        idx = list(indices)
        outside = [k for k in range(self.dim) if k not in idx]
        A = self.action[np.ix_(idx, range(self.ring.dim), range(self.dim))] if idx else _zeros((0, self.ring.dim, self.dim))
        if idx and outside and np.any(A[:, :, outside] != 0):
            raise AlgebraError("basis subset is not a submodule")
        return GradedModule(self.ring, [self.labels[i] for i in idx], self.degrees[idx],
                            A[:, :, idx] if idx else _zeros((0, self.ring.dim, 0)))

    def quotient(self, indices: Sequence[int]) -> "GradedModule":
        """Quotient by the submodule spanned by a basis subset."""
        self.submodule(indices)
        keep = [k for k in range(self.dim) if k not in set(indices)]
        A = self.action[np.ix_(keep, range(self.ring.dim), keep)] if keep else _zeros((0, self.ring.dim, 0))
        return GradedModule(self.ring, [self.labels[i] for i in keep], self.degrees[keep], A)

    def restrict(self, ring: GradedRing, ring_map) -> "GradedModule":
        """The module over ``ring`` obtained through a ring map ``ring -> self.ring``.

        ``ring_map[a]`` is the image of basis ``a`` of ``ring`` as a coefficient
        vector in ``self.ring``; it must be a graded unital homomorphism.
        """
        phi = self.field.reduce(np.asarray(ring_map, dtype=object).reshape(ring.dim, self.ring.dim))
        for a in range(ring.dim):
            for b in np.nonzero(phi[a] != 0)[0]:
                if self.ring.degrees[b] != ring.degrees[a]:
                    raise AlgebraError("ring map does not preserve degree")
        for a, b in itertools.product(range(ring.dim), repeat=2):
            lhs = self.ring.mul_vec(phi[a], phi[b])
            rhs = self.field.reduce(np.tensordot(ring.table[a, b], phi, axes=([0], [0])))
            if np.any(self.field.reduce(lhs - rhs) != 0):
                raise AlgebraError("ring map is not multiplicative")
        A = self.field.reduce(np.tensordot(self.action, phi, axes=([1], [1])).transpose(0, 2, 1))
        return GradedModule(ring, self.labels, self.degrees, A)

    def change_basis(self, P) -> "GradedModule":
        """Same module in the basis ``m'_i = sum_j P[i, j] m_j``; ``P`` must be invertible and degree-preserving."""
        P = np.asarray(P, dtype=object)
        Pinv = _inverse(P, self.field)
        # m'_i a = sum_j P[i,j] m_j a = sum_{j,l} P[i,j] A[j,a,l] m_l, then re-expand m_l in the new basis
        A = np.tensordot(np.tensordot(P, self.action, axes=([1], [0])), Pinv, axes=([2], [0]))
        degs = []
        for i in range(self.dim):
            ds = {int(self.degrees[j]) for j in np.nonzero(P[i] != 0)[0]}
            if len(ds) != 1:
                raise AlgebraError("basis change mixes degrees")
            degs.append(ds.pop())
        return GradedModule(self.ring, [f"{l}'" for l in self.labels], degs, self.field.reduce(A))


def module_act(m: Element, a: Element) -> Element:
    M = m.parent
    if not isinstance(M, GradedModule) or a.parent is not M.ring:
        raise AlgebraError("module_act needs a module element and an element of its ring")
    return Element(M, tuple(M.act_vec(m.coeffs, a.coeffs)))


def _inverse(P: np.ndarray, field: Field) -> np.ndarray:
    """Gauss-Jordan inverse over the field."""
    d = P.shape[0]
    A = np.concatenate([np.array(P, dtype=object), np.eye(d, dtype=int).astype(object)], axis=1)
    A = np.vectorize(field.coerce, otypes=[object])(A) if A.size else A
    for c in range(d):
        piv = next((r for r in range(c, d) if A[r, c] != 0), None)
        if piv is None:
            raise AlgebraError("matrix is singular")
        A[[c, piv]] = A[[piv, c]]
        A[c] = field.reduce(A[c] * field.inv(A[c, c]))
        for r in range(d):
            if r != c and A[r, c] != 0:
                A[r] = field.reduce(A[r] - A[r, c] * A[c])
    return A[:, d:]


def exterior_algebra(m: int, field: Field = QQ) -> GradedRing:
    """Exterior algebra on ``m`` degree-1 generators; basis = subsets of ``{1..m}``."""
    subsets = [s for d in range(m + 1) for s in itertools.combinations(range(1, m + 1), d)]
    index = {s: i for i, s in enumerate(subsets)}
    D = len(subsets)
    T = _zeros((D, D, D))
    for i, S in enumerate(subsets):
        for j, U in enumerate(subsets):
            if set(S) & set(U):
                continue
            inversions = sum(1 for s in S for u in U if s > u)
            T[i, j, index[tuple(sorted(S + U))]] = field.sign((-1) ** inversions)
    labels = ["1"] + ["x" + "x".join(map(str, s)) for s in subsets[1:]]
    # exhaustive checks are cheap up to m = 6 (64^3 triples, vectorized)
    return GradedRing(field, labels, [len(s) for s in subsets], T)


def point_ring(field: Field = QQ) -> GradedRing:
    """Cohomology of a point: the field in degree 0."""
    T = _zeros((1, 1, 1))
    T[0, 0, 0] = 1
    return GradedRing(field, ["1"], [0], T)


def sphere_ring(d: int = 2, field: Field = QQ) -> GradedRing:
    """``H*(S^d)``: unit and one generator ``g`` in degree ``d`` with ``g*g = 0``."""
    T = _zeros((2, 2, 2))
    T[0, 0, 0] = T[0, 1, 1] = T[1, 0, 1] = 1
    return GradedRing(field, ["1", "g"], [0, d], T)


def trivial_action_module(ring: GradedRing, degrees: Sequence[int], labels: Optional[Sequence[str]] = None) -> GradedModule:
    """Graded vector space where positive-degree ring classes act by zero."""
    d = len(degrees)
    A = _zeros((d, ring.dim, d))
    for i in range(d):
        A[i, 0, i] = 1
    return GradedModule(ring, labels or [f"m{i}" for i in range(d)], degrees, A)


def zero_module(ring: GradedRing) -> GradedModule:
    return GradedModule(ring, [], [], _zeros((0, ring.dim, 0)))


@dataclass
class CupLengthCertificate:
    value: int
    beta: Optional[str]  # module basis label of the witness
    alphas: List[str]  # ring basis labels, all of positive degree
    exhaustive: bool = True
    random_checks: int = 0
    note: str = "exhaustive search over basis chains; complete by multilinearity"

    def to_dict(self):
        return {"value": self.value, "beta": self.beta, "alphas": list(self.alphas),
                "exhaustive": self.exhaustive, "random_checks": self.random_checks, "note": self.note}


def cup_length(M: GradedModule, ring: Optional[GradedRing] = None, random_checks: int = 32,
               seed: int = 0) -> CupLengthCertificate:
    """Relative cup-length of ``M`` over its ring, with a witness chain.

    Chains are grown level by level from the module basis, multiplying by
    every positive-degree ring basis element and keeping one representative
    per nonzero vector up to scale.  Afterwards ``random_checks`` seeded
    random chains one step longer than the result (random module element
    times random positive-degree ring elements) are confirmed to vanish.
    """
    R = M.ring if ring is None else ring
    if R is not M.ring:
        raise AlgebraError("module is defined over a different ring")
    if M.dim == 0:
        return CupLengthCertificate(0, None, [])
    pos = R.positive_basis()
    rows = _sparse(M.action)
    level: Dict[Tuple, Tuple[Dict[int, object], int, List[int]]] = {}
    for i in range(M.dim):
        v = {i: M.field.coerce(1)}
        level.setdefault(_normalize_sparse(v, M.field), (v, i, []))
    depth = 0
    while True:
        nxt: Dict[Tuple, Tuple[Dict[int, object], int, List[int]]] = {}
        for vec, beta, chain in level.values():
            for a in pos:
                w = _sparse_act(vec, rows[a], M.field)
                if w:
                    nxt.setdefault(_normalize_sparse(w, M.field), (w, beta, chain + [a]))
        if not nxt:
            break
        level, depth = nxt, depth + 1
    _, beta, chain = min(level.values(), key=lambda t: (t[1], t[2]))
    cert = CupLengthCertificate(depth + 1, M.labels[beta], [R.labels[a] for a in chain])
    cert.random_checks = _random_vanishing(M, rows, pos, depth + 1, random_checks, seed)
    return cert


def _random_vanishing(M: GradedModule, rows, pos: List[int], length: int, trials: int, seed: int,
                      terms: int = 3) -> int:
    if not pos or trials <= 0:
        return 0
    rng = np.random.default_rng(seed)
    coef = lambda: M.field.coerce(int(rng.choice([-2, -1, 1, 2])))
    for _ in range(trials):
        v = {int(i): coef() for i in rng.choice(M.dim, size=min(terms, M.dim), replace=False)}
        for _ in range(length):
            w: Dict[int, object] = {}
            for p in rng.choice(pos, size=min(terms, len(pos)), replace=False):
                c = coef()
                for k, x in _sparse_act(v, rows[int(p)], M.field).items():
                    w[k] = w.get(k, 0) + c * x
            v = {k: (x % 2 if M.field.characteristic else x) for k, x in w.items()}
            v = {k: x for k, x in v.items() if x != 0}
            if not v:
                break
        if v:
            raise AlgebraError("random chain longer than the cup-length is nonzero")
    return trials


def torus_index_module(n: int, field: Field = QQ) -> Tuple[GradedRing, GradedModule]:
    """Ring ``H*(T^{2n})`` and the index-pair module, which is the ring itself."""
    if n < 1:
        raise ValueError("n must be >= 1")
    R = exterior_algebra(2 * n, field)
    return R, R.as_module()


def kunneth(a: Sequence[int], b: Sequence[int]) -> List[int]:
    """Graded dimensions of a tensor product (convolution of Betti sequences)."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def torus_betti(n: int) -> List[int]:
    """Betti numbers of ``T^{2n}`` as the Kunneth power of the circle."""
    betti = [1]
    for _ in range(2 * n):
        betti = kunneth(betti, [1, 1])
    return betti


def ball_pair_betti(d: int) -> List[int]:
    """Graded dimensions of ``H*(B^d, dB^d)``: one class in degree ``d``."""
    return [0] * d + [1]


@dataclass
class SuspensionTable:
    n: int
    dims: List[int]
    tables: Dict[int, List[int]]  # d -> graded dims of H^k(X_V, A_V), k = 0..d+2n
    stable: bool

    def to_dict(self):
        return {"n": self.n, "dims": self.dims, "tables": {str(k): v for k, v in self.tables.items()},
                "stable": self.stable}


def suspension_model(n: int, dims: Sequence[int]) -> SuspensionTable:
    """``H^k((B(V), dB(V)) x T^{2n})`` for each ``dim V`` in ``dims``.

    Stability means each table is the previous one shifted by the difference
    in dimension, so the limit over ``V`` is ``H*(T^{2n})`` up to the shift.
    """
    dims = list(dims)
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError("dims must be strictly increasing")
    betti = torus_betti(n)
    tables = {d: kunneth(ball_pair_betti(d), betti) for d in dims}
    stable = all(
        tables[b] == [0] * (b - a) + tables[a] for a, b in zip(dims, dims[1:])
    ) and all(tables[d][d:] == betti for d in dims)
    return SuspensionTable(n, dims, tables, stable)


@dataclass
class SubadditivityReport:
    kind: str
    lhs: int
    rhs: int
    terms: List[int] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    def to_dict(self):
        return {"kind": self.kind, "lhs": self.lhs, "rhs": self.rhs, "terms": self.terms, "holds": self.holds}


def subadditivity_check(chain_modules: Sequence[GradedModule], total: GradedModule) -> SubadditivityReport:
    """``CL(total) <= sum CL(chain_i)`` for the successive layers of a filtration."""
    for M in chain_modules:
        if M.ring is not total.ring:
            raise AlgebraError("all modules must share one ring")
    terms = [cup_length(M).value for M in chain_modules]
    rep = SubadditivityReport("filtration", cup_length(total).value, sum(terms), terms)
    if not rep.holds:
        raise AssertionError(f"subadditivity violated: {rep.lhs} > {rep.terms}")
    return rep


def restriction_check(M: GradedModule, ring: GradedRing, ring_map) -> SubadditivityReport:
    """Cup-length can only drop when classes come through a ring map from a larger set."""
    small = cup_length(M).value
    big = cup_length(M.restrict(ring, ring_map)).value
    rep = SubadditivityReport("restriction", big, small, [small])
    if not rep.holds:
        raise AssertionError(f"restriction monotonicity violated: {big} > {small}")
    return rep


def positive_ideal_filtration(R: GradedRing) -> Tuple[GradedModule, GradedModule, GradedModule]:
    """``(R^{>0}, R / R^{>0}, R)``: a two-step filtration of ``R`` as a module over itself."""
    M = R.as_module()
    pos = R.positive_basis()
    return M.submodule(pos), M.quotient(pos), M


def degree_zero_inclusion(R: GradedRing) -> Tuple[GradedRing, np.ndarray]:
    """The degree-0 subring of ``R`` and its inclusion as a ring-map matrix."""
    idx = [i for i in range(R.dim) if R.degrees[i] == 0]
    S = R.subring(idx)
    phi = _zeros((S.dim, R.dim))
    for a, i in enumerate(idx):
        phi[a, i] = 1
    return S, phi


def morse_levels_check(group_sizes: Sequence[int], n: int) -> SubadditivityReport:
    """Cup-length bookkeeping of a Morse filtration.

    Each level's index pair sits in a union of discs, whose ring has no
    positive-degree classes, so every layer has cup-length at most one.  The
    torus module's cup-length must not exceed their sum, i.e. the number of
    critical values.
    """
    P = point_ring()
    terms = [cup_length(trivial_action_module(P, [0] * s)).value for s in group_sizes]
    _, T = torus_index_module(n)
    rep = SubadditivityReport("morse", cup_length(T).value, sum(terms), terms)
    return rep
