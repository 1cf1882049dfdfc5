from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from arnold_torus import topology
from arnold_torus.topology import (
    GF2,
    QQ,
    AlgebraError,
    GradedModule,
    GradedRing,
    cup,
    cup_length,
    exterior_algebra,
    kunneth,
    module_act,
    point_ring,
    positive_ideal_filtration,
    sphere_ring,
    subadditivity_check,
    suspension_model,
    torus_betti,
    torus_index_module,
    trivial_action_module,
    zero_module,
)


def _block_unitriangular(degrees, rng):
    """A random invertible matrix that only mixes basis vectors of equal degree."""
    d = len(degrees)
    P = np.zeros((d, d), dtype=object)
    for i in range(d):
        P[i, i] = 1
        for j in range(i):
            if degrees[i] == degrees[j]:
                P[i, j] = int(rng.integers(-2, 3))
    return P


@pytest.mark.parametrize("field", [QQ, GF2], ids=["QQ", "GF2"])
def test_exterior_algebra_shape(field):
    R = exterior_algebra(4, field)
    assert R.dim == 16
    assert [int(np.sum(R.degrees == k)) for k in range(5)] == [comb(4, k) for k in range(5)]


def test_generators_anticommute_and_square_to_zero():
    R = exterior_algebra(3)
    g = [R.basis(R.labels.index(f"x{i}")) for i in (1, 2, 3)]
    for a in g:
        assert cup(a, a).is_zero()
        for b in g:
            if a is not b:
                assert (cup(a, b) + cup(b, a)).is_zero()
    top = cup(cup(g[0], g[1]), g[2])
    assert not top.is_zero()
    assert cup(g[1], cup(g[0], g[2])).scale(-1) == top


def test_cup_length_values():
    for n in (1, 2, 3):
        assert cup_length(torus_index_module(n)[1]).value == 2 * n + 1
        assert cup_length(exterior_algebra(2 * n, GF2).as_module()).value == 2 * n + 1
    assert cup_length(sphere_ring(2).as_module()).value == 2
    assert cup_length(sphere_ring(5).as_module()).value == 2
    assert cup_length(point_ring().as_module()).value == 1
    assert cup_length(zero_module(point_ring())).value == 0
    # a module with trivial positive action has cup-length one
    assert cup_length(trivial_action_module(exterior_algebra(2), [0, 1])).value == 1


def test_certificate_record():
    c = cup_length(exterior_algebra(2).as_module()).to_dict()
    assert c["value"] == 3 and c["beta"] == "1" and len(c["alphas"]) == 2
    assert c["exhaustive"] and c["random_checks"] == 32


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1), st.sampled_from(["QQ", "GF2"]))
def test_cup_length_basis_invariant(m, seed, fname):
    field = {"QQ": QQ, "GF2": GF2}[fname]
    M = exterior_algebra(m, field).as_module()
    P = _block_unitriangular(list(M.degrees), np.random.default_rng(seed))
    M2 = M.change_basis(P)
    assert cup_length(M2).value == cup_length(M).value == m + 1


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_cup_product_associative_and_graded_commutative(seed):
    rng = np.random.default_rng(seed)
    R = exterior_algebra(4)
    rand = lambda: R.element([int(v) for v in rng.integers(-3, 4, R.dim)])
    a, b, c = rand(), rand(), rand()
    assert cup(cup(a, b), c) == cup(a, cup(b, c))
    i, j = (int(v) for v in rng.integers(0, R.dim, 2))
    ai, bj = R.basis(i), R.basis(j)
    sign = (-1) ** (int(R.degrees[i]) * int(R.degrees[j]))
    assert cup(ai, bj) == cup(bj, ai).scale(sign)


def test_module_action_is_right_action():
    R = exterior_algebra(2)
    M = R.as_module()
    one = M.basis(0)
    x1, x2 = R.basis(1), R.basis(2)
    assert module_act(module_act(one, x1), x2) == module_act(one, cup(x1, x2))


def test_axiom_violations_rejected():
    d = 2
    T = np.zeros((d, d, d), dtype=object)
    T[0, 0, 0] = T[0, 1, 1] = T[1, 0, 1] = 1
    R = GradedRing(QQ, ["1", "e"], [0, 2], T)  # e^2 = 0 is fine
    T_bad = T.copy()
    T_bad[1, 1, 0] = 1  # e^2 = 1 breaks the grading
    with pytest.raises(AlgebraError):
        GradedRing(QQ, ["1", "e"], [0, 2], T_bad)
    T_odd = T.copy()
    with pytest.raises(AlgebraError):
        GradedRing(QQ, ["1", "e"], [1, 1], T_odd)
    A = np.zeros((1, 2, 1), dtype=object)
    with pytest.raises(AlgebraError):
        GradedModule(R, ["m"], [0], A)  # unit must act as identity
    with pytest.raises(AlgebraError):
        R.element([1, 2, 3])


def test_non_associative_table_rejected():
    # 1, a, b in degree 0 with ab = ba = a and bb = a: (ab)b = a but a(bb) = aa = 0
    d = 3
    T = np.zeros((d, d, d), dtype=object)
    for i in range(d):
        T[0, i, i] = T[i, 0, i] = 1
    T[1, 2, 1] = T[2, 1, 1] = 1
    T[2, 2, 1] = 1
    with pytest.raises(AlgebraError, match="associativ"):
        GradedRing(QQ, ["1", "a", "b"], [0, 0, 0], T)


def test_submodule_quotient():
    R = exterior_algebra(2)
    I, Q, T = positive_ideal_filtration(R)
    assert I.dim == 3 and Q.dim == 1
    assert cup_length(I).value == 2 and cup_length(Q).value == 1
    with pytest.raises(AlgebraError):
        T.submodule([0])  # the unit generates everything


def test_subadditivity_violation_is_fatal(monkeypatch):
    R = exterior_algebra(2)
    I, Q, T = positive_ideal_filtration(R)
    real = topology.cup_length
    fake = lambda M, *a, **k: topology.CupLengthCertificate(0, None, []) if M is I else real(M, *a, **k)
    monkeypatch.setattr(topology, "cup_length", fake)
    with pytest.raises(AssertionError):
        subadditivity_check([I, Q], T)


def test_restriction_validates_ring_map():
    R = exterior_algebra(2)
    S = sphere_ring(2)
    phi = np.zeros((2, 4), dtype=object)
    phi[0, 0] = 1
    phi[1, 1] = 1  # degree 2 class to degree 1 class
    with pytest.raises(AlgebraError):
        R.as_module().restrict(S, phi)


def test_betti_and_kunneth():
    assert torus_betti(1) == [1, 2, 1]
    assert torus_betti(3) == [comb(6, k) for k in range(7)]
    assert kunneth([1, 1], [1, 0, 1]) == [1, 1, 1, 1]


def test_suspension_model():
    t = suspension_model(2, [0, 2, 3])
    assert t.stable
    assert t.tables[3] == [0, 0, 0] + torus_betti(2)
    assert t.to_dict()["tables"]["2"] == [0, 0] + torus_betti(2)
    with pytest.raises(ValueError):
        suspension_model(1, [2, 1])


def test_gf2_arithmetic():
    assert GF2.reduce(np.array([3, -1, 2], dtype=object)).tolist() == [1, 1, 0]
    assert GF2.sign(-1) == 1
    assert QQ.inv(QQ.coerce(3)) * 3 == 1
