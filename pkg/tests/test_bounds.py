import math

import numpy as np
import pytest

from arnold_torus.bounds import (
    OmegaSpec,
    apriori_radius,
    compactness_check,
    critical_spread,
    kappa,
    sample_omega,
    soundness_check,
    wbd_radius,
)
from arnold_torus.action import embedded_gradient
from arnold_torus.config import SolverConfig
from arnold_torus.hamiltonian import HamiltonianSpec, HomotopyFamily, cosine_morse, time_driven


def test_omega_validation():
    with pytest.raises(ValueError):
        OmegaSpec(4, inner=1.2)
    with pytest.raises(ValueError):
        OmegaSpec(4, outer=2.5)


def test_radius_formula():
    H = time_driven(1)
    om = OmegaSpec(6)
    b = apriori_radius(H, 0.5, om, [-0.2, 0.0, 0.3])
    assert b.R == pytest.approx(2 * b.r0 + b.r1)
    assert b.r1 == pytest.approx(0.5 / 0.5)
    assert b.r0 == pytest.approx(math.sqrt(2) * 1.5 + 2 * (0.5 + b.kappa))
    assert b.to_dict()["provenance"]["r1"] == "critical values"


def test_kappa_parts():
    k = kappa(cosine_morse(2), OmegaSpec(3))
    assert k["penalty"] == pytest.approx(2 * math.sqrt(4))
    assert k["total"] == pytest.approx(k["hamiltonian"] + k["penalty"])
    assert kappa(HamiltonianSpec(1), OmegaSpec(3))["hamiltonian"] == 0.0


def test_spread_from_nested_values_and_errors():
    assert critical_spread(0.5, [[0.0, 1.0], [0.0, 0.25]]) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        critical_spread(0.0, [1.0])
    with pytest.raises(ValueError):
        critical_spread(0.5)
    with pytest.raises(ValueError):
        wbd_radius(cosine_morse(1), -1.0, OmegaSpec(2))


def test_family_bound_uses_base_amplitudes():
    H = time_driven(1)
    om = OmegaSpec(4)
    assert apriori_radius(HomotopyFamily(H), 0.5, om).R == pytest.approx(apriori_radius(H, 0.5, om).R)


def test_sample_omega_respects_shell():
    rng = np.random.default_rng(0)
    om = OmegaSpec(5)
    for _ in range(20):
        p = sample_omega(1, 5, om, 10.0, 20.0, rng)
        assert 10.0 - 1e-9 <= p.norm() <= 20.0 + 1e-9
        assert np.all((p.radii >= 0.5) & (p.radii <= 1.5))


def test_soundness_and_that_the_bound_is_not_vacuous():
    fam = HomotopyFamily(time_driven(1))
    om = OmegaSpec(4)
    rep = soundness_check(fam, 0.5, om, samples=500, seed=1, lambdas=[0.0, 1.0])
    assert rep.passed and rep.min_gradient > 0.5
    # well inside r0 small gradients do occur (critical points exist there)
    rng = np.random.default_rng(2)
    small = [embedded_gradient(fam.base, sample_omega(1, 4, om, 0.0, 1.5, rng)).norm() for _ in range(200)]
    assert min(small) < rep.min_gradient


def test_compactness_check():
    cfg = SolverConfig(N=4, hamiltonian="time-driven", grid=2, random_seeds=2)
    rep = compactness_check(HomotopyFamily(time_driven(1)), 40, cfg)
    assert rep.count > 0
    assert rep.bounded and rep.closed and rep.passed


def test_spread_arithmetic():
    assert critical_spread(0.5, [-1.0, 2.0]) == pytest.approx(6.0)
    assert critical_spread(0.5, [0.3]) == 0.0


def test_sup_bound_contains_computed_spread():
    H = time_driven(1)
    om = OmegaSpec(8)
    r0 = wbd_radius(H, 0.5, om)
    assert critical_spread(0.5, [-0.19270355771, 0.19270355771]) <= critical_spread(0.5, None, H, r0)


def test_lattice_shift_invariance():
    H = time_driven(1)
    om = OmegaSpec(4)
    assert apriori_radius(H.shifted([1.0, -2.0]), 0.5, om).R == pytest.approx(apriori_radius(H, 0.5, om).R)
    cfg = SolverConfig(N=4, hamiltonian="time-driven", grid=2, random_seeds=1)
    a = compactness_check(HomotopyFamily(H), 10, cfg)
    b = compactness_check(HomotopyFamily(H.shifted([1.0, -2.0])), 10, cfg)
    assert a.count == b.count and a.radius == pytest.approx(b.radius, rel=1e-9)


def test_zero_family_orbits_within_cell():
    cfg = SolverConfig(N=3, hamiltonian="zero", grid=2, random_seeds=0)
    rep = compactness_check(HomotopyFamily(HamiltonianSpec(1)), 10, cfg)
    assert rep.passed and rep.radius <= math.sqrt(2)
