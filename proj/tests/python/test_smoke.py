import cmath
import math

import pytest

import kgstar as kg


def test_branch_sqrt_cut():
    assert kg.branch_sqrt(-1 + 0j) == pytest.approx(-1j)
    assert kg.branch_sqrt(4 + 0j) == pytest.approx(2)


def test_weights_and_constant():
    pots = kg.BranchPotentials(0.0, 1.0)
    assert kg.PLANCHEREL_CONSTANT == pytest.approx(1 / math.pi)
    assert kg.q(kg.Branch.one, 0.5, pots) == pytest.approx(0.5 ** 0.5 / math.pi)  # |xi1 + xi2|^2 = 1 here
    assert kg.q(kg.Branch.two, 0.5, pots) == 0.0
    with pytest.raises(kg.BranchPointError):
        kg.s(kg.Branch.two, 1.0, pots)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        kg.BranchPotentials(2.0, 1.0)
    with pytest.raises(ValueError):
        kg.EnergyBand(0.5, 0.4, 0.6, 0.7)


def test_solution_and_coefficient():
    band = kg.EnergyBand()
    pots = kg.BranchPotentials(0.0, 1.0)
    profile = kg.SpectralProfile(band, pots.a2)
    cone = kg.make_cone(pots, band)
    t = 5000.0
    x = t / (0.5 * (cone.inner_slope_low + cone.inner_slope_high))
    u = kg.u_plus(t, x, profile, pots)
    h = kg.coefficient_H(t, x, profile, pots)
    assert abs(u - h / math.sqrt(t)) < 0.1 * abs(h) / math.sqrt(t)
    modulus = kg.coefficient_modulus(t, x, profile, pots)
    assert abs(h) == pytest.approx(2 * kg.PLANCHEREL_CONSTANT * modulus)
    assert modulus <= kg.bound_g(pots, band.beta)
    assert kg.u2(0.0, 3.0, profile, pots) == pytest.approx(
        kg.u_plus(0.0, 3.0, profile, pots), abs=1e-12)


def test_energy_below_plancherel_bound():
    band = kg.EnergyBand()
    pots = kg.BranchPotentials(0.0, 10.0)
    profile = kg.SpectralProfile(band, pots.a2)
    assert kg.l2_branch(100.0, profile, pots) <= kg.plancherel_bound(profile, pots) + 1e-6
    assert kg.l2_cone(100.0, profile, pots) <= kg.l2_branch(100.0, profile, pots)


def test_zero_profile_round_trip():
    band = kg.EnergyBand()
    pots = kg.BranchPotentials(0.0, 1.0)
    profile = kg.SpectralProfile(band, pots.a2, kg.ProfileShape.zero)
    report = kg.round_trip(profile, pots)
    assert report["residual"] == 0.0
    x, v1, v2 = kg.reconstruct_initial(profile, pots, 0.5, 5.0)
    assert len(x) == len(v1) == len(v2) == 11
    assert all(cmath.isclose(v, 0) for v in v1 + v2)
