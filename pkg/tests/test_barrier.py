import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tunnelkit import barrier as bar
from tunnelkit.barrier import DissipativeBarrier, KappaMode, Particle
from tunnelkit.errors import EnergyAboveBarrier, ExcessiveDissipation
from tunnelkit.units import constants

from oracles import HBAR, M_E


def test_kappa0_value(showcase):
    k0 = bar.kappa0(Particle(0.9), showcase)
    assert k0 == pytest.approx(math.sqrt(2 * M_E * 0.9) / HBAR, rel=1e-14)
    assert k0 == pytest.approx(0.48603, abs=1e-5)


def test_velocity_matches_hbar_kappa_over_m(showcase):
    p = Particle(0.5)
    v = bar.effective_velocity(p, showcase)
    assert v == pytest.approx(constants().hbar * bar.kappa0(p, showcase) / p.mass, rel=1e-14)


@pytest.mark.parametrize("energy", [1.8, 2.0])
def test_at_or_above_barrier_rejected(showcase, energy):
    with pytest.raises(EnergyAboveBarrier):
        bar.kappa0(Particle(energy), showcase)
    with pytest.raises(EnergyAboveBarrier):
        bar.eta_max(Particle(energy), showcase)


@pytest.mark.parametrize("kw", [dict(v0_height=0, length=1), dict(v0_height=1, length=-1),
                                dict(v0_height=1, length=1, eta=-1e-3),
                                dict(v0_height=math.nan, length=1)])
def test_barrier_validation(kw):
    with pytest.raises(ValueError):
        DissipativeBarrier(**kw)


@pytest.mark.parametrize("energy", [0.0, -1.0, math.inf])
def test_particle_validation(energy):
    with pytest.raises(ValueError):
        Particle(energy)


def test_eta_max_value(showcase):
    assert bar.eta_max(Particle(0.9), showcase) == pytest.approx(7.690e-3, rel=2e-4)


def test_energy_loss_linear_in_depth(showcase):
    b = showcase.with_eta(0.005)
    p = Particle(0.9)
    x = np.linspace(0, b.length, 11)
    loss = bar.energy_loss(p, b, x)
    assert np.allclose(loss, loss[-1] * x / b.length, rtol=1e-14)
    assert loss[-1] == pytest.approx(bar.fraction_lost(p, b) * p.energy, rel=1e-14)


def test_energy_loss_rejects_excess(showcase):
    p = Particle(0.9)
    b = showcase.with_eta(2 * bar.eta_max(p, showcase))
    with pytest.raises(ExcessiveDissipation):
        bar.energy_loss(p, b, b.length)
    # half way the loss is exactly E, which is still admissible
    assert bar.energy_loss(p, b, b.length / 2) == pytest.approx(p.energy, rel=1e-12)


def test_energy_loss_depth_range(showcase):
    with pytest.raises(ValueError):
        bar.energy_loss(Particle(0.9), showcase, showcase.length * 1.01)
    with pytest.raises(ValueError):
        bar.energy_loss(Particle(0.9), showcase, -0.1)


def test_fraction_lost_strict_and_lenient(showcase):
    p = Particle(0.09)
    b = showcase.with_eta(0.005)
    with pytest.raises(ExcessiveDissipation):
        bar.fraction_lost(p, b)
    assert bar.fraction_lost(p, b, strict=False) > 1


@given(e_frac=st.floats(0.01, 0.99), v0=st.floats(0.1, 10), length=st.floats(1, 100))
def test_eta_max_saturates_loss(e_frac, v0, length):
    b = DissipativeBarrier(v0, length)
    p = Particle(e_frac * v0)
    b = b.with_eta(bar.eta_max(p, b))
    assert bar.fraction_lost(p, b) == pytest.approx(1.0, rel=1e-12)


@given(e_frac=st.floats(0.01, 0.99), eta=st.floats(0, 0.02), x_frac=st.floats(0, 1))
@settings(max_examples=200)
def test_linearized_dominates_full(e_frac, eta, x_frac):
    b = DissipativeBarrier(1.8, 20.8, eta)
    p = Particle(e_frac * 1.8)
    x = x_frac * b.length
    lin = bar.kappa_profile(p, b, x, KappaMode.LINEARIZED)
    full = bar.kappa_profile(p, b, x, KappaMode.FULL)
    assert lin >= full * (1 - 1e-15)


def test_kappa_profile_full_from_energy(showcase):
    # FULL is sqrt(2m(V0 - E + loss(x)))/hbar
    b = showcase.with_eta(0.003)
    p = Particle(1.2)
    x = np.linspace(0, b.length, 7)
    expect = np.sqrt(2 * p.mass * (b.v0_height - p.energy + bar.energy_loss(p, b, x))) / HBAR
    assert np.allclose(bar.kappa_profile(p, b, x), expect, rtol=1e-13)


def test_profiles_agree_at_entrance(showcase):
    b = showcase.with_eta(0.005)
    p = Particle(0.4)
    k0 = bar.kappa0(p, b)
    for mode in ("full", "linearized"):
        assert bar.kappa_profile(p, b, 0.0, mode) == k0


def test_kappa_mode_parse():
    assert KappaMode.parse("FULL") is KappaMode.FULL
    with pytest.raises(ValueError):
        KappaMode.parse("quadratic")


def test_dissipation_ratio(showcase):
    p = Particle(0.9)
    b = showcase.with_eta(0.005)
    assert bar.dissipation_ratio(p, b) == pytest.approx(
        0.005 * 20.8 / (HBAR * bar.kappa0(p, b)), rel=1e-14)


def test_from_config_defaults_and_mass():
    p, b = bar.from_config({})
    assert p is None and (b.v0_height, b.length, b.eta) == (1.8, 20.8, 0.0)
    p, b = bar.from_config({"energy_ev": "0.5", "mass": "0.1", "eta_evfs_per_ang2": "0.002"})
    assert p.mass == 0.1 and p.energy == 0.5 and b.eta == 0.002
    with pytest.raises(ValueError):
        bar.parse_mass("-1")


@pytest.mark.parametrize("energy, k0, v", [(0.9, 0.48603, 5.627), (1.6, 0.22911, 2.652)])
def test_worked_values(showcase, energy, k0, v):
    p = Particle(energy)
    assert bar.kappa0(p, showcase) == pytest.approx(k0, abs=1e-5)
    assert bar.effective_velocity(p, showcase) == pytest.approx(v, abs=1e-3)


def test_profile_end_values(showcase):
    b = showcase.with_eta(0.005)
    p = Particle(0.9)
    loss = bar.energy_loss(p, b, 20.8)
    assert loss == pytest.approx(0.5852, abs=1e-4)
    assert bar.kappa_profile(p, b, 20.8, "linearized") == pytest.approx(0.48603 + 0.15801, abs=1e-5)
    # sqrt(2 m (0.9 + 0.5852)) / hbar evaluated independently
    full = math.sqrt(2 * M_E * (0.9 + loss)) / HBAR
    assert full == pytest.approx(0.62435, abs=1e-5)
    assert bar.kappa_profile(p, b, 20.8, "full") == pytest.approx(full, rel=1e-13)
