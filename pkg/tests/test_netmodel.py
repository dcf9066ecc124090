import math

import attrs
import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from src.errors import (
    ConfigurationError,
    DomainError,
    UnsupportedByAnalysisError,
)
from src.netmodel import (
    AntennaPattern,
    Environment,
    SweepParameter,
    SweepSpec,
    TierRadio,
    db_to_linear,
    effective_ground_intensity,
    elevation_ratio,
    los_probability,
    los_probability_array,
    main_lobe_probability,
    path_loss,
    require_undetectable_nlos,
    rho0,
    serving_uav_loss,
    uav_height,
    with_parameter,
)

ENV = Environment(c1=0.43, c2=4.88)


def _radio(**changes: float) -> TierRadio:
    fields = {
        "tx_power": 2.0,
        "alpha": 2.5,
        "psi_los": 1e6,
        "psi_nlos": 1e10,
        "n_antennas": 8,
    }
    return TierRadio(**(fields | changes))


def test_db_to_linear():
    assert db_to_linear(30.0) == pytest.approx(1000.0)
    assert db_to_linear(0.0) == 1.0


def test_los_probability_at_zero_elevation():
    expected = 1.0 / (1.0 + 4.88 * math.exp(0.43 * 4.88))
    assert rho0(ENV) == pytest.approx(expected, rel=1e-12)


def test_los_probability_near_vertical_is_one():
    assert los_probability(ENV, 1e6) == pytest.approx(1.0, abs=1e-9)


@given(st.floats(0, 50), st.floats(0, 50))
def test_los_probability_increases_with_elevation(a, b):
    lo, hi = sorted((a, b))
    assert los_probability(ENV, lo) <= los_probability(ENV, hi)


def test_los_probability_array_matches_scalar():
    ratios = np.array([0.0, 0.1, 0.5, 1.0, 3.0, 100.0])
    expected = [los_probability(ENV, float(r)) for r in ratios]
    assert_allclose(los_probability_array(ENV, ratios), expected, rtol=1e-12)


def test_negative_ratio_is_rejected():
    with pytest.raises(DomainError):
        los_probability(ENV, -0.1)
    with pytest.raises(DomainError):
        los_probability_array(ENV, np.array([0.2, -1.0]))


def test_uav_height_laws(baseline):
    height_control = baseline.placement
    assert uav_height(height_control, 250.0) == pytest.approx(40.0)
    elevation = attrs.evolve(height_control, nu=-1.0)
    assert uav_height(elevation, 250.0) == pytest.approx(40.0 * 250.0)
    assert uav_height(elevation, 0.0) == 0.0
    with pytest.raises(DomainError):
        uav_height(attrs.evolve(height_control, nu=1.0), 0.0)


def test_path_loss():
    assert path_loss(2.0, 3.0, 10.0) == pytest.approx(2000.0)
    assert path_loss(math.inf, 3.0, 10.0) == math.inf
    with pytest.raises(DomainError):
        path_loss(2.0, 3.0, 0.0)


def test_main_lobe_probability_of_reference_pattern(baseline):
    assert main_lobe_probability(baseline.pattern) == pytest.approx(1 / 9)
    assert baseline.pattern.lobe_ratio == pytest.approx(0.1)


def test_radio_validation():
    with pytest.raises(ConfigurationError, match="alpha"):
        _radio(alpha=2.0)
    with pytest.raises(ConfigurationError, match="psi_nlos"):
        _radio(psi_nlos=1e5)
    with pytest.raises(ConfigurationError):
        _radio(n_antennas=0)
    with pytest.raises(ConfigurationError):
        _radio(n_antennas=2.5)
    assert _radio(n_antennas=4.0).n_antennas == 4


def test_pattern_validation():
    with pytest.raises(ConfigurationError, match="delta_s"):
        AntennaPattern(theta0=1.0, phi0=1.0, delta_m=1.0, delta_s=2.0)
    with pytest.raises(ConfigurationError, match="phi0"):
        AntennaPattern(theta0=1.0, phi0=4.0, delta_m=1.0, delta_s=0.1)


def test_analytic_view_hides_nlos_uavs(reference):
    assert reference.uav.nlos_detectable
    view = reference.analytic_view()
    assert not view.uav.nlos_detectable
    assert view.ground == reference.ground
    with pytest.raises(UnsupportedByAnalysisError):
        require_undetectable_nlos(reference)
    require_undetectable_nlos(view)


def test_serving_loss_height_control(baseline):
    r = np.array([1.0, 100.0, 1e4])
    expected = (r + 40.0**2) ** (2.5 / 2)
    assert_allclose(serving_uav_loss(baseline.placement, 2.5, r), expected)


def test_serving_loss_elevation_control(baseline):
    placement = attrs.evolve(baseline.placement, nu=-1.0)
    r = np.array([1.0, 100.0, 1e4])
    expected = ((1 + 40.0**2) * r) ** 2.0
    assert_allclose(serving_uav_loss(placement, 4.0, r), expected)


def test_serving_loss_on_the_ground(baseline):
    placement = attrs.evolve(baseline.placement, h_o=0.0)
    r = np.array([4.0, 9.0])
    assert_allclose(serving_uav_loss(placement, 4.0, r), r**2)


def test_elevation_ratio(baseline):
    r = np.array([1.0, 400.0])
    assert_allclose(elevation_ratio(baseline.placement, r), [40.0, 2.0])
    elevation = attrs.evolve(baseline.placement, nu=-1.0)
    assert_allclose(elevation_ratio(elevation, r), [40.0, 40.0])


def test_effective_ground_intensity(baseline):
    p = rho0(baseline.env)
    ground = baseline.ground
    expected = baseline.lambda_g * (
        p * ground.psi_los ** -0.5 + (1 - p) * ground.psi_nlos ** -0.5
    )
    assert effective_ground_intensity(baseline) == pytest.approx(expected)


def test_noise_coefficient(baseline):
    noisy = attrs.evolve(baseline, noise_uav=1e-12)
    expected = baseline.uav.psi_los * 1e-12 / (1.0 * 2.0)
    assert noisy.noise_coefficient == pytest.approx(expected)
    assert baseline.noise_coefficient == 0.0


def test_interference_free_needs_both_lobes_silent(baseline):
    assert not baseline.interference_free
    silent = attrs.evolve(
        baseline,
        pattern=attrs.evolve(baseline.pattern, theta0=0.0, delta_s=0.0),
    )
    assert silent.interference_free


def test_with_parameter(baseline):
    ratio = with_parameter(baseline, SweepParameter.LAMBDA_RATIO, 30.0)
    assert ratio.lambda_u == pytest.approx(30.0 * baseline.lambda_g)
    antennas = with_parameter(baseline, SweepParameter.N_ANTENNAS_U, 3.6)
    assert antennas.uav.n_antennas == 4
    height = with_parameter(baseline, SweepParameter.H_O, 15.0)
    assert height.placement.h_o == 15.0
    assert height.placement.nu == baseline.placement.nu


def test_sweep_spec_rejects_bad_grids():
    with pytest.raises(DomainError, match="empty"):
        SweepSpec(parameter="beta", grid=())
    with pytest.raises(DomainError, match="increasing"):
        SweepSpec(parameter="beta", grid=(1.0, 0.5))
    with pytest.raises(DomainError, match="non-finite"):
        SweepSpec(parameter="beta", grid=(1.0, math.inf))
    spec = SweepSpec(parameter="h_o", grid=[10, 20])
    assert spec.grid == (10.0, 20.0)
    assert spec.parameter is SweepParameter.H_O
