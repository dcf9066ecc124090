import itertools
import logging
import math

import attrs
import numpy as np
import pytest
from scipy.special import erfcx

from src.coverage import (
    CoverageMethod,
    CoverageStrategy,
    coverage_from_transform,
    coverage_limits,
    coverage_report,
    ground_coverage,
    ground_coverage_limit,
    multicell_coverage,
    multicell_coverage_limit,
    transform_cdf,
    uav_coverage,
    uav_coverage_limit,
    uav_coverage_siso,
)
from src.errors import ConfigurationError, UnsupportedByAnalysisError
from src.netmodel import main_lobe_probability
from src.shotprocess import UavGridTransform, shot_context

GROUND_SISO = 1 / (1 + math.pi / 2 - math.atan(1.0))


def _exponential(s, anchor=None):
    # Laplace transform of a unit exponential
    return 1 / (1 + np.asarray(s, dtype=np.complex128))


def _exponential_coverage(n: int, beta: float) -> float:
    return 1 - (n / (n + 1 / beta)) ** n


def _ground(cfg, **changes):
    return attrs.evolve(cfg, ground=attrs.evolve(cfg.ground, **changes))


def _uav(cfg, **changes):
    return attrs.evolve(cfg, uav=attrs.evolve(cfg.uav, **changes))


def _elevation_exact(cfg) -> float:
    # 1 / (1 + J(beta)) for alpha_u = 4
    q = main_lobe_probability(cfg.pattern)
    delta = cfg.pattern.lobe_ratio

    def part(x: float) -> float:
        root = math.sqrt(x)
        return root * (math.pi / 2 - math.atan(1 / root))

    beta = cfg.beta
    return 1 / (1 + q * part(beta) + (1 - q) * part(delta * beta))


@pytest.mark.parametrize("strategy", list(CoverageStrategy))
@pytest.mark.parametrize(("n", "beta"), [(1, 1.0), (4, 1.0), (4, 2.0), (8, 0.5)])
def test_coverage_from_transform(strategy, n, beta):
    value = coverage_from_transform(_exponential, n, beta, strategy)
    assert value == pytest.approx(_exponential_coverage(n, beta), abs=1e-6)


def test_large_arrays_fall_back_to_mixture(caplog):
    with caplog.at_level(logging.WARNING):
        value = coverage_from_transform(_exponential, 20, 1.0)
    assert value == pytest.approx(_exponential_coverage(20, 1.0), abs=1e-6)
    assert "fallback to Gamma-mixture" in caplog.text


def test_transform_cdf():
    assert transform_cdf(_exponential, 1.0) == pytest.approx(
        1 - math.exp(-1),
        abs=1e-7,
    )


def test_ground_coverage_single_antenna(baseline):
    cfg = _ground(baseline, n_antennas=1)
    assert ground_coverage(cfg) == pytest.approx(GROUND_SISO, abs=1e-6)
    assert GROUND_SISO == pytest.approx(0.560099, abs=1e-6)


def test_ground_coverage_ignores_intensities(baseline):
    base = ground_coverage(baseline)
    for factor in (0.1, 10.0, 100.0):
        other = attrs.evolve(
            baseline,
            lambda_g=baseline.lambda_g * factor,
            lambda_u=baseline.lambda_u * factor,
        )
        assert ground_coverage(other) == base


def test_ground_coverage_strategies_agree(baseline):
    cfg = _ground(baseline, n_antennas=4)
    contour = ground_coverage(cfg, CoverageStrategy.CONTOUR)
    mixture = ground_coverage(cfg, CoverageStrategy.MIXTURE)
    assert contour == pytest.approx(mixture, abs=1e-5)
    assert 0.0 < contour < 1.0


def test_ground_coverage_decreases_with_threshold(baseline):
    values = [
        ground_coverage(attrs.evolve(baseline, beta=beta))
        for beta in (0.25, 1.0, 4.0)
    ]
    assert values[0] > values[1] > values[2]


def test_uav_coverage_elevation_control_closed_form(elevation):
    expected = _elevation_exact(elevation)
    assert uav_coverage(elevation) == pytest.approx(expected, rel=1e-7)
    assert uav_coverage_siso(elevation) == pytest.approx(expected, rel=1e-6)


def test_uav_coverage_elevation_control_ignores_density_and_height(elevation):
    base = uav_coverage(elevation)
    denser = attrs.evolve(elevation, lambda_u=10 * elevation.lambda_u)
    lower = attrs.evolve(
        elevation,
        placement=attrs.evolve(elevation.placement, h_o=15.0),
    )
    assert uav_coverage(denser) == pytest.approx(base, abs=1e-12)
    assert uav_coverage(lower) == pytest.approx(base, abs=1e-12)


def _general_path(cfg) -> float:
    transform = UavGridTransform(shot_context(cfg))
    return coverage_from_transform(transform, 1, cfg.beta)


def test_uav_coverage_single_antenna_paths_agree(baseline, elevation):
    assert _general_path(elevation) == pytest.approx(
        uav_coverage_siso(elevation),
        abs=1e-8,
    )

    # tabulated zeta on both sides
    cfg = _uav(baseline, n_antennas=1)
    siso = uav_coverage_siso(cfg)
    assert _general_path(cfg) == pytest.approx(siso, abs=1e-7)
    assert uav_coverage(cfg) == pytest.approx(siso, abs=1e-6)


def test_uav_coverage_single_antenna_with_falling_height(baseline):
    cfg = _uav(
        attrs.evolve(
            baseline,
            placement=attrs.evolve(baseline.placement, nu=0.5),
        ),
        n_antennas=1,
    )
    assert uav_coverage(cfg) == pytest.approx(uav_coverage_siso(cfg), abs=1e-7)


def test_height_control_matches_general_path(baseline):
    ctx = shot_context(baseline)
    n = baseline.uav.n_antennas
    general = coverage_from_transform(UavGridTransform(ctx), n, baseline.beta)
    assert uav_coverage(baseline) == pytest.approx(general, abs=1e-6)
    assert uav_coverage_limit(baseline) == pytest.approx(
        transform_cdf(UavGridTransform(ctx), 1 / baseline.beta),
        abs=1e-6,
    )


@pytest.mark.parametrize("nu", [-0.5, 0.5])
def test_uav_coverage_with_power_law_heights(baseline, nu):
    cfg = attrs.evolve(
        baseline,
        lambda_u=5e-5,
        placement=attrs.evolve(baseline.placement, h_o=20.0, nu=nu),
    )
    for value in (uav_coverage(cfg), uav_coverage_limit(cfg)):
        assert 0.0 < value < 1.0


def test_uav_coverage_ignores_ground_intensity(baseline):
    other = attrs.evolve(baseline, lambda_g=100 * baseline.lambda_g)
    assert uav_coverage(other) == uav_coverage(baseline)


def _noise_limited(baseline, sigma2: float):
    # one antenna, no interferer, constant LoS, alpha_u = 4
    return attrs.evolve(
        _uav(baseline, alpha=4.0, n_antennas=1),
        noise_uav=sigma2,
        pattern=attrs.evolve(baseline.pattern, theta0=0.0, delta_s=0.0),
        placement=attrs.evolve(baseline.placement, h_o=0.0),
    )


def test_uav_coverage_noise_limited_closed_form(baseline):
    cfg = _noise_limited(baseline, 1e-17)
    mu = math.pi * cfg.lambda_u * shot_context(cfg).constant_los
    c = cfg.beta * cfg.noise_coefficient
    # int mu exp(-mu z - c z^2) dz over z > 0
    root = math.sqrt(c)
    expected = mu * math.sqrt(math.pi) / (2 * root) * erfcx(mu / (2 * root))
    assert 0.1 < expected < 0.9
    assert uav_coverage(cfg) == pytest.approx(expected, abs=1e-6)


def test_uav_coverage_decreases_with_noise(baseline):
    values = [
        uav_coverage(_noise_limited(baseline, sigma2))
        for sigma2 in (0.0, 1e-18, 1e-17, 1e-16)
    ]
    assert values[0] == 1.0
    assert all(a > b for a, b in itertools.pairwise(values))

    noisy = attrs.evolve(baseline, noise_uav=1e-16)
    assert uav_coverage(noisy) < uav_coverage(baseline)


def test_uav_coverage_siso_preconditions(baseline, elevation):
    with pytest.raises(ConfigurationError, match="N_u = 1"):
        uav_coverage_siso(baseline)
    with pytest.raises(ConfigurationError):
        uav_coverage_siso(attrs.evolve(elevation, noise_uav=1e-12))


def test_uav_coverage_interference_and_noise_free(baseline):
    silent = attrs.evolve(
        baseline,
        pattern=attrs.evolve(baseline.pattern, theta0=0.0, delta_s=0.0),
    )
    assert uav_coverage(silent) == 1.0
    assert uav_coverage_limit(silent) == 1.0


def test_uav_coverage_needs_analytic_view(reference):
    with pytest.raises(UnsupportedByAnalysisError):
        uav_coverage(reference)


def test_multicell_coverage_is_product(elevation):
    result = multicell_coverage(elevation)
    assert result.p_cov == pytest.approx(result.p_u * result.p_g)
    assert result.method is CoverageMethod.FINITE_ANTENNA


def test_coverage_limits(elevation):
    limits = coverage_limits(elevation)
    assert limits.method is CoverageMethod.MASSIVE_LIMIT
    assert limits.p_u == uav_coverage_limit(elevation)
    assert limits.p_g == ground_coverage_limit(elevation)
    assert multicell_coverage_limit(elevation) == pytest.approx(
        limits.p_u * limits.p_g,
    )
    for value in (limits.p_u, limits.p_g):
        assert 0.0 < value < 1.0


def test_coverage_report_single_antenna(elevation):
    report = coverage_report(elevation)
    assert report.siso_p_u == pytest.approx(report.finite.p_u, abs=1e-6)
    assert not any("single-antenna" in note for note in report.notes)


def test_ground_coverage_at_reference_arrays(baseline):
    # the published curves read 0.687 at N_g = 16 and 0.66 in the limit
    assert ground_coverage(baseline) == pytest.approx(0.6566, abs=1e-3)
    assert ground_coverage_limit(baseline) == pytest.approx(0.6641, abs=1e-3)


def test_ground_coverage_grows_with_array_size(baseline):
    limit = ground_coverage_limit(baseline)
    values = [
        ground_coverage(_ground(baseline, n_antennas=n))
        for n in (1, 2, 4, 8, 16, 32, 64)
    ]
    assert all(b >= a - 1e-6 for a, b in itertools.pairwise(values))
    assert max(values) <= limit + 1e-3


@pytest.mark.slow
def test_uav_coverage_grows_with_array_size(baseline):
    limit = uav_coverage_limit(baseline)
    values = [
        uav_coverage(_uav(baseline, n_antennas=n))
        for n in (1, 2, 4, 8, 16, 32, 64)
    ]
    assert all(b >= a - 1e-6 for a, b in itertools.pairwise(values))
    assert max(values) <= limit + 1e-3


def test_coverage_report_notes_published_ground_anchors(elevation):
    notes = coverage_report(elevation).notes
    assert any("published 0.687" in note for note in notes)
    assert not any("published 0.660" in note for note in notes)

    single = coverage_report(_ground(elevation, n_antennas=1)).notes
    assert not any("published 0.687" in note for note in single)
