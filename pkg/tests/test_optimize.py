import itertools
import logging
import math

import attrs
import numpy as np
import pytest

from src.coverage import ground_coverage
from src.errors import ConfigurationError, DomainError
from src.netmodel import Objective, SweepSpec
from src.optimize import (
    Variable,
    grid_surface,
    maximize_coverage_over_height,
    maximize_coverage_over_intensity,
    maximize_objective,
    maximize_scalar,
    objective_value,
)


def test_maximize_quadratic():
    result = maximize_scalar(lambda x: -((x - 2.0) ** 2), 0.0, 5.0, 1e-6)
    assert result.argmax == pytest.approx(2.0, abs=1e-5)
    assert result.value == pytest.approx(0.0, abs=1e-9)
    assert result.bracket[0] <= result.argmax <= result.bracket[1]
    assert not result.multimodal


def test_maximize_on_log_scale():
    result = maximize_scalar(
        lambda x: -((math.log(x) - math.log(10.0)) ** 2),
        1.0,
        1000.0,
        1e-6,
        log_scale=True,
    )
    assert result.argmax == pytest.approx(10.0, rel=1e-5)


def test_maximize_monotone_objective_hits_the_bound():
    result = maximize_scalar(lambda x: x, 0.0, 1.0, 1e-4)
    assert result.argmax == 1.0
    assert result.value == 1.0


def test_maximize_counts_distinct_evaluations():
    calls = []

    def objective(x: float) -> float:
        calls.append(x)
        return -abs(x - 0.3)

    result = maximize_scalar(objective, 0.0, 1.0, 1e-3)
    assert result.evaluations == len(set(calls)) == len(calls)


def test_maximize_flags_multimodal_objectives(caplog):
    with caplog.at_level(logging.WARNING):
        result = maximize_scalar(math.sin, 0.0, 4 * math.pi, 1e-6)
    assert result.multimodal
    assert result.value == pytest.approx(1.0, abs=1e-9)
    assert "local maxima" in caplog.text


def test_maximize_skips_non_finite_values():
    def objective(x: float) -> float:
        return math.nan if x < 1.0 else -((x - 2.0) ** 2)

    result = maximize_scalar(objective, 0.0, 4.0, 1e-6)
    assert result.argmax == pytest.approx(2.0, abs=1e-5)


def test_maximize_rejects_bad_arguments():
    with pytest.raises(DomainError):
        maximize_scalar(math.sin, 1.0, 1.0, 1e-3)
    with pytest.raises(DomainError):
        maximize_scalar(math.sin, 0.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        maximize_scalar(math.sin, 0.0, 1.0, 1e-3, log_scale=True)


def test_objective_value(elevation):
    p_g = objective_value(elevation, Objective.P_G)
    assert p_g == ground_coverage(elevation)
    p_cov = objective_value(elevation, Objective.P_COV)
    p_u = objective_value(elevation, Objective.P_U)
    assert p_cov == pytest.approx(p_u * p_g)
    with pytest.raises(DomainError):
        objective_value(elevation, Objective.ALL)


def test_height_search_needs_height_control(elevation):
    with pytest.raises(ConfigurationError, match="independent of h_o"):
        maximize_coverage_over_height(elevation, 10.0, 100.0)
    rising = attrs.evolve(
        elevation,
        placement=attrs.evolve(elevation.placement, nu=0.5),
    )
    with pytest.raises(ConfigurationError, match="nu = 0"):
        maximize_coverage_over_height(rising, 10.0, 100.0)
    with pytest.raises(ConfigurationError):
        maximize_coverage_over_intensity(rising, 1e-6, 1e-4)


def test_intensity_search_on_ground_tier(baseline):
    # ground coverage does not depend on lambda_u, so the first scan point wins
    result = maximize_objective(
        baseline,
        Variable.INTENSITY,
        Objective.P_G,
        1e-6,
        1e-4,
        tol=0.5,
    )
    assert result.argmax == pytest.approx(1e-6, rel=1e-9)
    assert result.value == pytest.approx(ground_coverage(baseline))


def test_grid_surface(baseline):
    axis1 = SweepSpec(parameter="n_antennas_g", grid=(1, 2))
    axis2 = SweepSpec(parameter="beta", grid=(0.5, 1.0))
    surface = grid_surface(baseline, axis1, axis2, Objective.P_G, threads=2)
    assert surface.values.shape == (2, 2)
    assert surface.values[0, 1] == pytest.approx(1 / (1 + math.pi / 4), abs=1e-6)
    assert surface.argmax is not None
    assert surface.argmax[1] == 0.5
    assert surface.best == pytest.approx(np.nanmax(surface.values))
    assert all(error is None for row in surface.errors for error in row)


def test_grid_surface_records_failed_cells(reference):
    axis1 = SweepSpec(parameter="h_o", grid=(10.0, 20.0))
    axis2 = SweepSpec(parameter="beta", grid=(1.0,))
    surface = grid_surface(reference, axis1, axis2, Objective.P_U, threads=1)
    assert np.all(np.isnan(surface.values))
    assert surface.argmax is None
    assert all("UnsupportedByAnalysisError" in row[0] for row in surface.errors)


def _valleys(values: np.ndarray, tol: float = 1e-6) -> int:
    # falls followed by rises, ignoring steps below tol
    signs = [int(np.sign(d)) for d in np.diff(values) if abs(d) > tol]
    return sum(a < 0 < b for a, b in itertools.pairwise(signs))


def test_valleys():
    assert _valleys(np.array([0.0, 1.0, 0.0])) == 0
    assert _valleys(np.array([0.0, 1.0, 0.0, 1.0, 0.0])) == 1
    assert _valleys(np.array([1.0, 0.5, 0.5 + 1e-9, 0.2])) == 0


@pytest.mark.slow
@pytest.mark.parametrize("h_o", [20.0, 40.0])
def test_coverage_has_a_single_best_intensity(baseline, h_o):
    cfg = attrs.evolve(
        baseline,
        placement=attrs.evolve(baseline.placement, h_o=h_o),
    )
    grid = np.geomspace(1e-7, 1e-3, 25)
    values = np.array(
        [
            objective_value(attrs.evolve(cfg, lambda_u=lam), Objective.P_U)
            for lam in grid
        ],
    )
    # one local maximum: no dip anywhere between two rises
    assert _valleys(values) == 0
    assert values.max() > max(values[0], values[-1])
    result = maximize_coverage_over_intensity(cfg, 1e-7, 1e-3)
    assert result.value >= values.max() - 1e-6


@pytest.mark.slow
def test_coverage_has_an_interior_best_height(baseline):
    cfg = attrs.evolve(baseline, lambda_u=50 * baseline.lambda_g)
    result = maximize_coverage_over_height(cfg, 1.0, 100.0)
    assert 1.0 < result.argmax < 100.0
    for h_o in (1.0, 100.0):
        edge = objective_value(
            attrs.evolve(cfg, placement=attrs.evolve(cfg.placement, h_o=h_o)),
            Objective.P_U,
        )
        assert result.value > edge
