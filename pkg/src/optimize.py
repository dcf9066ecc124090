"""Maximize coverage or volume spectral efficiency over h_o and lambda_u.

Scalar searches pre-scan a coarse grid, then refine the best cell by
golden-section search. Objective values are cached per point within one
run. Grid surfaces evaluate every cell on a thread pool and keep going
past cells that fail.
"""

# Skysplit - optimize.py
# Copyright (C) 2026 The Skysplit Contributors

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from enum import StrEnum
from typing import TYPE_CHECKING

import attrs
import numpy as np

from src import config
from src.coverage import (
    ground_coverage,
    ground_coverage_limit,
    uav_coverage,
    uav_coverage_limit,
)
from src.errors import ConfigurationError, DomainError, SkysplitError
from src.netmodel import Objective, SweepParameter, with_parameter
from src.vse import volume_spectral_efficiency, volume_spectral_efficiency_limit

if TYPE_CHECKING:
    from collections.abc import Callable

    from src.netmodel import FloatArray, NetworkConfig, SweepSpec

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

PRESCAN_POINTS = 17

# Default search tolerances: meters for heights, log units for intensities.
HEIGHT_TOL = 0.05
INTENSITY_TOL = 0.01


class Variable(StrEnum):
    """Decision variable of a one-dimensional search."""

    HEIGHT = "height"
    INTENSITY = "intensity"


@attrs.frozen(kw_only=True)
class OptResult:
    """Best point found by a one-dimensional search."""

    argmax: float
    value: float
    evaluations: int
    bracket: tuple[float, float]
    multimodal: bool = False


def maximize_scalar(
    objective: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
    *,
    log_scale: bool = False,
) -> OptResult:
    """Maximize objective on [lo, hi].

    With log_scale the search runs in log(x) and tol is in log units. A
    pre-scan with more than one local maximum is logged; refinement then
    proceeds around the best scan point.
    """
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if log_scale and not lo > 0:
        raise DomainError(f"log-scale search needs lo > 0, got {lo}")

    to_x = math.exp if log_scale else float
    a, b = (math.log(lo), math.log(hi)) if log_scale else (lo, hi)
    cache: dict[float, float] = {}

    def f(u: float) -> float:
        if u not in cache:
            value = objective(to_x(u))
            cache[u] = value if math.isfinite(value) else -math.inf
        return cache[u]

    scan = np.linspace(a, b, PRESCAN_POINTS)
    values = np.array([f(float(u)) for u in scan])
    padded = np.concatenate(([-math.inf], values, [-math.inf]))
    peaks = (values > padded[:-2]) & (values >= padded[2:])
    multimodal = int(np.count_nonzero(peaks)) > 1
    if multimodal:
        logger.warning(
            "objective has %d local maxima on the pre-scan of [%g, %g]; "
            "refining around the best",
            int(np.count_nonzero(peaks)),
            lo,
            hi,
        )

    best = int(np.argmax(values))
    left = float(scan[max(best - 1, 0)])
    right = float(scan[min(best + 1, PRESCAN_POINTS - 1)])
    left, right = _golden_section(f, left, right, tol)

    u_best = max(cache, key=lambda u: cache[u])
    bracket = (min(left, u_best), max(right, u_best))
    return OptResult(
        argmax=to_x(u_best),
        value=cache[u_best],
        evaluations=len(cache),
        bracket=(to_x(bracket[0]), to_x(bracket[1])),
        multimodal=multimodal,
    )


def _golden_section(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
) -> tuple[float, float]:
    h = b - a
    if h <= tol:
        return a, b
    n = math.ceil(math.log(tol / h) / math.log(INV_PHI))
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc, yd = f(c), f(d)
    for _ in range(n - 1):
        if yc > yd:
            b, d, yd = d, c, yc
            h *= INV_PHI
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= INV_PHI
            d = a + INV_PHI * h
            yd = f(d)
    return (a, d) if yc > yd else (c, b)


def objective_value(
    cfg: NetworkConfig,
    objective: Objective,
    massive: bool = False,
) -> float:
    """Evaluate one scalar objective for one configuration."""
    match Objective(objective):
        case Objective.P_U:
            return uav_coverage_limit(cfg) if massive else uav_coverage(cfg)
        case Objective.P_G:
            return ground_coverage_limit(cfg) if massive else ground_coverage(cfg)
        case Objective.P_COV:
            if massive:
                return uav_coverage_limit(cfg) * ground_coverage_limit(cfg)
            return uav_coverage(cfg) * ground_coverage(cfg)
        case Objective.V_U:
            result = (
                volume_spectral_efficiency_limit(cfg)
                if massive
                else volume_spectral_efficiency(cfg)
            )
            return result.value
        case Objective.ALL:
            raise DomainError("a scalar objective is required, not 'all'")


def _require_height_control(cfg: NetworkConfig) -> None:
    nu = cfg.placement.nu
    if nu == -1:
        raise ConfigurationError(
            "under elevation-angle control (nu = -1) the objective is "
            "independent of h_o; nothing to optimize",
        )
    if nu != 0:
        raise ConfigurationError(
            f"height search needs height control (nu = 0), got nu = {nu}",
        )


def maximize_objective(
    cfg: NetworkConfig,
    variable: Variable,
    objective: Objective,
    lo: float,
    hi: float,
    *,
    massive: bool = False,
    tol: float | None = None,
) -> OptResult:
    """Maximize any scalar objective over h_o or lambda_u.

    Heights need height control (nu = 0); intensities are searched on a
    log scale.
    """
    match Variable(variable):
        case Variable.HEIGHT:
            _require_height_control(cfg)

            def point(value: float) -> NetworkConfig:
                return with_parameter(cfg, SweepParameter.H_O, value)

            log_scale, default_tol = False, HEIGHT_TOL
        case Variable.INTENSITY:

            def point(value: float) -> NetworkConfig:
                return attrs.evolve(cfg, lambda_u=value)

            log_scale, default_tol = True, INTENSITY_TOL

    result = maximize_scalar(
        lambda value: objective_value(point(value), objective, massive),
        lo,
        hi,
        tol or default_tol,
        log_scale=log_scale,
    )
    logger.info(
        "search converged: %s=%.6g at %s=%.6g after %d evaluations",
        objective,
        result.value,
        variable,
        result.argmax,
        result.evaluations,
    )
    return result


def maximize_coverage_over_height(
    cfg: NetworkConfig,
    h_lo: float,
    h_hi: float,
    *,
    massive: bool = False,
    tol: float = HEIGHT_TOL,
) -> OptResult:
    """Height h_o maximizing UAV coverage at fixed lambda_u."""
    return maximize_objective(
        cfg,
        Variable.HEIGHT,
        Objective.P_U,
        h_lo,
        h_hi,
        massive=massive,
        tol=tol,
    )


def maximize_coverage_over_intensity(
    cfg: NetworkConfig,
    l_lo: float,
    l_hi: float,
    *,
    massive: bool = False,
    tol: float = INTENSITY_TOL,
) -> OptResult:
    """UAV intensity maximizing UAV coverage at fixed h_o (log-scale search)."""
    _require_height_control(cfg)
    return maximize_objective(
        cfg,
        Variable.INTENSITY,
        Objective.P_U,
        l_lo,
        l_hi,
        massive=massive,
        tol=tol,
    )


def maximize_vse(
    cfg: NetworkConfig,
    variable: Variable,
    lo: float,
    hi: float,
    *,
    massive: bool = False,
    tol: float | None = None,
) -> OptResult:
    """Maximize the volume spectral efficiency over h_o or lambda_u."""
    return maximize_objective(
        cfg,
        variable,
        Objective.V_U,
        lo,
        hi,
        massive=massive,
        tol=tol,
    )


@attrs.frozen(kw_only=True)
class SurfaceResult:
    """Objective over a two-parameter grid; failed cells are NaN."""

    axis1: SweepSpec
    axis2: SweepSpec
    values: FloatArray
    errors: tuple[tuple[str | None, ...], ...]
    argmax: tuple[float, float] | None
    best: float


def grid_surface(
    cfg: NetworkConfig,
    axis1: SweepSpec,
    axis2: SweepSpec,
    objective: Objective,
    *,
    massive: bool = False,
    threads: int | None = None,
) -> SurfaceResult:
    """Evaluate objective on every (axis1, axis2) cell."""
    objective = Objective(objective)
    if objective is Objective.ALL:
        raise DomainError("a surface needs a single objective, not 'all'")
    cells = [
        (i, j, v1, v2)
        for i, v1 in enumerate(axis1.grid)
        for j, v2 in enumerate(axis2.grid)
    ]

    def evaluate(cell: tuple[int, int, float, float]) -> tuple[float, str | None]:
        _, _, v1, v2 = cell
        point = with_parameter(
            with_parameter(cfg, axis1.parameter, v1),
            axis2.parameter,
            v2,
        )
        try:
            return objective_value(point, objective, massive), None
        except SkysplitError as e:
            logger.warning(
                "surface cell %s=%g, %s=%g failed: %s",
                axis1.parameter,
                v1,
                axis2.parameter,
                v2,
                e,
            )
            return math.nan, f"{type(e).__name__}: {e}"

    with ThreadPoolExecutor(max_workers=config.worker_count(threads)) as pool:
        outcomes = list(pool.map(evaluate, cells))

    shape = (len(axis1.grid), len(axis2.grid))
    values = np.full(shape, math.nan)
    errors: list[list[str | None]] = [[None] * shape[1] for _ in range(shape[0])]
    for (i, j, _, _), (value, error) in zip(cells, outcomes, strict=True):
        values[i, j] = value
        errors[i][j] = error

    argmax: tuple[float, float] | None = None
    best = math.nan
    if np.any(np.isfinite(values)):
        i, j = np.unravel_index(int(np.nanargmax(values)), shape)
        argmax = (axis1.grid[i], axis2.grid[j])
        best = float(values[i, j])
    logger.info("surface complete: best %s=%.6g at %s", objective, best, argmax)
    return SurfaceResult(
        axis1=axis1,
        axis2=axis2,
        values=values,
        errors=tuple(tuple(row) for row in errors),
        argmax=argmax,
        best=best,
    )
