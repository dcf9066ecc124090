"""Analytic coverage of the UAV tier, the ground tier and both together.

Finite arrays go through the order-(N-1) tau-derivative of the unit-gain
Laplace transform (Cauchy contour) or, for large N, through the
equivalent Gamma mixture of the inverted CDF. Massive-array limits are
the CDF of the unit-gain interference-to-signal variable at 1/beta.
"""

# Skysplit - coverage.py
# Copyright (C) 2026 The Skysplit Contributors

from __future__ import annotations

import logging
import math
from enum import StrEnum
from typing import TYPE_CHECKING

import attrs
import numpy as np
from scipy.stats import gamma

from src import config
from src.errors import ConfigurationError, ConvergenceError
from src.netmodel import require_undetectable_nlos, serving_uav_loss
from src.quad import (
    ContourSettings,
    InversionMethod,
    LaplaceSettings,
    QuadratureSettings,
    cauchy_derivative,
    gauss_legendre_unit,
    integrate_semi_infinite,
    inverse_laplace,
)
from src.shotprocess import (
    UavGridTransform,
    frak_i_u,
    ground_transform,
    shot_context,
    uav_transform,
    zeta_inverse,
)

if TYPE_CHECKING:
    from collections.abc import Callable

    from src.netmodel import NetworkConfig
    from src.quad import ComplexArray

    Transform = Callable[..., ComplexArray]

logger = logging.getLogger(__name__)

# Slack allowed before a numerical probability counts as out of range.
PROBABILITY_SLACK = 1e-6

CDF_SETTINGS = LaplaceSettings(method=InversionMethod.EULER)

# The single-antenna form is the 1e-8 reference for the transform paths.
SISO_SETTINGS = QuadratureSettings(rel_tol=1e-10, abs_tol=1e-13)
SISO_AGREEMENT = 1e-8
# With a distance-dependent LoS probability both paths go through the
# interpolated zeta table, which caps the agreement.
TABULATED_SISO_AGREEMENT = 1e-7


class CoverageMethod(StrEnum):
    """How a coverage figure was obtained."""

    FINITE_ANTENNA = "finite_antenna"
    SISO_CLOSED_FORM = "siso_closed_form"
    MASSIVE_LIMIT = "massive_limit"


class CoverageStrategy(StrEnum):
    """Route for finite-array coverage."""

    AUTO = "auto"
    CONTOUR = "contour"
    MIXTURE = "mixture"


def _probability(value: float, what: str) -> float:
    if not -PROBABILITY_SLACK <= value <= 1 + PROBABILITY_SLACK:
        raise ConvergenceError(
            f"{what} evaluated to {value:.6g}, outside [0, 1]",
            estimate=value,
        )
    return min(max(value, 0.0), 1.0)


@attrs.frozen(kw_only=True)
class CoverageResult:
    """UAV, ground and multi-cell coverage of one configuration."""

    p_u: float
    p_g: float
    p_cov: float
    method: CoverageMethod = attrs.field(converter=CoverageMethod)

    @classmethod
    def from_tiers(
        cls,
        p_u: float,
        p_g: float,
        method: CoverageMethod,
    ) -> CoverageResult:
        """Combine independent tier coverages."""
        return cls(p_u=p_u, p_g=p_g, p_cov=p_u * p_g, method=method)


def transform_cdf(transform: Transform, t: float) -> float:
    """CDF at t of the variable whose Laplace transform is given."""

    def integrated(s: ComplexArray) -> ComplexArray:
        return transform(s) / s

    return inverse_laplace(integrated, t, CDF_SETTINGS)


def coverage_from_transform(
    transform: Transform,
    n_antennas: int,
    beta: float,
    strategy: CoverageStrategy = CoverageStrategy.AUTO,
) -> float:
    """P[G >= beta X], G ~ Gamma(N, N), X with the given Laplace transform."""
    strategy = CoverageStrategy(strategy)
    order = n_antennas - 1
    if order == 0:
        return float(transform(np.array([beta + 0j]), beta)[0].real)

    use_contour = strategy is CoverageStrategy.CONTOUR or (
        strategy is CoverageStrategy.AUTO and order <= config.MAX_CONTOUR_ORDER
    )
    if use_contour:
        anchor = n_antennas * beta

        def scaled(tau: ComplexArray) -> ComplexArray:
            return tau**order * transform(n_antennas / tau, anchor)

        derivative = cauchy_derivative(
            scaled,
            order,
            1.0 / beta,
            ContourSettings(),
        )
        return derivative / math.factorial(order)

    if strategy is CoverageStrategy.AUTO:
        logger.warning(
            "fallback to Gamma-mixture coverage for N=%d (contour order %d "
            "exceeds %d)",
            n_antennas,
            order,
            config.MAX_CONTOUR_ORDER,
        )
    serving = gamma(n_antennas, scale=1.0 / n_antennas)
    lo, hi = serving.ppf(1e-10), serving.ppf(1 - 1e-10)
    u, w = gauss_legendre_unit(config.GAMMA_NODES)
    gains = lo + (hi - lo) * u
    cdf = np.array([transform_cdf(transform, g / beta) for g in gains])
    return float((hi - lo) * np.sum(w * serving.pdf(gains) * cdf))


def uav_coverage(
    cfg: NetworkConfig,
    strategy: CoverageStrategy = CoverageStrategy.AUTO,
) -> float:
    """P[gamma_u >= beta] for N_u antennas."""
    require_undetectable_nlos(cfg)
    if cfg.interference_free and cfg.noise_uav == 0:
        return 1.0
    transform = uav_transform(shot_context(cfg))
    value = coverage_from_transform(
        transform,
        cfg.uav.n_antennas,
        cfg.beta,
        strategy,
    )
    return _probability(value, "UAV coverage")


def uav_coverage_siso(cfg: NetworkConfig) -> float:
    """UAV coverage with a single antenna as one adaptive integral.

    Independent of the fixed-node transforms: the serving distance is
    integrated adaptively in w = pi lambda_u zeta(z) and each interference
    integral adaptively in r.
    """
    require_undetectable_nlos(cfg)
    if cfg.uav.n_antennas != 1:
        raise ConfigurationError(
            f"single-antenna form needs N_u = 1, got {cfg.uav.n_antennas}",
        )
    if cfg.noise_uav != 0:
        raise ConfigurationError("single-antenna form is interference-limited")
    ctx = shot_context(cfg)
    alpha = cfg.uav.alpha

    def integrand(w: float) -> float:
        z = float(zeta_inverse(ctx, w / ctx.intensity))
        loss = float(serving_uav_loss(cfg.placement, alpha, np.float64(z)))
        frak = frak_i_u(ctx, cfg.beta * loss, z, SISO_SETTINGS)
        return math.exp(-w - ctx.intensity * frak)

    value = integrate_semi_infinite(integrand, 0.0, SISO_SETTINGS)
    return _probability(value, "UAV coverage")


def ground_coverage(
    cfg: NetworkConfig,
    strategy: CoverageStrategy = CoverageStrategy.AUTO,
) -> float:
    """P[gamma_g >= beta] for N_g antennas; free of both intensities."""
    value = coverage_from_transform(
        ground_transform(cfg.ground.alpha),
        cfg.ground.n_antennas,
        cfg.beta,
        strategy,
    )
    return _probability(value, "ground coverage")


def multicell_coverage(
    cfg: NetworkConfig,
    strategy: CoverageStrategy = CoverageStrategy.AUTO,
) -> CoverageResult:
    """Both tiers at once; p_cov is their product."""
    return CoverageResult.from_tiers(
        uav_coverage(cfg, strategy),
        ground_coverage(cfg, strategy),
        CoverageMethod.FINITE_ANTENNA,
    )


def uav_coverage_limit(cfg: NetworkConfig) -> float:
    """UAV coverage as N_u grows without bound."""
    require_undetectable_nlos(cfg)
    if cfg.interference_free and cfg.noise_uav == 0:
        return 1.0
    transform = uav_transform(shot_context(cfg))
    return _probability(
        transform_cdf(transform, 1.0 / cfg.beta),
        "UAV coverage limit",
    )


def ground_coverage_limit(cfg: NetworkConfig) -> float:
    """Ground coverage as N_g grows without bound."""
    return _probability(
        transform_cdf(ground_transform(cfg.ground.alpha), 1.0 / cfg.beta),
        "ground coverage limit",
    )


def multicell_coverage_limit(cfg: NetworkConfig) -> float:
    """Product of the two massive-array limits."""
    return coverage_limits(cfg).p_cov


def coverage_limits(cfg: NetworkConfig) -> CoverageResult:
    """Massive-array limits of both tiers."""
    return CoverageResult.from_tiers(
        uav_coverage_limit(cfg),
        ground_coverage_limit(cfg),
        CoverageMethod.MASSIVE_LIMIT,
    )


# Published ground coverage figures (alpha_g, N_g or None for the massive
# limit, beta) -> (value, tolerance). p_g depends on nothing else.
GroundKey = tuple[float, int | None, float]
PUBLISHED_GROUND_COVERAGE: dict[GroundKey, tuple[float, float]] = {
    (4.0, 16, 1.0): (0.687, 0.01),
    (4.0, None, 1.0): (0.66, 0.03),
}


def _published_ground_notes(
    cfg: NetworkConfig,
    finite: float,
    limit: float,
) -> list[str]:
    notes = []
    alpha, n_g = cfg.ground.alpha, cfg.ground.n_antennas
    for key, value, label in (
        ((alpha, n_g, cfg.beta), finite, f"N_g={n_g}"),
        ((alpha, None, cfg.beta), limit, "the massive-array limit"),
    ):
        published = PUBLISHED_GROUND_COVERAGE.get(key)
        if published is None:
            continue
        target, tolerance = published
        if abs(value - target) > tolerance:
            notes.append(
                f"ground coverage at {label} ({value:.4f}) is off the "
                f"published {target:.3f} by {value - target:+.4f} "
                f"(tolerance {tolerance})",
            )
    return notes


@attrs.frozen(kw_only=True)
class CoverageReport:
    """Finite-array, single-antenna and limit coverage side by side."""

    finite: CoverageResult
    limit: CoverageResult
    siso_p_u: float | None
    notes: tuple[str, ...]


def coverage_report(cfg: NetworkConfig) -> CoverageReport:
    """Everything the validate command prints for one configuration."""
    finite = multicell_coverage(cfg)
    limit = coverage_limits(cfg)
    notes = _published_ground_notes(cfg, finite.p_g, limit.p_g)
    siso = general = None
    agreement = SISO_AGREEMENT
    if cfg.uav.n_antennas == 1 and cfg.noise_uav == 0:
        ctx = shot_context(cfg)
        if ctx.constant_los is None:
            agreement = TABULATED_SISO_AGREEMENT
        siso = uav_coverage_siso(cfg)
        general = coverage_from_transform(
            UavGridTransform(ctx),
            1,
            cfg.beta,
        )
    if finite.p_g > limit.p_g + 1e-3:
        notes.append(
            f"ground coverage at N_g={cfg.ground.n_antennas} "
            f"({finite.p_g:.4f}) exceeds the massive-array limit "
            f"({limit.p_g:.4f}); the finite value is not monotone in N_g here",
        )
    if finite.p_u > limit.p_u + 1e-3:
        notes.append(
            f"UAV coverage at N_u={cfg.uav.n_antennas} ({finite.p_u:.4f}) "
            f"exceeds the massive-array limit ({limit.p_u:.4f})",
        )
    if (
        siso is not None
        and general is not None
        and abs(siso - general) > agreement
    ):
        notes.append(
            f"single-antenna form {siso:.10f} differs from the general "
            f"transform path {general:.10f}",
        )
    return CoverageReport(
        finite=finite,
        limit=limit,
        siso_p_u=siso,
        notes=tuple(notes),
    )
