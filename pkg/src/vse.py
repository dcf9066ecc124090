"""Volume spectral efficiency of the UAV tier.

The mean Shannon rate of a UAV link is the integral over s of
(1 - L_G(s)) / s times the Laplace transform of the unit-gain
interference-plus-noise to signal ratio, L_G being the transform of the
serving beamforming gain. Multiplied by the ground coverage it gives the
mean link rate; scaled by lambda_u / h_max it gives the volume figure.
"""

# Skysplit - vse.py
# Copyright (C) 2026 The Skysplit Contributors

from __future__ import annotations

import logging
import math
from enum import StrEnum
from typing import TYPE_CHECKING

import attrs
import numpy as np

from src import config
from src.coverage import (
    ground_coverage,
    ground_coverage_limit,
    uav_coverage,
)
from src.errors import ConfigurationError
from src.netmodel import require_undetectable_nlos
from src.shotprocess import shot_context, uav_transform

if TYPE_CHECKING:
    from src.netmodel import FloatArray, NetworkConfig

logger = logging.getLogger(__name__)

# Log-s span of the rate integral; the integrand is negligible outside.
RATE_LOG_SPAN = (-30.0, 45.0)

# Log-x span and step of the coverage-CCDF form of the same integral.
CCDF_LOG_SPAN = (-15.0, 30.0)
CCDF_STEP = 0.5


class VseMethod(StrEnum):
    """Antenna regime a rate figure was computed for."""

    FINITE_ANTENNA = "finite_antenna"
    MASSIVE_LIMIT = "massive_limit"


@attrs.frozen(kw_only=True)
class VseResult:
    """Volume spectral efficiency in nats/sec/Hz/m^3."""

    value: float
    p_g_used: float
    method: VseMethod = attrs.field(converter=VseMethod)


def gain_kernel(s: FloatArray, n_antennas: int | None) -> FloatArray:
    """(1 - (N / (N + s))^N) / s, or (1 - e^-s) / s when N is None.

    Short Taylor series near s = 0.
    """
    s = np.asarray(s, dtype=np.float64)
    out = np.empty_like(s)
    if n_antennas is None:
        small = s < 1e-3
        t = s[small]
        out[small] = 1 - t / 2 + t**2 / 6 - t**3 / 24
        big = s[~small]
        out[~small] = -np.expm1(-big) / big
        return out

    n = float(n_antennas)
    small = s < 1e-3
    t = s[small]
    out[small] = (
        1
        - (n + 1) / (2 * n) * t
        + (n + 1) * (n + 2) / (6 * n**2) * t**2
        - (n + 1) * (n + 2) * (n + 3) / (24 * n**3) * t**3
    )
    big = s[~small]
    out[~small] = -np.expm1(-n * np.log1p(big / n)) / big
    return out


def _rate_integral(cfg: NetworkConfig, n_antennas: int | None) -> float:
    """E[log(1 + gamma_u)] for the given serving-gain regime."""
    require_undetectable_nlos(cfg)
    if cfg.interference_free and cfg.noise_uav == 0:
        raise ConfigurationError(
            "no interference and no noise: the UAV link rate is unbounded",
        )
    lo, hi = RATE_LOG_SPAN
    count = math.ceil((hi - lo) / config.RATE_STEP) + 1
    t = np.linspace(lo, hi, count)
    s = np.exp(t)
    transform = uav_transform(shot_context(cfg))
    values = transform(s.astype(np.complex128)).real
    integrand = gain_kernel(s, n_antennas) * values * s
    return float(np.trapezoid(integrand, t))


def mean_link_rate(cfg: NetworkConfig) -> float:
    """E[log(1 + gamma_u) 1(gamma_g >= beta)] in nats/sec/Hz."""
    return ground_coverage(cfg) * _rate_integral(cfg, cfg.uav.n_antennas)


def mean_link_rate_ccdf_form(cfg: NetworkConfig) -> float:
    """Same rate from p_g times the integral of p_u(beta = x) / (1 + x).

    Each node is a full coverage evaluation, so this is a cross-check
    rather than a production path.
    """
    lo, hi = CCDF_LOG_SPAN
    count = math.ceil((hi - lo) / CCDF_STEP) + 1
    t = np.linspace(lo, hi, count)
    x = np.exp(t)
    ccdf = np.array(
        [uav_coverage(attrs.evolve(cfg, beta=float(xi))) for xi in x],
    )
    rate = float(np.trapezoid(ccdf * x / (1 + x), t))
    return ground_coverage(cfg) * rate


def volume_spectral_efficiency(cfg: NetworkConfig) -> VseResult:
    """Volume spectral efficiency for finite antenna counts."""
    p_g = ground_coverage(cfg)
    rate = _rate_integral(cfg, cfg.uav.n_antennas)
    value = cfg.lambda_u * p_g * rate / cfg.placement.h_max
    logger.debug("V_u=%.6g (p_g=%.4f, rate=%.4f)", value, p_g, rate)
    return VseResult(
        value=value,
        p_g_used=p_g,
        method=VseMethod.FINITE_ANTENNA,
    )


def volume_spectral_efficiency_limit(cfg: NetworkConfig) -> VseResult:
    """Volume spectral efficiency with both arrays massive."""
    p_g = ground_coverage_limit(cfg)
    rate = _rate_integral(cfg, None)
    return VseResult(
        value=cfg.lambda_u * p_g * rate / cfg.placement.h_max,
        p_g_used=p_g,
        method=VseMethod.MASSIVE_LIMIT,
    )
