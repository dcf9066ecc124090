"""Deterministic domain models of the two-tier plane-split network.

LoS probability, the UAV height law, path loss, the sectored antenna
pattern and the effective ground intensity live here. Both the analytic
kernels and the Monte Carlo simulator build on these, so every function
is pure and every type is immutable.
"""

# Skysplit - netmodel.py
# Copyright (C) 2026 The Skysplit Contributors

from __future__ import annotations

import logging
import math
from enum import StrEnum
from typing import TYPE_CHECKING

import attrs
import numpy as np
import numpy.typing as npt
from scipy.special import expit

from src.errors import (
    ConfigurationError,
    DomainError,
    UnsupportedByAnalysisError,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

# Penetration loss of an undetectable link. NLoS mmWave UAVs carry it in
# the analysis, so they neither serve nor interfere.
UNDETECTABLE = math.inf


def _positive(
    _instance: object,
    attribute: attrs.Attribute[float],
    value: float,
) -> None:
    if not (math.isfinite(value) and value > 0):
        raise ConfigurationError(
            f"{attribute.name} must be positive and finite, got {value!r}",
        )


def _nonnegative(
    _instance: object,
    attribute: attrs.Attribute[float],
    value: float,
) -> None:
    if not (math.isfinite(value) and value >= 0):
        raise ConfigurationError(
            f"{attribute.name} must be nonnegative and finite, got {value!r}",
        )


def _finite(
    _instance: object,
    attribute: attrs.Attribute[float],
    value: float,
) -> None:
    if not math.isfinite(value):
        raise ConfigurationError(
            f"{attribute.name} must be finite, got {value!r}",
        )


def _as_count(value: object) -> int:
    if isinstance(value, bool):
        raise ConfigurationError(f"antenna count must be an integer: {value!r}")
    if isinstance(value, int):
        count = value
    elif isinstance(value, float) and value.is_integer():
        count = int(value)
    else:
        raise ConfigurationError(f"antenna count must be an integer: {value!r}")
    if count < 1:
        raise ConfigurationError(f"antenna count must be >= 1, got {count}")
    return count


@attrs.frozen(kw_only=True)
class Environment:
    """Constants of the sigmoid LoS model of the low-altitude platform."""

    c1: float = attrs.field(converter=float, validator=_positive)
    c2: float = attrs.field(converter=float, validator=_positive)


@attrs.frozen(kw_only=True)
class UavPlacement:
    """Height law H = h_o * d**(-nu) and the ceiling used for volume."""

    h_o: float = attrs.field(converter=float, validator=_nonnegative)
    nu: float = attrs.field(converter=float, validator=_finite)
    h_max: float = attrs.field(converter=float, validator=_positive)


@attrs.frozen(kw_only=True)
class TierRadio:
    """Radio parameters of one tier (ground UHF or UAV mmWave)."""

    tx_power: float = attrs.field(converter=float, validator=_positive)
    alpha: float = attrs.field(converter=float, validator=_finite)
    psi_los: float = attrs.field(converter=float, validator=_positive)
    psi_nlos: float = attrs.field(converter=float)
    n_antennas: int = attrs.field(converter=_as_count)

    def __attrs_post_init__(self) -> None:
        """Check the invariants that tie fields together."""
        if self.alpha <= 2:
            raise ConfigurationError(
                f"alpha must exceed 2 (interference integrals diverge), "
                f"got {self.alpha}",
            )
        if math.isnan(self.psi_nlos) or self.psi_nlos < self.psi_los:
            raise ConfigurationError(
                f"psi_nlos must be >= psi_los, got {self.psi_nlos} < "
                f"{self.psi_los}",
            )

    @property
    def nlos_detectable(self) -> bool:
        """Whether NLoS links of this tier carry any power."""
        return math.isfinite(self.psi_nlos)


@attrs.frozen(kw_only=True)
class AntennaPattern:
    """Two-level sectored pattern of the UAV arrays."""

    theta0: float = attrs.field(converter=float, validator=_nonnegative)
    phi0: float = attrs.field(converter=float, validator=_nonnegative)
    delta_m: float = attrs.field(converter=float, validator=_positive)
    delta_s: float = attrs.field(converter=float, validator=_nonnegative)

    def __attrs_post_init__(self) -> None:
        """Check lobe widths and the gain ordering."""
        if self.theta0 > 2 * math.pi:
            raise ConfigurationError(f"theta0 must be <= 2*pi: {self.theta0}")
        if self.phi0 > math.pi:
            raise ConfigurationError(f"phi0 must be <= pi: {self.phi0}")
        if self.delta_s > self.delta_m:
            raise ConfigurationError(
                f"delta_s must not exceed delta_m: {self.delta_s} > "
                f"{self.delta_m}",
            )

    @property
    def lobe_ratio(self) -> float:
        """Side-lobe gain relative to the main lobe."""
        return self.delta_s / self.delta_m


@attrs.frozen(kw_only=True)
class NetworkConfig:
    """Complete parameter bundle of the two-tier network."""

    lambda_g: float = attrs.field(converter=float, validator=_positive)
    lambda_u: float = attrs.field(converter=float, validator=_positive)
    ground: TierRadio
    uav: TierRadio
    pattern: AntennaPattern
    placement: UavPlacement
    env: Environment
    beta: float = attrs.field(converter=float, validator=_positive)
    noise_uav: float = attrs.field(
        default=0.0,
        converter=float,
        validator=_nonnegative,
    )

    @property
    def noise_coefficient(self) -> float:
        """Noise term per unit serving loss: psi_uL * sigma^2 / (delta_m P_u)."""
        return (
            self.uav.psi_los
            * self.noise_uav
            / (self.pattern.delta_m * self.uav.tx_power)
        )

    @property
    def interference_free(self) -> bool:
        """No UAV interferer radiates toward the user in any lobe."""
        return (
            main_lobe_probability(self.pattern) == 0
            and self.pattern.delta_s == 0
        )

    def analytic_view(self) -> NetworkConfig:
        """Copy with NLoS mmWave links made undetectable."""
        return attrs.evolve(
            self,
            uav=attrs.evolve(self.uav, psi_nlos=UNDETECTABLE),
        )


class SweepParameter(StrEnum):
    """Network parameters a sweep or surface axis can vary."""

    H_O = "h_o"
    NU = "nu"
    LAMBDA_RATIO = "lambda_ratio"
    BETA = "beta"
    N_ANTENNAS_U = "n_antennas_u"
    N_ANTENNAS_G = "n_antennas_g"


class Objective(StrEnum):
    """Quantities a sweep, surface or optimizer reports."""

    P_U = "p_u"
    P_G = "p_g"
    P_COV = "p_cov"
    V_U = "V_u"
    ALL = "all"


def _as_grid(values: Sequence[float]) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


@attrs.frozen(kw_only=True)
class SweepSpec:
    """One sweep axis: the parameter, its grid and what to report."""

    parameter: SweepParameter = attrs.field(converter=SweepParameter)
    grid: tuple[float, ...] = attrs.field(converter=_as_grid)
    objective: Objective = attrs.field(
        default=Objective.ALL,
        converter=Objective,
    )

    def __attrs_post_init__(self) -> None:
        """Reject empty, non-finite or unsorted grids."""
        if not self.grid:
            raise DomainError(f"empty grid for {self.parameter}")
        if not all(math.isfinite(v) for v in self.grid):
            raise DomainError(f"non-finite grid value for {self.parameter}")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:], strict=False)):
            raise DomainError(
                f"grid for {self.parameter} must be strictly increasing",
            )


def with_parameter(
    cfg: NetworkConfig,
    parameter: SweepParameter,
    value: float,
) -> NetworkConfig:
    """Return cfg with one sweep coordinate applied.

    lambda_ratio sets lambda_u = value * lambda_g; antenna counts round.
    """
    match parameter:
        case SweepParameter.H_O:
            return attrs.evolve(
                cfg,
                placement=attrs.evolve(cfg.placement, h_o=value),
            )
        case SweepParameter.NU:
            return attrs.evolve(
                cfg,
                placement=attrs.evolve(cfg.placement, nu=value),
            )
        case SweepParameter.LAMBDA_RATIO:
            return attrs.evolve(cfg, lambda_u=value * cfg.lambda_g)
        case SweepParameter.BETA:
            return attrs.evolve(cfg, beta=value)
        case SweepParameter.N_ANTENNAS_U:
            return attrs.evolve(
                cfg,
                uav=attrs.evolve(cfg.uav, n_antennas=round(value)),
            )
        case SweepParameter.N_ANTENNAS_G:
            return attrs.evolve(
                cfg,
                ground=attrs.evolve(cfg.ground, n_antennas=round(value)),
            )


def db_to_linear(x_db: float) -> float:
    """Convert decibels to a linear power ratio."""
    return float(10.0 ** (x_db / 10.0))


def _los_exponent(env: Environment, degrees: FloatArray) -> FloatArray:
    # log of c2 * exp(c1 (c2 - deg)); rho = expit(-this)
    return np.asarray(
        math.log(env.c2) + env.c1 * (env.c2 - degrees),
        dtype=np.float64,
    )


def los_probability_array(env: Environment, ratio: FloatArray) -> FloatArray:
    """Vectorized LoS probability for height-over-distance ratios."""
    ratio = np.asarray(ratio, dtype=np.float64)
    if np.any(ratio < 0):
        raise DomainError("height-to-distance ratio must be nonnegative")
    degrees = np.degrees(np.arctan(ratio))
    return np.asarray(expit(-_los_exponent(env, degrees)), dtype=np.float64)


def los_probability(env: Environment, ratio: float) -> float:
    """Probability that a link with elevation ratio H/d is line of sight."""
    if not ratio >= 0:
        raise DomainError(
            f"height-to-distance ratio must be nonnegative, got {ratio!r}",
        )
    degrees = math.degrees(math.atan(ratio))
    exponent = math.log(env.c2) + env.c1 * (env.c2 - degrees)
    if exponent > 700:
        return math.exp(-exponent)
    return 1.0 / (1.0 + math.exp(exponent))


def rho0(env: Environment) -> float:
    """LoS probability at zero elevation."""
    return los_probability(env, 0.0)


def uav_height(placement: UavPlacement, ground_distance: float) -> float:
    """Height of a UAV whose ground projection is ground_distance away."""
    if ground_distance < 0:
        raise DomainError(
            f"ground distance must be nonnegative, got {ground_distance}",
        )
    if ground_distance == 0:
        if placement.nu > 0 and placement.h_o > 0:
            raise DomainError("height law is singular at distance 0 for nu > 0")
        return placement.h_o if placement.nu == 0 else 0.0
    return float(placement.h_o * ground_distance ** (-placement.nu))


def path_loss(psi: float, alpha: float, distance: float) -> float:
    """Intercept times distance to the power alpha."""
    if not distance > 0:
        raise DomainError(f"distance must be positive, got {distance!r}")
    if math.isinf(psi):
        return math.inf
    return float(psi * distance**alpha)


def main_lobe_probability(pattern: AntennaPattern) -> float:
    """Probability that an interfering UAV points its main lobe at the user."""
    return pattern.theta0 * pattern.phi0 / (2 * math.pi**2)


def effective_ground_intensity(cfg: NetworkConfig) -> float:
    """Intensity of the ground path-loss process in normalized distance."""
    ground = cfg.ground
    if not ground.nlos_detectable:
        raise ConfigurationError(
            "effective ground intensity needs a finite ground NLoS intercept",
        )
    exponent = -2.0 / ground.alpha
    p_los = rho0(cfg.env)
    return cfg.lambda_g * (
        p_los * ground.psi_los**exponent
        + (1 - p_los) * ground.psi_nlos**exponent
    )


def elevation_ratio(placement: UavPlacement, r: FloatArray) -> FloatArray:
    """H/d of a UAV at squared ground distance r, i.e. h_o r^(-(nu+1)/2)."""
    r = np.asarray(r, dtype=np.float64)
    if placement.h_o == 0:
        return np.zeros_like(r)
    power = -(placement.nu + 1) / 2
    if power == 0:
        return np.full_like(r, placement.h_o)
    with np.errstate(divide="ignore"):
        return np.asarray(placement.h_o * np.power(r, power), dtype=np.float64)


def serving_uav_loss(
    placement: UavPlacement,
    alpha_u: float,
    r: FloatArray,
) -> FloatArray:
    """Normalized LoS loss (r + h_o^2 r^(-nu))^(alpha_u/2) at squared distance r.

    Infinite at r = 0 when nu > 0 (the UAV sits infinitely high).
    """
    r = np.asarray(r, dtype=np.float64)
    h_o, nu = placement.h_o, placement.nu
    half = alpha_u / 2
    if h_o == 0:
        return np.asarray(np.power(r, half), dtype=np.float64)
    if nu == 0:
        return np.asarray(np.power(r + h_o**2, half), dtype=np.float64)
    if nu == -1:
        return np.asarray(np.power((1 + h_o**2) * r, half), dtype=np.float64)
    with np.errstate(divide="ignore"):
        squared = r + h_o**2 * np.power(r, -nu)
    return np.asarray(np.power(squared, half), dtype=np.float64)


def require_undetectable_nlos(cfg: NetworkConfig) -> None:
    """Reject configurations the analysis does not cover."""
    if cfg.uav.nlos_detectable:
        raise UnsupportedByAnalysisError(
            "analytic results assume NLoS mmWave UAV links are undetectable "
            f"(psi_nlos = inf), got {cfg.uav.psi_nlos:g}; use the Monte Carlo "
            "path or NetworkConfig.analytic_view()",
        )

