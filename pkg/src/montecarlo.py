"""Monte Carlo oracle for the two-tier network.

Each trial drops both Poisson tiers on a disc around the typical user at
the origin, marks UAVs with LoS and lobe flags, associates the user with
the minimum path loss BS of each tier and records the two SINRs. The
mean interference from outside the disc is added to both denominators.
Trials draw from independent substreams of one seed, so results do not
depend on how trials are spread over threads.
"""

# Skysplit - montecarlo.py
# Copyright (C) 2026 The Skysplit Contributors

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING

import attrs
import numpy as np
import numpy.typing as npt

from src import config
from src.errors import DomainError
from src.netmodel import (
    effective_ground_intensity,
    elevation_ratio,
    los_probability,
    los_probability_array,
    main_lobe_probability,
    rho0,
    serving_uav_loss,
)
from src.quad import integrate_semi_infinite

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from src.netmodel import FloatArray, NetworkConfig

logger = logging.getLogger(__name__)

MIN_TRIALS = 100
Z_95 = 1.96

BoolArray = npt.NDArray[np.bool_]


@attrs.frozen
class RngSeed:
    """Root seed; trial k draws from the substream spawned at key (k,)."""

    seed: int = attrs.field(converter=int)

    @seed.validator
    def _check(self, _attribute: attrs.Attribute[int], value: int) -> None:
        if not 0 <= value < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer: {value}")

    def generator(self, trial: int) -> np.random.Generator:
        """PCG64 generator of one trial."""
        sequence = np.random.SeedSequence(self.seed, spawn_key=(trial,))
        return np.random.default_rng(sequence)


@attrs.frozen(kw_only=True)
class Estimate:
    """Sample mean with a 95% normal confidence half-width."""

    mean: float
    half_width_95: float
    trials: int

    @classmethod
    def from_samples(cls, samples: FloatArray, scale: float = 1.0) -> Estimate:
        """Estimate scale * E[sample]."""
        n = int(samples.size)
        if n < 2:
            raise DomainError(f"need at least two samples, got {n}")
        std = float(np.std(samples, ddof=1))
        return cls(
            mean=scale * float(np.mean(samples)),
            half_width_95=scale * Z_95 * std / math.sqrt(n),
            trials=n,
        )


@attrs.frozen(kw_only=True, eq=False)
class Realization:
    """One drop of both tiers around the user at the origin."""

    uav_positions: FloatArray
    uav_heights: FloatArray
    uav_los: BoolArray
    uav_main_lobe: BoolArray
    uav_gains: FloatArray
    serving_uav_gain: float
    ground_positions: FloatArray
    ground_los: BoolArray
    ground_gains: FloatArray
    serving_ground_gain: float
    serving_uav_index: int | None = None
    serving_ground_index: int | None = None


@attrs.frozen(kw_only=True)
class CoverageEstimate:
    """Joint coverage estimates of one Monte Carlo run."""

    p_u: Estimate
    p_g: Estimate
    p_cov: Estimate
    radius: float


@attrs.frozen
class FarField:
    """Mean interference (watts) from each tier beyond the simulated disc.

    Added to the SINR denominators. Far interferers are many and weak, so
    their sum is close to its mean; the UAV tail decays only like
    R^(2 - alpha_u) and is not negligible for alpha_u near 2.
    """

    uav: float = 0.0
    ground: float = 0.0

    @classmethod
    def beyond(cls, cfg: NetworkConfig, radius: float) -> FarField:
        """Mean interference of both tiers outside the given radius."""
        return cls(
            uav=_uav_far_field(cfg, radius),
            ground=_ground_far_field(cfg, radius),
        )


def _mean_uav_gain(cfg: NetworkConfig) -> float:
    q = main_lobe_probability(cfg.pattern)
    return q * cfg.pattern.delta_m + (1 - q) * cfg.pattern.delta_s


def _uav_far_field(cfg: NetworkConfig, radius: float) -> float:
    placement, uav = cfg.placement, cfg.uav

    def density(r: float) -> float:
        with np.errstate(over="ignore"):
            ratio = float(elevation_ratio(placement, np.float64(r)))
            loss = float(serving_uav_loss(placement, uav.alpha, np.float64(r)))
        rho = los_probability(cfg.env, ratio)
        return (rho / uav.psi_los + (1 - rho) / uav.psi_nlos) / loss

    start = radius**2
    tail = integrate_semi_infinite(density, start, scale=start)
    return math.pi * cfg.lambda_u * uav.tx_power * _mean_uav_gain(cfg) * tail


def _ground_far_field(cfg: NetworkConfig, radius: float) -> float:
    ground = cfg.ground
    p_los = rho0(cfg.env)
    inverse_psi = p_los / ground.psi_los + (1 - p_los) / ground.psi_nlos
    half = ground.alpha / 2
    tail = (radius**2) ** (1 - half) / (half - 1)
    return math.pi * cfg.lambda_g * ground.tx_power * inverse_psi * tail


def far_field_los_probability(cfg: NetworkConfig) -> float:
    """LoS probability of UAVs far from the user."""
    placement = cfg.placement
    if placement.h_o == 0 or placement.nu > -1:
        return rho0(cfg.env)
    if placement.nu == -1:
        return los_probability(cfg.env, placement.h_o)
    return los_probability(cfg.env, math.inf)


def default_simulation_radius(cfg: NetworkConfig) -> float:
    """Disc radius of ten mean nearest-neighbour distances of each tier.

    Ground BSs count at the effective intensity of their path-loss
    process; UAVs both at lambda_u and at their far-field LoS intensity.
    """
    ground = cfg.ground
    lam_g = (
        effective_ground_intensity(cfg)
        if ground.nlos_detectable
        else cfg.lambda_g * rho0(cfg.env) * ground.psi_los ** (-2 / ground.alpha)
    )
    return max(
        10.0 / math.sqrt(math.pi * cfg.lambda_u),
        10.0 / math.sqrt(math.pi * lam_g),
        10.0 / math.sqrt(math.pi * cfg.lambda_u * far_field_los_probability(cfg)),
        config.MC_MIN_RADIUS,
    )


def sample_ppp_disc(
    intensity: float,
    radius: float,
    rng: np.random.Generator,
) -> FloatArray:
    """Homogeneous Poisson points on the disc of the given radius, shape (n, 2)."""
    if intensity < 0:
        raise DomainError(f"intensity must be nonnegative, got {intensity}")
    if not radius > 0:
        raise DomainError(f"radius must be positive, got {radius}")
    count = int(rng.poisson(intensity * math.pi * radius**2))
    r = radius * np.sqrt(rng.random(count))
    theta = 2 * math.pi * rng.random(count)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def realize_network(
    cfg: NetworkConfig,
    radius: float,
    rng: np.random.Generator,
    *,
    unit_serving_gain: bool = False,
) -> Realization:
    """Draw both tiers with their marks and associate the user."""
    placement, pattern = cfg.placement, cfg.pattern

    uavs = sample_ppp_disc(cfg.lambda_u, radius, rng)
    distance = np.hypot(uavs[:, 0], uavs[:, 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        heights = placement.h_o * distance ** (-placement.nu)
        ratio = heights / distance
    uav_los = rng.random(distance.size) < los_probability_array(cfg.env, ratio)
    main_lobe = rng.random(distance.size) < main_lobe_probability(pattern)
    uav_gains = rng.exponential(size=distance.size) * np.where(
        main_lobe,
        pattern.delta_m,
        pattern.delta_s,
    )
    n_u = cfg.uav.n_antennas
    serving_uav_gain = pattern.delta_m * (
        1.0 if unit_serving_gain else float(rng.gamma(n_u, 1.0 / n_u))
    )

    ground = sample_ppp_disc(cfg.lambda_g, radius, rng)
    ground_los = rng.random(ground.shape[0]) < rho0(cfg.env)
    ground_gains = rng.exponential(size=ground.shape[0])
    n_g = cfg.ground.n_antennas
    serving_ground_gain = (
        1.0 if unit_serving_gain else float(rng.gamma(n_g, 1.0 / n_g))
    )

    realization = Realization(
        uav_positions=uavs,
        uav_heights=heights,
        uav_los=uav_los,
        uav_main_lobe=main_lobe,
        uav_gains=uav_gains,
        serving_uav_gain=serving_uav_gain,
        ground_positions=ground,
        ground_los=ground_los,
        ground_gains=ground_gains,
        serving_ground_gain=serving_ground_gain,
    )
    uav_index, ground_index = associate(realization, cfg)
    return attrs.evolve(
        realization,
        serving_uav_index=uav_index,
        serving_ground_index=ground_index,
    )


def uav_path_losses(realization: Realization, cfg: NetworkConfig) -> FloatArray:
    """psi (|X|^2 + H^2)^(alpha_u / 2) per UAV; inf for undetectable links."""
    squared = (
        np.sum(realization.uav_positions**2, axis=1)
        + realization.uav_heights**2
    )
    psi = np.where(realization.uav_los, cfg.uav.psi_los, cfg.uav.psi_nlos)
    return np.asarray(psi * squared ** (cfg.uav.alpha / 2), dtype=np.float64)


def ground_path_losses(
    realization: Realization,
    cfg: NetworkConfig,
) -> FloatArray:
    """psi |X|^alpha_g per ground BS."""
    distance = np.hypot(
        realization.ground_positions[:, 0],
        realization.ground_positions[:, 1],
    )
    psi = np.where(
        realization.ground_los,
        cfg.ground.psi_los,
        cfg.ground.psi_nlos,
    )
    return np.asarray(psi * distance**cfg.ground.alpha, dtype=np.float64)


def _argmin_finite(losses: FloatArray) -> int | None:
    if losses.size == 0 or not np.any(np.isfinite(losses)):
        return None
    return int(np.argmin(losses))


def associate(
    realization: Realization,
    cfg: NetworkConfig,
) -> tuple[int | None, int | None]:
    """Minimum path loss UAV and ground BS (None when a tier has no candidate)."""
    return (
        _argmin_finite(uav_path_losses(realization, cfg)),
        _argmin_finite(ground_path_losses(realization, cfg)),
    )


def _sinr(
    power: float,
    serving_gain: float,
    losses: FloatArray,
    gains: FloatArray,
    index: int,
    noise: float,
) -> float:
    others = np.ones(losses.size, dtype=bool)
    others[index] = False
    interference = float(np.sum(power * gains[others] / losses[others])) + noise
    signal = power * serving_gain / float(losses[index])
    if interference == 0:
        return math.inf
    return signal / interference


def sample_sinrs(
    realization: Realization,
    cfg: NetworkConfig,
    far_field: FarField | None = None,
) -> tuple[float | None, float | None]:
    """SINR at the serving UAV and SIR at the serving ground BS.

    An interference-free and noise-free link gives inf; a tier without a
    serving BS gives None. far_field adds the mean interference from
    beyond the disc.
    """
    if far_field is None:
        far_field = FarField()
    gamma_u = gamma_g = None
    if realization.serving_uav_index is not None:
        gamma_u = _sinr(
            cfg.uav.tx_power,
            realization.serving_uav_gain,
            uav_path_losses(realization, cfg),
            realization.uav_gains,
            realization.serving_uav_index,
            cfg.noise_uav + far_field.uav,
        )
    if realization.serving_ground_index is not None:
        gamma_g = _sinr(
            cfg.ground.tx_power,
            realization.serving_ground_gain,
            ground_path_losses(realization, cfg),
            realization.ground_gains,
            realization.serving_ground_index,
            far_field.ground,
        )
    return gamma_u, gamma_g


def _check_trials(trials: int | None) -> int:
    trials = config.MC_TRIALS if trials is None else trials
    if trials < MIN_TRIALS:
        raise DomainError(f"need at least {MIN_TRIALS} trials, got {trials}")
    return trials


def _run_trials(
    trial: Callable[[int], Sequence[float]],
    trials: int,
    threads: int | None,
) -> FloatArray:
    """Run trial(k) for every k; rows come back in trial order."""
    workers = config.worker_count(threads)
    size = max(1, math.ceil(trials / (4 * workers)))
    chunks = [
        range(start, min(start + size, trials))
        for start in range(0, trials, size)
    ]

    def run_chunk(chunk: range) -> list[Sequence[float]]:
        return [trial(k) for k in chunk]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = [row for chunk in pool.map(run_chunk, chunks) for row in chunk]
    return np.asarray(rows, dtype=np.float64)


def _encode(gamma: float | None) -> float:
    return math.nan if gamma is None else gamma


def _sinr_samples(
    cfg: NetworkConfig,
    trials: int | None,
    radius: float | None,
    seed: int,
    unit_serving_gain: bool,
    threads: int | None,
    far_field: bool,
) -> tuple[FloatArray, float]:
    """Columns (gamma_u, gamma_g), NaN for a tier without a server."""
    trials = _check_trials(trials)
    radius = default_simulation_radius(cfg) if radius is None else radius
    root = RngSeed(seed)
    tail = FarField.beyond(cfg, radius) if far_field else FarField()

    def trial(k: int) -> tuple[float, float]:
        realization = realize_network(
            cfg,
            radius,
            root.generator(k),
            unit_serving_gain=unit_serving_gain,
        )
        gamma_u, gamma_g = sample_sinrs(realization, cfg, tail)
        return _encode(gamma_u), _encode(gamma_g)

    logger.info("starting %d trials on a %.0f m disc", trials, radius)
    logger.debug(
        "far-field interference: UAV %.3g W, ground %.3g W",
        tail.uav,
        tail.ground,
    )
    return _run_trials(trial, trials, threads), radius


def estimate_coverage(
    cfg: NetworkConfig,
    trials: int | None = None,
    radius: float | None = None,
    seed: int = 0,
    *,
    unit_serving_gain: bool = False,
    threads: int | None = None,
    far_field: bool = True,
) -> CoverageEstimate:
    """Empirical p_u, p_g and the joint p_cov with 95% intervals."""
    samples, radius = _sinr_samples(
        cfg,
        trials,
        radius,
        seed,
        unit_serving_gain,
        threads,
        far_field,
    )
    # NaN (no server) compares False, i.e. not covered.
    covered_u = (samples[:, 0] >= cfg.beta).astype(np.float64)
    covered_g = (samples[:, 1] >= cfg.beta).astype(np.float64)
    return CoverageEstimate(
        p_u=Estimate.from_samples(covered_u),
        p_g=Estimate.from_samples(covered_g),
        p_cov=Estimate.from_samples(covered_u * covered_g),
        radius=radius,
    )


def estimate_vse(
    cfg: NetworkConfig,
    trials: int | None = None,
    radius: float | None = None,
    seed: int = 0,
    *,
    unit_serving_gain: bool = False,
    threads: int | None = None,
    far_field: bool = True,
) -> Estimate:
    """(lambda_u / h_max) E[log(1 + gamma_u) 1(gamma_g >= beta)].

    Trials with an infinite UAV SINR are left out of the mean.
    """
    samples, _ = _sinr_samples(
        cfg,
        trials,
        radius,
        seed,
        unit_serving_gain,
        threads,
        far_field,
    )
    gamma_u, gamma_g = samples[:, 0], samples[:, 1]
    infinite = np.isinf(gamma_u)
    if np.any(infinite):
        logger.warning(
            "%d trials with infinite UAV SINR excluded from the rate mean",
            int(np.count_nonzero(infinite)),
        )
    keep = ~infinite
    rate = np.where(
        np.isnan(gamma_u[keep]),
        0.0,
        np.log1p(np.nan_to_num(gamma_u[keep])),
    )
    rate *= gamma_g[keep] >= cfg.beta
    return Estimate.from_samples(rate, cfg.lambda_u / cfg.placement.h_max)


def estimate_serving_loss_ccdf(
    cfg: NetworkConfig,
    x: float,
    trials: int | None = None,
    radius: float | None = None,
    seed: int = 0,
    *,
    threads: int | None = None,
) -> Estimate:
    """Empirical P[path loss to the serving UAV >= x]."""
    trials = _check_trials(trials)
    radius = default_simulation_radius(cfg) if radius is None else radius
    root = RngSeed(seed)

    def trial(k: int) -> tuple[float]:
        realization = realize_network(cfg, radius, root.generator(k))
        index = realization.serving_uav_index
        if index is None:
            return (1.0,)
        loss = uav_path_losses(realization, cfg)[index]
        return (float(loss >= x),)

    samples = _run_trials(trial, trials, threads)
    return Estimate.from_samples(samples[:, 0])
