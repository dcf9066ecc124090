"""Laplace transforms of the incomplete shot signal processes.

The LoS intensity integral zeta, the ordered serving-distance densities,
the interference integrals of both tiers and the conditional Laplace
transforms they feed. Scalar functions use adaptive quadrature; the
transform classes at the bottom evaluate whole arrays of complex
arguments on fixed node sets and are what the coverage and rate
integrals call.
"""

# Skysplit - shotprocess.py
# Copyright (C) 2026 The Skysplit Contributors

from __future__ import annotations

import functools
import itertools
import logging
import math
from typing import TYPE_CHECKING

import attrs
import numpy as np
from scipy import optimize
from scipy.special import gammaln, xlogy
from scipy.stats import gamma

from src import config
from src.errors import ConvergenceError, DomainError
from src.netmodel import (
    FloatArray,
    NetworkConfig,
    effective_ground_intensity,
    elevation_ratio,
    los_probability,
    los_probability_array,
    main_lobe_probability,
    require_undetectable_nlos,
    serving_uav_loss,
)
from src.quad import (
    ComplexArray,
    CumulativeInterpolant,
    QuadratureSettings,
    cumulative_interpolant,
    gauss_legendre_unit,
    integrate_finite,
    integrate_semi_infinite,
    log_panel_rule,
    panel_span,
    semi_infinite_rule,
)

if TYPE_CHECKING:
    from collections.abc import Callable

    from src.netmodel import AntennaPattern, Environment, UavPlacement

logger = logging.getLogger(__name__)

# Losses above this are treated as "no power"; keeps complex division finite.
LOSS_CEILING = 1e300

# Gauss-Legendre nodes of the fixed ground-integral rules.
GROUND_NODES = 48

# Transform arguments evaluated per vectorized block.
CHUNK = 16

# Relative agreement demanded from alternative forms in debug mode.
DEBUG_TOL = 1e-6

# Largest |x| at which the direct ground form is trusted.
DIRECT_FORM_LIMIT = 2.0

# Log-distance depth of the UAV integral panels below the signal knee.
HEAD_DEPTH = 60.0


@attrs.frozen(eq=False)
class ShotContext:
    """A network configuration with its LoS intensity integral tabulated.

    k is the incompleteness order K: the serving node is the k-th nearest
    LoS UAV and the k - 1 nearer ones do not interfere.
    """

    cfg: NetworkConfig
    k: int
    zeta_interp: CumulativeInterpolant

    @property
    def intensity(self) -> float:
        """pi * lambda_u, the UAV count per unit squared distance."""
        return math.pi * self.cfg.lambda_u

    @property
    def constant_los(self) -> float | None:
        """LoS probability when it does not depend on distance, else None."""
        placement = self.cfg.placement
        if placement.h_o == 0 or placement.nu == -1:
            return los_probability(self.cfg.env, placement.h_o)
        return None


def _los_of_distance(
    env: Environment,
    placement: UavPlacement,
) -> Callable[[FloatArray], FloatArray]:
    def rho(r: FloatArray) -> FloatArray:
        with np.errstate(divide="ignore", over="ignore"):
            ratio = elevation_ratio(placement, r)
        return los_probability_array(env, ratio)

    return rho


def _zeta_extent(
    env: Environment,
    placement: UavPlacement,
    intensity: float,
) -> float:
    rho = _los_of_distance(env, placement)
    z_max = 25.0 / intensity
    mass = 0.0
    for _ in range(40):
        mass = intensity * integrate_finite(
            lambda r: float(rho(np.array([r]))[0]),
            0.0,
            z_max,
        )
        if mass >= config.ZETA_MASS:
            return z_max
        z_max *= 2
    raise ConvergenceError(
        f"LoS intensity integral stalls at {mass:.3g} expected UAVs",
        estimate=mass,
    )


@functools.lru_cache(maxsize=64)
def _zeta_table(
    env: Environment,
    placement: UavPlacement,
    lambda_u: float,
) -> CumulativeInterpolant:
    # Shared by every configuration with the same UAV geometry.
    logger.debug("building LoS intensity grid for %s", placement)
    return cumulative_interpolant(
        _los_of_distance(env, placement),
        _zeta_extent(env, placement, math.pi * lambda_u),
        config.ZETA_GRID_POINTS,
        spacing="quadratic",
    )


@functools.lru_cache(maxsize=64)
def shot_context(cfg: NetworkConfig, k: int = 1) -> ShotContext:
    """Build (and cache) the context of the k-th incomplete process."""
    require_undetectable_nlos(cfg)
    if k < 1:
        raise DomainError(f"incompleteness order K must be >= 1, got {k}")
    table = _zeta_table(cfg.env, cfg.placement, cfg.lambda_u)
    return ShotContext(cfg, k, table)


def zeta(ctx: ShotContext, z: FloatArray | float) -> FloatArray:
    """Integral of the LoS probability over squared distances [0, z]."""
    z = np.asarray(z, dtype=np.float64)
    if np.any(z < 0):
        raise DomainError("squared distance must be nonnegative")
    rho_c = ctx.constant_los
    if rho_c is not None:
        return rho_c * z
    return ctx.zeta_interp(z)


def zeta_inverse(ctx: ShotContext, value: FloatArray | float) -> FloatArray:
    """Squared distance at which zeta reaches value."""
    value = np.asarray(value, dtype=np.float64)
    rho_c = ctx.constant_los
    if rho_c is not None:
        return value / rho_c
    return ctx.zeta_interp.inverse(value)


def pdf_y_uk(ctx: ShotContext, z: FloatArray | float) -> FloatArray:
    """Density of the squared distance to the k-th nearest LoS UAV."""
    z = np.asarray(z, dtype=np.float64)
    k = ctx.k
    cumulative = zeta(ctx, z)
    mass = ctx.intensity * cumulative
    log_density = (
        k * math.log(ctx.intensity) + xlogy(k - 1, cumulative)
        - gammaln(k) - mass
    )
    rho = _los_of_distance(ctx.cfg.env, ctx.cfg.placement)
    return np.asarray(np.exp(log_density) * rho(z), dtype=np.float64)


def _lobe_mixture(
    cfg: NetworkConfig,
    x: ComplexArray | float,
    loss: FloatArray | float,
) -> ComplexArray | float:
    # Main lobe with probability q, side lobe (gain ratio delta) otherwise.
    q = main_lobe_probability(cfg.pattern)
    delta = cfg.pattern.lobe_ratio
    main = q * x / (x + loss)
    if delta == 0 or q == 1:
        return main
    side = delta * x
    return main + (1 - q) * side / (side + loss)


def _los_knee_log(env: Environment, placement: UavPlacement) -> float | None:
    # Squared distance past which rho sits at its limit.
    h_o, nu = placement.h_o, placement.nu
    if h_o == 0 or nu == -1:
        return None
    if nu > -1:
        target = math.tan(math.radians(0.005 / env.c1))
    else:
        degrees = min(env.c2 + 20.0 / env.c1, 89.9)
        target = math.tan(math.radians(degrees))
    return (2.0 / (nu + 1)) * (math.log(h_o) - math.log(target))


def _interference_span(
    cfg: NetworkConfig,
    magnitude: FloatArray,
    y: FloatArray,
) -> tuple[FloatArray, FloatArray]:
    """Log bounds (lo, knee) of the panelled part of the UAV integral.

    [y, e^lo] is left to a single plain panel; e^lo never exceeds y by more
    than e^-HEAD_DEPTH times the signal knee |x|^(2/alpha). The knee also
    clears the crossover r = h_o^(2/(1+nu)) of the loss terms and the LoS
    transition.
    """
    placement = cfg.placement
    with np.errstate(divide="ignore"):
        log_y = np.log(np.maximum(y, 1e-300))
        log_signal = np.maximum(
            log_y,
            (2.0 / cfg.uav.alpha) * np.log(magnitude),
        )
    log_lo = np.maximum(log_y, log_signal - HEAD_DEPTH)
    log_knee = log_signal
    if placement.h_o > 0 and placement.nu != -1:
        crossover = 2.0 * math.log(placement.h_o) / (1.0 + placement.nu)
        log_knee = np.maximum(log_knee, crossover)
    los_knee = _los_knee_log(cfg.env, placement)
    if los_knee is not None:
        log_knee = np.maximum(log_knee, los_knee)
    return log_lo, log_knee


def _tail_exponent(alpha: float) -> float:
    return float(np.clip(4.0 / (alpha - 2.0), 1.0, 12.0))


def frak_i_u(
    ctx: ShotContext,
    x: float,
    y: float,
    settings: QuadratureSettings | None = None,
) -> float:
    """UAV interference integral over squared distances beyond y.

    Adaptive scalar evaluation for real x: one adaptive run per decade up
    to the knee of _interference_span, then the semi-infinite tail.
    """
    if x < 0 or y < 0:
        raise DomainError(f"x and y must be nonnegative, got ({x}, {y})")
    if x == 0:
        return 0.0
    cfg = ctx.cfg
    alpha = cfg.uav.alpha

    def integrand(r: float) -> float:
        if r <= 0:
            return 0.0
        with np.errstate(over="ignore"):
            ratio = float(elevation_ratio(cfg.placement, np.float64(r)))
            loss = float(serving_uav_loss(cfg.placement, alpha, np.float64(r)))
        if math.isinf(loss):
            return 0.0
        rho = los_probability(cfg.env, ratio)
        return rho * float(_lobe_mixture(cfg, x, loss))

    log_lo, log_knee = _interference_span(cfg, np.float64(x), np.float64(y))
    log_hi = float(panel_span(log_lo, log_knee))
    lo = max(y, math.exp(float(log_lo)))
    total = integrate_finite(integrand, y, lo, settings)
    count = max(1, math.ceil((log_hi - math.log(lo)) / math.log(10.0)))
    edges = np.geomspace(lo, math.exp(log_hi), count + 1)
    for a, b in itertools.pairwise(edges):
        total += integrate_finite(integrand, float(a), float(b), settings)
    hi = float(edges[-1])
    return total + integrate_semi_infinite(integrand, hi, settings, scale=hi)


def frak_i_u_grid(
    ctx: ShotContext,
    x: ComplexArray,
    y: FloatArray,
    scale: FloatArray | None = None,
) -> ComplexArray:
    """Vectorized UAV interference integral for complex x.

    Nodes are placed from scale (default |x|), so with a fixed scale the
    result is analytic in x. Breakpoints follow frak_i_u.
    """
    cfg = ctx.cfg
    alpha = cfg.uav.alpha
    x = np.asarray(x, dtype=np.complex128)
    y = np.broadcast_to(np.asarray(y, dtype=np.float64), x.shape)
    scale = np.abs(x) if scale is None else np.broadcast_to(scale, x.shape)

    log_lo, log_knee = _interference_span(cfg, scale, y)
    body_r, body_w = semi_infinite_rule(log_lo, log_knee, _tail_exponent(alpha))
    u, w = gauss_legendre_unit(8)
    width = np.maximum(np.exp(log_lo) - y, 0.0)[..., None]
    r = np.concatenate((y[..., None] + width * u, body_r), axis=-1)
    weights = np.concatenate((width * w, body_w), axis=-1)
    with np.errstate(divide="ignore", over="ignore"):
        loss = np.minimum(
            serving_uav_loss(cfg.placement, alpha, r),
            LOSS_CEILING,
        )
        rho = los_probability_array(
            cfg.env,
            elevation_ratio(cfg.placement, r),
        )
    mixture = _lobe_mixture(cfg, x[..., None], loss)
    return np.asarray(np.sum(weights * rho * mixture, axis=-1))


def _check_ground_exponent(y: float) -> None:
    if not 0 < y < 1:
        raise DomainError(f"ground integral exponent must lie in (0, 1): {y}")


def frak_i_g(x: float, y: float) -> float:
    """Ground interference integral of x^y / (1 + t^(1/y)) over [x^-y, inf)."""
    _check_ground_exponent(y)
    if x < 0:
        raise DomainError(f"x must be nonnegative, got {x}")
    if x == 0:
        return 0.0
    inverse = 1.0 / y
    coefficient = x**y

    def integrand(t: float) -> float:
        try:
            return coefficient / (1.0 + t**inverse)
        except OverflowError:
            return 0.0

    lower = x ** (-y)
    value = integrate_semi_infinite(integrand, lower, scale=max(lower, 1.0))
    if config.DEBUG:
        check = float(frak_i_g_sinc(np.array([x]), y)[0].real)
        if abs(check - value) > DEBUG_TOL * max(1.0, abs(value)):
            raise ConvergenceError(
                f"ground integral forms disagree at x={x:g}: {value} vs {check}",
                estimate=value,
                error_bound=abs(check - value),
            )
    return value


def frak_i_g_sinc(x: ComplexArray, y: float) -> ComplexArray:
    """Second form x^y / sinc(y) minus the integral of x/(x + v^(1/y)) on [0, 1].

    Valid off the negative real axis; accurate once |x| is of order one or
    more.
    """
    _check_ground_exponent(y)
    x = np.asarray(x, dtype=np.complex128)
    u, w = gauss_legendre_unit(GROUND_NODES)
    # v = u^2 removes the endpoint kink at v = 0
    powers = u ** (2.0 / y)
    head = np.sum(
        w * 2 * u * x[..., None] / (x[..., None] + powers),
        axis=-1,
    )
    return np.asarray(np.power(x, y) / np.sinc(y) - head)


def frak_i_g_direct(x: ComplexArray, y: float) -> ComplexArray:
    """Integral of x / (x + w^(1/y)) over [1, inf), for |x| up to order one."""
    _check_ground_exponent(y)
    x = np.asarray(x, dtype=np.complex128)
    p = 1.0 / y
    m = float(np.clip(2.0 / (p - 1.0), 1.0, 12.0))
    u, w = gauss_legendre_unit(GROUND_NODES)
    one_minus = 1.0 - u
    with np.errstate(over="ignore"):
        loss = np.minimum(one_minus ** (-m * p), LOSS_CEILING)
    jacobian = m * w * one_minus ** (-m - 1)
    return np.asarray(
        np.sum(jacobian * x[..., None] / (x[..., None] + loss), axis=-1),
    )


def frak_i_g_array(
    x: ComplexArray,
    y: float,
    anchor: float | None = None,
) -> ComplexArray:
    """Vectorized ground integral, picking the form by anchor (default |x|)."""
    x = np.asarray(x, dtype=np.complex128)
    large = np.abs(x) >= 1.0 if anchor is None else np.full(x.shape, anchor >= 1)
    out = np.empty_like(x)
    if np.any(large):
        out[large] = frak_i_g_sinc(x[large], y)
    if not np.all(large):
        out[~large] = frak_i_g_direct(x[~large], y)
    return out


def laplace_iuk_conditional(ctx: ShotContext, s: float, y_uk: float) -> float:
    """Laplace transform of UAV interference given the serving distance."""
    if s < 0 or y_uk < 0:
        raise DomainError(f"s and y_uk must be nonnegative, got ({s}, {y_uk})")
    cfg = ctx.cfg
    x = s * cfg.pattern.delta_m * cfg.uav.tx_power / cfg.uav.psi_los
    return math.exp(-ctx.intensity * frak_i_u(ctx, x, y_uk))


def laplace_igk_conditional(
    ctx: ShotContext,
    s: float,
    y_gk: float,
) -> float:
    """Laplace transform of ground interference given the serving distance."""
    if s < 0 or not y_gk > 0:
        raise DomainError(f"need s >= 0 and y_gk > 0, got ({s}, {y_gk})")
    cfg = ctx.cfg
    half = cfg.ground.alpha / 2
    x = s * cfg.ground.tx_power / y_gk**half
    lam = effective_ground_intensity(cfg)
    return math.exp(-math.pi * lam * y_gk * frak_i_g(x, 1.0 / half))


def scaled_laplace_uav_closed(
    k: int,
    alpha_u: float,
    pattern: AntennaPattern,
) -> float:
    """Self-scaled UAV transform with side lobes neglected and nu = -1."""
    if k < 0:
        raise DomainError(f"order K must be >= 0, got {k}")
    if alpha_u <= 2:
        raise DomainError(f"alpha_u must exceed 2, got {alpha_u}")
    q = main_lobe_probability(pattern)
    return float((1.0 + q * frak_i_g(1.0, 2.0 / alpha_u)) ** -k)


def scaled_laplace_ground(k: int, alpha_g: float) -> float:
    """Self-scaled ground transform, [1 + I_g(1, 2/alpha_g)]^-k."""
    if k < 0:
        raise DomainError(f"order K must be >= 0, got {k}")
    if alpha_g <= 2:
        raise DomainError(f"alpha_g must exceed 2, got {alpha_g}")
    return float((1.0 + frak_i_g(1.0, 2.0 / alpha_g)) ** -k)


@functools.lru_cache(maxsize=64)
def distance_rule(ctx: ShotContext) -> tuple[FloatArray, FloatArray]:
    """Nodes and weights for expectations over the k-th serving distance.

    Trapezoid in log w, w = pi * lambda_u * zeta(z) being Gamma(k, 1).
    """
    step = config.DISTANCE_STEP
    lo, hi = math.log(1e-12), math.log(config.ZETA_MASS)
    count = math.ceil((hi - lo) / step) + 1
    t = np.linspace(lo, hi, count)
    h = t[1] - t[0]
    w = np.exp(t)
    weights = h * w * gamma.pdf(w, ctx.k)
    weights[0] /= 2
    weights[-1] /= 2
    z = zeta_inverse(ctx, w / ctx.intensity)
    return z, np.asarray(weights, dtype=np.float64)


def scaled_laplace_uav(ctx: ShotContext) -> float:
    """Self-scaled UAV transform averaged numerically over the serving distance.

    Evaluates E[exp(-pi lambda_u I_u(D(Y), Y))], Y the k-th serving
    distance and D the normalized LoS serving loss.
    """
    cfg = ctx.cfg
    z, weights = distance_rule(ctx)
    loss = serving_uav_loss(cfg.placement, cfg.uav.alpha, z)
    frak = frak_i_u_grid(ctx, loss.astype(np.complex128), z).real
    return float(np.dot(weights, np.exp(-ctx.intensity * frak)))


def serving_loss_ccdf_uav(ctx: ShotContext, x: float) -> float:
    """P[loss to the nearest LoS UAV >= x]."""
    cfg = ctx.cfg
    if x <= 0:
        return 1.0
    target = (x / cfg.uav.psi_los) ** (2 / cfg.uav.alpha)
    h_o, nu = cfg.placement.h_o, cfg.placement.nu
    h2 = h_o**2

    def excess(r: float) -> float:
        return r + h2 * r ** (-nu) - target

    lower = 0.0
    if h_o == 0:
        upper = target
    elif nu == 0:
        upper = target - h2
    elif nu == -1:
        upper = target / (1 + h2)
    elif nu < 0:
        upper = _expanding_root(excess, 0.0, max(target, 1.0))
    else:
        bottom = (nu * h2) ** (1 / (1 + nu))
        if excess(bottom) >= 0:
            return 1.0
        lower = _shrinking_root(excess, bottom)
        upper = _expanding_root(excess, bottom, max(target, 2 * bottom))
    if upper <= lower:
        return 1.0
    mass = float(zeta(ctx, upper) - zeta(ctx, lower))
    return math.exp(-ctx.intensity * mass)


def _expanding_root(
    excess: Callable[[float], float],
    lo: float,
    hi: float,
) -> float:
    while excess(hi) < 0:
        hi *= 2
    return float(optimize.brentq(excess, lo, hi))


def _shrinking_root(excess: Callable[[float], float], hi: float) -> float:
    # excess blows up at 0 when nu > 0
    lo = hi / 2
    while excess(lo) < 0:
        lo /= 2
    return float(optimize.brentq(excess, lo, hi))


def serving_loss_ccdf_ground(cfg: NetworkConfig, x: float) -> float:
    """P[loss to the nearest ground BS >= x], exp(-pi lambda~ x^(2/alpha_g))."""
    if x <= 0:
        return 1.0
    lam = effective_ground_intensity(cfg)
    return math.exp(-math.pi * lam * x ** (2 / cfg.ground.alpha))


class UavGridTransform:
    """Laplace transform of the unit-gain interference-plus-noise to signal ratio.

    L(s) = E_z[exp(-pi lambda_u I_u(s D(z), z) - s a D(z))] with a the noise
    coefficient, the expectation taken on distance_rule nodes.
    """

    def __init__(self, ctx: ShotContext) -> None:
        """Precompute the serving-distance nodes and losses."""
        self.ctx = ctx
        self.noise = ctx.cfg.noise_coefficient
        self.z, self.weights, self.loss = self._nodes()

    def _nodes(self) -> tuple[FloatArray, FloatArray, FloatArray]:
        cfg = self.ctx.cfg
        z, weights = distance_rule(self.ctx)
        return z, weights, serving_uav_loss(cfg.placement, cfg.uav.alpha, z)

    def __call__(
        self,
        s: ComplexArray,
        anchor: float | None = None,
    ) -> ComplexArray:
        """Evaluate at complex s; a fixed anchor keeps the nodes fixed."""
        s = np.atleast_1d(np.asarray(s, dtype=np.complex128))
        out = np.empty(s.shape, dtype=np.complex128)
        flat_s, flat_out = s.ravel(), out.reshape(-1)
        for start in range(0, flat_s.size, CHUNK):
            block = flat_s[start : start + CHUNK, None]
            magnitude = np.abs(block) if anchor is None else abs(anchor)
            x = block * self.loss
            frak = frak_i_u_grid(
                self.ctx,
                x,
                self.z,
                magnitude * self.loss,
            )
            exponent = -self.ctx.intensity * frak - block * self.noise * self.loss
            flat_out[start : start + CHUNK] = np.exp(exponent) @ self.weights
        return out


class UavHeightTransform(UavGridTransform):
    """UAV transform for the height control model (nu = 0, h_o > 0).

    The serving distance is integrated in z itself against the nearest-LoS
    density pi lambda_u rho(h_o / sqrt(z)) exp(-pi lambda_u zeta(z)), with
    the serving loss (z + h_o^2)^(alpha/2), on log-spaced Gauss panels.
    """

    def __init__(self, ctx: ShotContext) -> None:
        """Check the placement, then build the z nodes."""
        placement = ctx.cfg.placement
        if placement.nu != 0 or placement.h_o <= 0:
            raise DomainError(
                f"height control needs nu = 0 and h_o > 0, got {placement}",
            )
        super().__init__(ctx)

    def _nodes(self) -> tuple[FloatArray, FloatArray, FloatArray]:
        ctx = self.ctx
        cfg = ctx.cfg
        h_o = cfg.placement.h_o
        z_lo = 1e-12 / ctx.intensity
        z_hi = float(zeta_inverse(ctx, config.ZETA_MASS / ctx.intensity))
        log_lo, log_hi = math.log(z_lo), math.log(z_hi)
        panels = math.ceil(log_hi - log_lo)
        z, dz = log_panel_rule(log_lo, log_hi, panels)
        rho = los_probability_array(cfg.env, h_o / np.sqrt(z))
        density = ctx.intensity * rho * np.exp(-ctx.intensity * zeta(ctx, z))
        loss = (z + h_o**2) ** (cfg.uav.alpha / 2)
        return z, np.asarray(dz * density, dtype=np.float64), loss

    def __call__(
        self,
        s: ComplexArray,
        anchor: float | None = None,
    ) -> ComplexArray:
        """Evaluate at complex s."""
        out = super().__call__(s, anchor)
        if config.DEBUG:
            check = UavGridTransform(self.ctx)(s, anchor)
            gap = float(np.max(np.abs(check - out)))
            if gap > DEBUG_TOL:
                raise ConvergenceError(
                    f"height-control transform off the general path by {gap:.3g}",
                    error_bound=gap,
                )
        return out


class UavElevationTransform:
    """Noise-free UAV transform when the LoS probability is constant.

    With nu = -1 or h_o = 0 the serving loss is a pure power of distance and
    the transform reduces to 1 / (1 + J(s)), J the lobe mixture integrated
    over [1, inf). It depends on neither lambda_u nor h_o.
    """

    def __init__(self, ctx: ShotContext) -> None:
        """Keep the context for the debug cross-check."""
        self.ctx = ctx

    def __call__(
        self,
        s: ComplexArray,
        anchor: float | None = None,
    ) -> ComplexArray:
        """Evaluate at complex s."""
        cfg = self.ctx.cfg
        alpha = cfg.uav.alpha
        s = np.atleast_1d(np.asarray(s, dtype=np.complex128))
        magnitude = np.abs(s) if anchor is None else np.full(s.shape, abs(anchor))
        with np.errstate(divide="ignore"):
            log_knee = np.maximum(0.0, (2.0 / alpha) * np.log(magnitude))
        r, weights = semi_infinite_rule(
            np.zeros(s.shape),
            log_knee,
            _tail_exponent(alpha),
        )
        with np.errstate(over="ignore"):
            loss = np.minimum(r ** (alpha / 2), LOSS_CEILING)
        j = np.sum(weights * _lobe_mixture(cfg, s[..., None], loss), axis=-1)
        out = np.asarray(1.0 / (1.0 + j))
        if config.DEBUG:
            check = UavGridTransform(self.ctx)(s, anchor)
            gap = float(np.max(np.abs(check - out)))
            if gap > DEBUG_TOL:
                raise ConvergenceError(
                    f"elevation-control transform off the general path by {gap:.3g}",
                    error_bound=gap,
                )
        return out


class GroundTransform:
    """Ground transform 1 / (1 + I_g(s, 2/alpha_g)); free of lambda_g."""

    def __init__(self, alpha_g: float) -> None:
        """Fix the exponent of the ground integral."""
        self.y = 2.0 / alpha_g

    def __call__(
        self,
        s: ComplexArray,
        anchor: float | None = None,
    ) -> ComplexArray:
        """Evaluate at complex s."""
        s = np.atleast_1d(np.asarray(s, dtype=np.complex128))
        frak = frak_i_g_array(s, self.y, anchor)
        if config.DEBUG:
            magnitude = np.abs(s)
            both = (magnitude >= 1.0) & (magnitude <= DIRECT_FORM_LIMIT)
            gap = np.abs(
                frak_i_g_sinc(s[both], self.y) - frak_i_g_direct(s[both], self.y),
            )
            if gap.size and float(np.max(gap)) > DEBUG_TOL * max(
                1.0,
                float(np.max(np.abs(frak[both]))),
            ):
                raise ConvergenceError(
                    "ground integral forms disagree",
                    error_bound=float(np.max(gap)),
                )
        return np.asarray(1.0 / (1.0 + frak))


UavTransform = UavGridTransform | UavHeightTransform | UavElevationTransform


@functools.lru_cache(maxsize=64)
def uav_transform(ctx: ShotContext) -> UavTransform:
    """Pick the cheapest exact transform for the configuration."""
    placement = ctx.cfg.placement
    if (
        (placement.nu == -1 or placement.h_o == 0)
        and ctx.cfg.noise_uav == 0
    ):
        return UavElevationTransform(ctx)
    if placement.nu == 0:
        return UavHeightTransform(ctx)
    return UavGridTransform(ctx)


@functools.lru_cache(maxsize=16)
def ground_transform(alpha_g: float) -> GroundTransform:
    """Cached ground transform for one path-loss exponent."""
    return GroundTransform(alpha_g)
